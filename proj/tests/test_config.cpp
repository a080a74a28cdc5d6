/*
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <sstream>

#include "slq/commands.hpp"
#include "slq/config.hpp"
#include "slq/error.hpp"
#include "support.hpp"

using namespace slq;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;
using testing::pi;

namespace
{

std::string error_of(const std::string &text)
{
    try {
        parse_config(text);
    } catch (const ConfigError &e) {
        return e.what();
    }
    return {};
}

std::vector<std::string> lines_of(const std::string &s)
{
    std::vector<std::string> out;
    std::istringstream is(s);
    for (std::string l; std::getline(is, l);) {
        out.push_back(l);
    }
    return out;
}

} // namespace

TEST_CASE("minimal config gives defaults")
{
    const auto cfg = parse_config(R"({"interval": [0, 2], "bc": {"type": "dirichlet"}})");
    CHECK(cfg.coeffs.a() == 0.0);
    CHECK(cfg.coeffs.b() == 2.0);
    CHECK(cfg.bc.is_separated());
    CHECK(cfg.n_max == 10);
    CHECK(cfg.solver.lambda_scan == 1e4);
    CHECK_FALSE(cfg.transmission.has_value());
}

TEST_CASE("boundary condition types")
{
    auto bc = [](const std::string &j) {
        return parse_config(R"({"interval": [0, 1], "bc": )" + j + "}").bc;
    };
    CHECK(bc(R"({"type": "neumann"})").alpha() == Approx(pi / 2));
    const auto sep = bc(R"({"type": "separated", "alpha": 0.3, "beta": 2.0})");
    CHECK(sep.alpha() == 0.3);
    CHECK(sep.beta() == 2.0);
    CHECK(bc(R"({"type": "periodic"})").K().isIdentity());
    CHECK(bc(R"({"type": "semi_periodic"})").K() == -Eigen::Matrix2d::Identity());
    const auto rc = bc(R"({"type": "real_coupled", "K": [[2, 0], [0.3, 0.5]]})");
    CHECK(rc.kind() == BcKind::RealCoupled);
    CHECK(rc.K()(1, 0) == 0.3);
    const auto cc = bc(R"({"type": "complex_coupled", "gamma": 1.0})");
    CHECK(cc.kind() == BcKind::ComplexCoupled);
    CHECK(cc.gamma() == 1.0);
    const auto m = bc(R"({"type": "matrices", "A": [[1, 0], [0, 0]], "B": [[0, 0], [1, 0]]})");
    CHECK(m.is_separated());
    CHECK(m.alpha() == Approx(0.0).margin(1e-12));
    CHECK(m.beta() == Approx(pi));
}

TEST_CASE("piecewise coefficients use global x")
{
    const auto cfg = parse_config(R"({
      "interval": [0, 2],
      "coefficients": {"q": [{"from": 0, "to": 1, "poly": [1]}, {"from": 1, "to": 2, "poly": [0, 2]}]},
      "interactions": [{"at": 0.5, "strength": 3}],
      "bc": {"type": "dirichlet"}})");
    CHECK(cfg.coeffs.q()(0.5) == 1.0);
    CHECK(cfg.coeffs.q()(1.5) == Approx(3.0));
    REQUIRE(cfg.coeffs.interactions().size() == 1);
    CHECK(cfg.coeffs.interactions()[0].strength == 3.0);
}

TEST_CASE("errors name the offending field")
{
    CHECK_THAT(error_of(R"({"interval": [1, 0], "bc": {"type": "dirichlet"}})"), ContainsSubstring("$.interval"));
    CHECK_THAT(error_of(R"({"interval": [0, 1]})"), ContainsSubstring("$.bc"));
    CHECK_THAT(error_of(R"({"interval": [0, 1], "bc": {"type": "robin"}})"), ContainsSubstring("$.bc.type"));
    CHECK_THAT(error_of(R"({"interval": [0, 1], "bc": {"type": "separated", "alpha": 0.1}})"),
               ContainsSubstring("beta"));
    CHECK_THAT(error_of(R"({"interval": [0, 1], "bc": {"type": "real_coupled", "K": [[2, 0], [0, 2]]}})"),
               ContainsSubstring("$.bc"));
    CHECK_THAT(error_of(R"({"interval": [0, 1], "coefficients": {"q": [{"from": 0, "to": 0.5, "poly": [1]}]},
                           "bc": {"type": "dirichlet"}})"),
               ContainsSubstring("$.coefficients.q"));
    CHECK_THAT(error_of(R"({"interval": [0, 1], "coefficients": {"q": [{"from": 0, "to": 1, "poly": [1, 2, 3, 4, 5]}]},
                           "bc": {"type": "dirichlet"}})"),
               ContainsSubstring("poly"));
    CHECK_THAT(error_of(R"({"interval": [0, 1], "coefficients": {"w": [{"from": 0, "to": 1, "poly": [1]}]},
                           "bc": {"type": "dirichlet"}})"),
               ContainsSubstring("$.coefficients"));
    CHECK_THAT(error_of(R"({"interval": [0, 1], "bc": {"type": "dirichlet"}, "solver": {"rel_tol": -1}})"),
               ContainsSubstring("$.solver"));
    CHECK_THAT(error_of(R"({"interval": [0, 1], "bc": {"type": "dirichlet"},
                           "transmission": {"interfaces": [{"c": 1.5, "alpha": 1}]}})"),
               ContainsSubstring("$.transmission.interfaces"));
    CHECK_THAT(error_of(R"({"interval": [0, 1], "bc": {"type": "dirichlet"}, "scan": {"kind": "spiral"}})"),
               ContainsSubstring("$.scan.kind"));
}

TEST_CASE("syntax errors report a line")
{
    CHECK_THAT(error_of("{\n  \"interval\": [0, 1],\n  \"bc\": {\"type\": \"dirichlet\"\n"), ContainsSubstring("line"));
}

TEST_CASE("shipped configs parse")
{
    int count = 0;
    for (const auto &entry : std::filesystem::directory_iterator(SLQ_TEST_CONFIG_DIR)) {
        if (entry.path().extension() == ".json") {
            INFO(entry.path());
            CHECK_NOTHROW(load_config(entry.path().string()));
            ++count;
        }
    }
    CHECK(count >= 5);
    CHECK_THROWS_AS(load_config(std::string(SLQ_TEST_CONFIG_DIR) + "/missing.json"), ConfigError);
}

TEST_CASE("solve writes a deterministic table")
{
    const auto cfg = parse_config(R"({"interval": [0, 3.141592653589793], "bc": {"type": "dirichlet"},
                                      "solver": {"n_max": 5}})");
    std::ostringstream o1, o2;
    CHECK(cmd_solve(cfg, o1) == exit_ok);
    CHECK(cmd_solve(cfg, o2) == exit_ok);
    CHECK(o1.str() == o2.str());
    const auto lines = lines_of(o1.str());
    REQUIRE(lines.size() == 7);
    CHECK(lines[0] == "n,lambda,multiplicity,residual,zeros");
    for (int n = 0; n <= 5; ++n) {
        std::istringstream row(lines[n + 1]);
        std::string f;
        std::vector<std::string> fields;
        while (std::getline(row, f, ',')) {
            fields.push_back(f);
        }
        REQUIRE(fields.size() == 5);
        CHECK(std::stoi(fields[0]) == n);
        CHECK(std::stod(fields[1]) == Approx((n + 1.0) * (n + 1.0)).epsilon(1e-8));
        CHECK(fields[2] == "1");
        CHECK(std::stoi(fields[4]) == n);
    }
}

TEST_CASE("transmission configs solve through the interface")
{
    const auto cfg = parse_config(R"({"interval": [0, 3.141592653589793], "bc": {"type": "dirichlet"},
        "solver": {"n_max": 2},
        "transmission": {"interfaces": [{"c": 1.5707963267948966, "alpha": 0}]}})");
    std::ostringstream os;
    CHECK(cmd_solve(cfg, os) == exit_ok);
    const auto lines = lines_of(os.str());
    REQUIRE(lines.size() == 4);
    CHECK(std::stod(lines[3].substr(2)) == Approx(9.0).epsilon(1e-8));
}

TEST_CASE("verify writes one summary row per check")
{
    const auto cfg = parse_config(R"({"interval": [0, 1], "bc": {"type": "periodic"}, "solver": {"n_max": 4}})");
    std::ostringstream out, log;
    CHECK(cmd_verify(cfg, {"oscillation"}, out, log) == exit_ok);
    const auto lines = lines_of(out.str());
    REQUIRE(lines.size() >= 2);
    CHECK(lines[0] == "suite,check,status,detail");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        CHECK(lines[i].rfind("oscillation,", 0) == 0);
        CHECK_THAT(lines[i], ContainsSubstring(",PASS,"));
    }
    CHECK_THAT(log.str(), ContainsSubstring("PASS oscillation"));
    CHECK_THROWS_AS(cmd_verify(cfg, {"nonsense"}, out, log), ConfigError);
}

TEST_CASE("alpha-beta scan covers the grid")
{
    const auto cfg = parse_config(R"({"interval": [0, 1], "bc": {"type": "dirichlet"},
                                      "scan": {"kind": "alpha_beta_grid", "n": 1, "grid": [3, 4]}})");
    std::ostringstream os;
    CHECK(cmd_scan(cfg, os) == exit_ok);
    const auto lines = lines_of(os.str());
    CHECK(lines[0] == "alpha,beta,n,lambda");
    CHECK(lines.size() == 1 + 3 * 4);
}

TEST_CASE("region and number formatting helpers")
{
    CHECK(parse_region("I_plus") == Region::I_plus);
    CHECK(parse_region("F_minus") == Region::F_minus);
    CHECK_FALSE(parse_region("Z").has_value());
    CHECK(csv_number(0.1) == "0.10000000000000001");
    CHECK(std::stod(csv_number(pi)) == pi);
}
