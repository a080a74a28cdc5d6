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

#include <map>

#include "slq/analysis.hpp"
#include "slq/error.hpp"
#include "support.hpp"

using namespace slq;
using Catch::Approx;
using testing::pi;

namespace
{

// Roots of functionals of Phi(b, lambda) on a grid, refined by bisection;
// independent of the Pruefer and band machinery.
struct PhiOracle {
    const CoefficientSet &cs;
    double lo, hi, h;

    template <class F>
    std::vector<double> roots(F &&f) const
    {
        auto g = [&](double l) {
            const auto fm = fundamental_matrix<double>(cs, l);
            return f(Eigen::Matrix2d(fm.at_b));
        };
        return testing::scan_roots(g, lo, hi, h);
    }
};

double trace_adj(const Eigen::Matrix2d &K, const Eigen::Matrix2d &P)
{
    return K(1, 1) * P(0, 0) - K(0, 1) * P(1, 0) - K(1, 0) * P(0, 1) + K(0, 0) * P(1, 1);
}

// label "lambda_3(gamma=...,K)" -> ("lambda(gamma,K)", 3)
std::pair<std::string, int> split_label(const std::string &label)
{
    const auto us = label.find('_');
    std::size_t end = us + 1;
    while (end < label.size() && std::isdigit(static_cast<unsigned char>(label[end]))) {
        ++end;
    }
    std::string family = label.substr(0, us) + label.substr(end);
    if (family.rfind("lambda(gamma=", 0) == 0) {
        family = "lambda(gamma,K)";
    }
    return {family, std::stoi(label.substr(us + 1, end - us - 1))};
}

void check_against_oracle(const ChainReport &rep, const CoefficientSet &cs, const Eigen::Matrix2d &Kc, double gamma,
                          double hi)
{
    const PhiOracle o{cs, -200.0, hi, 0.5};
    std::map<std::string, std::vector<double>> want;
    want["lambda(K)"] = o.roots([&](const Eigen::Matrix2d &P) { return trace_adj(Kc, P) - 2.0; });
    want["lambda(-K)"] = o.roots([&](const Eigen::Matrix2d &P) { return trace_adj(Kc, P) + 2.0; });
    want["lambda(gamma,K)"] =
        o.roots([&](const Eigen::Matrix2d &P) { return trace_adj(Kc, P) - 2.0 * std::cos(gamma); });
    want["mu"] = o.roots([&](const Eigen::Matrix2d &P) { return Kc(1, 1) * P(0, 1) - Kc(0, 1) * P(1, 1); });
    want["nu"] = o.roots([&](const Eigen::Matrix2d &P) { return Kc(1, 0) * P(0, 0) - Kc(0, 0) * P(1, 0); });
    int compared = 0;
    for (const auto &e : rep.entries) {
        const auto [family, n] = split_label(e.label);
        INFO(e.label << " = " << e.value);
        REQUIRE(want.count(family) == 1);
        const auto &list = want[family];
        if (e.value < hi - 50.0) {
            REQUIRE(static_cast<int>(list.size()) > n);
            CHECK(std::abs(e.value - list[n]) <= 1e-7 * std::max(1.0, std::abs(list[n])));
            ++compared;
        }
    }
    CHECK(compared >= 10);
}

} // namespace

TEST_CASE("constant problem chain with K = I")
{
    const auto rep = verify_chain(CoefficientSet::free(0.0, 1.0), Eigen::Matrix2d::Identity(), {1.0}, 2);
    CHECK(rep.kind == "tt");
    CHECK_FALSE(rep.negated);
    CHECK(rep.ok());
    std::map<std::string, double> v;
    for (const auto &e : rep.entries) {
        v[e.label] = e.value;
    }
    CHECK(v.at("nu_0") == Approx(0.0).margin(1e-9));
    CHECK(v.at("lambda_0(K)") == Approx(0.0).margin(1e-9));
    CHECK(v.at("lambda_0(gamma=1,K)") == Approx(1.0).epsilon(1e-8));
    CHECK(v.at("lambda_0(-K)") == Approx(pi * pi).epsilon(1e-8));
    CHECK(v.at("mu_0") == Approx(pi * pi).epsilon(1e-8));
    CHECK(v.at("nu_1") == Approx(pi * pi).epsilon(1e-8));
    // order of the first entries follows the chain
    REQUIRE(rep.entries.size() >= 4);
    CHECK(rep.entries[0].label == "nu_0");
    CHECK(rep.entries[1].label == "lambda_0(K)");
    CHECK(rep.entries[3].label == "lambda_0(-K)");
    // (lambda_0(K), lambda_0(gamma)) is a strict link, (nu_0, lambda_0(K)) is not
    CHECK_FALSE(rep.links[0].strict);
    CHECK(rep.links[1].strict);
}

TEST_CASE("case (a) chain on piecewise coefficients matches the Phi oracle")
{
    std::mt19937 g(61);
    const auto cs = testing::random_coefficients(g, 0.0, 2.0);
    Eigen::Matrix2d K;
    K << 2.0, 0.0, 0.3, 0.5;
    for (double gamma : {pi / 3, -pi / 3}) {
        const auto rep = verify_chain(cs, K, {gamma}, 6);
        CHECK(rep.kind == "tt");
        CHECK(rep.ok());
        check_against_oracle(rep, cs, K, gamma, 900.0);
    }
}

TEST_CASE("case (b) chain")
{
    Eigen::Matrix2d K;
    K << -1.0, -0.5, 0.0, -1.0;
    const auto rep = verify_chain(CoefficientSet::free(0.0, 1.0), K, {1.0, -1.0, 2.0}, 6);
    CHECK(rep.kind == "ww");
    CHECK(rep.ok());

    std::mt19937 g(67);
    const auto cs = testing::random_coefficients(g);
    const auto rep2 = verify_chain(cs, K, {2.0}, 5);
    CHECK(rep2.ok());
    check_against_oracle(rep2, cs, K, 2.0, 1500.0);
}

TEST_CASE("negated K builds the chain for -K")
{
    Eigen::Matrix2d K;
    K << -2.0, 0.0, -0.3, -0.5;
    std::mt19937 g(71);
    const auto rep = verify_chain(testing::random_coefficients(g), K, {1.0}, 4);
    CHECK(rep.negated);
    CHECK(rep.kind == "tt");
    CHECK(rep.ok());
}

TEST_CASE("randomized chains and gamma ordering")
{
    std::mt19937 g(73);
    for (int trial = 0; trial < 8; ++trial) {
        const auto cs = testing::random_coefficients(g);
        const Eigen::Matrix2d K = trial % 2 ? testing::random_K_case_a(g) : testing::random_K_case_b(g);
        const auto rep = verify_chain(cs, K, {0.7, -2.1}, 6);
        INFO("K = " << K);
        CHECK(rep.ok());
        CHECK(rep.kind == (trial % 2 ? "tt" : "ww"));
        CHECK(verify_gamma_order(cs, K, 0.4, 2.5, 6).ok());
    }
    CHECK_THROWS_AS(verify_gamma_order(CoefficientSet::free(0.0, 1.0), Eigen::Matrix2d::Identity(), 2.0, 1.0, 3),
                    DomainError);
}

TEST_CASE("chain input validation")
{
    const auto cs = CoefficientSet::free(0.0, 1.0);
    Eigen::Matrix2d K;
    K << 2.0, 0.0, 0.0, 2.0;
    CHECK_THROWS_AS(verify_chain(cs, K, {1.0}, 3), DomainError);
    CHECK_THROWS_AS(verify_chain(cs, Eigen::Matrix2d::Identity(), {0.0}, 3), DomainError);
    CHECK_THROWS_AS(verify_chain(cs, Eigen::Matrix2d::Identity(), {pi}, 3), DomainError);
}

TEST_CASE("Dirichlet bracketing")
{
    std::mt19937 g(79);
    for (int trial = 0; trial < 10; ++trial) {
        const auto cs = testing::random_coefficients(g);
        const auto bc = testing::random_bc(g);
        const auto rep = verify_dirichlet_bracketing(cs, bc, 8);
        INFO(bc.describe());
        CHECK(rep.kind == "dirichlet");
        CHECK(rep.ok());
    }
    // periodic on (0, 1): lambda_2 = lambda_1^D = 4 pi^2 is a tight upper bound
    const auto rep =
        verify_dirichlet_bracketing(CoefficientSet::free(0.0, 1.0), BoundaryCondition::real_coupled(Eigen::Matrix2d::Identity()), 4);
    CHECK(rep.ok());
}

TEST_CASE("eigenvalue surface is monotone on a 64 x 64 grid")
{
    std::mt19937 g(83);
    const auto cs = testing::random_coefficients(g);
    std::vector<double> alphas, betas;
    for (int i = 0; i < 64; ++i) {
        alphas.push_back(i * pi / 64);
        betas.push_back((i + 1) * pi / 64);
    }
    const auto s = bc_surface(cs, alphas, betas, 1);
    REQUIRE(s.values.size() == 64u * 64u);
    CHECK(surface_inversions(s) == 0);
    CHECK(s.at(0, 63) == Approx(separated_branch(cs, 0.0, pi, 1)).epsilon(1e-10));
    for (std::size_t i = 1; i < 64; ++i) {
        CHECK(s.at(i, 10) < s.at(i - 1, 10));
        CHECK(s.at(10, i) > s.at(10, i - 1));
    }
}

TEST_CASE("surface inversions are counted")
{
    Surface s{0, {0.0, 1.0}, {1.0, 2.0}, {5.0, 6.0, 4.0, 7.0}};
    CHECK(surface_inversions(s) == 1);
}

TEST_CASE("endpoint angle limits")
{
    std::mt19937 g(89);
    const auto cs = testing::random_coefficients(g);
    const double beta = 1.9, alpha = 0.8;
    for (int n = 1; n <= 4; ++n) {
        // alpha -> pi from below: lambda_n -> lambda_{n-1} with alpha = 0
        const double target_a = separated_branch(cs, 0.0, beta, n - 1);
        const double e1 = std::abs(separated_branch(cs, pi - 1e-2, beta, n) - target_a);
        const double e2 = std::abs(separated_branch(cs, pi - 1e-3, beta, n) - target_a);
        CHECK(e2 < e1);
        CHECK(e2 <= 1e-2 * (1.0 + std::abs(target_a)));
        // beta -> 0 from above: lambda_n -> lambda_{n-1} with beta = pi
        const double target_b = separated_branch(cs, alpha, pi, n - 1);
        const double f1 = std::abs(separated_branch(cs, alpha, 1e-2, n) - target_b);
        const double f2 = std::abs(separated_branch(cs, alpha, 1e-3, n) - target_b);
        CHECK(f2 < f1);
        CHECK(f2 <= 1e-2 * (1.0 + std::abs(target_b)));
    }
    // the ground state leaves every bound
    CHECK(eigen_separated(cs, pi - 5e-3, beta, 0)[0].lambda < divergence_bound);
}

TEST_CASE("Frechet derivatives of the constant Dirichlet problem")
{
    const auto cs = CoefficientSet::free(0.0, pi);
    const auto bc = BoundaryCondition::dirichlet();
    const PiecewiseFn one({0.0, pi}, {Polynomial{1.0}});
    for (int n : {0, 2}) {
        const auto q = frechet(cs, bc, n, Target::q, one, 1e-4);
        CHECK(q.analytic == Approx(1.0).epsilon(1e-8));
        CHECK(q.pass(5e-5));
        const auto r = frechet(cs, bc, n, Target::r, one, 1e-4);
        CHECK(r.analytic == Approx(-(n + 1.0) * (n + 1.0)).epsilon(1e-8));
        CHECK(r.pass(5e-5));
    }
    const auto a = frechet(cs, bc, 0, Target::alpha, one, 1e-4);
    CHECK(a.analytic == Approx(-2.0 / pi).epsilon(1e-8));
    CHECK(a.pass(5e-5));
}

TEST_CASE("Frechet derivatives for all targets converge at second order")
{
    std::mt19937 g(97);
    const auto cs = testing::random_coefficients(g, 0.0, 3.0);
    const auto bc = BoundaryCondition::separated(0.4, 2.3);
    for (Target t : {Target::inv_p, Target::q, Target::r, Target::s, Target::alpha, Target::beta}) {
        const auto h = random_indicator(0.0, 3.0, 11 + static_cast<unsigned>(t));
        INFO(to_string(t));
        const auto c1 = frechet(cs, bc, 2, t, h, 1e-2);
        const auto c2 = frechet(cs, bc, 2, t, h, 5e-3);
        const auto c3 = frechet(cs, bc, 2, t, h, 1e-4);
        CHECK(c3.pass(5e-5));
        const double ratio = c1.rel_err / c2.rel_err;
        CHECK(ratio == Approx(4.0).epsilon(0.2));
    }
}

TEST_CASE("Frechet preconditions")
{
    const auto cs = CoefficientSet::free(0.0, pi);
    const PiecewiseFn one({0.0, pi}, {Polynomial{1.0}});
    // periodic eigenvalue 4 is double
    CHECK_THROWS_AS(frechet(cs, BoundaryCondition::real_coupled(Eigen::Matrix2d::Identity()), 1, Target::q, one, 1e-4),
                    PreconditionError);
    CHECK_THROWS_AS(frechet(cs, BoundaryCondition::dirichlet(), 0, Target::r, one, 2.0), PreconditionError);
}

TEST_CASE("target names round trip")
{
    for (Target t : {Target::inv_p, Target::q, Target::r, Target::s, Target::alpha, Target::beta}) {
        CHECK(parse_target(to_string(t)) == t);
    }
    CHECK_FALSE(parse_target("p").has_value());
}

TEST_CASE("random indicator is a deterministic indicator inside the interval")
{
    const auto h1 = random_indicator(0.0, 2.0, 5);
    const auto h2 = random_indicator(0.0, 2.0, 5);
    int ones = 0;
    for (int i = 0; i <= 200; ++i) {
        const double x = i * 0.01;
        CHECK(h1(x) == h2(x));
        CHECK((h1(x) == 0.0 || h1(x) == 1.0));
        ones += h1(x) == 1.0;
    }
    CHECK(ones > 0);
}

TEST_CASE("approach conditions lie in the requested region")
{
    const auto periodic = BoundaryCondition::real_coupled(Eigen::Matrix2d::Identity());
    for (Region r : {Region::F_plus, Region::F_minus}) {
        for (double t : {0.5, 1e-3}) {
            CHECK(classify_region(approach_condition(periodic, r, t)).contains(r));
        }
    }
    const auto dir = BoundaryCondition::dirichlet();
    for (Region r : {Region::I_plus, Region::I_minus, Region::I_zero}) {
        const auto bc = approach_condition(dir, r, 1e-2);
        CHECK(classify_region(bc).contains(r));
    }
    const auto robin_k = BoundaryCondition::separated(0.0, 1.0);
    for (Region r : {Region::H_plus, Region::H_minus}) {
        CHECK(classify_region(approach_condition(robin_k, r, 1e-2)).contains(r));
    }
    CHECK_THROWS_AS(approach_condition(BoundaryCondition::separated(1.0, 2.0), Region::F_plus, 0.1), DomainError);
}

TEST_CASE("jump limits at a coupled point from F+")
{
    const auto t = jump_limits(CoefficientSet::free(0.0, 1.0), BoundaryCondition::real_coupled(Eigen::Matrix2d::Identity()),
                               Region::F_plus, 3);
    REQUIRE(t.rows.size() == 4);
    CHECK(std::isinf(t.rows[0].predicted));
    CHECK(t.rows[0].sequence.back() < divergence_bound);
    // periodic lambda_0 = 0, lambda_1 = lambda_2 = 4 pi^2
    CHECK(t.rows[1].predicted == Approx(0.0).margin(1e-8));
    CHECK(t.rows[2].predicted == Approx(4.0 * pi * pi).epsilon(1e-8));
    for (const auto &row : t.rows) {
        INFO("n=" << row.n << " " << row.relation << " rel_err=" << row.rel_err);
        CHECK(row.pass);
    }
    CHECK(t.ok());
}

TEST_CASE("jump limits at Dirichlet from the I family")
{
    std::mt19937 g(101);
    const auto cs = testing::random_coefficients(g);
    const auto dir_list = eigen_separated(cs, 0.0, pi, 4);
    const auto plus = jump_limits(cs, BoundaryCondition::dirichlet(), Region::I_plus, 4);
    CHECK(plus.ok());
    for (int n = 2; n <= 4; ++n) {
        CHECK(plus.rows[n].predicted == Approx(dir_list[n - 2].lambda).epsilon(1e-10));
    }
    const auto minus = jump_limits(cs, BoundaryCondition::dirichlet(), Region::I_minus, 3);
    CHECK(minus.ok());
    for (int n = 0; n <= 3; ++n) {
        CHECK(minus.rows[n].predicted == Approx(dir_list[n].lambda).epsilon(1e-10));
    }
}

TEST_CASE("mollified eigenvalues approach the original")
{
    const double a = 0.0, b = 1.0;
    const auto s = PiecewiseFn::indicator(a, b, 0.3, 0.7);
    const auto cs = CoefficientSet::free(a, b).with_s(s);
    const auto rows = mollify_convergence(cs, BoundaryCondition::separated(pi / 2, pi / 2), {8, 16, 32, 64}, 2);
    REQUIRE(rows.size() == 12);
    std::map<int, std::vector<double>> err;
    for (const auto &r : rows) {
        err[r.n].push_back(r.error);
    }
    // with q = 0 the Neumann ground state is exp(-int s) at lambda = 0 for every m
    for (double e : err[0]) {
        CHECK(e <= 1e-9);
    }
    for (int n = 1; n <= 2; ++n) {
        for (std::size_t i = 1; i < err[n].size(); ++i) {
            CHECK(err[n][i] < err[n][i - 1]);
        }
    }
}

TEST_CASE("strict links below the margin are resolved through D")
{
    // deep ground states: D is so steep that lambda_0(K) and lambda_0(gamma)
    // differ by less than the relative margin
    std::mt19937 g(1066);
    const auto cs = testing::random_coefficients(g, 0.0, 1.0 + std::uniform_real_distribution<double>(0, 1)(g));
    const Eigen::Matrix2d K = testing::random_K_case_b(g);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    const double gamma = -u(g) * pi;
    const auto rep = verify_chain(cs, K, {gamma}, 3);
    CHECK(rep.ok());
    const auto cert = std::find_if(rep.links.begin(), rep.links.end(), [](const ChainLink &l) { return l.certified; });
    REQUIRE(cert != rep.links.end());
    CHECK(cert->gap > 0.0);
    CHECK(cert->gap <= chain_margin(rep.entries[cert->lo].value));
    // D at the midpoint sits between the two levels
    const double mid = 0.5 * (rep.entries[cert->lo].value + rep.entries[cert->hi].value);
    const double d = discriminant(cs, K, mid).D;
    CHECK(d < 2.0);
    CHECK(d > 2.0 * std::cos(gamma));
}
