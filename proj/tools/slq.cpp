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
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "slq/commands.hpp"
#include "slq/config.hpp"
#include "slq/error.hpp"

namespace
{

struct Options {
    std::string config;
    std::string out = "-";
    std::vector<std::string> suites;
    std::string grid;
    std::optional<int> n_max;
    std::optional<double> tol;
    int samples = 0;
};

void apply_overrides(slq::ProblemConfig &cfg, const Options &o)
{
    if (o.n_max) {
        if (*o.n_max < 0) {
            throw slq::ConfigError("--n-max: must be >= 0");
        }
        cfg.n_max = *o.n_max;
        cfg.scan.n = std::min(cfg.scan.n, cfg.n_max);
    }
    if (o.tol) {
        if (!(*o.tol > 0.0)) {
            throw slq::ConfigError("--tol: must be positive");
        }
        cfg.solver.rel_tol = *o.tol;
        cfg.solver.abs_tol = std::min(cfg.solver.abs_tol, *o.tol);
    }
    if (!o.grid.empty()) {
        int na = 0, nb = 0;
        char x = 0, extra = 0;
        if (std::sscanf(o.grid.c_str(), "%d%c%d%c", &na, &x, &nb, &extra) != 3 || (x != 'x' && x != 'X') || na < 1 ||
            nb < 1) {
            throw slq::ConfigError(fmt::format("--grid: expected NxM, got '{}'", o.grid));
        }
        cfg.scan.grid_alpha = na;
        cfg.scan.grid_beta = nb;
    }
}

int run(const std::string &cmd, const Options &o)
{
    auto cfg = slq::load_config(o.config);
    apply_overrides(cfg, o);

    // Output is assembled in memory so a failing run leaves no partial file.
    std::ostringstream buf;
    int code = slq::exit_ok;
    if (cmd == "solve") {
        std::string prefix = o.out == "-" ? "eigenfunction_" : o.out + ".ef";
        code = slq::cmd_solve(cfg, buf, o.samples, prefix);
    } else if (cmd == "verify") {
        std::vector<std::string> suites;
        for (const auto &s : o.suites) {
            std::stringstream ss(s);
            for (std::string part; std::getline(ss, part, ',');) {
                if (part == "all") {
                    suites.insert(suites.end(), slq::all_suites().begin(), slq::all_suites().end());
                } else if (!part.empty()) {
                    suites.push_back(part);
                }
            }
        }
        code = slq::cmd_verify(cfg, suites, buf, std::cerr);
    } else {
        code = slq::cmd_scan(cfg, buf);
    }
    if (o.out == "-") {
        std::cout << buf.str();
    } else {
        std::ofstream f(o.out);
        if (!f || !(f << buf.str())) {
            throw slq::ConfigError(fmt::format("--out: cannot write {}", o.out));
        }
    }
    return code;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Sturm-Liouville eigenvalues with distributional coefficients"};
    app.require_subcommand(1);
    Options o;
    auto common = [&](CLI::App *sub) {
        sub->add_option("--config", o.config, "problem description (JSON)")->required();
        sub->add_option("--out", o.out, "output CSV path, - for stdout");
        sub->add_option("--n-max", o.n_max, "largest eigenvalue index");
        sub->add_option("--tol", o.tol, "relative integration tolerance");
    };
    auto *solve = app.add_subcommand("solve", "eigenvalue table");
    common(solve);
    solve->add_option("--samples", o.samples, "also write each eigenfunction at this many points");
    auto *verify = app.add_subcommand("verify", "run verification suites");
    common(verify);
    verify->add_option("--suite", o.suites, "chains, oscillation, derivatives, mollify, jumps, transmission or all")
        ->required()
        ->delimiter(',');
    auto *scan = app.add_subcommand("scan", "eigenvalue surfaces, gamma sweeps and limit tables");
    common(scan);
    scan->add_option("--grid", o.grid, "alpha x beta grid, e.g. 16x16");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : slq::exit_config;
    }
    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        return run(cmd, o);
    } catch (const slq::ConfigError &e) {
        fmt::print(stderr, "config error: {}\n", e.what());
        return slq::exit_config;
    } catch (const slq::Error &e) {
        fmt::print(stderr, "solver error: {}\n", e.what());
        return slq::exit_solver;
    } catch (const std::exception &e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return slq::exit_solver;
    }
}
