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
#include "slq/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "slq/analysis.hpp"
#include "slq/eigenfunctions.hpp"
#include "slq/error.hpp"
#include "slq/parallel.hpp"
#include "slq/spectrum.hpp"
#include "slq/transmission.hpp"

namespace slq
{

namespace
{

constexpr double pi = std::numbers::pi;

std::vector<EigenRecord> solve_records(const ProblemConfig &cfg)
{
    if (cfg.transmission) {
        const TransmissionProblem tp{cfg.coeffs, cfg.transmission->interfaces, cfg.bc};
        return cfg.transmission->method == "direct" ? solve_direct(tp, cfg.n_max, cfg.solver)
                                                    : solve_via_reduction(tp, cfg.n_max, cfg.solver);
    }
    return eigenvalues(cfg.coeffs, cfg.bc, cfg.n_max, cfg.solver);
}

class Summary
{
public:
    Summary(std::ostream &out, std::ostream &log) : out_(out), log_(log) { out_ << "suite,check,status,detail\n"; }

    void add(const std::string &suite, const std::string &check, bool pass, const std::string &detail)
    {
        row(suite, check, pass ? "PASS" : "FAIL", detail);
        failed_ = failed_ || !pass;
    }
    void skip(const std::string &suite, const std::string &check, const std::string &detail)
    {
        row(suite, check, "SKIP", detail);
    }
    bool failed() const { return failed_; }
    std::ostream &log() { return log_; }

private:
    static std::string quote(const std::string &s)
    {
        if (s.find_first_of(",\"") == std::string::npos) {
            return s;
        }
        std::string q = "\"";
        for (char c : s) {
            q += c;
            if (c == '"') {
                q += '"';
            }
        }
        return q + "\"";
    }
    void row(const std::string &suite, const std::string &check, const char *status, const std::string &detail)
    {
        out_ << suite << ',' << quote(check) << ',' << status << ',' << quote(detail) << '\n';
        fmt::print(log_, "{} {}: {}{}\n", status, suite, check, detail.empty() ? "" : " (" + detail + ")");
    }

    std::ostream &out_;
    std::ostream &log_;
    bool failed_ = false;
};

void report_chain(Summary &s, const std::string &check, const ChainReport &rep)
{
    std::string detail = fmt::format("entries={} links={}", rep.entries.size(), rep.links.size());
    if (rep.negated) {
        detail += " built for -K";
    }
    const auto certified = std::count_if(rep.links.begin(), rep.links.end(), [](const ChainLink &l) { return l.certified; });
    if (certified > 0) {
        detail += fmt::format(" certified_by_D={}", certified);
    }
    for (std::size_t i = 0; i < rep.violations.size() && i < 3; ++i) {
        const auto &v = rep.violations[i];
        detail += fmt::format("; {} {} {} gap={:.3e}", rep.entries[v.lo].label, v.strict ? "<" : "<=",
                              rep.entries[v.hi].label, v.gap);
    }
    s.add("chains", check, rep.ok(), detail);
}

void suite_chains(const ProblemConfig &cfg, Summary &s)
{
    const int n = cfg.n_max;
    if (cfg.bc.is_coupled()) {
        const auto rep = verify_chain(cfg.coeffs, cfg.bc.K(), cfg.verify.gammas, n, cfg.solver);
        report_chain(s, fmt::format("interlacing chain ({}) n<={}", rep.kind, n), rep);
        std::vector<double> g;
        for (double x : cfg.verify.gammas) {
            g.push_back(std::abs(x));
        }
        std::sort(g.begin(), g.end());
        g.erase(std::unique(g.begin(), g.end()), g.end());
        if (g.size() >= 2) {
            report_chain(s, fmt::format("ordering in gamma {:.6g} < {:.6g} n<={}", g[0], g[1], n),
                         verify_gamma_order(cfg.coeffs, cfg.bc.K(), g[0], g[1], n, cfg.solver));
        } else {
            s.skip("chains", "ordering in gamma", "needs two distinct |gamma|");
        }
    } else {
        s.skip("chains", "interlacing chain", "boundary condition is separated");
    }
    report_chain(s, fmt::format("Dirichlet bracketing n<={}", n),
                 verify_dirichlet_bracketing(cfg.coeffs, cfg.bc, n, cfg.solver));
}

void suite_oscillation(const ProblemConfig &cfg, Summary &s)
{
    const auto coeffs = effective_coefficients(cfg);
    const auto recs = eigenvalues(coeffs, cfg.bc, cfg.n_max, cfg.solver);
    const auto efs = reconstruct_all(recs, coeffs, cfg.solver);
    for (const auto &item : check_oscillation(cfg.bc, efs).items) {
        s.add("oscillation", item.label, item.pass, item.detail);
    }
}

void suite_derivatives(const ProblemConfig &cfg, Summary &s)
{
    const auto &v = cfg.verify;
    std::vector<Target> targets{Target::inv_p, Target::q, Target::r, Target::s};
    if (cfg.bc.is_separated()) {
        targets.push_back(Target::alpha);
        targets.push_back(Target::beta);
    }
    const PiecewiseFn h = random_indicator(cfg.coeffs.a(), cfg.coeffs.b(), v.seed);
    fmt::print(s.log(), "direction h = indicator of [{}, {}]\n", h.breakpoints()[1], h.breakpoints()[2]);
    fmt::print(s.log(), "{:>6} {:>10} {:>22} {:>22} {:>10}\n", "target", "eps", "analytic", "finite_diff", "rel_err");
    for (Target t : targets) {
        const std::string name = to_string(t);
        std::vector<DerivativeCheck> checks;
        try {
            for (double e : v.eps) {
                checks.push_back(frechet(cfg.coeffs, cfg.bc, v.n, t, h, e, cfg.solver));
                const auto &c = checks.back();
                fmt::print(s.log(), "{:>6} {:>10.3g} {:>22.15g} {:>22.15g} {:>10.3e}\n", name, e, c.analytic,
                           c.finite_diff, c.rel_err);
            }
        } catch (const PreconditionError &e) {
            s.add("derivatives", fmt::format("{} n={}", name, v.n), false, e.what());
            continue;
        }
        const auto &c0 = checks.front();
        s.add("derivatives", fmt::format("{} n={}: analytic vs central difference at eps={:.3g}", name, v.n, c0.step),
              c0.pass(v.derivative_tol), fmt::format("rel_err={:.3e} tol={:.1e}", c0.rel_err, v.derivative_tol));
        if (checks.size() >= 3) {
            bool second = true;
            std::string ratios;
            for (std::size_t k = 1; k + 1 < checks.size(); ++k) {
                const double e1 = std::abs(checks[k].analytic - checks[k].finite_diff);
                const double e2 = std::abs(checks[k + 1].analytic - checks[k + 1].finite_diff);
                const double rs = checks[k].step / checks[k + 1].step;
                const double ratio = e1 / e2;
                ratios += fmt::format("{}{:.2f}", ratios.empty() ? "" : " ", ratio);
                // second order: the mismatch shrinks by rs^2 unless it is at solver noise
                const bool noise = e2 <= 1e-8 * (1.0 + std::abs(checks[k].analytic));
                if (!noise && !(ratio > 0.75 * rs * rs && ratio < 1.25 * rs * rs)) {
                    second = false;
                }
            }
            s.add("derivatives", fmt::format("{} n={}: second-order convergence in eps", name, v.n), second,
                  "ratios=" + ratios);
        }
    }
}

void suite_mollify(const ProblemConfig &cfg, Summary &s)
{
    const int n_max = std::min(cfg.n_max, 5);
    const auto rows = mollify_convergence(cfg.coeffs, cfg.bc, cfg.verify.ms, n_max, cfg.solver);
    fmt::print(s.log(), "{:>5} {:>3} {:>22} {:>12} {:>12} {:>12}\n", "m", "n", "lambda_m", "error", "gap_inv_p",
               "gap_s");
    for (const auto &r : rows) {
        fmt::print(s.log(), "{:>5} {:>3} {:>22.15g} {:>12.4e} {:>12.4e} {:>12.4e}\n", r.m, r.n, r.lambda_m, r.error,
                   r.gap_inv_p, r.gap_s);
    }
    const auto per = static_cast<std::size_t>(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        std::vector<double> err;
        for (std::size_t i = 0; i < cfg.verify.ms.size(); ++i) {
            err.push_back(rows[i * per + static_cast<std::size_t>(n)].error);
        }
        bool mono = true;
        for (std::size_t i = 0; i + 1 < err.size(); ++i) {
            mono = mono && (err[i + 1] < err[i] || err[i + 1] <= 1e-9);
        }
        s.add("mollify", fmt::format("n={}: |lambda_n(m) - lambda_n| decreasing in m", n), mono,
              fmt::format("first={:.3e} last={:.3e}", err.front(), err.back()));
        if (cfg.verify.mollify_tol) {
            const double tol = *cfg.verify.mollify_tol;
            s.add("mollify", fmt::format("n={}: error at m={} below {:g}", n, cfg.verify.ms.back(), tol),
                  err.back() <= tol, fmt::format("{:.3e}", err.back()));
        }
    }
}

std::vector<Region> default_regions(const BoundaryCondition &bc)
{
    if (!classify_region(bc).contains(Region::K_set)) {
        return {};
    }
    if (bc.kind() == BcKind::RealCoupled) {
        return {Region::F_plus, Region::F_minus};
    }
    if (!bc.is_separated()) {
        return {};
    }
    const bool a0 = bc.alpha() == 0.0, bpi = std::abs(bc.beta() - pi) <= 1e-12;
    if (a0 && bpi) {
        return {Region::I_plus, Region::I_zero, Region::I_minus};
    }
    if (bpi) {
        return {Region::G_plus, Region::G_minus};
    }
    return {Region::H_plus, Region::H_minus};
}

void suite_jumps(const ProblemConfig &cfg, Summary &s)
{
    std::vector<Region> regions;
    for (const auto &name : cfg.verify.regions) {
        const auto r = parse_region(name);
        if (!r) {
            throw ConfigError(fmt::format("$.verify.regions: unknown region '{}'", name));
        }
        regions.push_back(*r);
    }
    if (regions.empty()) {
        regions = default_regions(cfg.bc);
    }
    if (regions.empty()) {
        s.skip("jumps", "limits at the boundary condition", "condition is not in the K set");
        return;
    }
    const int n_max = std::min(cfg.n_max, 5);
    for (Region reg : regions) {
        const auto tab = jump_limits(cfg.coeffs, cfg.bc, reg, n_max, 0.5, 12, cfg.solver);
        for (const auto &row : tab.rows) {
            const std::string rel = row.relation == "-inf" ? "diverges to -inf" : "tends to " + row.relation;
            s.add("jumps", fmt::format("from {}: lambda_{} {}", to_string(reg), row.n, rel), row.pass,
                  row.relation == "-inf"
                      ? fmt::format("last={:.6g}", row.sequence.back())
                      : fmt::format("extrapolated={:.12g} predicted={:.12g} rel_err={:.2e}", row.extrapolated,
                                    row.predicted, row.rel_err));
        }
    }
}

void suite_transmission(const ProblemConfig &cfg, Summary &s)
{
    if (!cfg.transmission) {
        s.skip("transmission", "reduction vs direct shooting", "config has no transmission block");
        return;
    }
    const TransmissionProblem tp{cfg.coeffs, cfg.transmission->interfaces, cfg.bc};
    const auto direct = solve_direct(tp, cfg.n_max, cfg.solver);
    const auto viared = solve_via_reduction(tp, cfg.n_max, cfg.solver);
    double worst = 0.0;
    for (std::size_t n = 0; n < direct.size(); ++n) {
        worst = std::max(worst, std::abs(direct[n].lambda - viared[n].lambda) / std::max(1.0, std::abs(direct[n].lambda)));
    }
    s.add("transmission", fmt::format("reduced and direct eigenvalues agree n<={}", cfg.n_max), worst <= 1e-6,
          fmt::format("max rel diff={:.3e}", worst));

    const auto red = reduce(tp);
    const auto recs = eigenvalues(red.reduced, cfg.bc, cfg.n_max, cfg.solver);
    const auto efs = reconstruct_all(recs, red.reduced, cfg.solver);
    double jump = 0.0;
    for (const auto &ef : efs) {
        for (const auto &itf : tp.interfaces) {
            jump = std::max(jump, interface_jump_residual(red, ef, itf) / (1.0 + std::abs(ef.record.lambda)));
        }
    }
    s.add("transmission", "interface jump condition on reduced eigenfunctions", jump <= 1e-6,
          fmt::format("max scaled residual={:.3e}", jump));
}

} // namespace

std::string csv_number(double v)
{
    return fmt::format("{:.17g}", v);
}

std::optional<Region> parse_region(const std::string &name)
{
    for (Region r : {Region::F_plus, Region::F_minus, Region::G_plus, Region::G_minus, Region::H_plus,
                     Region::H_minus, Region::I_plus, Region::I_minus, Region::I_zero}) {
        if (to_string(r) == name) {
            return r;
        }
    }
    return std::nullopt;
}

int cmd_solve(const ProblemConfig &cfg, std::ostream &out, int samples, const std::string &sample_prefix)
{
    const auto recs = solve_records(cfg);
    const auto coeffs = effective_coefficients(cfg);
    const auto efs = reconstruct_all(recs, coeffs, cfg.solver);
    out << "n,lambda,multiplicity,residual,zeros\n";
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const auto &r = recs[i];
        const int z = cfg.bc.is_separated() ? efs[i].zero_count_open : efs[i].zero_count_half_open;
        out << r.n << ',' << csv_number(r.lambda) << ',' << r.multiplicity << ',' << csv_number(r.residual) << ','
            << z << '\n';
        if (samples > 0) {
            std::ofstream f(sample_prefix + std::to_string(r.n) + ".csv");
            if (!f) {
                throw ConfigError(fmt::format("cannot write {}{}.csv", sample_prefix, r.n));
            }
            write_samples_csv(f, efs[i], samples);
        }
    }
    return exit_ok;
}

int cmd_verify(const ProblemConfig &cfg, const std::vector<std::string> &suites, std::ostream &out, std::ostream &log)
{
    if (suites.empty()) {
        throw ConfigError("--suite: at least one suite is required");
    }
    for (const auto &name : suites) {
        if (std::find(all_suites().begin(), all_suites().end(), name) == all_suites().end()) {
            throw ConfigError(fmt::format("--suite: unknown suite '{}'", name));
        }
    }
    Summary s(out, log);
    for (const auto &name : suites) {
        if (name == "chains") {
            suite_chains(cfg, s);
        } else if (name == "oscillation") {
            suite_oscillation(cfg, s);
        } else if (name == "derivatives") {
            suite_derivatives(cfg, s);
        } else if (name == "mollify") {
            suite_mollify(cfg, s);
        } else if (name == "jumps") {
            suite_jumps(cfg, s);
        } else if (name == "transmission") {
            suite_transmission(cfg, s);
        }
    }
    fmt::print(log, "{}\n", s.failed() ? "verification FAILED" : "verification passed");
    return s.failed() ? exit_verify_failed : exit_ok;
}

int cmd_scan(const ProblemConfig &cfg, std::ostream &out)
{
    const auto &sc = cfg.scan;
    const auto coeffs = effective_coefficients(cfg);
    if (sc.kind == "alpha_beta_grid") {
        std::vector<double> al, be;
        for (int i = 0; i < sc.grid_alpha; ++i) {
            al.push_back(i * pi / sc.grid_alpha);
        }
        for (int j = 1; j <= sc.grid_beta; ++j) {
            be.push_back(j * pi / sc.grid_beta);
        }
        const auto surf = bc_surface(coeffs, al, be, sc.n, cfg.solver);
        out << "alpha,beta,n,lambda\n";
        for (std::size_t i = 0; i < al.size(); ++i) {
            for (std::size_t j = 0; j < be.size(); ++j) {
                out << csv_number(al[i]) << ',' << csv_number(be[j]) << ',' << sc.n << ','
                    << csv_number(surf.at(i, j)) << '\n';
            }
        }
    } else if (sc.kind == "gamma_sweep") {
        const Eigen::Matrix2d K = cfg.bc.is_coupled() ? cfg.bc.K() : Eigen::Matrix2d::Identity();
        std::vector<double> g;
        for (int k = 1; k <= sc.gamma_points; ++k) {
            g.push_back(k * pi / (sc.gamma_points + 1));
        }
        const auto aux = eigen_auxiliary(coeffs, chain_case(K).K, sc.n + 3, cfg.solver);
        std::vector<std::vector<EigenRecord>> res(g.size());
        parallel_for(g.size(), [&](std::size_t k) { res[k] = eigen_coupled(coeffs, K, g[k], sc.n, cfg.solver, &aux); });
        out << "gamma,n,lambda\n";
        for (std::size_t k = 0; k < g.size(); ++k) {
            for (const auto &r : res[k]) {
                out << csv_number(g[k]) << ',' << r.n << ',' << csv_number(r.lambda) << '\n';
            }
        }
    } else {
        const auto reg = parse_region(sc.region);
        if (!reg) {
            throw ConfigError(fmt::format("$.scan.region: unknown region '{}'", sc.region));
        }
        const auto tab = jump_limits(coeffs, cfg.bc, *reg, sc.n, sc.t0, sc.k_max, cfg.solver);
        out << "n,k,t,lambda,relation,predicted,extrapolated,rel_err,pass\n";
        for (const auto &row : tab.rows) {
            for (std::size_t k = 0; k < tab.t.size(); ++k) {
                out << row.n << ',' << k << ',' << csv_number(tab.t[k]) << ',' << csv_number(row.sequence[k]) << ','
                    << row.relation << ',' << csv_number(row.predicted) << ',' << csv_number(row.extrapolated) << ','
                    << csv_number(row.rel_err) << ',' << (row.pass ? 1 : 0) << '\n';
            }
        }
        return tab.ok() ? exit_ok : exit_verify_failed;
    }
    return exit_ok;
}

} // namespace slq
