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
#include "slq/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "slq/eigenfunctions.hpp"
#include "slq/error.hpp"
#include "slq/mollify.hpp"
#include "slq/parallel.hpp"

namespace slq
{

namespace
{

constexpr double pi = std::numbers::pi;

// Groups of entries linked group to group; every member of a group is
// compared with every member of the next one.
class ChainBuilder
{
public:
    using Certifier = std::function<bool(double, double)>;

    explicit ChainBuilder(ChainReport &rep, Certifier certify = {}) : rep_(rep), certify_(std::move(certify)) {}

    void push(std::vector<ChainEntry> group, bool strict)
    {
        std::vector<std::size_t> idx;
        for (auto &e : group) {
            idx.push_back(rep_.entries.size());
            rep_.entries.push_back(std::move(e));
        }
        for (std::size_t lo : prev_) {
            for (std::size_t hi : idx) {
                link(rep_, lo, hi, strict, certify_);
            }
        }
        prev_ = std::move(idx);
    }

    static void link(ChainReport &rep, std::size_t lo, std::size_t hi, bool strict, const Certifier &certify = {})
    {
        const double a = rep.entries[lo].value, b = rep.entries[hi].value;
        const double gap = b - a;
        const double m = chain_margin(std::max(std::abs(a), std::abs(b)));
        bool ok = strict ? gap > m : gap >= -m;
        bool certified = false;
        if (strict && !ok && gap > 0.0 && certify) {
            certified = ok = certify(a, b);
        }
        rep.links.push_back({lo, hi, strict, gap, ok, certified});
        if (!ok) {
            rep.violations.push_back(rep.links.back());
        }
    }

private:
    ChainReport &rep_;
    Certifier certify_;
    std::vector<std::size_t> prev_;
};

// Strict links between two coupled eigenvalues of the same K sit on different
// level sets of D. Where D is steep the lambda gap can drop below the margin;
// the link is still resolved if D at the midpoint lies strictly between.
ChainBuilder::Certifier level_certifier(const CoefficientSet &coeffs, const Eigen::Matrix2d &K,
                                        const SolverOptions &opt)
{
    return [&coeffs, K, opt](double a, double b) {
        const double da = discriminant(coeffs, K, a, opt).D;
        const double db = discriminant(coeffs, K, b, opt).D;
        const double dm = discriminant(coeffs, K, 0.5 * (a + b), opt).D;
        const double lo = std::min(da, db), hi = std::max(da, db);
        const double tol = 1e-6 * (1.0 + std::abs(da) + std::abs(db));
        return std::isfinite(dm) && dm > lo + tol && dm < hi - tol;
    };
}

std::string lam(int n, const std::string &what)
{
    return fmt::format("lambda_{}({})", n, what);
}

} // namespace

double chain_margin(double lambda)
{
    return 1e-9 * (1.0 + std::abs(lambda));
}

ChainReport verify_chain(const CoefficientSet &coeffs, const Eigen::Matrix2d &K, const std::vector<double> &gammas,
                         int n_max, const SolverOptions &opt)
{
    if (std::abs(K.determinant() - 1.0) > 1e-10) {
        throw DomainError("verify_chain: det K must be 1");
    }
    for (double g : gammas) {
        if (!(g > -pi && g < pi) || g == 0.0) {
            throw DomainError(fmt::format("verify_chain: gamma {} outside (-pi, 0) U (0, pi)", g));
        }
    }
    const auto cc = chain_case(K);
    const Eigen::Matrix2d &Kc = cc.K;
    const auto aux = eigen_auxiliary(coeffs, Kc, n_max + 3, opt);
    const auto lk = eigen_coupled(coeffs, Kc, 0.0, n_max, opt, &aux);
    const auto lm = eigen_coupled(coeffs, -Kc, 0.0, n_max, opt, &aux);

    // one slot per distinct |gamma|, ascending
    std::vector<double> mags;
    for (double g : gammas) {
        mags.push_back(std::abs(g));
    }
    std::sort(mags.begin(), mags.end());
    mags.erase(std::unique(mags.begin(), mags.end(), [](double u, double v) { return std::abs(u - v) <= 1e-14; }),
               mags.end());
    std::vector<std::vector<std::pair<double, std::vector<EigenRecord>>>> slots(mags.size());
    for (double g : gammas) {
        const auto it = std::find_if(mags.begin(), mags.end(),
                                     [&](double m) { return std::abs(m - std::abs(g)) <= 1e-14; });
        slots[static_cast<std::size_t>(it - mags.begin())].emplace_back(
            g, eigen_coupled(coeffs, Kc, g, n_max, opt, &aux));
    }

    ChainReport rep;
    rep.kind = cc.case_a ? "tt" : "ww";
    rep.negated = cc.negated;
    ChainBuilder cb(rep, level_certifier(coeffs, Kc, opt));
    auto gamma_group = [&](std::size_t s, int n) {
        std::vector<ChainEntry> g;
        for (const auto &[gam, recs] : slots[s]) {
            g.push_back({lam(n, fmt::format("gamma={:.6g},K", gam)), recs[n].lambda});
        }
        return g;
    };
    if (cc.case_a) {
        cb.push({{"nu_0", aux.nu[0]}}, false);
    }
    for (int n = 0; n <= n_max; ++n) {
        const bool even = n % 2 == 0;
        const ChainEntry first = even ? ChainEntry{lam(n, "K"), lk[n].lambda} : ChainEntry{lam(n, "-K"), lm[n].lambda};
        const ChainEntry last = even ? ChainEntry{lam(n, "-K"), lm[n].lambda} : ChainEntry{lam(n, "K"), lk[n].lambda};
        cb.push({first}, false);
        for (std::size_t k = 0; k < slots.size(); ++k) {
            cb.push(gamma_group(even ? k : slots.size() - 1 - k, n), true);
        }
        cb.push({last}, true);
        const int j = cc.case_a ? n + 1 : n;
        cb.push({{fmt::format("mu_{}", n), aux.mu[n]}, {fmt::format("nu_{}", j), aux.nu[j]}}, false);
    }
    return rep;
}

ChainReport verify_gamma_order(const CoefficientSet &coeffs, const Eigen::Matrix2d &K, double g1, double g2,
                               int n_max, const SolverOptions &opt)
{
    if (!(0.0 < g1 && g1 < g2 && g2 < pi)) {
        throw DomainError("verify_gamma_order: need 0 < g1 < g2 < pi");
    }
    const auto aux = eigen_auxiliary(coeffs, chain_case(K).K, n_max + 3, opt);
    const auto l1 = eigen_coupled(coeffs, K, g1, n_max, opt, &aux);
    const auto l2 = eigen_coupled(coeffs, K, g2, n_max, opt, &aux);
    ChainReport rep;
    rep.kind = "gamma";
    ChainBuilder cb(rep, level_certifier(coeffs, K, opt));
    const std::string s1 = fmt::format("gamma={:.6g}", g1), s2 = fmt::format("gamma={:.6g}", g2);
    for (int n = 0; n <= n_max; ++n) {
        if (n % 2 == 0) {
            cb.push({{lam(n, s1), l1[n].lambda}}, true);
            cb.push({{lam(n, s2), l2[n].lambda}}, true);
        } else {
            cb.push({{lam(n, s2), l2[n].lambda}}, true);
            cb.push({{lam(n, s1), l1[n].lambda}}, true);
        }
    }
    return rep;
}

ChainReport verify_dirichlet_bracketing(const CoefficientSet &coeffs, const BoundaryCondition &bc, int n_max,
                                        const SolverOptions &opt)
{
    const auto d = eigen_separated(coeffs, 0.0, pi, n_max, opt);
    const auto l = eigenvalues(coeffs, bc, n_max, opt);
    ChainReport rep;
    rep.kind = "dirichlet";
    for (int n = 0; n <= n_max; ++n) {
        rep.entries.push_back({lam(n, "D"), d[n].lambda});
    }
    for (int n = 0; n <= n_max; ++n) {
        rep.entries.push_back({lam(n, "A,B"), l[n].lambda});
    }
    const std::size_t off = static_cast<std::size_t>(n_max) + 1;
    for (int n = 0; n <= n_max; ++n) {
        const auto k = static_cast<std::size_t>(n);
        ChainBuilder::link(rep, off + k, k, false);
        if (n >= 2) {
            ChainBuilder::link(rep, k - 2, off + k, true);
        }
    }
    return rep;
}

Surface bc_surface(const CoefficientSet &coeffs, const std::vector<double> &alphas, const std::vector<double> &betas,
                   int n, const SolverOptions &opt)
{
    for (double a : alphas) {
        if (!(a >= 0.0 && a < pi)) {
            throw DomainError(fmt::format("bc_surface: alpha {} outside [0, pi)", a));
        }
    }
    for (double b : betas) {
        if (!(b > 0.0 && b <= pi)) {
            throw DomainError(fmt::format("bc_surface: beta {} outside (0, pi]", b));
        }
    }
    Surface s{n, alphas, betas, std::vector<double>(alphas.size() * betas.size())};
    parallel_for(s.values.size(), [&](std::size_t k) {
        s.values[k] = separated_branch(coeffs, alphas[k / betas.size()], betas[k % betas.size()], n, opt);
    });
    return s;
}

int surface_inversions(const Surface &s)
{
    int bad = 0;
    for (std::size_t i = 0; i < s.alphas.size(); ++i) {
        for (std::size_t j = 0; j < s.betas.size(); ++j) {
            if (i + 1 < s.alphas.size() && !(s.at(i + 1, j) < s.at(i, j))) {
                ++bad;
            }
            if (j + 1 < s.betas.size() && !(s.at(i, j + 1) > s.at(i, j))) {
                ++bad;
            }
        }
    }
    return bad;
}

std::string to_string(Target t)
{
    switch (t) {
    case Target::inv_p: return "inv_p";
    case Target::q: return "q";
    case Target::r: return "r";
    case Target::s: return "s";
    case Target::alpha: return "alpha";
    case Target::beta: return "beta";
    }
    return "?";
}

std::optional<Target> parse_target(const std::string &name)
{
    for (Target t : {Target::inv_p, Target::q, Target::r, Target::s, Target::alpha, Target::beta}) {
        if (to_string(t) == name) {
            return t;
        }
    }
    return std::nullopt;
}

DerivativeCheck frechet(const CoefficientSet &coeffs, const BoundaryCondition &bc, int n, Target target,
                        const PiecewiseFn &h, double eps, const SolverOptions &opt)
{
    if (!(eps > 0.0)) {
        throw DomainError("frechet: step must be positive");
    }
    const bool angle = target == Target::alpha || target == Target::beta;
    if (angle && !bc.is_separated()) {
        throw PreconditionError("frechet: angle targets need a separated condition");
    }
    const auto recs = eigenvalues(coeffs, bc, n, opt);
    const auto &rec = recs[static_cast<std::size_t>(n)];
    if (rec.multiplicity != 1) {
        throw PreconditionError(fmt::format("frechet: lambda_{} is not simple", n));
    }
    const auto ef = reconstruct(rec, coeffs, opt).front();
    const double lambda = rec.lambda;

    double analytic = 0.0;
    if (angle) {
        const double x = target == Target::alpha ? ef.a : ef.b;
        const auto [w, w1] = ef(x);
        const double m = std::norm(w1) + std::norm(w);
        analytic = target == Target::alpha ? -m : m;
    } else {
        const std::vector<double> &bp = h.breakpoints();
        const std::vector<double> splits(bp.begin() + 1, bp.end() - 1);
        const cplx v0 = ef.v(0), v1 = ef.v(1);
        analytic = ef.phi->trajectory.integrate(
            [&](double x, const std::array<double, 4> &c) {
                const cplx w = c[0] * v0 + c[2] * v1;
                const cplx w1 = c[1] * v0 + c[3] * v1;
                double g = 0.0;
                switch (target) {
                case Target::inv_p: g = -std::norm(w1); break;
                case Target::q: g = std::norm(w); break;
                case Target::r: g = -lambda * std::norm(w); break;
                case Target::s: g = 2.0 * std::real(w * std::conj(w1)); break;
                default: break;
                }
                return g * h(x);
            },
            splits);
    }

    auto solve_at = [&](double e) {
        if (angle) {
            const double a = bc.alpha() + (target == Target::alpha ? e : 0.0);
            const double b = bc.beta() + (target == Target::beta ? e : 0.0);
            return separated_branch(coeffs, a, b, n, opt);
        }
        const PiecewiseFn dh = e * h;
        CoefficientSet c = coeffs;
        switch (target) {
        case Target::inv_p:
            if (!((coeffs.inv_p() + dh).min_value() > 0.0)) {
                throw PreconditionError("frechet: perturbed 1/p is not positive");
            }
            c = coeffs.with_inv_p(coeffs.inv_p() + dh);
            break;
        case Target::q: c = coeffs.with_q(coeffs.q() + dh); break;
        case Target::r:
            if (!((coeffs.r() + dh).min_value() > 0.0)) {
                throw PreconditionError("frechet: perturbed r is not positive");
            }
            c = coeffs.with_r(coeffs.r() + dh);
            break;
        case Target::s: c = coeffs.with_s(coeffs.s() + dh); break;
        default: break;
        }
        return eigenvalues(c, bc, n, opt)[static_cast<std::size_t>(n)].lambda;
    };
    const double fd = (solve_at(eps) - solve_at(-eps)) / (2.0 * eps);
    return {target, analytic, fd, eps, std::abs(analytic - fd) / (1.0 + std::abs(analytic))};
}

PiecewiseFn random_indicator(double a, double b, unsigned seed)
{
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> start(0.0, 0.6), width(0.1, 0.4);
    const double lo = a + (b - a) * start(gen);
    const double hi = std::min(b, lo + (b - a) * width(gen));
    return PiecewiseFn::indicator(a, b, lo, hi);
}

bool LimitTable::ok() const
{
    return std::all_of(rows.begin(), rows.end(), [](const LimitRow &r) { return r.pass; });
}

BoundaryCondition approach_condition(const BoundaryCondition &point, Region approach, double t)
{
    auto need = [](bool cond, const char *what) {
        if (!cond) {
            throw DomainError(fmt::format("jump_limits: {}", what));
        }
    };
    const double tol = 1e-12;
    const bool plus = approach == Region::F_plus || approach == Region::G_plus || approach == Region::H_plus ||
                      approach == Region::I_plus;
    BoundaryCondition out;
    switch (approach) {
    case Region::F_plus:
    case Region::F_minus: {
        need(point.kind() == BcKind::RealCoupled && std::abs(point.K()(0, 1)) <= tol,
             "F approach needs a real coupled point with k12 = 0");
        const Eigen::Matrix2d &K = point.K();
        const double sg = K(0, 0) > 0.0 ? 1.0 : -1.0;
        const double u = plus ? t : -t;
        Eigen::Matrix2d L;
        L << K(0, 0), u * sg, K(1, 0), (1.0 + u * sg * K(1, 0)) / K(0, 0);
        out = BoundaryCondition::real_coupled(L);
        break;
    }
    case Region::G_plus:
    case Region::G_minus:
        need(point.is_separated() && std::abs(point.beta() - pi) <= tol && point.alpha() > 0.0,
             "G approach needs a separated point with beta = pi, alpha in (0, pi)");
        out = from_chart(4, -1.0 / std::tan(point.alpha()), plus ? t : -t, 0.0);
        break;
    case Region::H_plus:
    case Region::H_minus:
        need(point.is_separated() && point.alpha() == 0.0 && point.beta() < pi - tol,
             "H approach needs a separated point with alpha = 0, beta in (0, pi)");
        out = from_chart(3, plus ? t : -t, 1.0 / std::tan(point.beta()), 0.0);
        break;
    case Region::I_plus:
    case Region::I_minus:
    case Region::I_zero: {
        need(point.is_separated() && point.alpha() == 0.0 && std::abs(point.beta() - pi) <= tol,
             "I approach needs the Dirichlet point");
        const double x = approach == Region::I_minus ? -t : t;
        const double y = approach == Region::I_plus ? t : -t;
        out = from_chart(2, x, y, 0.0);
        break;
    }
    default: throw DomainError("jump_limits: approach region must be one of the F, G, H, I sets");
    }
    if (!classify_region(out).contains(approach)) {
        throw DomainError(fmt::format("jump_limits: parameter t = {} leaves {} ({})", t, to_string(approach),
                                      out.describe()));
    }
    return out;
}

LimitTable jump_limits(const CoefficientSet &coeffs, const BoundaryCondition &point, Region approach, int n_max,
                       double t0, int k_max, const SolverOptions &opt)
{
    if (!classify_region(point).contains(Region::K_set)) {
        throw DomainError(fmt::format("jump_limits: {} is not in the K set", point.describe()));
    }
    if (k_max < 2 || k_max > 12 || !(t0 > 0.0)) {
        throw DomainError("jump_limits: need t0 > 0 and 2 <= k_max <= 12");
    }
    LimitTable tab{point, approach, {}, {}};
    std::vector<BoundaryCondition> bcs;
    for (int k = 0; k <= k_max; ++k) {
        tab.t.push_back(std::ldexp(t0, -k));
        bcs.push_back(approach_condition(point, approach, tab.t.back()));
    }
    const auto ref = eigenvalues(coeffs, point, n_max, opt);
    std::vector<std::vector<EigenRecord>> seq(bcs.size());
    parallel_for(bcs.size(), [&](std::size_t k) { seq[k] = eigenvalues(coeffs, bcs[k], n_max, opt); });

    int drop = 0;
    switch (approach) {
    case Region::F_plus:
    case Region::G_plus:
    case Region::H_plus:
    case Region::I_zero: drop = 1; break;
    case Region::I_plus: drop = 2; break;
    default: break;
    }
    const double ninf = -std::numeric_limits<double>::infinity();
    for (int n = 0; n <= n_max; ++n) {
        LimitRow row;
        row.n = n;
        for (const auto &s : seq) {
            row.sequence.push_back(s[static_cast<std::size_t>(n)].lambda);
        }
        const std::size_t K = row.sequence.size();
        if (n < drop) {
            row.predicted = ninf;
            row.relation = "-inf";
            row.extrapolated = ninf;
            const bool falling = row.sequence[K - 1] < row.sequence[K - 2] && row.sequence[K - 2] < row.sequence[K - 3];
            row.pass = row.sequence[K - 1] < divergence_bound && falling;
            row.rel_err = row.pass ? 0.0 : 1.0;
        } else {
            row.predicted = ref[static_cast<std::size_t>(n - drop)].lambda;
            row.relation = drop == 0 ? "lambda_n(A)" : fmt::format("lambda_{{n-{}}}(A)", drop);
            const double l0 = row.sequence[K - 3], l1 = row.sequence[K - 2], l2 = row.sequence[K - 1];
            row.extrapolated = (8.0 * l2 - 6.0 * l1 + l0) / 3.0;
            row.rel_err = std::abs(row.extrapolated - row.predicted) / std::max(1.0, std::abs(row.predicted));
            row.pass = row.rel_err <= 1e-5;
        }
        tab.rows.push_back(std::move(row));
    }
    return tab;
}

std::vector<MollifyRow> mollify_convergence(const CoefficientSet &coeffs, const BoundaryCondition &bc,
                                            const std::vector<int> &ms, int n_max, const SolverOptions &opt)
{
    const auto ref = eigenvalues(coeffs, bc, n_max, opt);
    std::vector<std::vector<MollifyRow>> per(ms.size());
    parallel_for(ms.size(), [&](std::size_t i) {
        const auto mset = mollify(coeffs, ms[i]);
        const auto l = eigenvalues(mset.coeffs, bc, n_max, opt);
        for (int n = 0; n <= n_max; ++n) {
            const double v = l[static_cast<std::size_t>(n)].lambda;
            per[i].push_back({ms[i], n, v, std::abs(v - ref[static_cast<std::size_t>(n)].lambda), mset.l1_gap.first,
                              mset.l1_gap.second});
        }
    });
    std::vector<MollifyRow> out;
    for (auto &p : per) {
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

} // namespace slq
