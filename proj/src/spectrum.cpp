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
#include "slq/spectrum.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "slq/error.hpp"

namespace slq
{

namespace
{

using std::numbers::pi;

// Downward expansion may go this far beyond lambda_scan.
constexpr double down_factor = 1099511627776.0; // 2^40

double wrap_beta(double b)
{
    while (b <= 0.0) b += pi;
    while (b > pi) b -= pi;
    return b;
}

double theta_b(const CoefficientSet &cs, double lambda, double alpha, const SolverOptions &opt)
{
    return integrate_pruefer(cs, lambda, alpha, opt, false).theta_b;
}

SolverOptions polish_options(const SolverOptions &opt)
{
    SolverOptions fine = opt;
    fine.rel_tol = std::min(opt.rel_tol, 1e-12);
    fine.abs_tol = std::min(opt.abs_tol, 1e-14);
    return fine;
}

// Re-solves near l with tighter integration so the boundary residual of the
// eigenfunction follows the angle residual.
double polish_separated(const CoefficientSet &cs, double alpha, double target, double l, const SolverOptions &opt)
{
    const auto fine = polish_options(opt);
    const std::function<double(double)> g = [&](double x) { return theta_b(cs, x, alpha, fine) - target; };
    const double g0 = g(l);
    if (g0 == 0.0) {
        return l;
    }
    double step = 1e-8 * (1.0 + std::abs(l));
    const double dir = g0 > 0.0 ? -1.0 : 1.0;
    for (int i = 0; i < 40; ++i, step *= 4.0) {
        const double x = l + dir * step;
        const double gx = g(x);
        if ((gx > 0.0) != (g0 > 0.0) || gx == 0.0) {
            return solve_bracket(g, l, g0, x, gx, 1e-14 * (1.0 + std::abs(l)), 1e-13);
        }
    }
    return l;
}

// Finds hi > lo with g(hi) > 0 given g(lo) <= 0, doubling the step.
void expand_up(const std::function<double(double)> &g, double &lo, double &glo, double &hi, double &ghi, double step,
               double cap)
{
    for (;;) {
        hi = lo + step;
        if (hi > cap) {
            hi = cap;
        }
        ghi = g(hi);
        if (ghi > 0.0) {
            return;
        }
        if (hi >= cap) {
            throw SearchRangeError(fmt::format("no eigenvalue bracket below lambda = {}", cap));
        }
        lo = hi;
        glo = ghi;
        step *= 2.0;
    }
}

// Finds lo < hi with g(lo) < 0 given g(hi) >= 0.
void expand_down(const std::function<double(double)> &g, double &lo, double &glo, double &hi, double &ghi,
                 double step, double cap)
{
    for (;;) {
        lo = hi - step;
        if (lo < -cap) {
            lo = -cap;
        }
        glo = g(lo);
        if (glo < 0.0) {
            return;
        }
        if (lo <= -cap) {
            throw SearchRangeError(fmt::format("no eigenvalue bracket above lambda = {}", -cap));
        }
        hi = lo;
        ghi = glo;
        step *= 2.0;
    }
}

double separated_root(const CoefficientSet &cs, double alpha, double target, const SolverOptions &opt,
                      double lo_hint, double step_hint)
{
    const std::function<double(double)> g = [&](double l) { return theta_b(cs, l, alpha, opt) - target; };
    double lo, glo, hi, ghi;
    if (std::isfinite(lo_hint) && (glo = g(lo_hint)) <= 0.0) {
        lo = lo_hint;
        expand_up(g, lo, glo, hi, ghi, step_hint, opt.lambda_scan);
    } else {
        const double x0 = std::isfinite(lo_hint) ? lo_hint : 0.0;
        const double g0 = std::isfinite(lo_hint) ? glo : g(x0);
        if (g0 <= 0.0) {
            lo = x0;
            glo = g0;
            expand_up(g, lo, glo, hi, ghi, 1.0, opt.lambda_scan);
        } else {
            hi = x0;
            ghi = g0;
            expand_down(g, lo, glo, hi, ghi, 1.0, opt.lambda_scan * down_factor);
        }
    }
    if (glo == 0.0) {
        return lo;
    }
    const double l = solve_bracket(g, lo, glo, hi, ghi, 1e-11 * (1.0 + std::abs(lo) + std::abs(hi)), 1e-11);
    return polish_separated(cs, alpha, target, l, opt);
}

} // namespace

double solve_bracket(const std::function<double(double)> &f, double lo, double flo, double hi, double fhi,
                     double xtol, double ftol)
{
    if (lo > hi) {
        std::swap(lo, hi);
        std::swap(flo, fhi);
    }
    if (flo == 0.0) {
        return lo;
    }
    if (fhi == 0.0) {
        return hi;
    }
    if ((flo > 0.0) == (fhi > 0.0)) {
        throw ConsistencyError(fmt::format("solve_bracket: no sign change on [{}, {}] ({}, {})", lo, hi, flo, fhi));
    }
    double mlo = flo, mhi = fhi;
    int last = 0, stall = 0;
    for (int it = 0; it < 300 && hi - lo > xtol; ++it) {
        const double w = hi - lo;
        double c = lo - mlo * w / (mhi - mlo);
        if (stall >= 2 || !(c > lo && c < hi)) {
            c = 0.5 * (lo + hi);
            stall = 0;
        }
        const double fc = f(c);
        if (fc == 0.0 || std::abs(fc) <= ftol) {
            return c;
        }
        if ((fc > 0.0) == (flo > 0.0)) {
            lo = c;
            flo = mlo = fc;
            if (last == -1) {
                mhi *= 0.5;
            }
            last = -1;
        } else {
            hi = c;
            fhi = mhi = fc;
            if (last == 1) {
                mlo *= 0.5;
            }
            last = 1;
        }
        stall = (hi - lo > 0.5 * w) ? stall + 1 : 0;
    }
    return std::abs(flo) < std::abs(fhi) ? lo : hi;
}

Discriminant discriminant_from(const Eigen::Matrix2d &K, const Eigen::Matrix2d &phi)
{
    const double p1 = phi(0, 0), p1d = phi(1, 0), p2 = phi(0, 1), p2d = phi(1, 1);
    Discriminant d;
    d.D1 = K(0, 0) * p2d - K(1, 0) * p2;
    d.D2 = K(1, 1) * p1 - K(0, 1) * p1d;
    d.A = K(0, 0) * p1d - K(1, 0) * p1;
    d.C = K(1, 1) * p2 - K(0, 1) * p2d;
    d.D = d.D1 + d.D2;
    d.B = d.D1 - d.D2;
    return d;
}

Discriminant discriminant(const CoefficientSet &coeffs, const Eigen::Matrix2d &K, double lambda,
                          const SolverOptions &opt)
{
    const auto fm = fundamental_matrix<double>(coeffs, lambda, opt, false);
    auto d = discriminant_from(K, fm.at_b);
    if (fm.log_scale > 0.0) {
        const double f = std::exp(fm.log_scale);
        for (double *v : {&d.D, &d.D1, &d.D2, &d.A, &d.B, &d.C}) {
            *v *= f;
        }
    }
    return d;
}

std::pair<Discriminant, double> discriminant_with_slope(const CoefficientSet &coeffs, const Eigen::Matrix2d &K,
                                                        double lambda, const SolverOptions &opt)
{
    const auto fm = fundamental_matrix<double>(coeffs, lambda, opt, true);
    const auto d = discriminant_from(K, fm.at_b);
    const auto &r = coeffs.r();
    const double slope = fm.trajectory.integrate([&](double x, const std::array<double, 4> &v) {
        const double p1 = v[0], p2 = v[2];
        return (d.A * p2 * p2 - d.B * p1 * p2 - d.C * p1 * p1) * r(x);
    });
    return {d, slope};
}

double discriminant_derivative(const CoefficientSet &coeffs, const Eigen::Matrix2d &K, double lambda,
                               const SolverOptions &opt)
{
    return discriminant_with_slope(coeffs, K, lambda, opt).second;
}

CharacteristicScan scan_discriminant(const CoefficientSet &coeffs, const Eigen::Matrix2d &K, double lo, double hi,
                                     int n, const SolverOptions &opt)
{
    if (n < 2 || !(lo < hi)) {
        throw DomainError("scan needs n >= 2 and lo < hi");
    }
    CharacteristicScan s{CharacteristicScan::Kind::discriminant, {}, {}};
    for (int i = 0; i < n; ++i) {
        const double l = lo + (hi - lo) * i / (n - 1);
        s.lambdas.push_back(l);
        s.values.push_back(discriminant(coeffs, K, l, opt).D);
    }
    return s;
}

CharacteristicScan scan_determinant(const CoefficientSet &coeffs, const BoundaryCondition &bc, double lo, double hi,
                                    int n, const SolverOptions &opt)
{
    if (n < 2 || !(lo < hi)) {
        throw DomainError("scan needs n >= 2 and lo < hi");
    }
    CharacteristicScan s{CharacteristicScan::Kind::determinant, {}, {}};
    const std::complex<double> unphase = std::exp(std::complex<double>(0.0, -bc.gamma()));
    for (int i = 0; i < n; ++i) {
        const double l = lo + (hi - lo) * i / (n - 1);
        const auto fm = fundamental_matrix<double>(coeffs, l, opt, false);
        const Eigen::Matrix2cd phi = (fm.at_b * std::exp(fm.log_scale)).cast<std::complex<double>>();
        std::complex<double> det = (bc.A() + bc.B() * phi).determinant();
        if (bc.is_coupled()) {
            det *= unphase;
        }
        s.lambdas.push_back(l);
        s.values.push_back(det.real());
    }
    return s;
}

double separated_branch(const CoefficientSet &coeffs, double alpha, double beta, int n, const SolverOptions &opt)
{
    return separated_root(coeffs, alpha, beta + n * pi, opt, std::numeric_limits<double>::quiet_NaN(), 1.0);
}

std::vector<EigenRecord> eigen_separated(const CoefficientSet &coeffs, double alpha, double beta, int n_max,
                                         const SolverOptions &opt)
{
    const auto bc = BoundaryCondition::separated(alpha, beta);
    if (n_max < 0) {
        throw DomainError("n_max must be >= 0");
    }
    std::vector<EigenRecord> out;
    double prev = std::numeric_limits<double>::quiet_NaN();
    double gap = 1.0;
    for (int n = 0; n <= n_max; ++n) {
        const double target = beta + n * pi;
        const double l = separated_root(coeffs, alpha, target, opt, prev, gap);
        const double res = std::abs(theta_b(coeffs, l, alpha, polish_options(opt)) - target);
        if (n > 0) {
            gap = std::max(1.0, 2.0 * (l - prev));
        }
        if (n > 0 && !(l > prev)) {
            throw ConsistencyError(fmt::format("separated eigenvalues not increasing: {} then {}", prev, l));
        }
        prev = l;
        out.push_back(EigenRecord{n, l, 1, bc, res});
    }
    return out;
}

Auxiliary eigen_auxiliary(const CoefficientSet &coeffs, const Eigen::Matrix2d &K, int n_max, const SolverOptions &opt)
{
    Auxiliary aux;
    aux.beta_ff = wrap_beta(std::atan2(K(0, 1), K(1, 1)));
    aux.beta_gg = wrap_beta(std::atan2(K(0, 0), K(1, 0)));
    for (const auto &r : eigen_separated(coeffs, 0.0, aux.beta_ff, n_max, opt)) {
        aux.mu.push_back(r.lambda);
    }
    for (const auto &r : eigen_separated(coeffs, pi / 2, aux.beta_gg, n_max, opt)) {
        aux.nu.push_back(r.lambda);
    }
    return aux;
}

ChainCase chain_case(const Eigen::Matrix2d &K)
{
    auto is_a = [](const Eigen::Matrix2d &k) { return k(0, 0) > 0.0 && k(0, 1) <= 0.0; };
    auto is_b = [](const Eigen::Matrix2d &k) { return k(0, 0) <= 0.0 && k(0, 1) < 0.0; };
    if (is_a(K)) return {true, false, K};
    if (is_b(K)) return {false, false, K};
    const Eigen::Matrix2d M = -K;
    if (is_a(M)) return {true, true, M};
    if (is_b(M)) return {false, true, M};
    throw DomainError("chain_case: K fits neither case");
}

std::vector<EigenRecord> eigen_coupled(const CoefficientSet &coeffs, const Eigen::Matrix2d &K, double gamma,
                                       int n_max, const SolverOptions &opt, const Auxiliary *aux_hint)
{
    if (n_max < 0) {
        throw DomainError("n_max must be >= 0");
    }
    const auto bc = gamma == 0.0 ? BoundaryCondition::real_coupled(K) : BoundaryCondition::complex_coupled(gamma, K);
    const auto cc = chain_case(K);
    const double c = 2.0 * std::cos(gamma);
    const double cp = cc.negated ? -c : c;
    const int nb = n_max + 2;
    Auxiliary own;
    if (!aux_hint || static_cast<int>(aux_hint->mu.size()) < nb + 1 || static_cast<int>(aux_hint->nu.size()) < nb + 1) {
        own = eigen_auxiliary(coeffs, cc.K, nb, opt);
        aux_hint = &own;
    }
    const auto &aux = *aux_hint;
    const auto &mu = aux.mu;
    const auto &nu = aux.nu;

    const std::function<double(double)> f = [&](double l) { return discriminant(coeffs, cc.K, l, opt).D - cp; };

    std::vector<double> roots;
    for (int j = 0; j < nb; ++j) {
        const double s = (j % 2 == 0) ? 1.0 : -1.0;
        double L, U;
        if (cc.case_a) {
            L = j == 0 ? nu[0] : std::max(mu[j - 1], nu[j]);
            U = std::min(mu[j], nu[j + 1]);
        } else {
            L = j == 0 ? -std::numeric_limits<double>::infinity() : std::max(mu[j - 1], nu[j - 1]);
            U = std::min(mu[j], nu[j]);
        }
        double fU = f(U), fL;
        if (!std::isfinite(L)) {
            double step = std::max(1.0, std::abs(U));
            for (;;) {
                L = U - step;
                if (L < -opt.lambda_scan * down_factor) {
                    throw SearchRangeError("band 0 lower end not found");
                }
                fL = f(L);
                if (fL > 0.0) {
                    break;
                }
                step *= 2.0;
            }
        } else {
            fL = f(L);
        }
        if (L > U) {
            throw ConsistencyError(fmt::format("band {} is empty: [{}, {}]", j, L, U));
        }

        double root = std::numeric_limits<double>::quiet_NaN();
        // A root at (or numerically just past) a band end shows up as a
        // small value, possibly of the wrong sign.
        const bool badL = !(s * fL > 0.0), badU = !(s * fU < 0.0);
        for (auto [E, fE, bad] : {std::tuple{L, fL, badL}, std::tuple{U, fU, badU}}) {
            if (std::abs(fE) <= 1e-8 || (bad && std::abs(fE) <= 1e-6)) {
                const double dD = discriminant_with_slope(coeffs, cc.K, E, opt).second;
                if (std::abs(dD) <= 1e-6 * (1.0 + std::abs(E))) {
                    root = E;
                } else {
                    root = std::clamp(E - fE / dD, L, U);
                }
                break;
            }
        }
        if (std::isnan(root)) {
            if (!(s * fL > 0.0) || !(s * fU < 0.0)) {
                throw ConsistencyError(fmt::format(
                    "band {} [{}, {}]: D - c has signs ({}, {}), expected ({}, {})", j, L, U, fL, fU, s > 0 ? "+" : "-",
                    s > 0 ? "-" : "+"));
            }
            root = solve_bracket(f, L, fL, U, fU, 1e-13 * (1.0 + std::abs(L) + std::abs(U)), 1e-13);
        }
        roots.push_back(root);
    }

    std::vector<EigenRecord> recs;
    std::vector<bool> dbl(nb, false);
    for (int j = 0; j < nb; ++j) {
        // the slope needs dense output, which is not renormalized; only
        // evaluate it where D is near c'
        const Discriminant d = discriminant(coeffs, cc.K, roots[j], opt);
        const double dD = std::abs(d.D - cp) <= 1e-6 ? discriminant_with_slope(coeffs, cc.K, roots[j], opt).second : 0.0;
        const double sg = cc.negated ? -1.0 : 1.0;
        const double Dk = sg * d.D;
        recs.push_back(EigenRecord{j, roots[j], 1, bc, std::abs(Dk - c), Dk, sg * dD});
        dbl[j] = gamma == 0.0 && std::abs(d.D - cp) <= 1e-8 && std::abs(dD) <= 1e-6 * (1.0 + std::abs(roots[j]));
    }
    for (int j = 0; j + 1 < nb; ++j) {
        if (dbl[j] && dbl[j + 1] && std::abs(roots[j] - roots[j + 1]) <= 1e-6 * (1.0 + std::abs(roots[j]))) {
            const double m = 0.5 * (roots[j] + roots[j + 1]);
            recs[j].lambda = recs[j + 1].lambda = m;
            recs[j].multiplicity = recs[j + 1].multiplicity = 2;
            ++j;
        }
    }
    for (int j = 0; j + 1 < nb; ++j) {
        if (recs[j + 1].lambda < recs[j].lambda) {
            throw ConsistencyError(fmt::format("coupled eigenvalues out of order at n = {}", j));
        }
    }
    recs.erase(recs.begin() + (n_max + 1), recs.end());
    return recs;
}

std::vector<EigenRecord> eigenvalues(const CoefficientSet &coeffs, const BoundaryCondition &bc, int n_max,
                                     const SolverOptions &opt)
{
    switch (bc.kind()) {
    case BcKind::Separated: return eigen_separated(coeffs, bc.alpha(), bc.beta(), n_max, opt);
    case BcKind::RealCoupled: return eigen_coupled(coeffs, bc.K(), 0.0, n_max, opt);
    case BcKind::ComplexCoupled: return eigen_coupled(coeffs, bc.K(), bc.gamma(), n_max, opt);
    }
    return {};
}

} // namespace slq
