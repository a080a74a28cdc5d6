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
#include "slq/quasi_ode.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <fmt/format.h>

#include "slq/error.hpp"

namespace slq
{

namespace
{

struct GaussTable {
    std::array<double, 8> x, w;
    GaussTable()
    {
        using G = boost::math::quadrature::gauss<double, 8>;
        const auto &ab = G::abscissa();
        const auto &wt = G::weights();
        for (std::size_t i = 0; i < 4; ++i) {
            x[3 - i] = 0.5 * (1.0 - ab[i]);
            x[4 + i] = 0.5 * (1.0 + ab[i]);
            w[3 - i] = w[4 + i] = 0.5 * wt[i];
        }
    }
};

const GaussTable &gauss_table()
{
    static const GaussTable t;
    return t;
}

// Dormand-Prince 5(4)
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Hairer's dense output coefficients
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

template <class T>
bool finite(const T &v)
{
    if constexpr (std::is_same_v<T, double>) {
        return std::isfinite(v);
    } else {
        return std::isfinite(v.real()) && std::isfinite(v.imag());
    }
}

// Integrates cell by cell between mesh nodes so that no step straddles a
// breakpoint. rhs(cell, t, y, dy) with t local to the cell; jump(x, y, fwd)
// applied at interaction points crossed in the interior.
// With angle_scale the error of every component is measured against
// abs_tol + rel_tol (radians) instead of its magnitude. A non-null log_scale
// enables renormalization of linear systems: the state is divided by 1e100
// whenever it exceeds that size and the natural log of the factor is added.
template <class T, std::size_t N, class Rhs, class Jump>
std::array<T, N> drive(const CoefficientSet &cs, Rhs &&rhs, Jump &&jump, std::array<T, N> y, double from, double to,
                       const SolverOptions &opt, DenseTrajectory<T, N> *dense, bool angle_scale = false,
                       double *log_scale = nullptr)
{
    using State = std::array<T, N>;
    const double a = cs.a(), b = cs.b();
    const double tol = 1e-14 * std::max({1.0, std::abs(a), std::abs(b)});
    if (from < a - tol || from > b + tol || to < a - tol || to > b + tol) {
        throw DomainError(fmt::format("integration limits [{}, {}] outside [{}, {}]", from, to, a, b));
    }
    from = std::clamp(from, a, b);
    to = std::clamp(to, a, b);
    if (from == to) {
        return y;
    }
    const bool fwd = to > from;
    const auto &mesh = cs.mesh();
    const auto &cells = cs.cells();

    std::vector<double> pts{from};
    if (fwd) {
        for (double m : mesh) {
            if (m > from && m < to) {
                pts.push_back(m);
            }
        }
    } else {
        for (auto it = mesh.rbegin(); it != mesh.rend(); ++it) {
            if (*it < from && *it > to) {
                pts.push_back(*it);
            }
        }
    }
    pts.push_back(to);

    const double sgn = fwd ? 1.0 : -1.0;
    double habs = 0.0;
    long nsteps = 0;
    State k1, k2, k3, k4, k5, k6, k7, yt, yn;

    for (std::size_t seg = 0; seg + 1 < pts.size(); ++seg) {
        const double u = pts[seg], v = pts[seg + 1];
        if (seg > 0) {
            jump(u, y, fwd);
        }
        const double mid = 0.5 * (u + v);
        auto cit = std::upper_bound(mesh.begin(), mesh.end(), mid);
        const std::size_t ci = std::min<std::size_t>(static_cast<std::size_t>(cit - mesh.begin()) - 1, cells.size() - 1);
        const auto &cell = cells[ci];
        auto f = [&](double x, const State &s, State &d) { rhs(cell, x - cell.lo, s, d); };

        if (habs == 0.0) {
            habs = std::abs(v - u);
        }
        double x = u;
        bool rejected = false;
        f(x, y, k1);
        while (sgn * (v - x) > 0.0) {
            if (++nsteps > opt.max_steps) {
                throw IntegrationError("step limit exceeded", x);
            }
            double h = habs;
            bool last = false;
            if (h >= std::abs(v - x) * (1.0 - 1e-12)) {
                h = std::abs(v - x);
                last = true;
            }
            const double hs = sgn * h;
            for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + hs * (a21 * k1[i]);
            f(x + c2 * hs, yt, k2);
            for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
            f(x + c3 * hs, yt, k3);
            for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
            f(x + c4 * hs, yt, k4);
            for (std::size_t i = 0; i < N; ++i)
                yt[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            f(x + c5 * hs, yt, k5);
            for (std::size_t i = 0; i < N; ++i)
                yt[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
            const double xn = last ? v : x + hs;
            f(xn, yt, k6);
            for (std::size_t i = 0; i < N; ++i)
                yn[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
            f(xn, yn, k7);

            double err = 0.0;
            bool ok = true;
            for (std::size_t i = 0; i < N; ++i) {
                const T ei = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
                const double mag = angle_scale ? 1.0 : std::max(std::abs(y[i]), std::abs(yn[i]));
                const double sc = opt.abs_tol + opt.rel_tol * mag;
                const double r = std::abs(ei) / sc;
                err += r * r;
                ok = ok && finite(yn[i]);
            }
            err = ok ? std::sqrt(err / N) : std::numeric_limits<double>::infinity();

            if (err <= 1.0) {
                if (dense) {
                    typename DenseTrajectory<T, N>::Step st;
                    st.x0 = x;
                    st.h = xn - x;
                    for (std::size_t i = 0; i < N; ++i) {
                        const T dy = yn[i] - y[i];
                        const T bspl = st.h * k1[i] - dy;
                        st.r[0][i] = y[i];
                        st.r[1][i] = dy;
                        st.r[2][i] = bspl;
                        st.r[3][i] = dy - st.h * k7[i] - bspl;
                        st.r[4][i] = st.h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                                             d7 * k7[i]);
                    }
                    dense->push(std::move(st));
                }
                y = yn;
                k1 = k7;
                x = xn;
                if (log_scale) {
                    double big = 0.0;
                    for (std::size_t i = 0; i < N; ++i) {
                        big = std::max(big, std::abs(y[i]));
                    }
                    if (big > 1e100) {
                        for (std::size_t i = 0; i < N; ++i) {
                            y[i] *= 1e-100;
                            k1[i] *= 1e-100;
                        }
                        *log_scale += 100.0 * std::numbers::ln10;
                    }
                }
                double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 10.0;
                fac = std::clamp(fac, 0.2, rejected ? 1.0 : 10.0);
                if (!last || fac < 1.0) {
                    habs = h * fac;
                }
                rejected = false;
            } else {
                const double fac = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.1;
                habs = h * fac;
                rejected = true;
                if (habs < 1e-14 * (1.0 + std::abs(x))) {
                    throw IntegrationError(fmt::format("step size underflow at x = {}", x), x);
                }
            }
        }
    }
    if (dense) {
        dense->finish();
    }
    return y;
}

} // namespace

std::span<const double> gauss_nodes()
{
    return gauss_table().x;
}

std::span<const double> gauss_weights()
{
    return gauss_table().w;
}

template <class T>
SystemSolution<T> integrate_system(const CoefficientSet &coeffs, T lambda, StateVector<T> initial, double from,
                                   double to, const SolverOptions &opt, bool dense)
{
    SystemSolution<T> out;
    auto rhs = [lambda](const CoefficientSet::Cell &c, double t, const StateVector<T> &y, StateVector<T> &d) {
        const double ip = c.inv_p(t), s = c.s(t);
        d[0] = ip * y[1] - s * y[0];
        d[1] = (c.q(t) - lambda * c.r(t)) * y[0] + s * y[1];
    };
    auto jump = [&coeffs](double x, StateVector<T> &y, bool fwd) {
        const double al = coeffs.interaction_at(x);
        y[1] += (fwd ? al : -al) * y[0];
    };
    out.end = drive<T, 2>(coeffs, rhs, jump, initial, from, to, opt, dense ? &out.trajectory : nullptr);
    return out;
}

template <class T>
FundamentalMatrix<T> fundamental_matrix(const CoefficientSet &coeffs, T lambda, const SolverOptions &opt, bool dense)
{
    FundamentalMatrix<T> out;
    out.lambda = lambda;
    auto rhs = [lambda](const CoefficientSet::Cell &c, double t, const std::array<T, 4> &y, std::array<T, 4> &d) {
        const double ip = c.inv_p(t), s = c.s(t);
        const T g = c.q(t) - lambda * c.r(t);
        d[0] = ip * y[1] - s * y[0];
        d[1] = g * y[0] + s * y[1];
        d[2] = ip * y[3] - s * y[2];
        d[3] = g * y[2] + s * y[3];
    };
    auto jump = [&coeffs](double x, std::array<T, 4> &y, bool fwd) {
        const double al = fwd ? coeffs.interaction_at(x) : -coeffs.interaction_at(x);
        y[1] += al * y[0];
        y[3] += al * y[2];
    };
    const std::array<T, 4> init{T(1), T(0), T(0), T(1)};
    const auto e = drive<T, 4>(coeffs, rhs, jump, init, coeffs.a(), coeffs.b(), opt,
                               dense ? &out.trajectory : nullptr, false, dense ? nullptr : &out.log_scale);
    out.at_b << e[0], e[2], e[1], e[3];
    return out;
}

double pruefer_shear(double theta, double strength)
{
    const double sn = std::sin(theta), cs = std::cos(theta);
    if (sn == 0.0 || strength == 0.0) {
        return theta;
    }
    const double sg = sn > 0.0 ? 1.0 : -1.0;
    // half-turn index taken from the sign of sin, not floor(theta / pi)
    const double k = std::round((theta - std::atan2(sg * sn, sg * cs)) / std::numbers::pi);
    return k * std::numbers::pi + std::atan2(sg * sn, sg * (cs + strength * sn));
}

PrueferPath integrate_pruefer(const CoefficientSet &coeffs, double lambda, double alpha0, const SolverOptions &opt,
                              bool dense)
{
    PrueferPath out;
    out.alpha0 = alpha0;
    out.lambda = lambda;
    auto rhs = [lambda](const CoefficientSet::Cell &c, double t, const std::array<double, 1> &y,
                        std::array<double, 1> &d) {
        const double sn = std::sin(y[0]), cs = std::cos(y[0]);
        d[0] = c.inv_p(t) * cs * cs - 2.0 * c.s(t) * sn * cs + (lambda * c.r(t) - c.q(t)) * sn * sn;
    };
    auto jump = [&coeffs](double x, std::array<double, 1> &y, bool fwd) {
        const double al = coeffs.interaction_at(x);
        y[0] = pruefer_shear(y[0], fwd ? al : -al);
    };
    const auto e = drive<double, 1>(coeffs, rhs, jump, {alpha0}, coeffs.a(), coeffs.b(), opt,
                                    dense ? &out.theta : nullptr, true);
    out.theta_b = e[0];
    return out;
}

template SystemSolution<double> integrate_system(const CoefficientSet &, double, StateVector<double>, double, double,
                                                 const SolverOptions &, bool);
template SystemSolution<cplx> integrate_system(const CoefficientSet &, cplx, StateVector<cplx>, double, double,
                                               const SolverOptions &, bool);
template FundamentalMatrix<double> fundamental_matrix(const CoefficientSet &, double, const SolverOptions &, bool);
template FundamentalMatrix<cplx> fundamental_matrix(const CoefficientSet &, cplx, const SolverOptions &, bool);

} // namespace slq
