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
#ifndef SLQ_TESTS_SUPPORT_HPP
#define SLQ_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "slq/boundary.hpp"
#include "slq/coeffs.hpp"

namespace slq::testing
{

inline constexpr double pi = std::numbers::pi;

/// Piecewise linear function on [a, b] with 1..4 random segments; with
/// positive = true every segment stays above 0.3.
inline PiecewiseFn random_piecewise(std::mt19937 &g, double a, double b, bool positive, double scale = 1.0)
{
    std::uniform_int_distribution<int> segs(1, 4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n = segs(g);
    std::vector<double> bp{a};
    std::vector<double> cuts;
    for (int i = 1; i < n; ++i) {
        cuts.push_back(a + (b - a) * (0.1 + 0.8 * u(g)));
    }
    std::sort(cuts.begin(), cuts.end());
    for (double c : cuts) {
        if (c - bp.back() > 1e-3 * (b - a)) {
            bp.push_back(c);
        }
    }
    bp.push_back(b);
    std::vector<Polynomial> pieces;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        const double h = bp[i + 1] - bp[i];
        if (positive) {
            const double c0 = 0.5 + 1.5 * u(g);
            const double end = 0.5 + 1.5 * u(g);
            pieces.push_back(Polynomial{c0, (end - c0) / h});
        } else {
            pieces.push_back(Polynomial{scale * (2.0 * u(g) - 1.0), scale * (2.0 * u(g) - 1.0) / h});
        }
    }
    return PiecewiseFn(bp, pieces);
}

inline CoefficientSet random_coefficients(std::mt19937 &g, double a = 0.0, double b = 1.0, double q_scale = 5.0,
                                          double s_scale = 1.0)
{
    return CoefficientSet(random_piecewise(g, a, b, true), random_piecewise(g, a, b, false, q_scale),
                          random_piecewise(g, a, b, true), random_piecewise(g, a, b, false, s_scale));
}

/// det K = 1 with k11 > 0, k12 <= 0.
inline Eigen::Matrix2d random_K_case_a(std::mt19937 &g)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double k11 = 0.3 + 2.7 * u(g), k12 = -2.0 * u(g), k21 = 4.0 * u(g) - 2.0;
    Eigen::Matrix2d K;
    K << k11, k12, k21, (1.0 + k12 * k21) / k11;
    return K;
}

/// det K = 1 with k11 <= 0, k12 < 0.
inline Eigen::Matrix2d random_K_case_b(std::mt19937 &g)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double k11 = -3.0 * u(g), k12 = -0.2 - 1.8 * u(g), k22 = 4.0 * u(g) - 2.0;
    Eigen::Matrix2d K;
    K << k11, k12, (k11 * k22 - 1.0) / k12, k22;
    return K;
}

inline Eigen::Matrix2d random_sl2(std::mt19937 &g)
{
    std::bernoulli_distribution coin(0.5);
    const Eigen::Matrix2d K = coin(g) ? random_K_case_a(g) : random_K_case_b(g);
    return coin(g) ? Eigen::Matrix2d(-K) : K;
}

inline BoundaryCondition random_bc(std::mt19937 &g)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    switch (std::uniform_int_distribution<int>(0, 2)(g)) {
    case 0: return BoundaryCondition::separated(pi * u(g), pi * (1.0 - u(g)));
    case 1: return BoundaryCondition::real_coupled(random_sl2(g));
    default: {
        const double gam = (0.05 + 0.9 * u(g)) * pi * (u(g) < 0.5 ? -1.0 : 1.0);
        return BoundaryCondition::complex_coupled(gam, random_sl2(g));
    }
    }
}

/// sin(k x)/k continued to k = 0 and imaginary k, with its x-derivative.
inline std::pair<double, double> sinc_pair(double lambda, double x)
{
    if (lambda > 0.0) {
        const double k = std::sqrt(lambda);
        return {std::sin(k * x) / k, std::cos(k * x)};
    }
    if (lambda < 0.0) {
        const double k = std::sqrt(-lambda);
        return {std::sinh(k * x) / k, std::cosh(k * x)};
    }
    return {x, 1.0};
}

/// Sign-change roots of f on [lo, hi] sampled at step h, refined by bisection.
template <class F>
std::vector<double> scan_roots(F &&f, double lo, double hi, double h)
{
    std::vector<double> out;
    double x0 = lo, f0 = f(lo);
    for (double x1 = lo + h; x0 < hi; x1 += h) {
        x1 = std::min(x1, hi);
        const double f1 = f(x1);
        if ((f0 < 0.0) != (f1 < 0.0)) {
            double l = x0, r = x1, fl = f0;
            for (int i = 0; i < 200 && r - l > 1e-14 * std::max(1.0, std::abs(l)); ++i) {
                const double m = 0.5 * (l + r);
                const double fm = f(m);
                if ((fm < 0.0) == (fl < 0.0)) {
                    l = m;
                    fl = fm;
                } else {
                    r = m;
                }
            }
            out.push_back(0.5 * (l + r));
        }
        x0 = x1;
        f0 = f1;
    }
    return out;
}

} // namespace slq::testing

#endif
