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
#include "slq/mollify.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "slq/error.hpp"

namespace slq
{

namespace
{

using boost::math::quadrature::gauss;
using boost::math::quadrature::gauss_kronrod;

double raw_bump(double x)
{
    const double d = x * x - 1.0;
    return d < 0.0 ? std::exp(1.0 / d) : 0.0;
}

double smooth_step(double t)
{
    if (t <= 0.0) {
        return 0.0;
    }
    if (t >= 1.0) {
        return 1.0;
    }
    const double e0 = std::exp(-1.0 / t);
    const double e1 = std::exp(-1.0 / (1.0 - t));
    return e0 / (e0 + e1);
}

double cutoff(double x, double a, double b, double w)
{
    return smooth_step((x - a - w) / w) * smooth_step((b - x - w) / w);
}

template <class F>
PiecewiseFn resample(F &&f, std::vector<double> mesh)
{
    std::vector<Polynomial> pieces;
    pieces.reserve(mesh.size() - 1);
    for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
        const double h = mesh[i + 1] - mesh[i];
        std::vector<double> t{0.0, h / 3.0, 2.0 * h / 3.0, h};
        std::vector<double> v(4);
        bool all_zero = true;
        for (int k = 0; k < 4; ++k) {
            v[k] = f(mesh[i] + t[k]);
            all_zero = all_zero && v[k] == 0.0;
        }
        pieces.push_back(all_zero ? Polynomial{0.0} : interpolate(t, v));
    }
    return PiecewiseFn(std::move(mesh), std::move(pieces));
}

} // namespace

double bump_constant()
{
    static const double c = [] {
        double err = 0.0;
        const double mass = gauss_kronrod<double, 61>::integrate(raw_bump, -1.0, 1.0, 10, 1e-14, &err);
        return 1.0 / mass;
    }();
    return c;
}

double bump_kernel(double x, int m)
{
    return m * bump_constant() * raw_bump(m * x);
}

double cutoff_width(double a, double b, int m)
{
    return std::min(1.0 / m, 0.25 * (b - a));
}

int resample_cells(int m)
{
    return std::max(16 * m, 64);
}

double convolve(const PiecewiseFn &f, double x, int m)
{
    const double lo = std::max(f.a(), x - 1.0 / m);
    const double hi = std::min(f.b(), x + 1.0 / m);
    if (!(lo < hi)) {
        return 0.0;
    }
    // fixed 30-point panels: 8 across the kernel support, also split at
    // the breakpoints of f (adaptive rules stall on the flat kernel tails)
    std::vector<double> cuts{lo};
    for (double xb : f.breakpoints()) {
        if (xb > lo && xb < hi) {
            cuts.push_back(xb);
        }
    }
    for (int k = 1; k < 8; ++k) {
        const double xk = x - 1.0 / m + k / (4.0 * m);
        if (xk > lo && xk < hi) {
            cuts.push_back(xk);
        }
    }
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
        const auto j = f.segment_index(mid);
        const auto &piece = f.pieces()[j];
        const double x0 = f.breakpoints()[j];
        auto g = [&](double y) { return bump_kernel(x - y, m) * piece(y - x0); };
        if (cuts[i + 1] > cuts[i]) {
            acc += gauss<double, 30>::integrate(g, cuts[i], cuts[i + 1]);
        }
    }
    return acc;
}

MollifiedSet mollify(const CoefficientSet &coeffs, int m)
{
    if (m < 1) {
        throw DomainError("mollify: m must be >= 1");
    }
    const double a = coeffs.a(), b = coeffs.b();
    const int n = resample_cells(m);
    const double w = cutoff_width(a, b, m);

    std::vector<double> uniform(n + 1);
    for (int i = 0; i <= n; ++i) {
        uniform[i] = a + (b - a) * i / n;
    }
    uniform.back() = b;
    std::vector<double> extra{a + w, a + 2.0 * w, b - 2.0 * w, b - w};
    std::sort(extra.begin(), extra.end());
    auto mesh = merge_breakpoints(uniform, extra);
    mesh = merge_breakpoints(mesh, coeffs.inv_p().breakpoints());
    mesh = merge_breakpoints(mesh, coeffs.s().breakpoints());

    const auto &ip = coeffs.inv_p();
    const auto &s = coeffs.s();
    auto inv_p_m = resample([&](double x) { return convolve(ip, x, m); }, mesh);
    if (!(inv_p_m.min_value() > 0.0)) {
        throw ConsistencyError("mollify: convolution of 1/p lost positivity");
    }
    const bool s_zero = std::all_of(s.pieces().begin(), s.pieces().end(),
                                    [](const Polynomial &p) { return p.is_zero(); });
    auto s_m = s_zero ? PiecewiseFn::constant(a, b, 0.0)
                      : resample([&](double x) { return cutoff(x, a, b, w) * convolve(s, x, m); }, mesh);

    std::pair<double, double> gap{l1_distance(inv_p_m, ip), l1_distance(s_m, s)};
    auto out = coeffs.with_inv_p(inv_p_m).with_s(s_m);
    return MollifiedSet{m, std::move(inv_p_m), std::move(s_m), gap, std::move(out)};
}

} // namespace slq
