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
#include "slq/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slq/error.hpp"

namespace slq
{

namespace
{

double mesh_tol(double a, double b)
{
    return 1e-14 * std::max({1.0, std::abs(a), std::abs(b)});
}

// Local polynomial of f valid on the cell [u, v] of a finer mesh.
Polynomial cell_poly(const PiecewiseFn &f, double u, double v)
{
    const auto j = f.segment_index(0.5 * (u + v));
    return f.pieces()[j].shifted(u - f.breakpoints()[j]);
}

void check_same_interval(const PiecewiseFn &f, const PiecewiseFn &g)
{
    const double tol = mesh_tol(f.a(), f.b());
    if (std::abs(f.a() - g.a()) > tol || std::abs(f.b() - g.b()) > tol) {
        throw DomainError("piecewise functions live on different intervals");
    }
}

template <class Op>
PiecewiseFn combine(const PiecewiseFn &f, const PiecewiseFn &g, Op op)
{
    check_same_interval(f, g);
    auto x = merge_breakpoints(f.breakpoints(), g.breakpoints());
    std::vector<Polynomial> p;
    p.reserve(x.size() - 1);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        p.push_back(op(cell_poly(f, x[i], x[i + 1]), cell_poly(g, x[i], x[i + 1])));
    }
    return PiecewiseFn(std::move(x), std::move(p));
}

} // namespace

PiecewiseFn::PiecewiseFn(std::vector<double> breakpoints, std::vector<Polynomial> pieces)
    : x_(std::move(breakpoints)), p_(std::move(pieces))
{
    if (x_.size() < 2 || p_.size() + 1 != x_.size()) {
        throw DomainError("PiecewiseFn: need M+1 breakpoints for M segments (M >= 1)");
    }
    for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
        if (!(x_[i] < x_[i + 1]) || !std::isfinite(x_[i]) || !std::isfinite(x_[i + 1])) {
            throw DomainError("PiecewiseFn: breakpoints must be finite and strictly increasing");
        }
    }
    for (const auto &q : p_) {
        for (double c : q.coeffs()) {
            if (!std::isfinite(c)) {
                throw DomainError("PiecewiseFn: non-finite coefficient");
            }
        }
    }
}

PiecewiseFn PiecewiseFn::constant(double a, double b, double value)
{
    return PiecewiseFn({a, b}, {Polynomial{value}});
}

PiecewiseFn PiecewiseFn::from_global(std::vector<double> breakpoints, const std::vector<Polynomial> &global_pieces)
{
    if (breakpoints.size() != global_pieces.size() + 1) {
        throw DomainError("PiecewiseFn: need M+1 breakpoints for M segments");
    }
    std::vector<Polynomial> local;
    local.reserve(global_pieces.size());
    for (std::size_t i = 0; i < global_pieces.size(); ++i) {
        local.push_back(global_pieces[i].shifted(breakpoints[i]));
    }
    return PiecewiseFn(std::move(breakpoints), std::move(local));
}

PiecewiseFn PiecewiseFn::indicator(double a, double b, double lo, double hi)
{
    lo = std::max(lo, a);
    hi = std::min(hi, b);
    if (!(lo < hi)) {
        throw DomainError("indicator: empty support");
    }
    std::vector<double> x{a};
    std::vector<Polynomial> p;
    if (lo > a) {
        x.push_back(lo);
        p.push_back(Polynomial{0.0});
    }
    x.push_back(hi);
    p.push_back(Polynomial{1.0});
    if (hi < b) {
        x.push_back(b);
        p.push_back(Polynomial{0.0});
    }
    return PiecewiseFn(std::move(x), std::move(p));
}

std::size_t PiecewiseFn::segment_index(double x) const
{
    if (x >= x_.back()) {
        return p_.size() - 1;
    }
    if (x <= x_.front()) {
        return 0;
    }
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    return static_cast<std::size_t>(it - x_.begin()) - 1;
}

double PiecewiseFn::operator()(double x) const
{
    const auto j = segment_index(x);
    return p_[j](x - x_[j]);
}

double PiecewiseFn::right_limit(double x) const
{
    return (*this)(x);
}

double PiecewiseFn::left_limit(double x) const
{
    if (x <= x_.front()) {
        return p_.front()(x - x_.front());
    }
    // last segment whose left end is strictly below x
    const auto it = std::lower_bound(x_.begin(), x_.end(), x);
    const auto j = std::min(static_cast<std::size_t>(it - x_.begin()) - 1, p_.size() - 1);
    return p_[j](x - x_[j]);
}

double PiecewiseFn::integral() const
{
    double acc = 0.0;
    for (std::size_t i = 0; i < p_.size(); ++i) {
        acc += p_[i].integrate(0.0, x_[i + 1] - x_[i]);
    }
    return acc;
}

PiecewiseFn PiecewiseFn::antiderivative() const
{
    std::vector<Polynomial> out;
    out.reserve(p_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < p_.size(); ++i) {
        auto P = p_[i].antiderivative();
        out.push_back(P + Polynomial{acc});
        acc += P(x_[i + 1] - x_[i]);
    }
    return PiecewiseFn(x_, std::move(out));
}

double PiecewiseFn::min_value() const
{
    double m = p_[0].min_on(0.0, x_[1] - x_[0]);
    for (std::size_t i = 1; i < p_.size(); ++i) {
        m = std::min(m, p_[i].min_on(0.0, x_[i + 1] - x_[i]));
    }
    return m;
}

double PiecewiseFn::max_abs() const
{
    double m = 0.0;
    for (std::size_t i = 0; i < p_.size(); ++i) {
        m = std::max(m, p_[i].max_abs_on(0.0, x_[i + 1] - x_[i]));
    }
    return m;
}

int PiecewiseFn::max_degree() const
{
    int d = 0;
    for (const auto &q : p_) {
        d = std::max(d, q.degree());
    }
    return d;
}

PiecewiseFn PiecewiseFn::refined(std::span<const double> extra) const
{
    std::vector<double> inside;
    for (double v : extra) {
        if (v > a() && v < b()) {
            inside.push_back(v);
        }
    }
    std::sort(inside.begin(), inside.end());
    auto x = merge_breakpoints(x_, inside);
    std::vector<Polynomial> p;
    p.reserve(x.size() - 1);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        p.push_back(cell_poly(*this, x[i], x[i + 1]));
    }
    return PiecewiseFn(std::move(x), std::move(p));
}

PiecewiseFn &PiecewiseFn::operator*=(double s)
{
    for (auto &q : p_) {
        q *= s;
    }
    return *this;
}

PiecewiseFn operator+(const PiecewiseFn &f, const PiecewiseFn &g)
{
    return combine(f, g, [](const Polynomial &u, const Polynomial &v) { return u + v; });
}

PiecewiseFn operator-(const PiecewiseFn &f, const PiecewiseFn &g)
{
    return combine(f, g, [](const Polynomial &u, const Polynomial &v) { return u - v; });
}

PiecewiseFn operator*(const PiecewiseFn &f, const PiecewiseFn &g)
{
    return combine(f, g, [](const Polynomial &u, const Polynomial &v) { return u * v; });
}

std::vector<double> merge_breakpoints(std::span<const double> x, std::span<const double> y)
{
    std::vector<double> all;
    all.reserve(x.size() + y.size());
    all.insert(all.end(), x.begin(), x.end());
    all.insert(all.end(), y.begin(), y.end());
    std::sort(all.begin(), all.end());
    if (all.empty()) {
        return all;
    }
    const double tol = mesh_tol(all.front(), all.back());
    std::vector<double> out{all.front()};
    for (std::size_t i = 1; i < all.size(); ++i) {
        if (all[i] - out.back() > tol) {
            out.push_back(all[i]);
        }
    }
    // keep the exact right end of the coarser input
    out.back() = all.back();
    return out;
}

double l1_distance(const PiecewiseFn &f, const PiecewiseFn &g)
{
    check_same_interval(f, g);
    const auto x = merge_breakpoints(f.breakpoints(), g.breakpoints());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const auto d = cell_poly(f, x[i], x[i + 1]) - cell_poly(g, x[i], x[i + 1]);
        acc += d.integrate_abs(0.0, x[i + 1] - x[i]);
    }
    return acc;
}

} // namespace slq
