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
#include "slq/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "slq/error.hpp"

namespace slq
{

Polynomial::Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs))
{
    trim();
}

Polynomial::Polynomial(std::initializer_list<double> coeffs) : c_(coeffs)
{
    trim();
}

void Polynomial::trim()
{
    if (c_.empty()) {
        c_.push_back(0.0);
    }
    while (c_.size() > 1 && c_.back() == 0.0) {
        c_.pop_back();
    }
}

bool Polynomial::is_zero() const noexcept
{
    return std::all_of(c_.begin(), c_.end(), [](double v) { return v == 0.0; });
}

Polynomial Polynomial::derivative() const
{
    if (c_.size() <= 1) {
        return Polynomial{0.0};
    }
    std::vector<double> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) {
        d[k - 1] = static_cast<double>(k) * c_[k];
    }
    return Polynomial(std::move(d));
}

Polynomial Polynomial::antiderivative() const
{
    std::vector<double> d(c_.size() + 1, 0.0);
    for (std::size_t k = 0; k < c_.size(); ++k) {
        d[k + 1] = c_[k] / static_cast<double>(k + 1);
    }
    return Polynomial(std::move(d));
}

Polynomial Polynomial::shifted(double shift) const
{
    // Horner in polynomial arithmetic: p(t + shift).
    std::vector<double> out(c_.size(), 0.0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        // out <- out * (t + shift) + c
        for (std::size_t k = out.size() - 1; k > 0; --k) {
            out[k] = out[k - 1] + shift * out[k];
        }
        out[0] = shift * out[0] + *it;
    }
    return Polynomial(std::move(out));
}

double Polynomial::integrate(double lo, double hi) const
{
    const auto P = antiderivative();
    return P(hi) - P(lo);
}

double Polynomial::integrate_abs(double lo, double hi) const
{
    if (hi <= lo) {
        return 0.0;
    }
    const auto P = antiderivative();
    auto pts = roots_in(lo, hi);
    pts.insert(pts.begin(), lo);
    pts.push_back(hi);
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        acc += std::abs(P(pts[k + 1]) - P(pts[k]));
    }
    return acc;
}

double Polynomial::min_on(double lo, double hi) const
{
    double m = std::min((*this)(lo), (*this)(hi));
    for (double t : derivative().roots_in(lo, hi)) {
        m = std::min(m, (*this)(t));
    }
    return m;
}

double Polynomial::max_abs_on(double lo, double hi) const
{
    double m = std::max(std::abs((*this)(lo)), std::abs((*this)(hi)));
    for (double t : derivative().roots_in(lo, hi)) {
        m = std::max(m, std::abs((*this)(t)));
    }
    return m;
}

namespace
{

double bisect(const Polynomial &p, double u, double v, double fu)
{
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (u + v);
        if (mid <= u || mid >= v) {
            break;
        }
        const double fm = p(mid);
        if (fm == 0.0) {
            return mid;
        }
        if ((fm < 0.0) == (fu < 0.0)) {
            u = mid;
            fu = fm;
        } else {
            v = mid;
        }
    }
    return 0.5 * (u + v);
}

} // namespace

std::vector<double> Polynomial::roots_in(double lo, double hi) const
{
    std::vector<double> out;
    if (hi < lo || degree() == 0) {
        return out;
    }
    if (degree() == 1) {
        const double t = -c_[0] / c_[1];
        if (t >= lo && t <= hi) {
            out.push_back(t);
        }
        return out;
    }
    std::vector<double> pts{lo};
    for (double t : derivative().roots_in(lo, hi)) {
        if (t > pts.back()) {
            pts.push_back(t);
        }
    }
    if (hi > pts.back()) {
        pts.push_back(hi);
    }
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const double u = pts[k], v = pts[k + 1];
        const double fu = (*this)(u), fv = (*this)(v);
        if (fu == 0.0) {
            out.push_back(u);
        } else if (fv != 0.0 && (fu < 0.0) != (fv < 0.0)) {
            out.push_back(bisect(*this, u, v, fu));
        }
    }
    if ((*this)(pts.back()) == 0.0) {
        out.push_back(pts.back());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Polynomial &Polynomial::operator+=(const Polynomial &o)
{
    if (o.c_.size() > c_.size()) {
        c_.resize(o.c_.size(), 0.0);
    }
    for (std::size_t k = 0; k < o.c_.size(); ++k) {
        c_[k] += o.c_[k];
    }
    trim();
    return *this;
}

Polynomial &Polynomial::operator-=(const Polynomial &o)
{
    if (o.c_.size() > c_.size()) {
        c_.resize(o.c_.size(), 0.0);
    }
    for (std::size_t k = 0; k < o.c_.size(); ++k) {
        c_[k] -= o.c_[k];
    }
    trim();
    return *this;
}

Polynomial &Polynomial::operator*=(double s)
{
    for (auto &v : c_) {
        v *= s;
    }
    trim();
    return *this;
}

Polynomial operator*(const Polynomial &a, const Polynomial &b)
{
    if (a.c_.empty() || b.c_.empty()) {
        return Polynomial{0.0};
    }
    std::vector<double> out(a.c_.size() + b.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        for (std::size_t j = 0; j < b.c_.size(); ++j) {
            out[i + j] += a.c_[i] * b.c_[j];
        }
    }
    return Polynomial(std::move(out));
}

Polynomial interpolate(const std::vector<double> &t, const std::vector<double> &values)
{
    if (t.size() != values.size() || t.empty()) {
        throw DomainError("interpolate: node/value count mismatch");
    }
    const std::size_t n = t.size();
    // Newton divided differences, then expand the Newton form.
    std::vector<double> dd(values);
    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t i = n - 1; i >= j; --i) {
            const double den = t[i] - t[i - j];
            if (den == 0.0) {
                throw DomainError("interpolate: repeated node");
            }
            dd[i] = (dd[i] - dd[i - 1]) / den;
            if (i == j) {
                break;
            }
        }
    }
    Polynomial acc{dd[n - 1]};
    for (std::size_t k = n - 1; k-- > 0;) {
        acc = acc * Polynomial{-t[k], 1.0} + Polynomial{dd[k]};
    }
    return acc;
}

} // namespace slq
