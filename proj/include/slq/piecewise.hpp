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
#ifndef SLQ_PIECEWISE_HPP
#define SLQ_PIECEWISE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "slq/polynomial.hpp"

namespace slq
{

/// Piecewise polynomial on [a, b].
///
/// Segment i lives on [x_i, x_{i+1}] and is stored in the local variable
/// t = x - x_i. Jumps are allowed only at breakpoints. Point evaluation
/// returns the right limit, except at b where the left limit is returned.
class PiecewiseFn
{
public:
    PiecewiseFn(std::vector<double> breakpoints, std::vector<Polynomial> pieces);

    static PiecewiseFn constant(double a, double b, double value);
    /// Segments given in global x coordinates, i.e. pieces[i](x).
    static PiecewiseFn from_global(std::vector<double> breakpoints, const std::vector<Polynomial> &global_pieces);
    /// Indicator of [lo, hi] inside [a, b].
    static PiecewiseFn indicator(double a, double b, double lo, double hi);

    double a() const noexcept { return x_.front(); }
    double b() const noexcept { return x_.back(); }
    const std::vector<double> &breakpoints() const noexcept { return x_; }
    const std::vector<Polynomial> &pieces() const noexcept { return p_; }
    std::size_t segments() const noexcept { return p_.size(); }

    /// Index of the segment used to evaluate at x (right-continuous).
    std::size_t segment_index(double x) const;

    double operator()(double x) const;
    double left_limit(double x) const;
    double right_limit(double x) const;

    double integral() const;
    /// F(x) = integral of f over [a, x]; continuous, one degree higher.
    PiecewiseFn antiderivative() const;
    /// Exact minimum of each segment on its closed subinterval, minimised.
    double min_value() const;
    double max_abs() const;
    int max_degree() const;

    /// Same function on the union of the current and the extra breakpoints.
    PiecewiseFn refined(std::span<const double> extra) const;

    PiecewiseFn &operator*=(double s);
    friend PiecewiseFn operator+(const PiecewiseFn &f, const PiecewiseFn &g);
    friend PiecewiseFn operator-(const PiecewiseFn &f, const PiecewiseFn &g);
    friend PiecewiseFn operator*(const PiecewiseFn &f, const PiecewiseFn &g);
    friend PiecewiseFn operator*(PiecewiseFn f, double s) { return f *= s; }
    friend PiecewiseFn operator*(double s, PiecewiseFn f) { return f *= s; }

private:
    std::vector<double> x_;
    std::vector<Polynomial> p_;
};

/// Sorted union of two breakpoint sets (exact duplicates removed).
std::vector<double> merge_breakpoints(std::span<const double> x, std::span<const double> y);

/// Integral of |f - g| over [a, b], exact on the merged mesh.
double l1_distance(const PiecewiseFn &f, const PiecewiseFn &g);

} // namespace slq

#endif
