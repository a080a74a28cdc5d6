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
#ifndef SLQ_POLYNOMIAL_HPP
#define SLQ_POLYNOMIAL_HPP

#include <initializer_list>
#include <vector>

namespace slq
{

/// Dense real polynomial c[0] + c[1] t + ... in a local variable t.
class Polynomial
{
public:
    Polynomial() : c_{0.0} {}
    explicit Polynomial(std::vector<double> coeffs);
    Polynomial(std::initializer_list<double> coeffs);

    static Polynomial constant(double v) { return Polynomial{v}; }

    const std::vector<double> &coeffs() const noexcept { return c_; }
    int degree() const noexcept { return c_.empty() ? 0 : static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept;

    double operator()(double t) const noexcept
    {
        double acc = 0.0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            acc = acc * t + *it;
        }
        return acc;
    }

    Polynomial derivative() const;
    /// Antiderivative vanishing at t = 0.
    Polynomial antiderivative() const;
    /// p(t + shift) expressed in t.
    Polynomial shifted(double shift) const;

    /// Integral of the polynomial over [lo, hi].
    double integrate(double lo, double hi) const;
    /// Exact integral of |p| over [lo, hi], splitting at the real roots.
    double integrate_abs(double lo, double hi) const;
    /// Minimum over the closed interval [lo, hi].
    double min_on(double lo, double hi) const;
    double max_abs_on(double lo, double hi) const;

    /// Real roots in [lo, hi], sorted, found by recursive isolation between
    /// critical points followed by bisection.
    std::vector<double> roots_in(double lo, double hi) const;

    Polynomial &operator+=(const Polynomial &o);
    Polynomial &operator-=(const Polynomial &o);
    Polynomial &operator*=(double s);

    friend Polynomial operator+(Polynomial a, const Polynomial &b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial &b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
    friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
    friend Polynomial operator*(const Polynomial &a, const Polynomial &b);

private:
    void trim();

    std::vector<double> c_;
};

/// Polynomial through the given (t, value) nodes; nodes must be distinct.
Polynomial interpolate(const std::vector<double> &t, const std::vector<double> &values);

} // namespace slq

#endif
