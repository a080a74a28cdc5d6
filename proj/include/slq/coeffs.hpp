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
#ifndef SLQ_COEFFS_HPP
#define SLQ_COEFFS_HPP

#include <vector>

#include "slq/piecewise.hpp"

namespace slq
{

/// Interior point where y stays continuous and the quasi-derivative jumps,
/// y^[1](c+) - y^[1](c-) = strength * y(c). This is a delta potential of the
/// given strength added to q.
struct PointInteraction {
    double at;
    double strength;
};

/// Coefficients (1/p, q, r, s) of
///
///     -(y^[1])' + s y^[1] + q y = lambda r y,   y^[1] = p (y' + s y)
///
/// on a compact interval [a, b]. 1/p and r must have a strictly positive
/// minimum on every segment.
class CoefficientSet
{
public:
    CoefficientSet(PiecewiseFn inv_p, PiecewiseFn q, PiecewiseFn r, PiecewiseFn s,
                   std::vector<PointInteraction> interactions = {});

    /// p = r = 1, q = s = 0 on [a, b].
    static CoefficientSet free(double a, double b);

    double a() const noexcept { return inv_p_.a(); }
    double b() const noexcept { return inv_p_.b(); }

    const PiecewiseFn &inv_p() const noexcept { return inv_p_; }
    const PiecewiseFn &q() const noexcept { return q_; }
    const PiecewiseFn &r() const noexcept { return r_; }
    const PiecewiseFn &s() const noexcept { return s_; }
    const std::vector<PointInteraction> &interactions() const noexcept { return interactions_; }

    CoefficientSet with_inv_p(PiecewiseFn f) const;
    CoefficientSet with_q(PiecewiseFn f) const;
    CoefficientSet with_r(PiecewiseFn f) const;
    CoefficientSet with_s(PiecewiseFn f) const;
    CoefficientSet with_interactions(std::vector<PointInteraction> pts) const;

    /// Merged breakpoints of all four functions plus interaction points.
    const std::vector<double> &mesh() const noexcept { return mesh_; }

    /// Polynomials of (1/p, q, r, s) on mesh cell i, in t = x - mesh()[i].
    struct Cell {
        double lo, hi;
        Polynomial inv_p, q, r, s;
    };
    const std::vector<Cell> &cells() const noexcept { return cells_; }

    /// Interaction strength at mesh point x (0 if none).
    double interaction_at(double x) const noexcept;

private:
    void validate_and_build();

    PiecewiseFn inv_p_, q_, r_, s_;
    std::vector<PointInteraction> interactions_;
    std::vector<double> mesh_;
    std::vector<Cell> cells_;
};

} // namespace slq

#endif
