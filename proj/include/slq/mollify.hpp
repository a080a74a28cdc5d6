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
#ifndef SLQ_MOLLIFY_HPP
#define SLQ_MOLLIFY_HPP

#include <utility>

#include "slq/coeffs.hpp"

namespace slq
{

/// Normalization constant of rho(x) = C exp(1/(x^2 - 1)) on (-1, 1).
double bump_constant();

/// rho_{1/m}(x) = m rho(m x).
double bump_kernel(double x, int m);

struct MollifiedSet {
    int m;
    /// Convolution of 1/p with rho_{1/m} restricted to [a, b], i.e. 1/p_m.
    PiecewiseFn inv_p_m;
    /// Mollified s times a cutoff vanishing near both endpoints.
    PiecewiseFn s_m;
    /// (||1/p_m - 1/p||_1, ||s_m - s||_1)
    std::pair<double, double> l1_gap;
    /// Input coefficients with (1/p, s) replaced by (inv_p_m, s_m).
    CoefficientSet coeffs;
};

/// Width of the zero zone of the s_m cutoff at each end:
/// min(1/m, (b - a)/4). The ramp that follows has the same width.
double cutoff_width(double a, double b, int m);

/// Number of uniform cells used to resample mollified functions.
int resample_cells(int m);

MollifiedSet mollify(const CoefficientSet &coeffs, int m);

/// Convolution of f with rho_{1/m}, integrated over [a, b] only, at x.
double convolve(const PiecewiseFn &f, double x, int m);

} // namespace slq

#endif
