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
#ifndef SLQ_TRANSMISSION_HPP
#define SLQ_TRANSMISSION_HPP

#include <vector>

#include "slq/eigenfunctions.hpp"
#include "slq/spectrum.hpp"

namespace slq
{

struct Interface {
    double c;
    double alpha;
};

/// -(p y')' + q y = lambda w y on [a, b] with y continuous and
/// (p y')(c+) - (p y')(c-) = alpha y(c) at each interface. coeffs.s() must
/// vanish; coeffs.r() is the weight w.
struct TransmissionProblem {
    CoefficientSet coeffs;
    std::vector<Interface> interfaces;
    BoundaryCondition bc;
};

struct Reduction {
    double C;
    PiecewiseFn q_tilde;
    PiecewiseFn u_bar;
    /// (1/p, -u_bar^2 / p, w, u_bar / p)
    CoefficientSet reduced;
};

Reduction reduce(const TransmissionProblem &tp);

/// Shooting with the interface map (y, p y') -> (y, p y' + alpha y).
std::vector<EigenRecord> solve_direct(const TransmissionProblem &tp, int n_max, const SolverOptions &opt = {});

/// Eigenvalues of the reduced problem shifted by C.
std::vector<EigenRecord> solve_via_reduction(const TransmissionProblem &tp, int n_max, const SolverOptions &opt = {});

/// |(p y')(c+) - (p y')(c-) - alpha y(c)| for an eigenfunction of the
/// reduced problem, with p y' = y^[1] - u_bar y.
double interface_jump_residual(const Reduction &red, const Eigenfunction &ef, const Interface &itf);

/// Coefficients with the interfaces as point interactions; zero-strength
/// interfaces are dropped.
CoefficientSet direct_coefficients(const TransmissionProblem &tp);

} // namespace slq

#endif
