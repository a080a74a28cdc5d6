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
#ifndef SLQ_SPECTRUM_HPP
#define SLQ_SPECTRUM_HPP

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "slq/boundary.hpp"
#include "slq/coeffs.hpp"
#include "slq/quasi_ode.hpp"

namespace slq
{

/// Functionals of Phi(b, lambda) for a coupling matrix K:
/// D = D1 + D2, B = D1 - D2, and 4 - D^2 = -(4 A C + B^2).
struct Discriminant {
    double D, D1, D2, A, B, C;
};

Discriminant discriminant_from(const Eigen::Matrix2d &K, const Eigen::Matrix2d &phi_b);
Discriminant discriminant(const CoefficientSet &coeffs, const Eigen::Matrix2d &K, double lambda,
                          const SolverOptions &opt = {});

/// D'(lambda) = int [A phi2^2 - B phi1 phi2 - C phi1^2] r, by quadrature on
/// the dense trajectory.
double discriminant_derivative(const CoefficientSet &coeffs, const Eigen::Matrix2d &K, double lambda,
                               const SolverOptions &opt = {});

/// D and D' from a single integration.
std::pair<Discriminant, double> discriminant_with_slope(const CoefficientSet &coeffs, const Eigen::Matrix2d &K,
                                                        double lambda, const SolverOptions &opt = {});

struct CharacteristicScan {
    enum class Kind { determinant, discriminant };
    Kind kind;
    std::vector<double> lambdas;
    std::vector<double> values;
};

/// Samples D(lambda) on a uniform grid of n >= 2 points.
CharacteristicScan scan_discriminant(const CoefficientSet &coeffs, const Eigen::Matrix2d &K, double lo, double hi,
                                     int n, const SolverOptions &opt = {});
/// Samples det(A + B Phi(b, lambda)), with the unit phase e^{-i gamma}
/// removed for coupled conditions so the values are real.
CharacteristicScan scan_determinant(const CoefficientSet &coeffs, const BoundaryCondition &bc, double lo, double hi,
                                    int n, const SolverOptions &opt = {});

struct EigenRecord {
    int n;
    double lambda;
    int multiplicity;
    BoundaryCondition bc;
    /// |theta(b) - (beta + n pi)| for separated, |D - 2 cos gamma| for coupled.
    double residual;
    /// Raw D and D' at lambda (coupled only, else 0).
    double D = 0.0;
    double dD = 0.0;
};

/// lambda with theta(b, lambda; alpha) = beta + n pi for arbitrary real
/// alpha, beta. For alpha in [0, pi), beta in (0, pi] this is lambda_n of
/// S_{alpha,beta}; outside it continues the eigenvalue branch smoothly.
double separated_branch(const CoefficientSet &coeffs, double alpha, double beta, int n,
                        const SolverOptions &opt = {});

std::vector<EigenRecord> eigen_separated(const CoefficientSet &coeffs, double alpha, double beta, int n_max,
                                         const SolverOptions &opt = {});

struct Auxiliary {
    std::vector<double> mu, nu;
    double beta_ff, beta_gg;
};

/// gamma = 0 means real coupled (D = 2). aux may carry the auxiliary
/// eigenvalues of chain_case(K).K up to index n_max + 2; it is recomputed
/// when absent or too short.
std::vector<EigenRecord> eigen_coupled(const CoefficientSet &coeffs, const Eigen::Matrix2d &K, double gamma,
                                       int n_max, const SolverOptions &opt = {}, const Auxiliary *aux = nullptr);

/// mu_n from y(a) = 0, k22 y(b) - k12 y^[1](b) = 0 and nu_n from
/// y^[1](a) = 0, k21 y(b) - k11 y^[1](b) = 0, for n <= n_max.
Auxiliary eigen_auxiliary(const CoefficientSet &coeffs, const Eigen::Matrix2d &K, int n_max,
                          const SolverOptions &opt = {});

/// Dispatch on the kind of bc.
std::vector<EigenRecord> eigenvalues(const CoefficientSet &coeffs, const BoundaryCondition &bc, int n_max,
                                     const SolverOptions &opt = {});

/// Which interlacing chain applies to K: case (a) k11 > 0, k12 <= 0;
/// case (b) k11 <= 0, k12 < 0; otherwise -K is used with the target negated.
struct ChainCase {
    bool case_a;
    bool negated;
    Eigen::Matrix2d K; // K or -K, whichever falls in case (a)/(b)
};
ChainCase chain_case(const Eigen::Matrix2d &K);

/// Root of a function with f(lo), f(hi) of opposite sign (Illinois with
/// bisection safeguard) until the bracket is below xtol.
double solve_bracket(const std::function<double(double)> &f, double lo, double flo, double hi, double fhi,
                     double xtol, double ftol = 0.0);

} // namespace slq

#endif
