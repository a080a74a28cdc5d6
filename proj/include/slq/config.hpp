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
#ifndef SLQ_CONFIG_HPP
#define SLQ_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "slq/boundary.hpp"
#include "slq/coeffs.hpp"
#include "slq/quasi_ode.hpp"
#include "slq/transmission.hpp"

namespace slq
{

struct TransmissionConfig {
    std::vector<Interface> interfaces;
    /// "reduction" or "direct"
    std::string method = "reduction";
};

struct ScanConfig {
    /// "alpha_beta_grid", "gamma_sweep" or "region_approach"
    std::string kind = "alpha_beta_grid";
    int n = 0;
    int grid_alpha = 16, grid_beta = 16;
    int gamma_points = 16;
    std::string region = "I_plus";
    double t0 = 0.5;
    int k_max = 12;
};

struct VerifyConfig {
    std::vector<double> gammas{1.0, -1.0, 2.0};
    /// index used by the derivative checks
    int n = 0;
    std::vector<double> eps{1e-4, 0.08, 0.04, 0.02};
    double derivative_tol = 5e-5;
    /// Bound on |lambda_n(m) - lambda_n| at the last m; unchecked when absent.
    std::optional<double> mollify_tol;
    unsigned seed = 1;
    std::vector<int> ms{8, 16, 32, 64, 128, 256};
    std::vector<std::string> regions;
};

struct ProblemConfig {
    CoefficientSet coeffs = CoefficientSet::free(0.0, 1.0);
    BoundaryCondition bc;
    SolverOptions solver;
    int n_max = 10;
    std::optional<TransmissionConfig> transmission;
    ScanConfig scan;
    VerifyConfig verify;
};

/// Parses a JSON problem description. Errors are ConfigError with the
/// offending field path (or line for syntax errors).
ProblemConfig parse_config(const std::string &text);
ProblemConfig load_config(const std::string &path);

/// Coefficients the solver actually uses: the transmission interfaces are
/// added as point interactions when present.
CoefficientSet effective_coefficients(const ProblemConfig &cfg);

} // namespace slq

#endif
