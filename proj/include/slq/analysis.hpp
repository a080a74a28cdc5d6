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
#ifndef SLQ_ANALYSIS_HPP
#define SLQ_ANALYSIS_HPP

#include <optional>
#include <string>
#include <vector>

#include "slq/boundary.hpp"
#include "slq/coeffs.hpp"
#include "slq/spectrum.hpp"

namespace slq
{

struct ChainEntry {
    std::string label;
    double value;
};

/// entries[lo] < entries[hi] (strict) or entries[lo] <= entries[hi].
struct ChainLink {
    std::size_t lo, hi;
    bool strict;
    /// entries[hi] - entries[lo]
    double gap;
    bool ok;
    /// Strict link with gap below the margin, accepted because D at the
    /// midpoint separates the two level sets.
    bool certified = false;
};

/// Ordered eigenvalue entries and the inequalities between them. kind is
/// "tt" or "ww" for the interlacing chains, "gamma" for the ordering in
/// gamma and "dirichlet" for the comparison with Dirichlet eigenvalues.
struct ChainReport {
    std::string kind;
    /// True when the chain was built for -K.
    bool negated = false;
    std::vector<ChainEntry> entries;
    std::vector<ChainLink> links;
    std::vector<ChainLink> violations;
    bool ok() const { return violations.empty(); }
};

/// Strictness margin used by every link: 1e-9 (1 + |lambda|).
double chain_margin(double lambda);

/// Interlacing of lambda_n(K), lambda_n(gamma, K), lambda_n(-K) with the
/// auxiliary mu_n, nu_n for n <= n_max. K is replaced by -K when it is in
/// neither case (a) nor case (b). Gammas with equal |gamma| share a slot.
ChainReport verify_chain(const CoefficientSet &coeffs, const Eigen::Matrix2d &K, const std::vector<double> &gammas,
                         int n_max, const SolverOptions &opt = {});

/// lambda_0(g1) < lambda_0(g2) < lambda_1(g2) < lambda_1(g1) < lambda_2(g1) < ...
/// for 0 < g1 < g2 < pi.
ChainReport verify_gamma_order(const CoefficientSet &coeffs, const Eigen::Matrix2d &K, double g1, double g2,
                               int n_max, const SolverOptions &opt = {});

/// lambda_n <= lambda_n^D for n = 0, 1 and lambda_{n-2}^D < lambda_n <= lambda_n^D
/// for 2 <= n <= n_max.
ChainReport verify_dirichlet_bracketing(const CoefficientSet &coeffs, const BoundaryCondition &bc, int n_max,
                                        const SolverOptions &opt = {});

/// lambda_n(S_{alpha_i, beta_j}), row-major in alpha.
struct Surface {
    int n;
    std::vector<double> alphas, betas;
    std::vector<double> values;
    double at(std::size_t i, std::size_t j) const { return values[i * betas.size() + j]; }
};

Surface bc_surface(const CoefficientSet &coeffs, const std::vector<double> &alphas, const std::vector<double> &betas,
                   int n, const SolverOptions &opt = {});

/// Adjacent samples that fail to decrease in alpha or increase in beta.
int surface_inversions(const Surface &s);

enum class Target { inv_p, q, r, s, alpha, beta };
std::string to_string(Target t);
std::optional<Target> parse_target(const std::string &name);

struct DerivativeCheck {
    Target target;
    double analytic;
    double finite_diff;
    double step;
    double rel_err;
    bool pass(double tol) const { return rel_err <= tol; }
};

/// Analytic derivative of lambda_n in direction h against the central
/// difference (lambda_n(+eps h) - lambda_n(-eps h)) / (2 eps). For alpha and
/// beta h is ignored and the direction is the unit angle.
DerivativeCheck frechet(const CoefficientSet &coeffs, const BoundaryCondition &bc, int n, Target target,
                        const PiecewiseFn &h, double eps, const SolverOptions &opt = {});

/// Indicator of a subinterval of [a, b] drawn from the seed.
PiecewiseFn random_indicator(double a, double b, unsigned seed);

struct LimitRow {
    int n;
    /// Predicted limit; -inf for divergence.
    double predicted;
    /// Which relation the prediction comes from, e.g. "lambda_{n-1}(A)".
    std::string relation;
    /// lambda_n along the sequence t_k.
    std::vector<double> sequence;
    double extrapolated;
    double rel_err;
    bool pass;
};

struct LimitTable {
    BoundaryCondition point;
    Region approach;
    std::vector<double> t;
    std::vector<LimitRow> rows;
    bool ok() const;
};

/// Threshold and trend used as the divergence proxy.
inline constexpr double divergence_bound = -1e4;

/// lambda_n along B(t_k) -> point with t_k = t0 2^-k, k = 0..k_max, from
/// the given region. The point must be in the K set: coupled with k12 = 0
/// (F regions), separated with beta = pi (G), alpha = 0 (H), or Dirichlet (I).
LimitTable jump_limits(const CoefficientSet &coeffs, const BoundaryCondition &point, Region approach, int n_max,
                       double t0 = 0.5, int k_max = 12, const SolverOptions &opt = {});

/// The condition used by jump_limits at parameter t.
BoundaryCondition approach_condition(const BoundaryCondition &point, Region approach, double t);

struct MollifyRow {
    int m;
    int n;
    double lambda_m;
    double error;
    double gap_inv_p, gap_s;
};

/// |lambda_n(m) - lambda_n| for each m and n <= n_max.
std::vector<MollifyRow> mollify_convergence(const CoefficientSet &coeffs, const BoundaryCondition &bc,
                                            const std::vector<int> &ms, int n_max, const SolverOptions &opt = {});

} // namespace slq

#endif
