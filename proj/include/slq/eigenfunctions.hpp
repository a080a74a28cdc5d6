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
#ifndef SLQ_EIGENFUNCTIONS_HPP
#define SLQ_EIGENFUNCTIONS_HPP

#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "slq/spectrum.hpp"

namespace slq
{

/// Normalized eigenfunction w = Phi(x, lambda) v, v = (w(a), w^[1](a)).
struct Eigenfunction {
    EigenRecord record;
    std::shared_ptr<const FundamentalMatrix<double>> phi;
    Eigen::Vector2cd v;
    double a = 0.0, b = 0.0;
    /// True when w is real (separated and real coupled).
    bool real = true;
    /// int r |w|^2 after normalization.
    double norm = 0.0;
    /// Boundary residual at both ends.
    double bc_residual = 0.0;
    int zero_count_half_open = 0;
    int zero_count_open = 0;

    /// (w(x), w^[1](x)).
    std::pair<cplx, cplx> operator()(double x) const;
};

/// One eigenfunction for a simple eigenvalue, two orthonormal ones for a
/// double eigenvalue.
std::vector<Eigenfunction> reconstruct(const EigenRecord &record, const CoefficientSet &coeffs,
                                       const SolverOptions &opt = {});

/// Eigenfunctions for a list of records; a double eigenvalue listed twice
/// contributes one member of its orthonormal pair per record.
std::vector<Eigenfunction> reconstruct_all(const std::vector<EigenRecord> &records, const CoefficientSet &coeffs,
                                           const SolverOptions &opt = {});

enum class Part { re, im };

/// Zeros of Re w (or Im w) in [a, b], ascending.
std::vector<double> zeros(const Eigenfunction &ef, Part part = Part::re);

/// Number of zeros of Re w (or Im w) in [a, b) or (a, b).
int count_zeros(const Eigenfunction &ef, bool half_open, Part part = Part::re);

/// Minimum of |w| over samples of [a, b].
double min_modulus(const Eigenfunction &ef);

/// int r w1 conj(w2).
cplx inner_product(const Eigenfunction &e1, const Eigenfunction &e2, const CoefficientSet &coeffs);

struct CheckItem {
    std::string label;
    bool pass;
    std::string detail;
};

struct OscillationReport {
    std::vector<CheckItem> items;
    bool ok() const;
};

OscillationReport check_oscillation(const BoundaryCondition &bc, const std::vector<Eigenfunction> &efs);

/// CSV rows x, Re w, Im w, Re w^[1], Im w^[1] at `points` uniform abscissae.
void write_samples_csv(std::ostream &os, const Eigenfunction &ef, int points);

} // namespace slq

#endif
