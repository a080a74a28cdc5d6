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
#ifndef SLQ_BOUNDARY_HPP
#define SLQ_BOUNDARY_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace slq
{

enum class BcKind { Separated, RealCoupled, ComplexCoupled };

/// Self-adjoint boundary condition A Y(a) + B Y(b) = 0, Y = (y, y^[1]).
class BoundaryCondition
{
public:
    /// Dirichlet.
    BoundaryCondition();

    /// cos a y(a) - sin a y^[1](a) = 0, cos b y(b) - sin b y^[1](b) = 0,
    /// alpha in [0, pi), beta in (0, pi].
    static BoundaryCondition separated(double alpha, double beta);
    /// Y(b) = K Y(a), det K = 1.
    static BoundaryCondition real_coupled(const Eigen::Matrix2d &K);
    /// Y(b) = e^{i gamma} K Y(a), gamma in (-pi, 0) or (0, pi).
    static BoundaryCondition complex_coupled(double gamma, const Eigen::Matrix2d &K);
    /// Normal form of an arbitrary self-adjoint pair; throws DomainError
    /// if the pair is not self-adjoint.
    static BoundaryCondition from_matrices(const Eigen::Matrix2cd &A, const Eigen::Matrix2cd &B);
    static BoundaryCondition dirichlet() { return separated(0.0, 3.14159265358979323846); }

    BcKind kind() const noexcept { return kind_; }
    bool is_separated() const noexcept { return kind_ == BcKind::Separated; }
    bool is_coupled() const noexcept { return kind_ != BcKind::Separated; }
    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }
    /// 0 for real coupled.
    double gamma() const noexcept { return gamma_; }
    const Eigen::Matrix2d &K() const noexcept { return K_; }
    const Eigen::Matrix2cd &A() const noexcept { return A_; }
    const Eigen::Matrix2cd &B() const noexcept { return B_; }

    std::string describe() const;

private:
    void build_matrices();

    BcKind kind_ = BcKind::Separated;
    double alpha_ = 0.0, beta_ = 0.0, gamma_ = 0.0;
    Eigen::Matrix2d K_ = Eigen::Matrix2d::Identity();
    Eigen::Matrix2cd A_, B_;
};

struct SelfAdjointCheck {
    bool ok;
    /// Smallest singular value of (A|B) relative to the largest.
    double rank_margin;
    /// Frobenius norm of A E A* - B E B*, relative to ||(A|B)||^2.
    double residual;
};

SelfAdjointCheck is_self_adjoint(const Eigen::Matrix2cd &A, const Eigen::Matrix2cd &B);

enum class Region {
    K_set,
    F_minus,
    F_plus,
    G_minus,
    G_plus,
    H_minus,
    H_plus,
    I_minus,
    I_plus,
    I_zero,
    other
};

std::string to_string(Region r);

struct RegionInfo {
    Region label;
    /// Every named set containing the condition (K_set, F, G, H, I families).
    std::vector<Region> memberships;
    bool contains(Region r) const;
};

/// Classification in the chart coordinates of the real boundary-condition
/// space. Complex coupled conditions are classified through K only.
RegionInfo classify_region(const BoundaryCondition &bc);

/// Chart coordinates (x, y, r) for the named chart, if the condition lies in
/// it: 2 -> (a2, b2, r), 3 -> (a2, b1, r), 4 -> (a1, b2, r).
bool chart_coordinates(const BoundaryCondition &bc, int chart, double &x, double &y, double &r);

/// Condition with the given chart coordinates (charts 2, 3, 4 as above).
BoundaryCondition from_chart(int chart, double x, double y, double r);

} // namespace slq

#endif
