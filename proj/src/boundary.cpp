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
#include "slq/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "slq/error.hpp"

namespace slq
{

namespace
{

using std::numbers::pi;
using Mat24 = Eigen::Matrix<double, 2, 4>;

constexpr double region_tol = 1e-12;

Eigen::Matrix2cd E()
{
    Eigen::Matrix2cd e;
    e << 0.0, -1.0, 1.0, 0.0;
    return e;
}

// Multiply by a unit phase so that the largest entry is real positive.
Eigen::RowVector2d realify(const Eigen::RowVector2cd &v)
{
    const int k = std::abs(v(0)) >= std::abs(v(1)) ? 0 : 1;
    const std::complex<double> ph = std::conj(v(k)) / std::abs(v(k));
    const Eigen::RowVector2cd w = v * ph;
    if (w.imag().norm() > 1e-8 * w.norm()) {
        throw DomainError("boundary row is not real up to a phase");
    }
    return w.real();
}

Eigen::RowVector2cd left_null(const Eigen::Matrix2cd &M)
{
    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(M, Eigen::ComputeFullU);
    return svd.matrixU().col(1).adjoint();
}

double wrap_alpha(double a)
{
    while (a < 0.0) a += pi;
    while (a >= pi) a -= pi;
    return a;
}

double wrap_beta(double b)
{
    while (b <= 0.0) b += pi;
    while (b > pi) b -= pi;
    return b;
}

Mat24 real_pair(const BoundaryCondition &bc)
{
    Mat24 m;
    m.leftCols<2>() = bc.A().real();
    m.rightCols<2>() = bc.B().real();
    return m;
}

// Normalizes columns (i, j) of m to (e1, -e2). Returns false if singular.
bool normalize_chart(const Mat24 &m, int i, int j, Mat24 &out)
{
    Eigen::Matrix2d s;
    s.col(0) = m.col(i);
    s.col(1) = m.col(j);
    const double scale = m.squaredNorm();
    if (std::abs(s.determinant()) <= 1e-10 * scale) {
        return false;
    }
    const Eigen::Matrix2d flip = Eigen::Vector2d(1.0, -1.0).asDiagonal();
    out = flip * s.inverse() * m;
    return true;
}

bool chart_matrix(const BoundaryCondition &bc, int chart, Mat24 &n)
{
    if (bc.kind() == BcKind::ComplexCoupled) {
        return false;
    }
    const Mat24 m = real_pair(bc);
    switch (chart) {
    case 2: return normalize_chart(m, 0, 2, n);
    case 3: return normalize_chart(m, 0, 3, n);
    case 4: return normalize_chart(m, 1, 2, n);
    default: throw DomainError(fmt::format("unknown chart {}", chart));
    }
}

} // namespace

BoundaryCondition::BoundaryCondition() : alpha_(0.0), beta_(pi)
{
    build_matrices();
}

BoundaryCondition BoundaryCondition::separated(double alpha, double beta)
{
    if (!(alpha >= 0.0 && alpha < pi) || !(beta > 0.0 && beta <= pi)) {
        throw DomainError(fmt::format("separated condition needs alpha in [0, pi), beta in (0, pi]; got ({}, {})",
                                      alpha, beta));
    }
    BoundaryCondition bc;
    bc.kind_ = BcKind::Separated;
    bc.alpha_ = alpha;
    bc.beta_ = beta;
    bc.build_matrices();
    return bc;
}

BoundaryCondition BoundaryCondition::real_coupled(const Eigen::Matrix2d &K)
{
    if (!K.allFinite() || std::abs(K.determinant() - 1.0) > 1e-12 * std::max(1.0, K.squaredNorm())) {
        throw DomainError(fmt::format("coupled condition needs det K = 1; got {}", K.determinant()));
    }
    BoundaryCondition bc;
    bc.kind_ = BcKind::RealCoupled;
    bc.K_ = K;
    bc.build_matrices();
    return bc;
}

BoundaryCondition BoundaryCondition::complex_coupled(double gamma, const Eigen::Matrix2d &K)
{
    if (!(gamma > -pi && gamma < pi) || gamma == 0.0) {
        throw DomainError(fmt::format("complex coupled condition needs gamma in (-pi, 0) or (0, pi); got {}", gamma));
    }
    auto bc = real_coupled(K);
    bc.kind_ = BcKind::ComplexCoupled;
    bc.gamma_ = gamma;
    bc.build_matrices();
    return bc;
}

BoundaryCondition BoundaryCondition::from_matrices(const Eigen::Matrix2cd &A, const Eigen::Matrix2cd &B)
{
    const auto chk = is_self_adjoint(A, B);
    if (!chk.ok) {
        throw DomainError(fmt::format("(A|B) is not self-adjoint: rank margin {}, residual {}", chk.rank_margin,
                                      chk.residual));
    }
    Eigen::JacobiSVD<Eigen::Matrix2cd> sb(B);
    const auto svb = sb.singularValues();
    if (svb(1) > 1e-10 * svb(0)) {
        const Eigen::Matrix2cd M = -B.inverse() * A;
        const std::complex<double> d = M.determinant();
        const double gamma = std::arg(d) / 2.0;
        Eigen::Matrix2cd Kc = M * std::exp(std::complex<double>(0.0, -gamma));
        if (Kc.imag().norm() > 1e-8 * Kc.norm()) {
            throw DomainError("coupled condition does not reduce to e^{i gamma} K with K real");
        }
        Eigen::Matrix2d K = Kc.real();
        K /= std::sqrt(K.determinant());
        if (std::abs(gamma) <= 1e-12) {
            return real_coupled(K);
        }
        return complex_coupled(gamma, K);
    }
    const auto ra = realify(left_null(B) * A);
    const auto rb = realify(left_null(A) * B);
    const double alpha = wrap_alpha(std::atan2(-ra(1), ra(0)));
    const double beta = wrap_beta(std::atan2(-rb(1), rb(0)));
    return separated(alpha, beta);
}

void BoundaryCondition::build_matrices()
{
    A_.setZero();
    B_.setZero();
    if (kind_ == BcKind::Separated) {
        A_(0, 0) = std::cos(alpha_);
        A_(0, 1) = -std::sin(alpha_);
        B_(1, 0) = std::cos(beta_);
        B_(1, 1) = -std::sin(beta_);
    } else {
        A_ = K_.cast<std::complex<double>>() * std::exp(std::complex<double>(0.0, gamma_));
        B_ = -Eigen::Matrix2cd::Identity();
    }
    const auto chk = is_self_adjoint(A_, B_);
    if (!chk.ok) {
        throw DomainError(fmt::format("constructed condition fails self-adjointness (residual {})", chk.residual));
    }
}

std::string BoundaryCondition::describe() const
{
    switch (kind_) {
    case BcKind::Separated: return fmt::format("separated(alpha={:.17g}, beta={:.17g})", alpha_, beta_);
    case BcKind::RealCoupled:
        return fmt::format("real_coupled(K=[[{:.17g},{:.17g}],[{:.17g},{:.17g}]])", K_(0, 0), K_(0, 1), K_(1, 0),
                           K_(1, 1));
    case BcKind::ComplexCoupled:
        return fmt::format("complex_coupled(gamma={:.17g}, K=[[{:.17g},{:.17g}],[{:.17g},{:.17g}]])", gamma_,
                           K_(0, 0), K_(0, 1), K_(1, 0), K_(1, 1));
    }
    return {};
}

SelfAdjointCheck is_self_adjoint(const Eigen::Matrix2cd &A, const Eigen::Matrix2cd &B)
{
    Eigen::Matrix<std::complex<double>, 2, 4> m;
    m << A, B;
    const auto sv = Eigen::JacobiSVD<decltype(m)>(m).singularValues();
    const double margin = sv(0) > 0.0 ? sv(1) / sv(0) : 0.0;
    const Eigen::Matrix2cd e = E();
    const double scale = std::max(m.squaredNorm(), 1e-300);
    const double res = (A * e * A.adjoint() - B * e * B.adjoint()).norm() / scale;
    return SelfAdjointCheck{margin > 1e-10 && res <= 1e-10, margin, res};
}

std::string to_string(Region r)
{
    switch (r) {
    case Region::K_set: return "K_set";
    case Region::F_minus: return "F_minus";
    case Region::F_plus: return "F_plus";
    case Region::G_minus: return "G_minus";
    case Region::G_plus: return "G_plus";
    case Region::H_minus: return "H_minus";
    case Region::H_plus: return "H_plus";
    case Region::I_minus: return "I_minus";
    case Region::I_plus: return "I_plus";
    case Region::I_zero: return "I_zero";
    case Region::other: return "other";
    }
    return "other";
}

bool RegionInfo::contains(Region r) const
{
    return std::find(memberships.begin(), memberships.end(), r) != memberships.end();
}

bool chart_coordinates(const BoundaryCondition &bc, int chart, double &x, double &y, double &r)
{
    Mat24 n;
    if (!chart_matrix(bc, chart, n)) {
        return false;
    }
    switch (chart) {
    case 2:
        x = n(0, 1);
        y = n(1, 3);
        r = n(0, 3);
        break;
    case 3:
        x = n(0, 1);
        y = n(1, 2);
        r = n(1, 1);
        break;
    case 4:
        x = n(0, 0);
        y = n(1, 3);
        r = n(1, 0);
        break;
    }
    return true;
}

BoundaryCondition from_chart(int chart, double x, double y, double r)
{
    Mat24 m;
    switch (chart) {
    case 2: m << 1, x, 0, r, 0, r, -1, y; break;
    case 3: m << 1, x, -r, 0, 0, r, y, -1; break;
    case 4: m << x, 1, 0, -r, r, 0, -1, y; break;
    default: throw DomainError(fmt::format("unknown chart {}", chart));
    }
    const Eigen::Matrix2cd A = m.leftCols<2>().cast<std::complex<double>>();
    const Eigen::Matrix2cd B = m.rightCols<2>().cast<std::complex<double>>();
    return BoundaryCondition::from_matrices(A, B);
}

RegionInfo classify_region(const BoundaryCondition &bc)
{
    RegionInfo info{Region::other, {}};
    auto &mem = info.memberships;
    const auto &K = bc.K();
    if (bc.kind() == BcKind::RealCoupled && std::abs(K(0, 1)) <= region_tol) {
        mem.push_back(Region::K_set);
    }
    if (bc.is_separated() && std::abs(std::sin(bc.alpha()) * std::sin(bc.beta())) <= region_tol) {
        mem.push_back(Region::K_set);
    }
    if (bc.is_coupled()) {
        mem.push_back(K(0, 0) * K(0, 1) <= region_tol ? Region::F_minus : Region::F_plus);
    }
    double x, y, r;
    if (chart_coordinates(bc, 2, x, y, r)) {
        if (x <= region_tol && y <= region_tol && x * y >= r * r - region_tol) {
            mem.push_back(Region::I_minus);
        } else if (x > region_tol && y > region_tol && x * y > r * r + region_tol) {
            mem.push_back(Region::I_plus);
        } else {
            mem.push_back(Region::I_zero);
        }
    }
    if (chart_coordinates(bc, 4, x, y, r)) {
        mem.push_back(y <= region_tol ? Region::G_minus : Region::G_plus);
    }
    if (chart_coordinates(bc, 3, x, y, r)) {
        mem.push_back(x <= region_tol ? Region::H_minus : Region::H_plus);
    }
    if (!mem.empty()) {
        info.label = mem.front();
    }
    return info;
}

} // namespace slq
