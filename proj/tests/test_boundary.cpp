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
#include <catch2/catch_amalgamated.hpp>

#include "slq/boundary.hpp"
#include "slq/error.hpp"
#include "support.hpp"

using namespace slq;
using Catch::Approx;
using testing::pi;

namespace
{

// (A|B) and (A2|B2) describe the same condition iff the stacked 4x4 has rank 2
bool same_condition(const BoundaryCondition &u, const BoundaryCondition &v)
{
    Eigen::Matrix4cd m;
    m << u.A(), u.B(), v.A(), v.B();
    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(m);
    const auto sv = svd.singularValues();
    return sv(2) <= 1e-9 * sv(0);
}

Eigen::Matrix2cd random_invertible(std::mt19937 &g)
{
    std::normal_distribution<double> n;
    Eigen::Matrix2cd C;
    do {
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                C(i, j) = {n(g), n(g)};
            }
        }
    } while (std::abs(C.determinant()) < 0.1);
    return C;
}

} // namespace

TEST_CASE("constructed conditions are self-adjoint")
{
    std::mt19937 g(3);
    for (int i = 0; i < 200; ++i) {
        const auto bc = testing::random_bc(g);
        const auto chk = is_self_adjoint(bc.A(), bc.B());
        CHECK(chk.ok);
        CHECK(chk.residual <= 1e-12);
        CHECK(chk.rank_margin > 1e-6);
    }
}

TEST_CASE("default condition is Dirichlet")
{
    const BoundaryCondition bc;
    REQUIRE(bc.is_separated());
    CHECK(bc.alpha() == 0.0);
    CHECK(bc.beta() == Approx(pi));
}

TEST_CASE("normal form is recovered from any basis of the condition")
{
    std::mt19937 g(8);
    for (int i = 0; i < 200; ++i) {
        const auto bc = testing::random_bc(g);
        const Eigen::Matrix2cd C = random_invertible(g);
        const auto back = BoundaryCondition::from_matrices(C * bc.A(), C * bc.B());
        CHECK(back.kind() == bc.kind());
        CHECK(same_condition(bc, back));
        if (bc.is_separated()) {
            CHECK(back.alpha() == Approx(bc.alpha()).margin(1e-10));
            CHECK(back.beta() == Approx(bc.beta()).margin(1e-10));
        } else {
            CHECK(back.K().determinant() == Approx(1.0).epsilon(1e-10));
            // e^{i g} K = e^{i (g + pi)} (-K)
            CHECK(std::abs(std::sin(back.gamma() - bc.gamma())) <= 1e-10);
        }
    }
}

TEST_CASE("rank-deficient and non-self-adjoint pairs are rejected")
{
    Eigen::Matrix2cd A, B;
    A << 1.0, 0.0, 2.0, 0.0;
    B.setZero();
    CHECK_FALSE(is_self_adjoint(A, B).ok);
    CHECK_THROWS_AS(BoundaryCondition::from_matrices(A, B), DomainError);

    A = Eigen::Matrix2cd::Identity();
    B = -2.0 * Eigen::Matrix2cd::Identity();
    CHECK_FALSE(is_self_adjoint(A, B).ok);
    CHECK_THROWS_AS(BoundaryCondition::from_matrices(A, B), DomainError);

    // y(a) = 0 together with y(b) = 0 is fine, y(a) = 0 with y'(a) = 0 is not
    A << 1.0, 0.0, 0.0, 1.0;
    B.setZero();
    CHECK_FALSE(is_self_adjoint(A, B).ok);
}

TEST_CASE("parameter ranges are enforced")
{
    CHECK_THROWS_AS(BoundaryCondition::separated(pi, 1.0), DomainError);
    CHECK_THROWS_AS(BoundaryCondition::separated(-0.1, 1.0), DomainError);
    CHECK_THROWS_AS(BoundaryCondition::separated(0.5, 0.0), DomainError);
    Eigen::Matrix2d K;
    K << 2.0, 0.0, 0.0, 2.0;
    CHECK_THROWS_AS(BoundaryCondition::real_coupled(K), DomainError);
    CHECK_THROWS_AS(BoundaryCondition::complex_coupled(0.0, Eigen::Matrix2d::Identity()), DomainError);
    CHECK_THROWS_AS(BoundaryCondition::complex_coupled(pi, Eigen::Matrix2d::Identity()), DomainError);
}

TEST_CASE("chart coordinates round trip")
{
    std::mt19937 g(21);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int chart : {2, 3, 4}) {
        for (int i = 0; i < 100; ++i) {
            const double x = u(g), y = u(g), r = u(g);
            const auto bc = from_chart(chart, x, y, r);
            double x2, y2, r2;
            REQUIRE(chart_coordinates(bc, chart, x2, y2, r2));
            CHECK(x2 == Approx(x).margin(1e-9));
            CHECK(y2 == Approx(y).margin(1e-9));
            CHECK(r2 == Approx(r).margin(1e-9));
        }
    }
}

TEST_CASE("complex coupled conditions lie in no real chart")
{
    const auto bc = BoundaryCondition::complex_coupled(1.0, Eigen::Matrix2d::Identity());
    double x, y, r;
    for (int chart : {2, 3, 4}) {
        CHECK_FALSE(chart_coordinates(bc, chart, x, y, r));
    }
}

TEST_CASE("region memberships of named conditions")
{
    CHECK(classify_region(BoundaryCondition::dirichlet()).contains(Region::K_set));
    CHECK_FALSE(classify_region(BoundaryCondition::separated(pi / 2, pi / 2)).contains(Region::K_set));

    const auto periodic = classify_region(BoundaryCondition::real_coupled(Eigen::Matrix2d::Identity()));
    CHECK(periodic.contains(Region::K_set));
    CHECK(periodic.contains(Region::F_minus));

    Eigen::Matrix2d K;
    K << 1.0, 1.0, 0.0, 1.0;
    CHECK(classify_region(BoundaryCondition::real_coupled(K)).contains(Region::F_plus));
    K << 1.0, -1.0, 0.0, 1.0;
    CHECK(classify_region(BoundaryCondition::real_coupled(K)).contains(Region::F_minus));
    CHECK(classify_region(BoundaryCondition::complex_coupled(0.5, K)).contains(Region::F_minus));

    CHECK(classify_region(from_chart(2, 1.0, 1.0, 0.0)).contains(Region::I_plus));
    CHECK(classify_region(from_chart(2, -1.0, -1.0, 0.0)).contains(Region::I_minus));
    CHECK(classify_region(from_chart(2, 1.0, -1.0, 0.0)).contains(Region::I_zero));
    CHECK(classify_region(from_chart(2, 1.0, 1.0, 2.0)).contains(Region::I_zero));
    CHECK(classify_region(from_chart(4, 0.3, 1.0, 0.0)).contains(Region::G_plus));
    CHECK(classify_region(from_chart(4, 0.3, -1.0, 0.0)).contains(Region::G_minus));
    CHECK(classify_region(from_chart(3, 1.0, 0.3, 0.0)).contains(Region::H_plus));
    CHECK(classify_region(from_chart(3, -1.0, 0.3, 0.0)).contains(Region::H_minus));
}

TEST_CASE("every real condition in a chart gets a label")
{
    std::mt19937 g(4);
    for (int i = 0; i < 200; ++i) {
        const auto bc = testing::random_bc(g);
        const auto info = classify_region(bc);
        if (!info.memberships.empty()) {
            CHECK(info.label == info.memberships.front());
        }
        if (bc.is_coupled()) {
            CHECK((info.contains(Region::F_plus) != info.contains(Region::F_minus)));
        }
    }
}
