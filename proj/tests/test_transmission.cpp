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

#include "slq/error.hpp"
#include "slq/transmission.hpp"
#include "support.hpp"

using namespace slq;
using Catch::Approx;
using testing::pi;

namespace
{

// Dirichlet at 0, jump alpha y(c) in y' at c: y(pi) = S(pi) + alpha S(c) S(pi - c)
std::vector<double> delta_oracle(double c, double alpha, std::size_t count)
{
    auto G = [&](double l) {
        const double S = testing::sinc_pair(l, pi).first;
        return S + alpha * testing::sinc_pair(l, c).first * testing::sinc_pair(l, pi - c).first;
    };
    auto roots = testing::scan_roots(G, -200.0, 200.0, 1e-3);
    roots.resize(std::min(roots.size(), count));
    return roots;
}

} // namespace

TEST_CASE("single interface matches the delta characteristic function")
{
    for (double c : {pi / 2, 1.0}) {
        for (double alpha : {-2.0, 1.0, 10.0}) {
            const TransmissionProblem tp{CoefficientSet::free(0.0, pi), {{c, alpha}}, BoundaryCondition::dirichlet()};
            const auto want = delta_oracle(c, alpha, 9);
            REQUIRE(want.size() == 9);
            const auto red = solve_via_reduction(tp, 8);
            const auto dir = solve_direct(tp, 8);
            for (int n = 0; n <= 8; ++n) {
                INFO("c=" << c << " alpha=" << alpha << " n=" << n);
                const double scale = std::max(1.0, std::abs(want[n]));
                CHECK(std::abs(red[n].lambda - want[n]) <= 1e-6 * scale);
                CHECK(std::abs(dir[n].lambda - want[n]) <= 1e-6 * scale);
            }
        }
    }
}

TEST_CASE("zero-strength interfaces leave the Dirichlet spectrum unchanged")
{
    const auto cs = CoefficientSet::free(0.0, pi);
    const TransmissionProblem tp{cs, {{pi / 2, 0.0}, {2.0, 0.0}}, BoundaryCondition::dirichlet()};
    const auto red = solve_via_reduction(tp, 8);
    const auto plain = eigen_separated(cs, 0.0, pi, 8);
    for (int n = 0; n <= 8; ++n) {
        CHECK(red[n].lambda == Approx(plain[n].lambda).epsilon(1e-10));
    }
    CHECK(direct_coefficients(tp).interactions().empty());
}

TEST_CASE("reduction and direct shooting agree on variable coefficients")
{
    std::mt19937 g(53);
    for (int trial = 0; trial < 8; ++trial) {
        auto cs = testing::random_coefficients(g, 0.0, 2.0, 5.0, 0.0);
        cs = cs.with_s(PiecewiseFn({0.0, 2.0}, {Polynomial{0.0}}));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::vector<Interface> itfs{{0.2 + 0.6 * u(g), 6.0 * u(g) - 3.0}, {1.2 + 0.6 * u(g), 6.0 * u(g) - 3.0}};
        std::vector<BoundaryCondition> bcs{BoundaryCondition::separated(0.3, 2.0),
                                           BoundaryCondition::real_coupled(testing::random_K_case_a(g)),
                                           BoundaryCondition::complex_coupled(1.0, testing::random_K_case_b(g))};
        const TransmissionProblem tp{cs, itfs, bcs[trial % 3]};
        const auto red = solve_via_reduction(tp, 6);
        const auto dir = solve_direct(tp, 6);
        REQUIRE(red.size() == dir.size());
        for (std::size_t n = 0; n < red.size(); ++n) {
            CHECK(std::abs(red[n].lambda - dir[n].lambda) <= 1e-6 * std::max(1.0, std::abs(dir[n].lambda)));
        }
    }
}

TEST_CASE("reduced eigenfunctions satisfy the interface jump")
{
    const auto cs = CoefficientSet::free(0.0, pi);
    const std::vector<Interface> itfs{{1.0, 2.5}, {2.2, -1.5}};
    const TransmissionProblem tp{cs, itfs, BoundaryCondition::dirichlet()};
    const auto red = reduce(tp);
    const auto recs = eigenvalues(red.reduced, tp.bc, 6);
    for (const auto &ef : reconstruct_all(recs, red.reduced)) {
        for (const auto &itf : itfs) {
            CHECK(interface_jump_residual(red, ef, itf) <= 1e-7);
        }
    }
    // reduced potential and the shift are consistent with the shifted spectrum
    const auto shifted = solve_via_reduction(tp, 6);
    for (std::size_t n = 0; n < recs.size(); ++n) {
        CHECK(shifted[n].lambda == Approx(recs[n].lambda + red.C).epsilon(1e-12));
    }
}

TEST_CASE("invalid transmission problems are rejected")
{
    const auto cs = CoefficientSet::free(0.0, 1.0);
    const auto bc = BoundaryCondition::dirichlet();
    CHECK_THROWS_AS(reduce({cs, {{1.0, 1.0}}, bc}), DomainError);
    CHECK_THROWS_AS(reduce({cs, {{-0.5, 1.0}}, bc}), DomainError);
    CHECK_THROWS_AS(reduce({cs.with_s(PiecewiseFn({0.0, 1.0}, {Polynomial{1.0}})), {{0.5, 1.0}}, bc}), DomainError);
    CHECK_THROWS_AS(reduce({cs.with_interactions({{0.3, 1.0}}), {{0.5, 1.0}}, bc}), DomainError);
}
