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
#include "slq/transmission.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "slq/error.hpp"

namespace slq
{

namespace
{

void validate(const TransmissionProblem &tp)
{
    const auto &cs = tp.coeffs;
    for (const auto &p : cs.s().pieces()) {
        if (!p.is_zero()) {
            throw DomainError("transmission problem: s must vanish");
        }
    }
    if (!cs.interactions().empty()) {
        throw DomainError("transmission problem: coefficients already carry point interactions");
    }
    for (const auto &itf : tp.interfaces) {
        if (!(itf.c > cs.a() && itf.c < cs.b()) || !std::isfinite(itf.alpha)) {
            throw DomainError(fmt::format("interface at {} must lie strictly inside ({}, {})", itf.c, cs.a(), cs.b()));
        }
    }
}

bool all_zero(const PiecewiseFn &f)
{
    return std::all_of(f.pieces().begin(), f.pieces().end(), [](const Polynomial &p) { return p.is_zero(); });
}

} // namespace

Reduction reduce(const TransmissionProblem &tp)
{
    validate(tp);
    const auto &cs = tp.coeffs;
    const double a = cs.a(), b = cs.b();
    double sum_alpha = 0.0;
    for (const auto &itf : tp.interfaces) {
        sum_alpha += itf.alpha;
    }
    const double C = (cs.q().integral() + sum_alpha) / cs.r().integral();
    auto q_tilde = C == 0.0 ? cs.q() : cs.q() - C * cs.r();
    auto u_bar = -1.0 * q_tilde.antiderivative();
    for (const auto &itf : tp.interfaces) {
        if (itf.alpha != 0.0) {
            u_bar = u_bar - itf.alpha * PiecewiseFn::indicator(a, b, itf.c, b);
        }
    }
    if (C == 0.0 && all_zero(u_bar)) {
        return Reduction{C, std::move(q_tilde), std::move(u_bar), cs};
    }
    const auto s = u_bar * cs.inv_p();
    const auto q_red = -1.0 * (u_bar * u_bar * cs.inv_p());
    CoefficientSet red(cs.inv_p(), q_red, cs.r(), s);
    return Reduction{C, std::move(q_tilde), std::move(u_bar), std::move(red)};
}

CoefficientSet direct_coefficients(const TransmissionProblem &tp)
{
    validate(tp);
    std::vector<PointInteraction> pts;
    for (const auto &itf : tp.interfaces) {
        if (itf.alpha != 0.0) {
            pts.push_back({itf.c, itf.alpha});
        }
    }
    return pts.empty() ? tp.coeffs : tp.coeffs.with_interactions(std::move(pts));
}

std::vector<EigenRecord> solve_direct(const TransmissionProblem &tp, int n_max, const SolverOptions &opt)
{
    return eigenvalues(direct_coefficients(tp), tp.bc, n_max, opt);
}

std::vector<EigenRecord> solve_via_reduction(const TransmissionProblem &tp, int n_max, const SolverOptions &opt)
{
    const auto red = reduce(tp);
    auto recs = eigenvalues(red.reduced, tp.bc, n_max, opt);
    for (auto &r : recs) {
        r.lambda += red.C;
    }
    return recs;
}

double interface_jump_residual(const Reduction &red, const Eigenfunction &ef, const Interface &itf)
{
    const auto &traj = ef.phi->trajectory;
    const auto &steps = traj.steps();
    // dense values on both sides of c
    const auto i = traj.locate(itf.c);
    const auto right = steps[i].eval(itf.c);
    const auto left = (i > 0 && steps[i].lo() == itf.c) ? steps[i - 1].eval(itf.c) : right;
    auto wv = [&](const std::array<double, 4> &c) {
        return std::pair{c[0] * ef.v(0) + c[2] * ef.v(1), c[1] * ef.v(0) + c[3] * ef.v(1)};
    };
    const auto [yl, y1l] = wv(left);
    const auto [yr, y1r] = wv(right);
    const cplx py_l = y1l - red.u_bar.left_limit(itf.c) * yl;
    const cplx py_r = y1r - red.u_bar.right_limit(itf.c) * yr;
    return std::abs(py_r - py_l - itf.alpha * 0.5 * (yl + yr));
}

} // namespace slq
