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
#include "slq/coeffs.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "slq/error.hpp"

namespace slq
{

CoefficientSet::CoefficientSet(PiecewiseFn inv_p, PiecewiseFn q, PiecewiseFn r, PiecewiseFn s,
                               std::vector<PointInteraction> interactions)
    : inv_p_(std::move(inv_p)), q_(std::move(q)), r_(std::move(r)), s_(std::move(s)),
      interactions_(std::move(interactions))
{
    validate_and_build();
}

CoefficientSet CoefficientSet::free(double a, double b)
{
    return CoefficientSet(PiecewiseFn::constant(a, b, 1.0), PiecewiseFn::constant(a, b, 0.0),
                          PiecewiseFn::constant(a, b, 1.0), PiecewiseFn::constant(a, b, 0.0));
}

void CoefficientSet::validate_and_build()
{
    const double a = inv_p_.a(), b = inv_p_.b();
    const double tol = 1e-14 * std::max({1.0, std::abs(a), std::abs(b)});
    for (const auto *f : {&q_, &r_, &s_}) {
        if (std::abs(f->a() - a) > tol || std::abs(f->b() - b) > tol) {
            throw DomainError("coefficients must share one interval [a, b]");
        }
    }
    // a.e. positivity, checked per segment on the closed subinterval
    const auto &ip = inv_p_;
    for (std::size_t i = 0; i < ip.segments(); ++i) {
        const double m = ip.pieces()[i].min_on(0.0, ip.breakpoints()[i + 1] - ip.breakpoints()[i]);
        if (!(m > 0.0)) {
            throw DomainError(fmt::format("1/p has non-positive minimum {} on segment [{}, {}]", m,
                                          ip.breakpoints()[i], ip.breakpoints()[i + 1]));
        }
    }
    for (std::size_t i = 0; i < r_.segments(); ++i) {
        const double m = r_.pieces()[i].min_on(0.0, r_.breakpoints()[i + 1] - r_.breakpoints()[i]);
        if (!(m > 0.0)) {
            throw DomainError(fmt::format("r has non-positive minimum {} on segment [{}, {}]", m,
                                          r_.breakpoints()[i], r_.breakpoints()[i + 1]));
        }
    }
    for (const auto *f : {&inv_p_, &q_, &r_, &s_}) {
        double l1 = 0.0;
        for (std::size_t i = 0; i < f->segments(); ++i) {
            l1 += f->pieces()[i].integrate_abs(0.0, f->breakpoints()[i + 1] - f->breakpoints()[i]);
        }
        if (!std::isfinite(l1)) {
            throw DomainError("coefficient has infinite L1 norm");
        }
    }

    std::sort(interactions_.begin(), interactions_.end(),
              [](const PointInteraction &u, const PointInteraction &v) { return u.at < v.at; });
    std::vector<double> pts;
    for (std::size_t k = 0; k < interactions_.size(); ++k) {
        const auto &pi = interactions_[k];
        if (!(pi.at > a && pi.at < b) || !std::isfinite(pi.strength)) {
            throw DomainError(fmt::format("interaction point {} must be strictly inside ({}, {})", pi.at, a, b));
        }
        if (k > 0 && pi.at == interactions_[k - 1].at) {
            throw DomainError("duplicate interaction point");
        }
        pts.push_back(pi.at);
    }

    mesh_ = merge_breakpoints(inv_p_.breakpoints(), q_.breakpoints());
    mesh_ = merge_breakpoints(mesh_, r_.breakpoints());
    mesh_ = merge_breakpoints(mesh_, s_.breakpoints());
    mesh_ = merge_breakpoints(mesh_, pts);
    // interaction points must be exact mesh nodes
    for (auto &x : mesh_) {
        for (double c : pts) {
            if (std::abs(x - c) <= tol) {
                x = c;
            }
        }
    }

    cells_.clear();
    cells_.reserve(mesh_.size() - 1);
    for (std::size_t i = 0; i + 1 < mesh_.size(); ++i) {
        const double lo = mesh_[i], hi = mesh_[i + 1], mid = 0.5 * (lo + hi);
        auto local = [&](const PiecewiseFn &f) {
            const auto j = f.segment_index(mid);
            return f.pieces()[j].shifted(lo - f.breakpoints()[j]);
        };
        cells_.push_back(Cell{lo, hi, local(inv_p_), local(q_), local(r_), local(s_)});
    }
}

CoefficientSet CoefficientSet::with_inv_p(PiecewiseFn f) const
{
    return CoefficientSet(std::move(f), q_, r_, s_, interactions_);
}

CoefficientSet CoefficientSet::with_q(PiecewiseFn f) const
{
    return CoefficientSet(inv_p_, std::move(f), r_, s_, interactions_);
}

CoefficientSet CoefficientSet::with_r(PiecewiseFn f) const
{
    return CoefficientSet(inv_p_, q_, std::move(f), s_, interactions_);
}

CoefficientSet CoefficientSet::with_s(PiecewiseFn f) const
{
    return CoefficientSet(inv_p_, q_, r_, std::move(f), interactions_);
}

CoefficientSet CoefficientSet::with_interactions(std::vector<PointInteraction> pts) const
{
    return CoefficientSet(inv_p_, q_, r_, s_, std::move(pts));
}

double CoefficientSet::interaction_at(double x) const noexcept
{
    for (const auto &pi : interactions_) {
        if (pi.at == x) {
            return pi.strength;
        }
    }
    return 0.0;
}

} // namespace slq
