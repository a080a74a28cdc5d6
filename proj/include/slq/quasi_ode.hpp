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
#ifndef SLQ_QUASI_ODE_HPP
#define SLQ_QUASI_ODE_HPP

#include <algorithm>
#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "slq/coeffs.hpp"

namespace slq
{

using cplx = std::complex<double>;

struct SolverOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    /// Half-width of the initial eigenvalue search window.
    double lambda_scan = 1e4;
    long max_steps = 5'000'000;
};

/// Gauss-Legendre nodes/weights on [0, 1], 8 points.
std::span<const double> gauss_nodes();
std::span<const double> gauss_weights();

/// Piecewise quintic dense output of an adaptive Dormand-Prince run.
///
/// Steps are stored sorted by abscissa regardless of the integration
/// direction. At an interaction point the value from the right is returned.
template <class T, std::size_t N>
class DenseTrajectory
{
public:
    using State = std::array<T, N>;

    struct Step {
        double x0; // start of the step in integration direction
        double h;  // signed step
        std::array<State, 5> r;

        double lo() const noexcept { return h > 0 ? x0 : x0 + h; }
        double hi() const noexcept { return h > 0 ? x0 + h : x0; }

        State eval(double x) const noexcept
        {
            const double th = (x - x0) / h, th1 = 1.0 - th;
            State out;
            for (std::size_t i = 0; i < N; ++i) {
                out[i] = r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])));
            }
            return out;
        }
    };

    DenseTrajectory() = default;

    bool empty() const noexcept { return steps_.empty(); }
    double lo() const noexcept { return steps_.front().lo(); }
    double hi() const noexcept { return steps_.back().hi(); }
    const std::vector<Step> &steps() const noexcept { return steps_; }

    State operator()(double x) const
    {
        return steps_[locate(x)].eval(std::clamp(x, lo(), hi()));
    }

    /// Sum over steps of the 8-point Gauss rule applied to f(x, state).
    /// Step intervals are additionally split at the given interior points.
    template <class F>
    auto integrate(F &&f, std::span<const double> splits = {}) const
    {
        using R = std::decay_t<decltype(f(0.0, State{}))>;
        R acc{};
        if constexpr (requires { R::Zero(); }) {
            acc = R::Zero();
        }
        const auto gx = gauss_nodes();
        const auto gw = gauss_weights();
        for (const auto &st : steps_) {
            const double l = st.lo(), u = st.hi();
            std::vector<double> cuts{l};
            if (!splits.empty()) {
                auto it = std::upper_bound(splits.begin(), splits.end(), l);
                for (; it != splits.end() && *it < u; ++it) {
                    cuts.push_back(*it);
                }
            }
            cuts.push_back(u);
            for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
                const double w = cuts[c + 1] - cuts[c];
                for (std::size_t k = 0; k < gx.size(); ++k) {
                    const double x = cuts[c] + gx[k] * w;
                    acc += (gw[k] * w) * f(x, st.eval(x));
                }
            }
        }
        return acc;
    }

    std::size_t locate(double x) const noexcept
    {
        auto it = std::upper_bound(steps_.begin(), steps_.end(), x,
                                   [](double v, const Step &s) { return v < s.lo(); });
        if (it == steps_.begin()) {
            return 0;
        }
        return static_cast<std::size_t>(it - steps_.begin()) - 1;
    }

    void push(Step s) { steps_.push_back(std::move(s)); }
    void finish()
    {
        if (!steps_.empty() && steps_.front().h < 0) {
            std::reverse(steps_.begin(), steps_.end());
        }
    }

private:
    std::vector<Step> steps_;
};

/// (y, y^[1]) pair.
template <class T>
using StateVector = std::array<T, 2>;

template <class T>
struct SystemSolution {
    StateVector<T> end;
    DenseTrajectory<T, 2> trajectory;
};

/// Solves y' = (1/p) y1 - s y, y1' = (q - lambda r) y + s y1 from `from` to
/// `to` (either direction). Interaction points add strength * y to y1 when
/// crossed left to right.
template <class T>
SystemSolution<T> integrate_system(const CoefficientSet &coeffs, T lambda, StateVector<T> initial, double from,
                                   double to, const SolverOptions &opt = {}, bool dense = true);

/// Phi(x, lambda) with columns (phi1, phi1^[1]) and (phi2, phi2^[1]).
template <class T>
struct FundamentalMatrix {
    using Mat = Eigen::Matrix<T, 2, 2>;
    T lambda;
    /// Phi(b) = at_b * exp(log_scale); log_scale > 0 only for runs without
    /// dense output whose solution exceeded 1e100.
    Mat at_b;
    double log_scale = 0.0;
    /// Components (phi1, phi1^[1], phi2, phi2^[1]); empty unless requested.
    DenseTrajectory<T, 4> trajectory;

    Mat operator()(double x) const
    {
        const auto v = trajectory(x);
        Mat m;
        m << v[0], v[2], v[1], v[3];
        return m;
    }
};

/// With dense = false the result may be renormalized (see log_scale).
template <class T>
FundamentalMatrix<T> fundamental_matrix(const CoefficientSet &coeffs, T lambda, const SolverOptions &opt = {},
                                        bool dense = false);

struct PrueferPath {
    double alpha0;
    double lambda;
    double theta_b;
    DenseTrajectory<double, 1> theta;
};

/// theta' = (1/p) cos^2 - s sin(2 theta) + (lambda r - q) sin^2 with
/// theta(a) = alpha0. Any real alpha0 is accepted; the solution is unwrapped.
PrueferPath integrate_pruefer(const CoefficientSet &coeffs, double lambda, double alpha0,
                              const SolverOptions &opt = {}, bool dense = false);

/// Angle after the interaction jump y1 -> y1 + strength * y, staying in the
/// same half-turn [k pi, (k+1) pi).
double pruefer_shear(double theta, double strength);

} // namespace slq

#endif
