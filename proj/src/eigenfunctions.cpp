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
#include "slq/eigenfunctions.hpp"

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

// |w| below this fraction of |(w, w^[1])| at an end counts as a zero there;
// it sits well above the angle error of a solve at default tolerances.
constexpr double endpoint_angle_tol = 1e-6;

// Phase so that w(a) is real positive, or w^[1](a) if w(a) vanishes.
Eigen::Vector2cd fix_phase(Eigen::Vector2cd v)
{
    const int k = std::abs(v(0)) > 1e-12 * v.norm() ? 0 : 1;
    v *= std::conj(v(k)) / std::abs(v(k));
    v(k) = std::abs(v(k));
    return v;
}

double part_of(cplx z, Part p)
{
    return p == Part::re ? z.real() : z.imag();
}

struct Sample {
    double x, g, g1;
};

std::vector<Sample> samples(const Eigenfunction &ef, Part p, int nsub)
{
    std::vector<Sample> out;
    const auto &steps = ef.phi->trajectory.steps();
    for (const auto &st : steps) {
        const double l = st.lo(), u = st.hi();
        for (int k = out.empty() ? 0 : 1; k <= nsub; ++k) {
            const double x = k == nsub ? u : l + (u - l) * k / nsub;
            const auto c = st.eval(x);
            const cplx w = c[0] * ef.v(0) + c[2] * ef.v(1);
            const cplx w1 = c[1] * ef.v(0) + c[3] * ef.v(1);
            out.push_back({x, part_of(w, p), part_of(w1, p)});
        }
    }
    return out;
}

double eval_part(const Eigenfunction &ef, double x, Part p)
{
    return part_of(ef(x).first, p);
}

struct ZeroScan {
    std::vector<double> interior;
    bool at_a = false, at_b = false;
    int angle_open = 0;
};

ZeroScan scan_zeros(const Eigenfunction &ef, Part p, int nsub)
{
    const auto s = samples(ef, p, nsub);
    double gmax = 0.0;
    for (const auto &q : s) {
        gmax = std::max(gmax, std::abs(q.g));
    }
    if (!(gmax > 1e-13)) {
        throw ConsistencyError("count_zeros: function vanishes on the sampled grid");
    }
    ZeroScan z;
    auto is_zero_angle = [](const Sample &q) {
        return std::abs(q.g) <= endpoint_angle_tol * std::hypot(q.g, q.g1);
    };
    z.at_a = is_zero_angle(s.front());
    z.at_b = is_zero_angle(s.back());

    std::vector<double> sg(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        sg[i] = s[i].g;
    }
    // endpoint zeros take the sign of the adjacent interior sample
    if (z.at_a) sg.front() = 0.0;
    if (z.at_b) sg.back() = 0.0;
    std::size_t first = 0;
    while (first < sg.size() && sg[first] == 0.0) ++first;
    for (std::size_t i = first + 1; i < sg.size(); ++i) {
        if (sg[i] == 0.0) {
            continue;
        }
        // previous nonzero sample
        std::size_t j = i - 1;
        while (sg[j] == 0.0) --j;
        if ((sg[i] > 0.0) != (sg[j] > 0.0)) {
            double lo = s[j].x, hi = s[i].x, flo = sg[j];
            while (hi - lo > 1e-12 * std::max(1.0, std::abs(lo))) {
                const double m = 0.5 * (lo + hi);
                const double fm = eval_part(ef, m, p);
                if ((fm > 0.0) == (flo > 0.0)) {
                    lo = m;
                    flo = fm;
                } else {
                    hi = m;
                }
            }
            z.interior.push_back(0.5 * (lo + hi));
        }
    }

    // angle cross-check
    double th = std::atan2(s.front().g, s.front().g1);
    const double th_a = th;
    for (std::size_t i = 1; i < s.size(); ++i) {
        const double prev = std::atan2(s[i - 1].g, s[i - 1].g1);
        const double cur = std::atan2(s[i].g, s[i].g1);
        th += std::remainder(cur - prev, 2.0 * pi);
    }
    const double u = (th_a + endpoint_angle_tol) / pi, v = (th - endpoint_angle_tol) / pi;
    z.angle_open = v > u ? static_cast<int>(std::ceil(v) - std::floor(u)) - 1 : 0;
    return z;
}

ZeroScan checked_scan(const Eigenfunction &ef, Part p)
{
    for (int nsub : {8, 32, 128}) {
        auto z = scan_zeros(ef, p, nsub);
        if (static_cast<int>(z.interior.size()) == z.angle_open) {
            return z;
        }
    }
    throw ConsistencyError("zero count from sign changes disagrees with the angle count");
}

} // namespace

std::pair<cplx, cplx> Eigenfunction::operator()(double x) const
{
    const auto c = phi->trajectory(x);
    return {c[0] * v(0) + c[2] * v(1), c[1] * v(0) + c[3] * v(1)};
}

std::vector<Eigenfunction> reconstruct(const EigenRecord &record, const CoefficientSet &coeffs,
                                       const SolverOptions &opt)
{
    SolverOptions fine = opt;
    fine.rel_tol = std::min(opt.rel_tol, 1e-12);
    fine.abs_tol = std::min(opt.abs_tol, 1e-14);
    auto fm = std::make_shared<FundamentalMatrix<double>>(fundamental_matrix<double>(coeffs, record.lambda, fine, true));
    const auto &r = coeffs.r();
    const Eigen::Matrix2d G = fm->trajectory.integrate([&](double x, const std::array<double, 4> &c) {
        Eigen::Matrix2d m;
        m << c[0] * c[0], c[0] * c[2], c[0] * c[2], c[2] * c[2];
        return Eigen::Matrix2d(m * r(x));
    });
    const auto &bc = record.bc;

    Eigen::MatrixXcd basis;
    if (bc.is_separated()) {
        basis = Eigen::Vector2cd(std::sin(bc.alpha()), std::cos(bc.alpha()));
    } else {
        const Eigen::Matrix2cd M =
            std::exp(cplx(0.0, bc.gamma())) * bc.K().cast<cplx>() - fm->at_b.cast<cplx>();
        Eigen::JacobiSVD<Eigen::Matrix2cd> svd(M, Eigen::ComputeFullV);
        const auto sv = svd.singularValues();
        const double scale = 1.0 + bc.K().norm() + fm->at_b.norm();
        const int dim = (sv(0) <= 1e-6 * scale) ? 2 : (sv(1) <= 1e-6 * scale ? 1 : 0);
        if (dim != record.multiplicity) {
            throw ConsistencyError(fmt::format("kernel dimension {} at lambda = {} but multiplicity {} (sv {}, {})",
                                               dim, record.lambda, record.multiplicity, sv(0), sv(1)));
        }
        basis = dim == 2 ? Eigen::MatrixXcd(Eigen::Matrix2cd::Identity()) : Eigen::MatrixXcd(svd.matrixV().col(1));
    }

    // orthonormalize in the r-weighted inner product
    const Eigen::MatrixXcd gram = basis.adjoint() * G.cast<cplx>() * basis;
    const Eigen::LLT<Eigen::MatrixXcd> llt(gram);
    const Eigen::MatrixXcd Linv = llt.matrixL().solve(Eigen::MatrixXcd::Identity(gram.rows(), gram.cols()));
    const Eigen::MatrixXcd ortho = basis * Linv.adjoint();

    std::vector<Eigenfunction> out;
    for (Eigen::Index k = 0; k < ortho.cols(); ++k) {
        Eigenfunction ef;
        ef.record = record;
        ef.phi = fm;
        ef.a = coeffs.a();
        ef.b = coeffs.b();
        ef.v = fix_phase(ortho.col(k));
        ef.real = bc.kind() != BcKind::ComplexCoupled;
        if (ef.real) {
            ef.v = ef.v.real().cast<cplx>();
        }
        ef.norm = (ef.v.adjoint() * G.cast<cplx>() * ef.v)(0, 0).real();
        const Eigen::Vector2cd yb = fm->at_b.cast<cplx>() * ef.v;
        if (bc.is_separated()) {
            ef.bc_residual = std::max(std::abs(std::cos(bc.alpha()) * ef.v(0) - std::sin(bc.alpha()) * ef.v(1)),
                                      std::abs(std::cos(bc.beta()) * yb(0) - std::sin(bc.beta()) * yb(1)));
        } else {
            ef.bc_residual = (yb - std::exp(cplx(0.0, bc.gamma())) * bc.K().cast<cplx>() * ef.v).norm();
        }
        ef.zero_count_half_open = count_zeros(ef, true);
        ef.zero_count_open = count_zeros(ef, false);
        out.push_back(std::move(ef));
    }
    return out;
}

std::vector<Eigenfunction> reconstruct_all(const std::vector<EigenRecord> &records, const CoefficientSet &coeffs,
                                           const SolverOptions &opt)
{
    std::vector<Eigenfunction> out;
    for (std::size_t i = 0; i < records.size(); ++i) {
        auto efs = reconstruct(records[i], coeffs, opt);
        const bool paired = records[i].multiplicity == 2 && i + 1 < records.size() &&
                            records[i + 1].multiplicity == 2 && records[i + 1].lambda == records[i].lambda;
        out.push_back(efs[0]);
        if (paired && efs.size() == 2) {
            efs[1].record = records[i + 1];
            out.push_back(efs[1]);
            ++i;
        }
    }
    return out;
}

std::vector<double> zeros(const Eigenfunction &ef, Part part)
{
    const auto z = checked_scan(ef, part);
    std::vector<double> out;
    if (z.at_a) out.push_back(ef.a);
    out.insert(out.end(), z.interior.begin(), z.interior.end());
    if (z.at_b) out.push_back(ef.b);
    return out;
}

int count_zeros(const Eigenfunction &ef, bool half_open, Part part)
{
    const auto z = checked_scan(ef, part);
    return static_cast<int>(z.interior.size()) + (half_open && z.at_a ? 1 : 0);
}

double min_modulus(const Eigenfunction &ef)
{
    double m = std::numeric_limits<double>::infinity();
    for (const auto &st : ef.phi->trajectory.steps()) {
        for (int k = 0; k <= 8; ++k) {
            const double x = st.lo() + (st.hi() - st.lo()) * k / 8;
            const auto c = st.eval(x);
            m = std::min(m, std::abs(c[0] * ef.v(0) + c[2] * ef.v(1)));
        }
    }
    return m;
}

cplx inner_product(const Eigenfunction &e1, const Eigenfunction &e2, const CoefficientSet &coeffs)
{
    const auto &r = coeffs.r();
    return e1.phi->trajectory.integrate([&](double x, const std::array<double, 4> &c) {
        const cplx w1 = c[0] * e1.v(0) + c[2] * e1.v(1);
        const cplx w2 = e2(x).first;
        return r(x) * w1 * std::conj(w2);
    });
}

bool OscillationReport::ok() const
{
    return std::all_of(items.begin(), items.end(), [](const CheckItem &c) { return c.pass; });
}

OscillationReport check_oscillation(const BoundaryCondition &bc, const std::vector<Eigenfunction> &efs)
{
    OscillationReport rep;
    auto add = [&](std::string label, bool pass, std::string detail) {
        rep.items.push_back({std::move(label), pass, std::move(detail)});
    };
    auto window = [](int n, int z) { return n == 0 ? (z == 0 || z == 1) : (z >= n - 1 && z <= n + 1); };

    for (const auto &ef : efs) {
        const int n = ef.record.n;
        if (bc.is_separated()) {
            const int z = count_zeros(ef, false);
            add(fmt::format("separated n={}: zeros in (a,b) equal n", n), z == n, fmt::format("zeros={}", z));
        } else if (bc.kind() == BcKind::RealCoupled) {
            const int z = count_zeros(ef, true);
            add(fmt::format("real coupled n={}: zeros in [a,b) within n-1..n+1", n), window(n, z),
                fmt::format("zeros={}", z));
            const auto &K = bc.K();
            if (std::abs(K(0, 1)) <= 1e-12) {
                if (K(0, 0) > 0.0) {
                    if (n == 0) {
                        const auto zs = zeros(ef);
                        add("k12=0, k11>0, n=0: no zeros in [a,b]", zs.empty(), fmt::format("zeros={}", zs.size()));
                    } else {
                        const int m2 = 2 * ((n - 1) / 2) + 2;
                        add(fmt::format("k12=0, k11>0, n={}: exactly {} zeros in [a,b)", n, m2), z == m2,
                            fmt::format("zeros={}", z));
                    }
                } else {
                    const int m1 = 2 * (n / 2) + 1;
                    add(fmt::format("k12=0, k11<0, n={}: exactly {} zeros in [a,b)", n, m1), z == m1,
                        fmt::format("zeros={}", z));
                }
            }
        } else {
            const int zr = count_zeros(ef, true, Part::re);
            const int zi = count_zeros(ef, true, Part::im);
            add(fmt::format("complex coupled n={}: zeros of Re in [a,b) within n-1..n+1", n), window(n, zr),
                fmt::format("zeros={}", zr));
            add(fmt::format("complex coupled n={}: zeros of Im in [a,b) within n-1..n+1", n), window(n, zi),
                fmt::format("zeros={}", zi));
            const double mm = min_modulus(ef);
            add(fmt::format("complex coupled n={}: |psi| > 0 on [a,b]", n), mm > 1e-8, fmt::format("min={:.3e}", mm));
        }
        // simple zeros: the quasi-derivative does not vanish at any zero
        if (ef.real) {
            double w1max = 0.0;
            for (const auto &st : ef.phi->trajectory.steps()) {
                const auto c = st.eval(st.lo());
                w1max = std::max(w1max, std::abs(c[1] * ef.v(0) + c[3] * ef.v(1)));
            }
            bool simple = true;
            for (double x : zeros(ef)) {
                simple = simple && std::abs(ef(x).second) > 1e-10 * w1max;
            }
            add(fmt::format("n={}: zeros are simple", n), simple, "");
        }
    }
    return rep;
}

void write_samples_csv(std::ostream &os, const Eigenfunction &ef, int points)
{
    os << "x,re_w,im_w,re_w1,im_w1\n";
    points = std::max(points, 2);
    for (int i = 0; i < points; ++i) {
        const double x = i == points - 1 ? ef.b : ef.a + (ef.b - ef.a) * i / (points - 1);
        const auto [w, w1] = ef(x);
        os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", x, w.real(), w.imag(), w1.real(), w1.imag());
    }
}

} // namespace slq
