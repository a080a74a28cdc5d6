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
#include "slq/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <fmt/format.h>
#include "json.hpp"

#include "slq/error.hpp"

namespace slq
{

namespace
{

using json = nlohmann::json;

[[noreturn]] void fail(const std::string &path, const std::string &msg)
{
    throw ConfigError(fmt::format("{}: {}", path, msg));
}

const json *find(const json &j, const std::string &key)
{
    const auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

double get_number(const json &j, const std::string &path)
{
    if (!j.is_number()) {
        fail(path, "expected a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        fail(path, "must be finite");
    }
    return v;
}

int get_int(const json &j, const std::string &path)
{
    if (!j.is_number_integer()) {
        fail(path, "expected an integer");
    }
    return j.get<int>();
}

double number_or(const json &obj, const std::string &key, const std::string &path, double def)
{
    const json *v = find(obj, key);
    return v ? get_number(*v, path + "." + key) : def;
}

int int_or(const json &obj, const std::string &key, const std::string &path, int def)
{
    const json *v = find(obj, key);
    return v ? get_int(*v, path + "." + key) : def;
}

std::string string_or(const json &obj, const std::string &key, const std::string &path, std::string def)
{
    const json *v = find(obj, key);
    if (!v) {
        return def;
    }
    if (!v->is_string()) {
        fail(path + "." + key, "expected a string");
    }
    return v->get<std::string>();
}

void require_object(const json &j, const std::string &path)
{
    if (!j.is_object()) {
        fail(path, "expected an object");
    }
}

Eigen::Matrix2d get_matrix(const json &j, const std::string &path)
{
    if (!j.is_array() || j.size() != 2) {
        fail(path, "expected a 2x2 matrix [[a, b], [c, d]]");
    }
    Eigen::Matrix2d m;
    for (int i = 0; i < 2; ++i) {
        const auto &row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || row.size() != 2) {
            fail(fmt::format("{}[{}]", path, i), "expected a row of two numbers");
        }
        for (int k = 0; k < 2; ++k) {
            m(i, k) = get_number(row[static_cast<std::size_t>(k)], fmt::format("{}[{}][{}]", path, i, k));
        }
    }
    return m;
}

PiecewiseFn parse_function(const json &j, const std::string &path, double a, double b)
{
    if (!j.is_array() || j.empty()) {
        fail(path, "expected a non-empty list of {from, to, poly} records");
    }
    std::vector<double> bp{a};
    std::vector<Polynomial> pieces;
    const double tol = 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = fmt::format("{}[{}]", path, i);
        require_object(j[i], p);
        const json *from = find(j[i], "from");
        const json *to = find(j[i], "to");
        const json *poly = find(j[i], "poly");
        if (!from || !to || !poly) {
            fail(p, "record needs from, to and poly");
        }
        const double x0 = get_number(*from, p + ".from");
        const double x1 = get_number(*to, p + ".to");
        if (std::abs(x0 - bp.back()) > tol) {
            fail(p + ".from", fmt::format("expected {} (records must tile [a, b] in order)", bp.back()));
        }
        if (!(x1 > bp.back())) {
            fail(p + ".to", "must exceed from");
        }
        if (!poly->is_array() || poly->empty() || poly->size() > 4) {
            fail(p + ".poly", "expected 1 to 4 coefficients (degree <= 3)");
        }
        std::vector<double> c;
        for (std::size_t k = 0; k < poly->size(); ++k) {
            c.push_back(get_number((*poly)[k], fmt::format("{}.poly[{}]", p, k)));
        }
        bp.push_back(x1);
        pieces.emplace_back(std::move(c));
    }
    if (std::abs(bp.back() - b) > tol) {
        fail(path, fmt::format("records end at {}, expected {}", bp.back(), b));
    }
    bp.back() = b;
    return PiecewiseFn::from_global(std::move(bp), pieces);
}

BoundaryCondition parse_bc(const json &j, const std::string &path)
{
    require_object(j, path);
    const std::string type = string_or(j, "type", path, "");
    auto need = [&](const char *key) -> const json & {
        const json *v = find(j, key);
        if (!v) {
            fail(path, fmt::format("type {} needs field {}", type, key));
        }
        return *v;
    };
    constexpr double pi = std::numbers::pi;
    try {
        if (type == "dirichlet") {
            return BoundaryCondition::dirichlet();
        }
        if (type == "neumann") {
            return BoundaryCondition::separated(pi / 2, pi / 2);
        }
        if (type == "separated") {
            return BoundaryCondition::separated(get_number(need("alpha"), path + ".alpha"),
                                                get_number(need("beta"), path + ".beta"));
        }
        if (type == "periodic") {
            return BoundaryCondition::real_coupled(Eigen::Matrix2d::Identity());
        }
        if (type == "semi_periodic") {
            return BoundaryCondition::real_coupled(-Eigen::Matrix2d::Identity());
        }
        if (type == "real_coupled") {
            return BoundaryCondition::real_coupled(get_matrix(need("K"), path + ".K"));
        }
        if (type == "complex_coupled") {
            const json *K = find(j, "K");
            return BoundaryCondition::complex_coupled(get_number(need("gamma"), path + ".gamma"),
                                                      K ? get_matrix(*K, path + ".K") : Eigen::Matrix2d::Identity());
        }
        if (type == "matrices") {
            Eigen::Matrix2cd A = get_matrix(need("A"), path + ".A").cast<cplx>();
            Eigen::Matrix2cd B = get_matrix(need("B"), path + ".B").cast<cplx>();
            if (const json *ai = find(j, "A_im")) {
                A += cplx(0.0, 1.0) * get_matrix(*ai, path + ".A_im").cast<cplx>();
            }
            if (const json *bi = find(j, "B_im")) {
                B += cplx(0.0, 1.0) * get_matrix(*bi, path + ".B_im").cast<cplx>();
            }
            return BoundaryCondition::from_matrices(A, B);
        }
    } catch (const ConfigError &) {
        throw;
    } catch (const Error &e) {
        fail(path, e.what());
    }
    fail(path + ".type", fmt::format("unknown boundary condition type '{}'", type));
}

std::vector<double> number_list(const json &j, const std::string &path)
{
    if (!j.is_array() || j.empty()) {
        fail(path, "expected a non-empty list of numbers");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(get_number(j[i], fmt::format("{}[{}]", path, i)));
    }
    return out;
}

} // namespace

ProblemConfig parse_config(const std::string &text)
{
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error &e) {
        const auto upto = text.substr(0, std::min<std::size_t>(e.byte, text.size()));
        const auto line = 1 + std::count(upto.begin(), upto.end(), '\n');
        throw ConfigError(fmt::format("line {}: {}", line, e.what()));
    }
    require_object(root, "$");

    ProblemConfig cfg;
    const json *iv = find(root, "interval");
    if (!iv || !iv->is_array() || iv->size() != 2) {
        fail("$.interval", "expected [a, b]");
    }
    const double a = get_number((*iv)[0], "$.interval[0]");
    const double b = get_number((*iv)[1], "$.interval[1]");
    if (!(a < b)) {
        fail("$.interval", "need a < b");
    }

    PiecewiseFn inv_p = PiecewiseFn::constant(a, b, 1.0), q = PiecewiseFn::constant(a, b, 0.0),
                r = PiecewiseFn::constant(a, b, 1.0), s = PiecewiseFn::constant(a, b, 0.0);
    if (const json *co = find(root, "coefficients")) {
        require_object(*co, "$.coefficients");
        for (auto it = co->begin(); it != co->end(); ++it) {
            const std::string p = "$.coefficients." + it.key();
            PiecewiseFn f = parse_function(it.value(), p, a, b);
            if (it.key() == "inv_p") {
                inv_p = std::move(f);
            } else if (it.key() == "q") {
                q = std::move(f);
            } else if (it.key() == "r") {
                r = std::move(f);
            } else if (it.key() == "s") {
                s = std::move(f);
            } else {
                fail(p, "unknown coefficient (expected inv_p, q, r or s)");
            }
        }
    }
    std::vector<PointInteraction> pts;
    if (const json *in = find(root, "interactions")) {
        if (!in->is_array()) {
            fail("$.interactions", "expected a list");
        }
        for (std::size_t i = 0; i < in->size(); ++i) {
            const std::string p = fmt::format("$.interactions[{}]", i);
            require_object((*in)[i], p);
            const json *at = find((*in)[i], "at");
            const json *st = find((*in)[i], "strength");
            if (!at || !st) {
                fail(p, "needs at and strength");
            }
            pts.push_back({get_number(*at, p + ".at"), get_number(*st, p + ".strength")});
        }
    }
    try {
        cfg.coeffs = CoefficientSet(std::move(inv_p), std::move(q), std::move(r), std::move(s), std::move(pts));
    } catch (const DomainError &e) {
        fail("$.coefficients", e.what());
    }

    const json *bc = find(root, "bc");
    if (!bc) {
        fail("$.bc", "missing boundary condition");
    }
    cfg.bc = parse_bc(*bc, "$.bc");

    if (const json *so = find(root, "solver")) {
        require_object(*so, "$.solver");
        cfg.solver.rel_tol = number_or(*so, "rel_tol", "$.solver", cfg.solver.rel_tol);
        cfg.solver.abs_tol = number_or(*so, "abs_tol", "$.solver", cfg.solver.abs_tol);
        cfg.solver.lambda_scan = number_or(*so, "lambda_scan", "$.solver", cfg.solver.lambda_scan);
        cfg.n_max = int_or(*so, "n_max", "$.solver", cfg.n_max);
        if (!(cfg.solver.rel_tol > 0.0) || !(cfg.solver.abs_tol > 0.0)) {
            fail("$.solver", "tolerances must be positive");
        }
        if (!(cfg.solver.lambda_scan > 0.0)) {
            fail("$.solver.lambda_scan", "must be positive");
        }
        if (cfg.n_max < 0) {
            fail("$.solver.n_max", "must be >= 0");
        }
    }

    if (const json *tr = find(root, "transmission")) {
        require_object(*tr, "$.transmission");
        TransmissionConfig tc;
        tc.method = string_or(*tr, "method", "$.transmission", tc.method);
        if (tc.method != "reduction" && tc.method != "direct") {
            fail("$.transmission.method", "expected reduction or direct");
        }
        if (const json *itf = find(*tr, "interfaces")) {
            if (!itf->is_array()) {
                fail("$.transmission.interfaces", "expected a list");
            }
            for (std::size_t i = 0; i < itf->size(); ++i) {
                const std::string p = fmt::format("$.transmission.interfaces[{}]", i);
                require_object((*itf)[i], p);
                const json *c = find((*itf)[i], "c");
                if (!c) {
                    fail(p, "needs c");
                }
                const double cv = get_number(*c, p + ".c");
                if (!(cv > a && cv < b)) {
                    fail(p + ".c", "must lie strictly inside the interval");
                }
                tc.interfaces.push_back({cv, number_or((*itf)[i], "alpha", p, 0.0)});
            }
        }
        if (!cfg.coeffs.interactions().empty()) {
            fail("$.transmission", "cannot be combined with $.interactions");
        }
        if (cfg.coeffs.s().max_abs() != 0.0) {
            fail("$.transmission", "requires s = 0");
        }
        cfg.transmission = std::move(tc);
    }

    if (const json *sc = find(root, "scan")) {
        require_object(*sc, "$.scan");
        auto &s = cfg.scan;
        s.kind = string_or(*sc, "kind", "$.scan", s.kind);
        if (s.kind != "alpha_beta_grid" && s.kind != "gamma_sweep" && s.kind != "region_approach") {
            fail("$.scan.kind", "expected alpha_beta_grid, gamma_sweep or region_approach");
        }
        s.n = int_or(*sc, "n", "$.scan", s.n);
        if (const json *g = find(*sc, "grid")) {
            if (!g->is_array() || g->size() != 2) {
                fail("$.scan.grid", "expected [n_alpha, n_beta]");
            }
            s.grid_alpha = get_int((*g)[0], "$.scan.grid[0]");
            s.grid_beta = get_int((*g)[1], "$.scan.grid[1]");
        }
        s.gamma_points = int_or(*sc, "gamma_points", "$.scan", s.gamma_points);
        s.region = string_or(*sc, "region", "$.scan", s.region);
        s.t0 = number_or(*sc, "t0", "$.scan", s.t0);
        s.k_max = int_or(*sc, "k_max", "$.scan", s.k_max);
        if (s.n < 0 || s.grid_alpha < 1 || s.grid_beta < 1 || s.gamma_points < 1) {
            fail("$.scan", "counts must be positive");
        }
    }

    if (const json *ve = find(root, "verify")) {
        require_object(*ve, "$.verify");
        auto &v = cfg.verify;
        if (const json *g = find(*ve, "gammas")) {
            v.gammas = number_list(*g, "$.verify.gammas");
        }
        v.n = int_or(*ve, "n", "$.verify", v.n);
        if (const json *e = find(*ve, "eps")) {
            v.eps = number_list(*e, "$.verify.eps");
        }
        v.derivative_tol = number_or(*ve, "derivative_tol", "$.verify", v.derivative_tol);
        if (find(*ve, "mollify_tol")) {
            v.mollify_tol = number_or(*ve, "mollify_tol", "$.verify", 0.0);
            if (!(*v.mollify_tol > 0.0)) {
                fail("$.verify.mollify_tol", "must be positive");
            }
        }
        v.seed = static_cast<unsigned>(int_or(*ve, "seed", "$.verify", static_cast<int>(v.seed)));
        if (const json *m = find(*ve, "ms")) {
            v.ms.clear();
            for (double x : number_list(*m, "$.verify.ms")) {
                if (x < 1 || x != std::floor(x)) {
                    fail("$.verify.ms", "entries must be positive integers");
                }
                v.ms.push_back(static_cast<int>(x));
            }
        }
        if (const json *r = find(*ve, "regions")) {
            if (!r->is_array()) {
                fail("$.verify.regions", "expected a list of region names");
            }
            for (std::size_t i = 0; i < r->size(); ++i) {
                if (!(*r)[i].is_string()) {
                    fail(fmt::format("$.verify.regions[{}]", i), "expected a string");
                }
                v.regions.push_back((*r)[i].get<std::string>());
            }
        }
    }
    return cfg;
}

ProblemConfig load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(fmt::format("{}: cannot open", path));
    }
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str());
    } catch (const ConfigError &e) {
        throw ConfigError(fmt::format("{}: {}", path, e.what()));
    }
}

CoefficientSet effective_coefficients(const ProblemConfig &cfg)
{
    if (!cfg.transmission) {
        return cfg.coeffs;
    }
    return direct_coefficients(TransmissionProblem{cfg.coeffs, cfg.transmission->interfaces, cfg.bc});
}

} // namespace slq
