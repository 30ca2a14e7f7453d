/**
 * @file cli.cpp
 * @brief Subcommand dispatch, flag validation and JSON rendering for the steff2d tool.
 */
#include "steff2d/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "steff2d/copula.hpp"
#include "steff2d/discrete.hpp"
#include "steff2d/ineq.hpp"
#include "steff2d/monotone.hpp"
#include "steff2d/quad.hpp"

namespace steff2d::cli {

using nlohmann::json;

namespace {

/// Raised for malformed flag values; maps to the usage exit code.
class UsageError : public Error {
public:
    using Error::Error;
};

struct RunConfig {
    std::string f, w, h, phi, gdensity, g1 = "0", g2 = "0", kernel, rect, breaks, eval, at, a, u;
    std::string expect, output;
    double tol = std::nan("");
    double quad_tol = 1e-8;
    double margin = std::nan("");
    double g0 = 0.0;
    double inner_margin = 0.3;
    int grid = 32, partition = 16, p = 5, q = 7, trials = 100, m = 1, n = 1, points = 8, cells = 2;
    int lattice = 8;
    std::size_t max_partition = 4096;
    unsigned long long seed = 42;
};

// ------------------------------------------------------------------ flag parsing

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    int depth = 0;
    for (char ch : s) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (ch == sep && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    return parts;
}

double constant_expr(const std::string& src, const char* what) {
    const expr::Expr e = expr::parse(src);
    if (e.depends_on(expr::Var::X) || e.depends_on(expr::Var::Y))
        throw UsageError(std::string(what) + " must be a constant expression, got '" + src + "'");
    const double v = expr::eval(e, 0.0, 0.0);
    if (!std::isfinite(v)) throw UsageError(std::string(what) + " is not finite: '" + src + "'");
    return v;
}

Rect parse_rect(const std::string& s) {
    const auto parts = split(s, ',');
    if (parts.size() != 4) throw UsageError("--rect expects a,b,c,d");
    try {
        return Rect::make(constant_expr(parts[0], "rect a"), constant_expr(parts[1], "rect b"),
                          constant_expr(parts[2], "rect c"), constant_expr(parts[3], "rect d"));
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
}

Point parse_point(const std::string& s, const char* flag) {
    const auto parts = split(s, ',');
    if (parts.size() != 2) throw UsageError(std::string(flag) + " expects x,y");
    return {constant_expr(parts[0], flag), constant_expr(parts[1], flag)};
}

/// "x:1,2,y:0.5" -> breakpoints per axis.
std::pair<std::vector<double>, std::vector<double>> parse_breaks(const std::string& s) {
    std::vector<double> xs, ys;
    std::vector<double>* target = nullptr;
    for (std::string tok : split(s, ',')) {
        if (tok.rfind("x:", 0) == 0) {
            target = &xs;
            tok = tok.substr(2);
        } else if (tok.rfind("y:", 0) == 0) {
            target = &ys;
            tok = tok.substr(2);
        }
        if (!target) throw UsageError("--breaks entries must start with x: or y:");
        if (!tok.empty()) target->push_back(constant_expr(tok, "breakpoint"));
    }
    return {xs, ys};
}

discrete::DoubleSequence parse_matrix(const std::string& src, const char* flag) {
    std::vector<std::vector<double>> rows;
    if (!src.empty() && src.front() == '[') {
        try {
            rows = json::parse(src).get<std::vector<std::vector<double>>>();
        } catch (const json::exception& e) {
            throw UsageError(std::string(flag) + ": invalid JSON matrix: " + e.what());
        }
    } else {
        std::ifstream in(src);
        if (!in) throw UsageError(std::string(flag) + ": cannot open '" + src + "'");
        std::string line;
        while (std::getline(in, line)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            std::vector<double> row;
            for (const auto& cell : split(line, ',')) {
                try {
                    std::size_t used = 0;
                    row.push_back(std::stod(cell, &used));
                } catch (const std::exception&) {
                    throw UsageError(std::string(flag) + ": bad CSV value '" + cell + "'");
                }
            }
            rows.push_back(std::move(row));
        }
    }
    try {
        return discrete::DoubleSequence::from_rows(rows);
    } catch (const InvalidArgument& e) {
        throw UsageError(std::string(flag) + ": " + e.what());
    }
}

BivariateFn parse_fn(const std::string& src, const char* flag) {
    if (src.empty()) throw UsageError(std::string(flag) + " is required");
    return BivariateFn::parse(src);
}

quad::QuadratureSpec quadrature(const RunConfig& cfg) {
    quad::QuadratureSpec spec;
    spec.tolerance = cfg.quad_tol;
    spec.points = cfg.points;
    spec.cells = cfg.cells;
    try {
        spec.validate();
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
    return spec;
}

double tol_or(const RunConfig& cfg, double fallback) { return std::isnan(cfg.tol) ? fallback : cfg.tol; }

// ------------------------------------------------------------------ JSON rendering

json to_json(const Rect& r) { return json{r.a, r.b, r.c, r.d}; }

json to_json(const IdentityResidual& r) {
    return {{"lhs", r.lhs},
            {"rhs", r.rhs},
            {"abs_residual", r.abs_residual},
            {"rel_residual", r.rel_residual},
            {"tolerance", r.tolerance},
            {"pass", r.pass}};
}

json to_json(const monotone::MonotonicityReport& r) {
    const auto& e = r.edges;
    return {{"verdict", std::string(monotone::to_string(r.verdict))},
            {"min_cell_measure", r.min_cell_measure},
            {"max_cell_measure", r.max_cell_measure},
            {"min_witness", to_json(r.min_witness)},
            {"max_witness", to_json(r.max_witness)},
            {"grid", r.grid},
            {"tolerance", r.tolerance},
            {"lattice", to_json(r.lattice)},
            {"edges",
             {{"top_decreasing", e.top_decreasing},
              {"top_increasing", e.top_increasing},
              {"right_decreasing", e.right_decreasing},
              {"right_increasing", e.right_increasing},
              {"bottom_decreasing", e.bottom_decreasing},
              {"bottom_increasing", e.bottom_increasing},
              {"left_decreasing", e.left_decreasing},
              {"left_increasing", e.left_increasing},
              {"x_decreasing", e.x_decreasing},
              {"x_increasing", e.x_increasing},
              {"y_decreasing", e.y_decreasing},
              {"y_increasing", e.y_increasing}}},
            {"monotone_increasing", r.monotone_increasing()},
            {"monotone_decreasing", r.monotone_decreasing()},
            {"nonnegative", r.nonnegative},
            {"min_value", r.min_value}};
}

json to_json(const ineq::YoungTerms& t) {
    return {{"corner", t.corner}, {"edge_x", t.edge_x}, {"edge_y", t.edge_y}, {"interior", t.interior}};
}

json index_json(const std::optional<discrete::Index>& idx) {
    if (!idx) return nullptr;
    return json{idx->first, idx->second};
}

json to_json(const discrete::SteffensenReport& r) {
    return {{"nonneg_a", r.nonneg_a},
            {"nonneg_delta", r.nonneg_delta},
            {"nonneg_partial_sums", r.nonneg_partial_sums},
            {"first_negative_a", index_json(r.first_negative_a)},
            {"first_negative_delta", index_json(r.first_negative_delta)},
            {"first_negative_partial_sum", index_json(r.first_negative_partial_sum)},
            {"sum", r.sum},
            {"tolerance", r.tolerance},
            {"conclusion_holds", r.conclusion_holds}};
}

// ------------------------------------------------------------------ commands

struct Outcome {
    json result = json::object();
    bool pass = false;
    std::vector<std::string> diagnostics;
};

Outcome cmd_certify(const RunConfig& cfg) {
    const BivariateFn f = parse_fn(cfg.f, "--f");
    const Rect r = parse_rect(cfg.rect);
    monotone::CertifyOptions opts;
    opts.tolerance = tol_or(cfg, 1e-9);
    if (!std::isnan(cfg.margin)) opts.margin = cfg.margin;
    if (cfg.grid < 2) throw UsageError("--grid must be >= 2");
    const auto rep = monotone::certify(f, r, cfg.grid, opts);
    Outcome o;
    o.result = to_json(rep);
    const std::string verdict(monotone::to_string(rep.verdict));
    if (!cfg.expect.empty()) {
        o.pass = verdict == cfg.expect;
        if (!o.pass) o.diagnostics.push_back("expected " + cfg.expect + ", got " + verdict);
    } else {
        o.pass = rep.verdict != monotone::Verdict::Indefinite;
        if (!o.pass) o.diagnostics.push_back("cell measures of both signs exceed the tolerance");
    }
    return o;
}

Outcome cmd_integrate(const RunConfig& cfg) {
    const BivariateFn f = parse_fn(cfg.f, "--f");
    const Rect r = parse_rect(cfg.rect);
    quad::QuadratureSpec spec = quadrature(cfg);
    if (!cfg.breaks.empty()) std::tie(spec.breaks_x, spec.breaks_y) = parse_breaks(cfg.breaks);
    const auto res = quad::integrate2d(f, r, spec);
    Outcome o;
    o.result = {{"value", res.value}, {"error_estimate", res.error_estimate}, {"cells", res.cells}};
    o.pass = true;
    return o;
}

Outcome cmd_stieltjes(const RunConfig& cfg) {
    const BivariateFn h = parse_fn(cfg.h, "--h");
    const BivariateFn f = parse_fn(cfg.f, "--f");
    const Rect r = parse_rect(cfg.rect);
    if (cfg.partition < 1) throw UsageError("--partition must be >= 1");
    quad::StieltjesOptions opts;
    opts.tolerance = tol_or(cfg, 1e-8);
    opts.max_partition = cfg.max_partition;
    const auto res = quad::stieltjes2d(h, f, r, static_cast<std::size_t>(cfg.partition), opts);
    Outcome o;
    o.result = {{"value", res.value},
                {"bound", res.bound},
                {"partition", res.partition},
                {"last_difference", res.last_difference},
                {"min_cell_measure", res.min_cell_measure},
                {"integrator_monotone", res.integrator_monotone},
                {"bound_holds", res.bound_holds}};
    if (!res.warning.empty()) o.diagnostics.push_back(res.warning);
    o.pass = !res.integrator_monotone || res.bound_holds;
    return o;
}

Outcome cmd_copula_validate(const RunConfig& cfg) {
    const BivariateFn c = parse_fn(cfg.f, "--f");
    if (cfg.grid < 1) throw UsageError("--grid must be >= 1");
    const auto rep = copula::validate_copula(c, cfg.grid, tol_or(cfg, 1e-9));
    Outcome o;
    o.result = {{"boundary_max_error", rep.boundary_max_error},
                {"boundary_witness", rep.boundary_witness},
                {"min_cell_measure", rep.min_cell_measure},
                {"min_cell_witness", to_json(rep.min_cell_witness)},
                {"grid", rep.grid},
                {"tolerance", rep.tolerance},
                {"pass", rep.pass}};
    o.pass = rep.pass;
    if (!rep.pass) o.diagnostics.push_back("worst boundary condition: " + rep.boundary_witness);
    return o;
}

Outcome cmd_copula_archimedean(const RunConfig& cfg) {
    if (cfg.phi.empty()) throw UsageError("--phi is required");
    std::optional<copula::Generator> gen;
    try {
        gen.emplace(copula::Generator::parse(cfg.phi));
    } catch (const InvalidArgument& e) {
        throw UsageError(std::string("invalid generator: ") + e.what());
    }
    const BivariateFn a = copula::archimedean(*gen);
    Outcome o;
    o.result["phi_at_zero"] = gen->strict() ? json("inf") : json(gen->at_zero());
    o.result["strict"] = gen->strict();
    o.pass = true;
    if (!cfg.eval.empty()) {
        const Point p = parse_point(cfg.eval, "--eval");
        if (p.x < 0.0 || p.x > 1.0 || p.y < 0.0 || p.y > 1.0)
            throw UsageError("--eval point must lie in [0,1]^2");
        o.result["point"] = json{p.x, p.y};
        o.result["value"] = a.checked(p.x, p.y);
    }
    if (cfg.grid >= 1) {
        const auto rep = copula::validate_copula(a, cfg.grid, tol_or(cfg, 1e-9));
        o.result["validation"] = {{"boundary_max_error", rep.boundary_max_error},
                                  {"min_cell_measure", rep.min_cell_measure},
                                  {"grid", rep.grid},
                                  {"pass", rep.pass}};
        o.pass = rep.pass;
    }
    return o;
}

Outcome cmd_hardy(const RunConfig& cfg) {
    Outcome o;
    const double tol = tol_or(cfg, 1e-12);
    if (!cfg.a.empty() || !cfg.u.empty()) {
        const auto a = parse_matrix(cfg.a, "--a");
        const auto u = parse_matrix(cfg.u, "--u");
        if (!a.same_shape(u)) throw UsageError("--a and --u must have the same dimensions");
        const auto res = discrete::hardy_residual(a, u, tol);
        o.result = to_json(res);
        o.pass = res.pass;
        return o;
    }
    if (cfg.p < 1 || cfg.q < 1 || cfg.trials < 1) throw UsageError("--p, --q, --trials must be >= 1");
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    double max_abs = 0.0, max_rel = 0.0;
    for (int t = 0; t < cfg.trials; ++t) {
        discrete::DoubleSequence a(cfg.p, cfg.q), u(cfg.p, cfg.q);
        for (int i = 1; i <= cfg.p; ++i)
            for (int j = 1; j <= cfg.q; ++j) {
                a(i, j) = coef(rng);
                u(i, j) = coef(rng);
            }
        const auto res = discrete::hardy_residual(a, u, tol);
        max_abs = std::max(max_abs, res.abs_residual);
        max_rel = std::max(max_rel, res.rel_residual);
    }
    o.result = {{"trials", cfg.trials},
                {"p", cfg.p},
                {"q", cfg.q},
                {"max_abs_residual", max_abs},
                {"max_rel_residual", max_rel},
                {"tolerance", tol}};
    o.pass = max_rel <= tol;
    return o;
}

Outcome cmd_steffensen(const RunConfig& cfg) {
    Outcome o;
    const double tol = tol_or(cfg, 1e-12);
    if (!cfg.a.empty() || !cfg.u.empty()) {
        const auto a = parse_matrix(cfg.a, "--a");
        const auto u = parse_matrix(cfg.u, "--u");
        if (!a.same_shape(u)) throw UsageError("--a and --u must have the same dimensions");
        const auto rep = discrete::steffensen_check(a, u, tol);
        o.result = to_json(rep);
        o.pass = rep.hypotheses_hold() && rep.conclusion_holds;
        if (!rep.hypotheses_hold()) o.diagnostics.push_back("hypotheses not satisfied");
        return o;
    }
    if (cfg.p < 1 || cfg.q < 1 || cfg.trials < 1) throw UsageError("--p, --q, --trials must be >= 1");
    std::mt19937_64 rng(cfg.seed);
    double min_sum = std::numeric_limits<double>::infinity();
    int violations = 0;
    for (int t = 0; t < cfg.trials; ++t) {
        const auto [a, u] = discrete::random_steffensen_pair(cfg.p, cfg.q, rng);
        const auto rep = discrete::steffensen_check(a, u, tol);
        min_sum = std::min(min_sum, rep.sum);
        if (rep.hypotheses_hold() && !rep.conclusion_holds) ++violations;
    }
    o.result = {{"trials", cfg.trials}, {"p", cfg.p}, {"q", cfg.q}, {"min_sum", min_sum},
                {"violations", violations}, {"tolerance", tol}};
    o.pass = violations == 0;
    return o;
}

Outcome cmd_young(const RunConfig& cfg, ineq::YoungVariant variant) {
    const BivariateFn f = parse_fn(cfg.f, "--f");
    const BivariateFn w = parse_fn(cfg.w, "--w");
    const Rect r = parse_rect(cfg.rect);
    const auto rep = ineq::young_residual(variant, f, w, r, quadrature(cfg), tol_or(cfg, 1e-6));
    Outcome o;
    o.result = to_json(rep.residual);
    o.result["terms"] = to_json(rep.terms);
    o.pass = rep.residual.pass;
    if (f.derivative_nondifferentiable())
        o.diagnostics.push_back("f contains floor/abs/min/max; partials hold almost everywhere only");
    return o;
}

Outcome cmd_theorem(const RunConfig& cfg, ineq::Theorem theorem) {
    const BivariateFn f = parse_fn(cfg.f, "--f");
    const BivariateFn w = parse_fn(cfg.w, "--w");
    Rect r = parse_rect(cfg.rect);
    if (!std::isnan(cfg.margin)) {
        try {
            r = r.shrink(cfg.margin);
        } catch (const InvalidArgument& e) {
            throw UsageError(e.what());
        }
    }
    if (cfg.grid < 2) throw UsageError("--grid must be >= 2");
    ineq::SteffensenOptions opts;
    opts.grid = cfg.grid;
    opts.tolerance = tol_or(cfg, 1e-6);
    const auto rep = ineq::steffensen_integral(theorem, f, w, r, quadrature(cfg), opts);
    Outcome o;
    o.result = {{"theorem", std::string(ineq::to_string(theorem))},
                {"rect", to_json(r)},
                {"lhs", rep.lhs},
                {"bound", rep.bound},
                {"tolerance", rep.tolerance},
                {"inequality_holds", rep.inequality_holds},
                {"hypotheses",
                 {{"monotonicity_ok", rep.monotonicity_ok},
                  {"edges_ok", rep.edges_ok},
                  {"primitive_ok", rep.primitive_ok},
                  {"primitive_min", rep.primitive_min},
                  {"primitive_max", rep.primitive_max},
                  {"f_nonnegative", rep.f_nonnegative},
                  {"certification", to_json(rep.certification)}}}};
    if (!rep.monotonicity_ok) o.diagnostics.push_back("monotonicity class of f not certified");
    if (!rep.edges_ok) o.diagnostics.push_back("edge monotonicity hypothesis fails");
    if (!rep.primitive_ok) o.diagnostics.push_back("sign hypothesis on the primitive of w fails");
    if (!rep.f_nonnegative) o.diagnostics.push_back("f takes negative values on the lattice");
    o.pass = rep.hypotheses_hold() && rep.inequality_holds;
    return o;
}

Outcome cmd_fourier(const RunConfig& cfg) {
    static const std::map<std::string, ineq::FourierKernel> kernels{
        {"sinsin2d", ineq::FourierKernel::SinSin2d},
        {"coscos2d", ineq::FourierKernel::CosCos2d},
        {"cos1d", ineq::FourierKernel::Cos1d},
        {"sin1d", ineq::FourierKernel::Sin1d}};
    const auto it = kernels.find(cfg.kernel);
    if (it == kernels.end()) throw UsageError("--kernel must be one of sinsin2d, coscos2d, cos1d, sin1d");
    if (cfg.f.empty()) throw UsageError("--f is required");
    if (cfg.m < 1 || cfg.n < 1) throw UsageError("--m and --n must be positive integers");
    const expr::Expr f = expr::parse(cfg.f);
    const auto rep = ineq::fourier_check(it->second, f, cfg.m, cfg.n, quadrature(cfg), tol_or(cfg, 1e-8));
    Outcome o;
    o.result = {{"kernel", cfg.kernel},
                {"value", rep.value},
                {"expected_sign",
                 rep.expected_sign == ineq::ExpectedSign::Nonnegative ? "nonnegative" : "unconstrained"},
                {"hypotheses_hold", rep.hypotheses_hold},
                {"sign_holds", rep.sign_holds}};
    if (!rep.hypotheses_hold) o.diagnostics.push_back("f does not satisfy the sampled shape hypotheses");
    o.pass = rep.sign_holds;
    return o;
}

Outcome cmd_byparts(const RunConfig& cfg) {
    const BivariateFn f = parse_fn(cfg.f, "--f");
    const BivariateFn density = parse_fn(cfg.gdensity, "--gdensity");
    const UnivariateFn g1 = UnivariateFn::parse(cfg.g1);
    const UnivariateFn g2 = UnivariateFn::parse(cfg.g2);
    const Rect r = cfg.rect.empty() ? Rect{0.0, 1.0, 0.0, 1.0} : parse_rect(cfg.rect);
    const quad::QuadratureSpec spec = quadrature(cfg);
    const monotone::AcRepresentation g(cfg.g0, Point{r.a, r.c}, g1, g2, density, spec);
    const auto rep = ineq::byparts_residual(f, g, r, spec, tol_or(cfg, 1e-6));
    Outcome o;
    o.result = to_json(rep.residual);
    o.result["terms"] = to_json(rep.terms);
    o.result["g_vanishes_lower_left"] = rep.g_vanishes_lower_left;
    o.result["stieltjes_partition"] = rep.stieltjes_partition;
    if (!rep.g_vanishes_lower_left)
        o.diagnostics.push_back("g does not vanish on the lower/left edges; the identity is not expected to hold");
    o.pass = rep.residual.pass;
    return o;
}

Outcome cmd_corollary(const RunConfig& cfg) {
    const BivariateFn f = parse_fn(cfg.f, "--f");
    const Rect r = parse_rect(cfg.rect);
    for (double v : {r.a, r.b, r.c, r.d})
        if (v != std::floor(v)) throw UsageError("--rect corners must be integers");
    const auto rep = ineq::sum_vs_integral(f, r, quadrature(cfg), tol_or(cfg, 1e-6));
    Outcome o;
    o.result = to_json(rep.residual);
    o.result["terms"] = {{"integral", rep.terms.integral},
                         {"x_term", rep.terms.x_term},
                         {"y_term", rep.terms.y_term},
                         {"xy_term", rep.terms.xy_term}};
    o.pass = rep.residual.pass;
    return o;
}

Outcome cmd_lemma1(const RunConfig& cfg) {
    const BivariateFn f = parse_fn(cfg.f, "--f");
    const Rect r = parse_rect(cfg.rect);
    if (cfg.grid < 2) throw UsageError("--grid must be >= 2");
    monotone::CertifyOptions opts;
    opts.tolerance = tol_or(cfg, 1e-9);
    if (!std::isnan(cfg.margin)) opts.margin = cfg.margin;
    const auto rep = monotone::mixed_partial_consistency(f, r, cfg.grid, opts);
    Outcome o;
    o.result = {{"certification", to_json(rep.report)},
                {"mixed_partial_min", rep.mixed_partial_min},
                {"mixed_partial_max", rep.mixed_partial_max},
                {"derivative_exact", rep.derivative_exact},
                {"consistent", rep.consistent}};
    if (!rep.derivative_exact)
        o.diagnostics.push_back("symbolic mixed partial passes through floor/abs/min/max");
    o.pass = rep.consistent;
    return o;
}

Outcome cmd_mollify(const RunConfig& cfg) {
    const BivariateFn f = parse_fn(cfg.f, "--f");
    const Rect r = parse_rect(cfg.rect);
    if (cfg.n < 1) throw UsageError("--n must be >= 1");
    const quad::QuadratureSpec spec = quadrature(cfg);
    const quad::Mollifier rho(cfg.n);
    const BivariateFn fn = quad::mollify(f, r, cfg.n, spec);
    Outcome o;
    const double mass = rho.mass(spec);
    o.result = {{"n", cfg.n}, {"normalization_c", rho.normalization()}, {"mass", mass}};
    if (!cfg.at.empty()) {
        const Point p = parse_point(cfg.at, "--at");
        o.result["point"] = json{p.x, p.y};
        o.result["value"] = fn.checked(p.x, p.y);
        o.result["original"] = f.checked(p.x, p.y);
    } else {
        if (cfg.lattice < 1) throw UsageError("--lattice must be >= 1");
        Rect inner;
        try {
            inner = r.shrink(cfg.inner_margin);
        } catch (const InvalidArgument& e) {
            throw UsageError(e.what());
        }
        double sup = 0.0;
        for (int i = 0; i <= cfg.lattice; ++i)
            for (int j = 0; j <= cfg.lattice; ++j) {
                const double x = inner.a + inner.width() * i / cfg.lattice;
                const double y = inner.c + inner.height() * j / cfg.lattice;
                sup = std::max(sup, std::fabs(fn.checked(x, y) - f.checked(x, y)));
            }
        o.result["inner_rect"] = to_json(inner);
        o.result["sup_error"] = sup;
    }
    o.pass = std::fabs(mass - 1.0) <= 1e-6;
    return o;
}

// ------------------------------------------------------------------ CLI11 wiring

void add_rect(CLI::App* app, RunConfig& cfg, bool required = true) {
    auto* opt = app->add_option("--rect", cfg.rect, "rectangle a,b,c,d (constant expressions allowed)");
    if (required) opt->required();
}

void add_quad(CLI::App* app, RunConfig& cfg) {
    app->add_option("--quad-tol", cfg.quad_tol, "quadrature tolerance");
    app->add_option("--points", cfg.points, "Gauss-Legendre points per cell per axis");
    app->add_option("--cells", cfg.cells, "coarse cells per axis");
}

json collect_inputs(const CLI::App* app) {
    json inputs = json::object();
    for (const CLI::Option* opt : app->get_options()) {
        if (opt->count() == 0 || opt->get_lnames().empty()) continue;
        const auto& res = opt->results();
        inputs[opt->get_lnames().front()] = res.size() == 1 ? json(res.front()) : json(res);
    }
    return inputs;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Numerical verification of two-dimensional Abel-Steffensen identities and inequalities",
                 "steff2d"};
    app.set_version_flag("--version", kVersion);
    app.add_option("--output", cfg.output, "write the JSON document to this file instead of stdout");
    app.require_subcommand(1);

    auto* certify = app.add_subcommand("certify", "certify 2d-monotonicity on a lattice");
    certify->add_option("--f", cfg.f)->required();
    add_rect(certify, cfg);
    certify->add_option("--grid", cfg.grid);
    certify->add_option("--tol", cfg.tol);
    certify->add_option("--margin", cfg.margin);
    certify->add_option("--expect", cfg.expect)
        ->check(CLI::IsMember({"monotone2d", "alternating2d", "modular", "indefinite"}));

    auto* integrate = app.add_subcommand("integrate", "adaptive 2D Gauss-Legendre quadrature");
    integrate->add_option("--f", cfg.f)->required();
    add_rect(integrate, cfg);
    integrate->add_option("--breaks", cfg.breaks, "interior breakpoints, e.g. x:1,2,y:0.5");
    add_quad(integrate, cfg);

    auto* stieltjes = app.add_subcommand("stieltjes", "Riemann-Stieltjes integral of h against f");
    stieltjes->set_help_flag("--help", "print this help message and exit");
    stieltjes->add_option("--h", cfg.h)->required();
    stieltjes->add_option("--f", cfg.f)->required();
    add_rect(stieltjes, cfg);
    stieltjes->add_option("--partition", cfg.partition);
    stieltjes->add_option("--tol", cfg.tol);
    stieltjes->add_option("--max-partition", cfg.max_partition);

    auto* copula_cmd = app.add_subcommand("copula", "copula construction and validation");
    copula_cmd->require_subcommand(1);
    auto* cvalidate = copula_cmd->add_subcommand("validate", "check the copula axioms on a grid");
    cvalidate->add_option("--f", cfg.f)->required();
    cvalidate->add_option("--grid", cfg.grid);
    cvalidate->add_option("--tol", cfg.tol);
    auto* carch = copula_cmd->add_subcommand("archimedean", "Archimedean copula from a generator");
    carch->add_option("--phi", cfg.phi)->required();
    carch->add_option("--eval", cfg.eval, "point x,y in [0,1]^2");
    int arch_grid = 0;
    carch->add_option("--grid", arch_grid, "also validate on a grid of this size");
    carch->add_option("--tol", cfg.tol);

    auto* verify = app.add_subcommand("verify", "verify an identity or inequality");
    verify->require_subcommand(1);
    auto* hardy = verify->add_subcommand("hardy", "2D Abel partial summation identity");
    auto* steff = verify->add_subcommand("steffensen", "discrete Abel-Steffensen inequality");
    for (auto* sub : {hardy, steff}) {
        sub->add_option("--a", cfg.a, "matrix as inline JSON or CSV path");
        sub->add_option("--u", cfg.u, "matrix as inline JSON or CSV path");
        sub->add_option("--p", cfg.p);
        sub->add_option("--q", cfg.q);
        sub->add_option("--trials", cfg.trials);
        sub->add_option("--seed", cfg.seed);
        sub->add_option("--tol", cfg.tol);
    }
    auto* young1 = verify->add_subcommand("young1", "Young identity anchored at (b,d)");
    auto* young2 = verify->add_subcommand("young2", "Young identity anchored at (a,c)");
    for (auto* sub : {young1, young2}) {
        sub->add_option("--f", cfg.f)->required();
        sub->add_option("--w", cfg.w)->required();
        add_rect(sub, cfg);
        sub->add_option("--tol", cfg.tol);
        add_quad(sub, cfg);
    }
    auto* thm3 = verify->add_subcommand("thm3", "integral inequality for 2d-monotone decreasing f");
    auto* thm4 = verify->add_subcommand("thm4", "integral inequality for 2d-monotone increasing f");
    auto* remark3 = verify->add_subcommand("remark3", "integral inequality for 2d-alternating f");
    for (auto* sub : {thm3, thm4, remark3}) {
        sub->add_option("--f", cfg.f)->required();
        sub->add_option("--w", cfg.w)->required();
        add_rect(sub, cfg);
        sub->add_option("--grid", cfg.grid);
        sub->add_option("--margin", cfg.margin, "shrink the rectangle by this margin");
        sub->add_option("--tol", cfg.tol);
        add_quad(sub, cfg);
    }
    auto* fourier = verify->add_subcommand("fourier", "sign of Fourier-type integrals");
    fourier->add_option("--kernel", cfg.kernel)->required();
    fourier->add_option("--f", cfg.f)->required();
    fourier->add_option("--m", cfg.m);
    fourier->add_option("--n", cfg.n);
    fourier->add_option("--tol", cfg.tol);
    add_quad(fourier, cfg);
    auto* byparts = verify->add_subcommand("byparts", "Stieltjes integration by parts");
    byparts->add_option("--f", cfg.f)->required();
    byparts->add_option("--gdensity", cfg.gdensity)->required();
    byparts->add_option("--g1", cfg.g1);
    byparts->add_option("--g2", cfg.g2);
    byparts->add_option("--g0", cfg.g0);
    add_rect(byparts, cfg, false);
    byparts->add_option("--tol", cfg.tol);
    add_quad(byparts, cfg);
    auto* corollary = verify->add_subcommand("corollary", "double sum versus double integral");
    corollary->add_option("--f", cfg.f)->required();
    add_rect(corollary, cfg);
    corollary->add_option("--tol", cfg.tol);
    add_quad(corollary, cfg);
    auto* lemma1 = verify->add_subcommand("lemma1", "lattice verdict versus sign of the mixed partial");
    lemma1->add_option("--f", cfg.f)->required();
    add_rect(lemma1, cfg);
    lemma1->add_option("--grid", cfg.grid);
    lemma1->add_option("--tol", cfg.tol);
    lemma1->add_option("--margin", cfg.margin);

    auto* mollify = app.add_subcommand("mollify", "convolution with the exponential bump");
    mollify->add_option("--f", cfg.f)->required();
    add_rect(mollify, cfg);
    mollify->add_option("--n", cfg.n)->required();
    mollify->add_option("--at", cfg.at, "evaluate at x,y");
    mollify->add_option("--inner-margin", cfg.inner_margin);
    mollify->add_option("--lattice", cfg.lattice);
    add_quad(mollify, cfg);

    std::vector<std::string> storage{"steff2d"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::Success& e) {
        // --help / --version; CLI11 renders the help of the subcommand that was reached
        app.exit(e, out, err);
        return kPass;
    } catch (const CLI::ParseError& e) {
        err << "steff2d: " << e.what() << "\n";
        return kUsage;
    }

    // Locate the leaf subcommand and its display name.
    const CLI::App* leaf = &app;
    std::string command;
    while (!leaf->get_subcommands().empty()) {
        leaf = leaf->get_subcommands().front();
        command += (command.empty() ? "" : " ") + leaf->get_name();
    }
    if (leaf == carch) cfg.grid = arch_grid;

    json doc;
    doc["command"] = command;
    doc["inputs"] = collect_inputs(leaf);
    doc["version"] = kVersion;
    int code = kPass;
    try {
        Outcome o;
        if (leaf == certify) o = cmd_certify(cfg);
        else if (leaf == integrate) o = cmd_integrate(cfg);
        else if (leaf == stieltjes) o = cmd_stieltjes(cfg);
        else if (leaf == cvalidate) o = cmd_copula_validate(cfg);
        else if (leaf == carch) o = cmd_copula_archimedean(cfg);
        else if (leaf == hardy) o = cmd_hardy(cfg);
        else if (leaf == steff) o = cmd_steffensen(cfg);
        else if (leaf == young1) o = cmd_young(cfg, ineq::YoungVariant::Y1);
        else if (leaf == young2) o = cmd_young(cfg, ineq::YoungVariant::Y2);
        else if (leaf == thm3) o = cmd_theorem(cfg, ineq::Theorem::Thm3);
        else if (leaf == thm4) o = cmd_theorem(cfg, ineq::Theorem::Thm4);
        else if (leaf == remark3) o = cmd_theorem(cfg, ineq::Theorem::Remark3);
        else if (leaf == fourier) o = cmd_fourier(cfg);
        else if (leaf == byparts) o = cmd_byparts(cfg);
        else if (leaf == corollary) o = cmd_corollary(cfg);
        else if (leaf == lemma1) o = cmd_lemma1(cfg);
        else if (leaf == mollify) o = cmd_mollify(cfg);
        doc["result"] = o.result;
        doc["pass"] = o.pass;
        doc["diagnostics"] = o.diagnostics;
        code = o.pass ? kPass : kFail;
        err << "steff2d " << command << ": " << (o.pass ? "PASS" : "FAIL") << "\n";
        for (const auto& d : o.diagnostics) err << "  " << d << "\n";
    } catch (const UsageError& e) {
        code = kUsage;
        doc["error"] = {{"kind", "usage"}, {"message", e.what()}};
    } catch (const expr::ParseError& e) {
        code = kUsage;
        doc["error"] = {{"kind", "parse"},
                        {"class", std::string(expr::to_string(e.kind()))},
                        {"offset", e.offset()},
                        {"message", e.what()}};
    } catch (const InvalidArgument& e) {
        code = kUsage;
        doc["error"] = {{"kind", "invalid_argument"}, {"message", e.what()}};
    } catch (const DomainError& e) {
        code = kNumeric;
        doc["error"] = {{"kind", "domain"}, {"message", e.what()}};
    } catch (const NonConvergence& e) {
        code = kNumeric;
        doc["error"] = {{"kind", "non_convergence"}, {"message", e.what()}};
    }
    if (code == kUsage || code == kNumeric) {
        doc["result"] = nullptr;
        doc["pass"] = false;
        doc["diagnostics"] = json::array({doc["error"]["message"]});
        err << "steff2d " << command << ": " << doc["error"]["message"].get<std::string>() << "\n";
    }

    const std::string text = doc.dump(2) + "\n";
    if (!cfg.output.empty()) {
        std::ofstream file(cfg.output);
        if (!file) {
            err << "steff2d: cannot write '" << cfg.output << "'\n";
            return kUsage;
        }
        file << text;
    } else {
        out << text;
    }
    return code;
}

} // namespace steff2d::cli
