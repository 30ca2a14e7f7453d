#include "steff2d/monotone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <vector>

#include "steff2d/parallel.hpp"

namespace steff2d::monotone {

using expr::Expr;

double f_measure(const BivariateFn& f, const Rect& r) {
    return f.checked(r.a, r.c) - f.checked(r.a, r.d) - f.checked(r.b, r.c) + f.checked(r.b, r.d);
}

double mixed_partial_fd(const BivariateFn& f, double x, double y, double h) {
    if (!(h > 0.0)) throw InvalidArgument("finite-difference step must be > 0");
    return f_measure(f, Rect{x, x + h, y, y + h}) / (h * h);
}

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::Monotone2d: return "monotone2d";
    case Verdict::Alternating2d: return "alternating2d";
    case Verdict::Modular: return "modular";
    case Verdict::Indefinite: return "indefinite";
    }
    return "indefinite";
}

bool MonotonicityReport::monotone_decreasing() const {
    const bool two_d = verdict == Verdict::Monotone2d || verdict == Verdict::Modular;
    return two_d && edges.x_decreasing && edges.y_decreasing;
}

bool MonotonicityReport::monotone_increasing() const {
    const bool two_d = verdict == Verdict::Monotone2d || verdict == Verdict::Modular;
    return two_d && edges.x_increasing && edges.y_increasing;
}

MonotonicityReport certify(const BivariateFn& f, const Rect& domain, int grid,
                           const CertifyOptions& options) {
    if (grid < 2) throw InvalidArgument("certification grid must be >= 2");
    if (!(options.tolerance >= 0.0)) throw InvalidArgument("tolerance must be >= 0");
    const double margin = options.margin.value_or(1e-6 * domain.diameter());
    const Rect lat = domain.shrink(margin);

    const std::size_t n = static_cast<std::size_t>(grid) + 1;
    auto xs = [&](std::size_t i) { return i + 1 == n ? lat.b : lat.a + lat.width() * i / grid; };
    auto ys = [&](std::size_t j) { return j + 1 == n ? lat.d : lat.c + lat.height() * j / grid; };

    std::vector<double> v(n * n);
    parallel_for(n, [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) v[i * n + j] = f.checked(xs(i), ys(j));
    });
    auto at = [&](std::size_t i, std::size_t j) { return v[i * n + j]; };

    MonotonicityReport rep;
    rep.grid = grid;
    rep.tolerance = options.tolerance;
    rep.lattice = lat;
    rep.min_cell_measure = std::numeric_limits<double>::infinity();
    rep.max_cell_measure = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = 0; j + 1 < n; ++j) {
            const double m = at(i, j) - at(i, j + 1) - at(i + 1, j) + at(i + 1, j + 1);
            const Rect cell{xs(i), xs(i + 1), ys(j), ys(j + 1)};
            if (m < rep.min_cell_measure) {
                rep.min_cell_measure = m;
                rep.min_witness = cell;
            }
            if (m > rep.max_cell_measure) {
                rep.max_cell_measure = m;
                rep.max_witness = cell;
            }
        }

    const double tol = options.tolerance;
    const bool mono = rep.min_cell_measure >= -tol;
    const bool alt = rep.max_cell_measure <= tol;
    rep.verdict = mono && alt ? Verdict::Modular
                  : mono      ? Verdict::Monotone2d
                  : alt       ? Verdict::Alternating2d
                              : Verdict::Indefinite;

    // Along a line: (nonincreasing, nondecreasing) within tol.
    auto line = [&](auto value_at) {
        bool dec = true, inc = true;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            const double step = value_at(k + 1) - value_at(k);
            dec = dec && step <= tol;
            inc = inc && step >= -tol;
        }
        return std::pair{dec, inc};
    };
    EdgeFlags& e = rep.edges;
    std::tie(e.top_decreasing, e.top_increasing) = line([&](std::size_t k) { return at(k, n - 1); });
    std::tie(e.bottom_decreasing, e.bottom_increasing) = line([&](std::size_t k) { return at(k, 0); });
    std::tie(e.right_decreasing, e.right_increasing) = line([&](std::size_t k) { return at(n - 1, k); });
    std::tie(e.left_decreasing, e.left_increasing) = line([&](std::size_t k) { return at(0, k); });
    e.x_decreasing = e.x_increasing = e.y_decreasing = e.y_increasing = true;
    for (std::size_t fixed = 0; fixed < n; ++fixed) {
        const auto [xd, xi] = line([&](std::size_t k) { return at(k, fixed); });
        const auto [yd, yi] = line([&](std::size_t k) { return at(fixed, k); });
        e.x_decreasing = e.x_decreasing && xd;
        e.x_increasing = e.x_increasing && xi;
        e.y_decreasing = e.y_decreasing && yd;
        e.y_increasing = e.y_increasing && yi;
    }

    rep.min_value = *std::min_element(v.begin(), v.end());
    rep.nonnegative = rep.min_value >= 0.0;
    return rep;
}

// ------------------------------------------------------------------ catalog

namespace {

Expr compose(const Expr& F, const Expr& arg) { return expr::substitute(F, arg, arg); }

const Expr& require_univariate(const std::optional<Expr>& F, std::string_view name) {
    if (!F) throw InvalidArgument(std::string(name) + " needs a univariate expression F");
    if (F->depends_on(expr::Var::X) && F->depends_on(expr::Var::Y))
        throw InvalidArgument(std::string(name) + ": F must be an expression in one variable");
    return *F;
}

double param(std::span<const double> params, std::size_t i, std::string_view name) {
    if (params.size() <= i)
        throw InvalidArgument(std::string(name) + " needs " + std::to_string(i + 1) + " parameter(s)");
    if (!std::isfinite(params[i])) throw InvalidArgument(std::string(name) + ": parameter not finite");
    return params[i];
}

} // namespace

BivariateFn catalog(std::string_view name, std::span<const double> params,
                    const std::optional<Expr>& F) {
    const Expr x = Expr::x(), y = Expr::y();
    auto k = [](double v) { return Expr::constant(v); };
    if (name == "E") return BivariateFn(expr::pow(x, k(2)) + expr::pow(y, k(2)));
    if (name == "C")
        return BivariateFn(expr::pow(
            expr::call(expr::Builtin::Exp, x) + expr::call(expr::Builtin::Exp, y) - k(1), k(-1)));
    if (name == "Pi") return BivariateFn(x * y);
    if (name == "exp_decay") return BivariateFn(expr::call(expr::Builtin::Exp, -x - y));
    if (name == "log_pow") {
        const double n = param(params, 0, name);
        if (n < 1.0) throw InvalidArgument("log_pow needs n >= 1");
        return BivariateFn(expr::call(expr::Builtin::Log, expr::pow(x, k(n)) + expr::pow(y, k(n))));
    }
    if (name == "neg_convex_diff") return BivariateFn(-compose(require_univariate(F, name), x - y));
    if (name == "convex_sum") {
        const double lambda = param(params, 0, name);
        if (!(lambda > 0.0)) throw InvalidArgument("convex_sum needs lambda > 0");
        return BivariateFn(compose(require_univariate(F, name), k(lambda) * (x + y)));
    }
    if (name == "midpoint_gap") {
        const Expr& f = require_univariate(F, name);
        return BivariateFn(compose(f, x) / k(2) + compose(f, y) / k(2) -
                           compose(f, (x + y) / k(2)));
    }
    throw InvalidArgument("unknown catalog function '" + std::string(name) + "'");
}

// ------------------------------------------------------------------ AC representation

namespace {

double integrate_oriented(const UnivariateFn& g, double from, double to,
                          const quad::QuadratureSpec& spec) {
    if (from == to || g.is_zero()) return 0.0;
    const quad::Integrand1 fn = [&g](double t) { return g(t); };
    if (from < to) return quad::integrate1d(fn, from, to, spec).value;
    return -quad::integrate1d(fn, to, from, spec).value;
}

} // namespace

AcRepresentation::AcRepresentation(double f0, Point base, UnivariateFn g1, UnivariateFn g2,
                                   BivariateFn g, quad::QuadratureSpec spec)
    : f0_(f0),
      base_(base),
      g1_(std::move(g1)),
      g2_(std::move(g2)),
      g_(std::move(g)),
      spec_(std::move(spec)) {
    if (!std::isfinite(f0) || !std::isfinite(base.x) || !std::isfinite(base.y))
        throw InvalidArgument("AC representation needs finite f0 and base point");
    spec_.validate();
    // The cache's reference rectangle only sets the coarse-mesh scale.
    const Rect unit{base.x, base.x + 1.0, base.y, base.y + 1.0};
    mixed_ = std::make_shared<quad::CumulativePrimitive>(g_, unit, quad::Orientation::Lower, spec_);
}

double AcRepresentation::operator()(double x, double y) const {
    double v = f0_;
    v += integrate_oriented(g1_, base_.x, x, spec_);
    v += integrate_oriented(g2_, base_.y, y, spec_);
    if (!(g_.is_symbolic() && g_.expr().is_constant(0.0))) v += (*mixed_)(x, y);
    return v;
}

BivariateFn AcRepresentation::as_function() const {
    auto self = std::make_shared<AcRepresentation>(*this);
    return BivariateFn([self](double x, double y) { return (*self)(x, y); },
                       "ac[" + g_.label() + "]");
}

BivariateFn from_ac(double f0, Point base, const UnivariateFn& g1, const UnivariateFn& g2,
                    const BivariateFn& g, const quad::QuadratureSpec& spec) {
    return AcRepresentation(f0, base, g1, g2, g, spec).as_function();
}

} // namespace steff2d::monotone

namespace steff2d::monotone {

MixedPartialConsistency mixed_partial_consistency(const BivariateFn& f, const Rect& domain, int grid,
                                                  const CertifyOptions& options) {
    MixedPartialConsistency out;
    out.report = certify(f, domain, grid, options);
    out.derivative_exact = !f.derivative_nondifferentiable();
    const BivariateFn fxy = f.dxy();
    const Rect& lat = out.report.lattice;
    out.mixed_partial_min = std::numeric_limits<double>::infinity();
    out.mixed_partial_max = -std::numeric_limits<double>::infinity();
    for (int i = 1; i < grid; ++i)
        for (int j = 1; j < grid; ++j) {
            const double x = lat.a + lat.width() * i / grid, y = lat.c + lat.height() * j / grid;
            // a.e.-only partials are undefined on their kinks; skip those points
            if (!out.derivative_exact && !std::isfinite(fxy(x, y))) continue;
            const double v = fxy.checked(x, y);
            out.mixed_partial_min = std::min(out.mixed_partial_min, v);
            out.mixed_partial_max = std::max(out.mixed_partial_max, v);
        }
    const double tol = options.tolerance;
    const bool nonneg = out.mixed_partial_min >= -tol;
    const bool nonpos = out.mixed_partial_max <= tol;
    switch (out.report.verdict) {
    case Verdict::Monotone2d: out.consistent = nonneg && !nonpos; break;
    case Verdict::Alternating2d: out.consistent = nonpos && !nonneg; break;
    case Verdict::Modular: out.consistent = nonneg && nonpos; break;
    case Verdict::Indefinite: out.consistent = !nonneg && !nonpos; break;
    }
    return out;
}

} // namespace steff2d::monotone
