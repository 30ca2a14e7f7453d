#include "steff2d/ineq.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace steff2d::ineq {

using expr::Builtin;
using expr::Expr;
using quad::Integrand1;
using quad::Integrand2;

namespace {

bool is_zero(const BivariateFn& g) { return g.is_symbolic() && g.expr().is_constant(0.0); }

double integrate_product(const BivariateFn& p, const BivariateFn& q, const Rect& r,
                         const quad::QuadratureSpec& spec) {
    if (is_zero(p) || is_zero(q)) return 0.0;
    return quad::integrate2d(Integrand2([&](double x, double y) { return p(x, y) * q(x, y); }), r, spec)
        .value;
}

double integrate_line(const Integrand1& g, double lo, double hi, const quad::QuadratureSpec& spec) {
    return quad::integrate1d(g, lo, hi, spec).value;
}

/// Sampled convexity (second differences) and monotonicity of a univariate function.
struct ShapeCheck {
    bool convex = true;
    bool increasing = true;
    bool decreasing = true;
};

ShapeCheck sample_shape(const std::function<double(double)>& g, double lo, double hi, int samples = 512) {
    std::vector<double> v(samples + 1);
    double scale = 1.0;
    for (int k = 0; k <= samples; ++k) {
        v[k] = g(lo + (hi - lo) * k / samples);
        if (!std::isfinite(v[k])) return {false, false, false};
        scale = std::max(scale, std::fabs(v[k]));
    }
    const double slack = 1e-12 * scale;
    ShapeCheck s;
    for (int k = 0; k < samples; ++k) {
        s.increasing = s.increasing && v[k + 1] >= v[k] - slack;
        s.decreasing = s.decreasing && v[k + 1] <= v[k] + slack;
        if (k > 0) s.convex = s.convex && v[k - 1] - 2.0 * v[k] + v[k + 1] >= -slack;
    }
    return s;
}

} // namespace

// ------------------------------------------------------------------ Young identities

YoungReport young_residual(YoungVariant variant, const BivariateFn& f, const BivariateFn& w,
                           const Rect& r, const quad::QuadratureSpec& spec, double tolerance) {
    const BivariateFn fx = f.dx(), fy = f.dy(), fxy = f.dxy();
    const bool y1 = variant == YoungVariant::Y1;
    const quad::CumulativePrimitive W =
        quad::cumulative(w, r, y1 ? quad::Orientation::Lower : quad::Orientation::Upper, spec);

    YoungReport rep;
    rep.variant = variant;
    const double lhs = integrate_product(f, w, r, spec);

    // Y1 expands around (b,d) with W anchored at (a,c); Y2 mirrors this.
    const double cx = y1 ? r.b : r.a;
    const double cy = y1 ? r.d : r.c;
    YoungTerms& t = rep.terms;
    t.corner = f.checked(cx, cy) * W(cx, cy);
    if (!is_zero(fx))
        t.edge_x = integrate_line([&](double x) { return fx(x, cy) * W(x, cy); }, r.a, r.b, spec);
    if (!is_zero(fy))
        t.edge_y = integrate_line([&](double y) { return W(cx, y) * fy(cx, y); }, r.c, r.d, spec);
    if (!is_zero(fxy)) t.interior = integrate_product(W.as_function(), fxy, r, spec);

    const double rhs = y1 ? t.corner - t.edge_x - t.edge_y + t.interior
                          : t.corner + t.edge_x + t.edge_y + t.interior;
    rep.residual = IdentityResidual::make(lhs, rhs, tolerance);
    return rep;
}

// ------------------------------------------------------------------ integral inequalities

std::string_view to_string(Theorem t) {
    switch (t) {
    case Theorem::Thm3: return "thm3";
    case Theorem::Thm4: return "thm4";
    case Theorem::Remark3: return "remark3";
    }
    return "thm3";
}

TheoremReport steffensen_integral(Theorem theorem, const BivariateFn& f, const BivariateFn& w,
                                  const Rect& r, const quad::QuadratureSpec& spec,
                                  const SteffensenOptions& options) {
    using monotone::Verdict;
    TheoremReport rep;
    rep.theorem = theorem;
    rep.tolerance = options.tolerance;
    rep.certification = monotone::certify(f, r, options.grid,
                                          monotone::CertifyOptions{options.certify_tolerance, {}});
    const auto& cert = rep.certification;
    const auto& e = cert.edges;
    rep.f_nonnegative = cert.nonnegative;

    const bool upper = theorem == Theorem::Thm4;
    const quad::CumulativePrimitive W =
        quad::cumulative(w, r, upper ? quad::Orientation::Upper : quad::Orientation::Lower, spec);
    const quad::LatticeExtrema ext = W.lattice_extrema(options.grid);
    rep.primitive_min = ext.min;
    rep.primitive_max = ext.max;

    const double integral = integrate_product(f, w, r, spec);
    switch (theorem) {
    case Theorem::Thm3:
        rep.monotonicity_ok = cert.verdict == Verdict::Monotone2d || cert.verdict == Verdict::Modular;
        rep.edges_ok = e.top_decreasing && e.right_decreasing;
        rep.primitive_ok = ext.min >= -options.primitive_tolerance;
        rep.lhs = integral;
        rep.bound = f.checked(r.b, r.d) * W(r.b, r.d);
        rep.inequality_holds = rep.lhs >= rep.bound - options.tolerance;
        break;
    case Theorem::Thm4:
        rep.monotonicity_ok = cert.verdict == Verdict::Monotone2d || cert.verdict == Verdict::Modular;
        rep.edges_ok = e.bottom_increasing && e.left_increasing;
        rep.primitive_ok = ext.min >= -options.primitive_tolerance;
        rep.lhs = integral;
        rep.bound = f.checked(r.a, r.c) * W(r.a, r.c);
        rep.inequality_holds = rep.lhs >= rep.bound - options.tolerance;
        break;
    case Theorem::Remark3:
        rep.monotonicity_ok = cert.verdict == Verdict::Alternating2d || cert.verdict == Verdict::Modular;
        rep.edges_ok = e.top_increasing && e.right_increasing;
        rep.primitive_ok = ext.max <= options.primitive_tolerance;
        rep.lhs = -integral;
        rep.bound = -f.checked(r.b, r.d) * W(r.b, r.d);
        rep.inequality_holds = rep.lhs <= rep.bound + options.tolerance;
        break;
    }
    return rep;
}

// ------------------------------------------------------------------ Fourier sign results

std::string_view to_string(FourierKernel k) {
    switch (k) {
    case FourierKernel::SinSin2d: return "sinsin2d";
    case FourierKernel::CosCos2d: return "coscos2d";
    case FourierKernel::Cos1d: return "cos1d";
    case FourierKernel::Sin1d: return "sin1d";
    }
    return "sinsin2d";
}

FourierReport fourier_check(FourierKernel kernel, const Expr& f, int m, int n,
                            const quad::QuadratureSpec& spec, double tolerance) {
    if (m < 1 || n < 1) throw InvalidArgument("Fourier frequencies must be positive integers");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const Expr x = Expr::x(), y = Expr::y();
    auto k = [](double v) { return Expr::constant(v); };

    FourierReport rep;
    rep.kernel = kernel;
    rep.tolerance = tolerance;
    quad::QuadratureSpec s = spec;
    s.cells = std::max(spec.cells, 2 * std::max(m, n));

    switch (kernel) {
    case FourierKernel::SinSin2d: {
        if (f.depends_on(expr::Var::X) && f.depends_on(expr::Var::Y))
            throw InvalidArgument("sinsin2d needs a univariate f");
        const Expr composed = expr::substitute(f, x + y, x + y);
        const BivariateFn integrand(composed * expr::call(Builtin::Sin, k(m) * x) *
                                    expr::call(Builtin::Sin, k(n) * y));
        rep.value = quad::integrate2d(integrand, Rect{0.0, two_pi, 0.0, two_pi}, s).value;
        const UnivariateFn g(f);
        const ShapeCheck shape = sample_shape([&](double t) { return g(t); }, 0.0, 2.0 * two_pi);
        rep.hypotheses_hold = shape.convex && (shape.increasing || shape.decreasing);
        rep.expected_sign = ExpectedSign::Nonnegative;
        break;
    }
    case FourierKernel::CosCos2d: {
        const BivariateFn integrand(f * expr::call(Builtin::Cos, k(m) * x) *
                                    expr::call(Builtin::Cos, k(n) * y));
        rep.value = quad::integrate2d(integrand, Rect{0.0, two_pi, 0.0, two_pi}, s).value;
        // Convexity sampled along horizontal, vertical and both diagonal directions.
        const BivariateFn fn(f);
        bool convex = true;
        for (int i = 0; i <= 16 && convex; ++i) {
            const double c0 = two_pi * i / 16;
            convex = sample_shape([&](double t) { return fn(t, c0); }, 0.0, two_pi, 64).convex &&
                     sample_shape([&](double t) { return fn(c0, t); }, 0.0, two_pi, 64).convex &&
                     sample_shape([&](double t) { return fn(t, t + c0); }, 0.0, two_pi - c0, 64).convex &&
                     sample_shape([&](double t) { return fn(t, two_pi - t); }, 0.0, two_pi, 64).convex;
        }
        rep.hypotheses_hold = convex;
        rep.expected_sign = ExpectedSign::Nonnegative;
        break;
    }
    case FourierKernel::Cos1d:
    case FourierKernel::Sin1d: {
        const UnivariateFn g(f);
        const bool cosine = kernel == FourierKernel::Cos1d;
        rep.value = quad::integrate1d(
                        [&](double t) {
                            return g(t) * (cosine ? std::cos(n * t) : std::sin(n * t));
                        },
                        0.0, two_pi, s)
                        .value;
        if (cosine) {
            rep.hypotheses_hold = sample_shape([&](double t) { return g(t); }, 0.0, two_pi).convex;
            rep.expected_sign = ExpectedSign::Nonnegative;
        } else {
            rep.hypotheses_hold = true;
            rep.expected_sign = ExpectedSign::Unconstrained;
        }
        break;
    }
    }
    rep.sign_holds = rep.expected_sign == ExpectedSign::Unconstrained || rep.value >= -tolerance;
    return rep;
}

// ------------------------------------------------------------------ Stieltjes integration by parts

BypartsReport byparts_residual(const BivariateFn& f, const monotone::AcRepresentation& g,
                               const Rect& r, const quad::QuadratureSpec& spec, double tolerance) {
    const BivariateFn fx = f.dx(), fy = f.dy();
    const BivariateFn gfn = g.as_function();

    BypartsReport rep;
    // Rectangle measures of an AC function are integrals of its mixed density.
    const double lhs = integrate_product(f, g.density(), r, spec);

    YoungTerms& t = rep.terms;
    t.corner = f.checked(r.b, r.d) * gfn(r.b, r.d);
    if (!is_zero(fx))
        t.edge_x = integrate_line([&](double x) { return fx(x, r.d) * gfn(x, r.d); }, r.a, r.b, spec);
    if (!is_zero(fy))
        t.edge_y = integrate_line([&](double y) { return fy(r.b, y) * gfn(r.b, y); }, r.c, r.d, spec);
    quad::StieltjesOptions st_opts;
    st_opts.tolerance = spec.tolerance;
    st_opts.richardson = true;
    const quad::StieltjesResult st = quad::stieltjes2d(gfn, f, r, 8, st_opts);
    t.interior = st.value;
    rep.stieltjes_partition = st.partition;

    const double rhs = t.corner - t.edge_x - t.edge_y + t.interior;
    rep.residual = IdentityResidual::make(lhs, rhs, tolerance);

    bool vanishes = true;
    constexpr int kSamples = 32;
    for (int k = 0; k <= kSamples && vanishes; ++k) {
        const double xs = r.a + r.width() * k / kSamples;
        const double ys = r.c + r.height() * k / kSamples;
        vanishes = std::fabs(gfn(r.a, ys)) <= 1e-12 && std::fabs(gfn(xs, r.c)) <= 1e-12;
    }
    rep.g_vanishes_lower_left = vanishes;
    return rep;
}

// ------------------------------------------------------------------ double sums vs double integrals

SumIntegralReport sum_vs_integral(const BivariateFn& f, const Rect& r,
                                  const quad::QuadratureSpec& spec, double tolerance) {
    for (double v : {r.a, r.b, r.c, r.d})
        if (v != std::floor(v)) throw InvalidArgument("rectangle corners must be integers");
    if (r.width() * r.height() > 1e6) throw InvalidArgument("rectangle has too many lattice points");

    double lhs = 0.0;
    for (double m = r.a + 1.0; m <= r.b; m += 1.0)
        for (double n = r.c + 1.0; n <= r.d; n += 1.0) lhs += f.checked(m, n);

    const Expr x = Expr::x(), y = Expr::y();
    const Expr frac_x = x - expr::call(Builtin::Floor, x);
    const Expr frac_y = y - expr::call(Builtin::Floor, y);
    const BivariateFn fx = f.dx(), fy = f.dy(), fxy = f.dxy();
    const quad::QuadratureSpec s = spec.with_integer_breaks(r);

    SumIntegralReport rep;
    SumIntegralTerms& t = rep.terms;
    t.integral = quad::integrate2d(f, r, s).value;
    t.x_term = integrate_product(fx, BivariateFn(frac_x), r, s);
    t.y_term = integrate_product(fy, BivariateFn(frac_y), r, s);
    t.xy_term = integrate_product(fxy, BivariateFn(frac_x * frac_y), r, s);
    const double rhs = t.integral + t.x_term + t.y_term + t.xy_term;
    rep.residual = IdentityResidual::make(lhs, rhs, tolerance);
    return rep;
}

} // namespace steff2d::ineq
