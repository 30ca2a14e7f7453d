#include "steff2d/bivariate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace steff2d {

Rect Rect::make(double a, double b, double c, double d) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(d))
        throw InvalidArgument("rectangle corners must be finite");
    if (!(a < b) || !(c < d)) {
        std::ostringstream os;
        os << "degenerate rectangle [" << a << "," << b << "]x[" << c << "," << d
           << "]: need a < b and c < d";
        throw InvalidArgument(os.str());
    }
    return Rect{a, b, c, d};
}

double Rect::diameter() const { return std::hypot(b - a, d - c); }

Rect Rect::shrink(double margin) const {
    if (margin < 0.0) throw InvalidArgument("margin must be nonnegative");
    return make(a + margin, b - margin, c + margin, d - margin);
}

bool Rect::contains(const Rect& inner) const {
    return a <= inner.a && inner.b <= b && c <= inner.c && inner.d <= d;
}

// ------------------------------------------------------------------ BivariateFn

BivariateFn::BivariateFn() : BivariateFn(expr::Expr::constant(0.0)) {}

BivariateFn::BivariateFn(expr::Expr e)
    : expr_(e), label_(expr::print(e)) {
    auto program = std::make_shared<expr::Program>(e);
    eval_ = std::make_shared<const Closure>(
        [program](double x, double y) { return (*program)(x, y); });
}

BivariateFn::BivariateFn(Closure fn, std::string label)
    : eval_(std::make_shared<const Closure>(std::move(fn))), label_(std::move(label)) {}

BivariateFn BivariateFn::parse(std::string_view src) { return BivariateFn(expr::parse(src)); }

double BivariateFn::checked(double x, double y) const {
    const double v = (*this)(x, y);
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "'" << label_ << "' is not finite at (" << x << ", " << y << ")";
        throw DomainError(os.str());
    }
    return v;
}

const expr::Expr& BivariateFn::expr() const {
    if (!expr_) throw InvalidArgument("'" + label_ + "' has no symbolic form");
    return *expr_;
}

BivariateFn BivariateFn::dx() const {
    return BivariateFn(expr::differentiate(expr(), expr::Var::X).expr);
}

BivariateFn BivariateFn::dy() const {
    return BivariateFn(expr::differentiate(expr(), expr::Var::Y).expr);
}

BivariateFn BivariateFn::dxy() const {
    const auto fx = expr::differentiate(expr(), expr::Var::X);
    return BivariateFn(expr::differentiate(fx.expr, expr::Var::Y).expr);
}

bool BivariateFn::derivative_nondifferentiable() const {
    if (!expr_) return true;
    const auto fx = expr::differentiate(*expr_, expr::Var::X);
    const auto fy = expr::differentiate(*expr_, expr::Var::Y);
    const auto fxy = expr::differentiate(fx.expr, expr::Var::Y);
    return fx.nondifferentiable || fy.nondifferentiable || fxy.nondifferentiable;
}

// ------------------------------------------------------------------ UnivariateFn

UnivariateFn::UnivariateFn() : UnivariateFn(expr::Expr::constant(0.0)) {}

UnivariateFn::UnivariateFn(expr::Expr e) : expr_(e), label_(expr::print(e)) {
    auto program = std::make_shared<expr::Program>(e);
    eval_ = std::make_shared<const std::function<double(double)>>(
        [program](double t) { return (*program)(t, t); });
}

UnivariateFn::UnivariateFn(std::function<double(double)> fn, std::string label)
    : eval_(std::make_shared<const std::function<double(double)>>(std::move(fn))),
      label_(std::move(label)) {}

UnivariateFn UnivariateFn::parse(std::string_view src) { return UnivariateFn(expr::parse(src)); }

bool UnivariateFn::is_zero() const { return expr_ && expr_->is_constant(0.0); }

// ------------------------------------------------------------------ IdentityResidual

IdentityResidual IdentityResidual::make(double lhs, double rhs, double tolerance) {
    IdentityResidual r;
    r.lhs = lhs;
    r.rhs = rhs;
    r.abs_residual = std::fabs(lhs - rhs);
    r.rel_residual = r.abs_residual / std::max(1.0, std::fabs(lhs));
    r.tolerance = tolerance;
    r.pass = r.abs_residual <= tolerance || r.rel_residual <= tolerance;
    return r;
}

} // namespace steff2d
