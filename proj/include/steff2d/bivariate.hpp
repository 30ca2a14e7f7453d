/**
 * @file bivariate.hpp
 * @brief Core value types: rectangles, bivariate/univariate functions and
 *        identity residuals.
 */
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "steff2d/expr.hpp"

namespace steff2d {

/// Closed axis-aligned rectangle [a,b] x [c,d] with a < b, c < d.
struct Rect {
    double a = 0.0, b = 1.0, c = 0.0, d = 1.0;

    /// Validating constructor; throws InvalidArgument.
    static Rect make(double a, double b, double c, double d);

    double width() const { return b - a; }
    double height() const { return d - c; }
    double diameter() const;
    /// Rectangle shrunk by `margin` on every side.
    Rect shrink(double margin) const;
    bool contains(const Rect& inner) const;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Pure map (x,y) -> real, backed either by an expression (with symbolic
/// partials available) or by an opaque reentrant closure.
class BivariateFn {
public:
    using Closure = std::function<double(double, double)>;

    BivariateFn();  // the zero function
    explicit BivariateFn(expr::Expr e);
    BivariateFn(Closure fn, std::string label);

    /// Parses `src`; throws expr::ParseError.
    static BivariateFn parse(std::string_view src);

    double operator()(double x, double y) const { return (*eval_)(x, y); }

    /// Evaluates and throws DomainError on a non-finite value.
    double checked(double x, double y) const;

    bool is_symbolic() const { return expr_.has_value(); }
    const expr::Expr& expr() const;  // throws InvalidArgument for closures
    const std::string& label() const { return label_; }

    /// Symbolic partials; throw InvalidArgument for closure-backed functions.
    BivariateFn dx() const;
    BivariateFn dy() const;
    BivariateFn dxy() const;
    /// True when a derivative above passed through floor/abs/min/max.
    bool derivative_nondifferentiable() const;

private:
    std::optional<expr::Expr> expr_;
    std::shared_ptr<const Closure> eval_;
    std::string label_;
};

/// Function of one real variable. Expression-backed univariate functions may
/// use either x or y (s, t) as their variable; both are bound to the argument.
class UnivariateFn {
public:
    UnivariateFn();  // the zero function
    explicit UnivariateFn(expr::Expr e);
    UnivariateFn(std::function<double(double)> fn, std::string label);
    static UnivariateFn parse(std::string_view src);

    double operator()(double t) const { return (*eval_)(t); }
    const std::optional<expr::Expr>& expr() const { return expr_; }
    const std::string& label() const { return label_; }
    bool is_zero() const;

private:
    std::optional<expr::Expr> expr_;
    std::shared_ptr<const std::function<double(double)>> eval_;
    std::string label_;
};

/// Both sides of a numerical identity with their discrepancy.
struct IdentityResidual {
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_residual = 0.0;
    double rel_residual = 0.0;  // abs_residual / max(1, |lhs|)
    double tolerance = 0.0;
    bool pass = false;

    static IdentityResidual make(double lhs, double rhs, double tolerance);
};

} // namespace steff2d
