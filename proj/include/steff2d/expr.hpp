/**
 * @file expr.hpp
 * @brief Bivariate real expressions: parsing, printing, evaluation and
 *        symbolic differentiation.
 *
 * Grammar (whitespace ignored):
 *
 *     expr    := term   { ("+" | "-") term }
 *     term    := power  { ("*" | "/") power }
 *     power   := unary  [ "^" power ]            (right associative)
 *     unary   := ("-" | "+") unary | primary
 *     primary := number | "pi" | "e" | "x" | "y" | "s" | "t"
 *              | name "(" expr { "," expr } ")" | "(" expr ")"
 *     name    := sin | cos | exp | log | sqrt | abs | floor | min | max
 *
 * Unary minus binds tighter than "^", so "-x^2" reads as "(-x)^2".
 * The aliases s and t denote x and y respectively.
 */
#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "steff2d/error.hpp"

namespace steff2d::expr {

enum class Var { X, Y };

enum class Builtin { Sin, Cos, Exp, Log, Sqrt, Abs, Floor, Min, Max };

enum class NodeKind { Constant, VarX, VarY, Neg, Add, Sub, Mul, Div, Pow, Call };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    NodeKind kind = NodeKind::Constant;
    double value = 0.0;           // Constant only
    Builtin fn = Builtin::Sin;    // Call only
    std::vector<NodePtr> args;    // operands / call arguments
};

std::string_view builtin_name(Builtin fn);
std::optional<Builtin> builtin_from_name(std::string_view name);
std::size_t builtin_arity(Builtin fn);

/// Immutable expression tree with value semantics (nodes are shared).
class Expr {
public:
    Expr();  // the constant 0
    explicit Expr(NodePtr root);

    static Expr constant(double v);
    static Expr var(Var v);
    static Expr x() { return var(Var::X); }
    static Expr y() { return var(Var::Y); }
    static Expr call(Builtin fn, std::vector<Expr> args);

    const Node& root() const { return *root_; }
    const NodePtr& node() const { return root_; }
    NodeKind kind() const { return root_->kind; }
    bool is_constant() const { return root_->kind == NodeKind::Constant; }
    bool is_constant(double v) const { return is_constant() && root_->value == v; }

    bool depends_on(Var v) const;
    bool contains(Builtin fn) const;
    bool structurally_equal(const Expr& other) const;

private:
    NodePtr root_;
};

// Constructors that fold constants and drop additive zeros / multiplicative ones.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, const Expr& exponent);
Expr call(Builtin fn, const Expr& arg);

// Raw constructors (no folding), used by the parser.
Expr make_unary(NodeKind kind, Expr operand);
Expr make_binary(NodeKind kind, Expr lhs, Expr rhs);

enum class ParseErrorKind { UnexpectedToken, UnbalancedParenthesis, UnknownIdentifier, ArityMismatch };

class ParseError : public Error {
public:
    ParseError(ParseErrorKind kind, std::size_t offset, const std::string& message);
    ParseErrorKind kind() const { return kind_; }
    std::size_t offset() const { return offset_; }

private:
    ParseErrorKind kind_;
    std::size_t offset_;
};

std::string_view to_string(ParseErrorKind kind);

Expr parse(std::string_view src);

/// Fully parenthesized rendering; parse(print(e)) evaluates bit-identically to e.
std::string print(const Expr& e);

/// Reference tree-walking evaluation. Domain violations yield NaN.
double eval(const Expr& e, double x, double y);

/// Real power: integer exponents use std::pow (negative bases allowed),
/// other exponents exp(b*log(a)), NaN for a < 0.
double real_pow(double base, double exponent);

struct Derivative {
    Expr expr;
    /// Set when floor/abs/min/max lies on the differentiation path; the
    /// result then only holds almost everywhere.
    bool nondifferentiable = false;
};

Derivative differentiate(const Expr& e, Var v);

/// Replaces every x by `for_x` and every y by `for_y`.
Expr substitute(const Expr& e, const Expr& for_x, const Expr& for_y);

/// Postfix stack-machine form of an expression for fast repeated evaluation.
class Program {
public:
    explicit Program(const Expr& e);
    double operator()(double x, double y) const;

private:
    struct Instr {
        NodeKind op;
        Builtin fn;
        double value;
    };
    std::vector<Instr> code_;
    std::size_t max_stack_ = 0;
};

} // namespace steff2d::expr
