/**
 * @file expr.cpp
 * @brief Pratt parser, printer, evaluator and differentiator for bivariate expressions.
 */
#include "steff2d/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

namespace steff2d::expr {

namespace {

constexpr std::array<std::pair<std::string_view, Builtin>, 9> kBuiltins{{
    {"sin", Builtin::Sin},
    {"cos", Builtin::Cos},
    {"exp", Builtin::Exp},
    {"log", Builtin::Log},
    {"sqrt", Builtin::Sqrt},
    {"abs", Builtin::Abs},
    {"floor", Builtin::Floor},
    {"min", Builtin::Min},
    {"max", Builtin::Max},
}};

NodePtr make_node(NodeKind kind, double value = 0.0, Builtin fn = Builtin::Sin,
                  std::vector<NodePtr> args = {}) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->value = value;
    n->fn = fn;
    n->args = std::move(args);
    return n;
}

double apply_builtin(Builtin fn, double a, double b) {
    switch (fn) {
    case Builtin::Sin: return std::sin(a);
    case Builtin::Cos: return std::cos(a);
    case Builtin::Exp: return std::exp(a);
    case Builtin::Log: return a < 0.0 ? std::nan("") : std::log(a);
    case Builtin::Sqrt: return a < 0.0 ? std::nan("") : std::sqrt(a);
    case Builtin::Abs: return std::fabs(a);
    case Builtin::Floor: return std::floor(a);
    case Builtin::Min: return std::fmin(a, b);
    case Builtin::Max: return std::fmax(a, b);
    }
    return std::nan("");
}

double apply_binary(NodeKind op, double a, double b) {
    switch (op) {
    case NodeKind::Add: return a + b;
    case NodeKind::Sub: return a - b;
    case NodeKind::Mul: return a * b;
    case NodeKind::Div: return a / b;
    case NodeKind::Pow: return real_pow(a, b);
    default: return std::nan("");
    }
}

// ---------------------------------------------------------------- lexer

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
    Tok kind;
    std::size_t offset;
    std::string_view text;
    double number = 0.0;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        const std::size_t start = pos_;
        if (pos_ >= src_.size()) return {Tok::End, start, {}};
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number(start);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            return {Tok::Ident, start, src_.substr(start, pos_ - start)};
        }
        ++pos_;
        switch (c) {
        case '+': return {Tok::Plus, start, src_.substr(start, 1)};
        case '-': return {Tok::Minus, start, src_.substr(start, 1)};
        case '*': return {Tok::Star, start, src_.substr(start, 1)};
        case '/': return {Tok::Slash, start, src_.substr(start, 1)};
        case '^': return {Tok::Caret, start, src_.substr(start, 1)};
        case '(': return {Tok::LParen, start, src_.substr(start, 1)};
        case ')': return {Tok::RParen, start, src_.substr(start, 1)};
        case ',': return {Tok::Comma, start, src_.substr(start, 1)};
        default:
            throw ParseError(ParseErrorKind::UnexpectedToken, start,
                             "unexpected character '" + std::string(1, c) + "'");
        }
    }

private:
    Token number(std::size_t start) {
        auto digits = [&] {
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        };
        digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            digits();
        }
        // Exponent only when followed by a digit (optionally signed); "2e" stays 2 then e.
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
            if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
                pos_ = p;
                digits();
            }
        }
        const std::string_view text = src_.substr(start, pos_ - start);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
            throw ParseError(ParseErrorKind::UnexpectedToken, start,
                             "malformed number '" + std::string(text) + "'");
        return {Tok::Number, start, text, v};
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

// ---------------------------------------------------------------- parser

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) { advance(); }

    Expr parse_all() {
        Expr e = parse_binary(0);
        if (cur_.kind == Tok::RParen)
            throw ParseError(ParseErrorKind::UnbalancedParenthesis, cur_.offset, "unmatched ')'");
        if (cur_.kind != Tok::End) unexpected();
        return e;
    }

private:
    static int precedence(Tok t) {
        switch (t) {
        case Tok::Plus:
        case Tok::Minus: return 1;
        case Tok::Star:
        case Tok::Slash: return 2;
        case Tok::Caret: return 3;
        default: return -1;
        }
    }

    Expr parse_binary(int min_prec) {
        Expr lhs = parse_unary();
        for (;;) {
            const Tok op = cur_.kind;
            const int prec = precedence(op);
            if (prec < 0 || prec < min_prec) return lhs;
            advance();
            // '^' is right associative: recurse at the same level.
            Expr rhs = parse_binary(op == Tok::Caret ? prec : prec + 1);
            lhs = make_binary(kind_of(op), std::move(lhs), std::move(rhs));
        }
    }

    static NodeKind kind_of(Tok t) {
        switch (t) {
        case Tok::Plus: return NodeKind::Add;
        case Tok::Minus: return NodeKind::Sub;
        case Tok::Star: return NodeKind::Mul;
        case Tok::Slash: return NodeKind::Div;
        default: return NodeKind::Pow;
        }
    }

    Expr parse_unary() {
        if (cur_.kind == Tok::Minus) {
            advance();
            return make_unary(NodeKind::Neg, parse_unary());
        }
        if (cur_.kind == Tok::Plus) {
            advance();
            return parse_unary();
        }
        return parse_primary();
    }

    Expr parse_primary() {
        const Token tok = cur_;
        switch (tok.kind) {
        case Tok::Number:
            advance();
            return Expr::constant(tok.number);
        case Tok::LParen: {
            advance();
            ++depth_;
            Expr inner = parse_binary(0);
            expect_rparen(tok.offset);
            return inner;
        }
        case Tok::Ident: return parse_identifier(tok);
        default: unexpected();
        }
    }

    Expr parse_identifier(const Token& tok) {
        advance();
        const std::string_view name = tok.text;
        if (name == "x" || name == "s") return Expr::x();
        if (name == "y" || name == "t") return Expr::y();
        if (name == "pi") return Expr::constant(std::numbers::pi);
        if (name == "e") return Expr::constant(std::numbers::e);
        const auto fn = builtin_from_name(name);
        if (!fn)
            throw ParseError(ParseErrorKind::UnknownIdentifier, tok.offset,
                             "unknown identifier '" + std::string(name) + "'");
        if (cur_.kind != Tok::LParen) unexpected();
        const std::size_t open = cur_.offset;
        advance();
        ++depth_;
        std::vector<Expr> args;
        args.push_back(parse_binary(0));
        while (cur_.kind == Tok::Comma) {
            advance();
            args.push_back(parse_binary(0));
        }
        expect_rparen(open);
        if (args.size() != builtin_arity(*fn))
            throw ParseError(ParseErrorKind::ArityMismatch, tok.offset,
                             std::string(name) + " expects " + std::to_string(builtin_arity(*fn)) +
                                 " argument(s), got " + std::to_string(args.size()));
        return Expr::call(*fn, std::move(args));
    }

    void expect_rparen(std::size_t open_offset) {
        if (cur_.kind != Tok::RParen) {
            if (cur_.kind == Tok::End)
                throw ParseError(ParseErrorKind::UnbalancedParenthesis, open_offset,
                                 "unclosed '('");
            unexpected();
        }
        --depth_;
        advance();
    }

    [[noreturn]] void unexpected() const {
        if (cur_.kind == Tok::End) {
            if (depth_ > 0)
                throw ParseError(ParseErrorKind::UnbalancedParenthesis, cur_.offset,
                                 "input ends inside parentheses");
            throw ParseError(ParseErrorKind::UnexpectedToken, cur_.offset,
                             "unexpected end of input");
        }
        throw ParseError(ParseErrorKind::UnexpectedToken, cur_.offset,
                         "unexpected token '" + std::string(cur_.text) + "'");
    }

    void advance() { cur_ = lex_.next(); }

    Lexer lex_;
    Token cur_{Tok::End, 0, {}};
    int depth_ = 0;
};

// ---------------------------------------------------------------- printer

void print_into(const Node& n, std::string& out) {
    switch (n.kind) {
    case NodeKind::Constant: {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", n.value);
        if (n.value < 0.0 || std::signbit(n.value)) {
            out += '(';
            out += buf;
            out += ')';
        } else {
            out += buf;
        }
        return;
    }
    case NodeKind::VarX: out += 'x'; return;
    case NodeKind::VarY: out += 'y'; return;
    case NodeKind::Neg:
        out += "(-";
        print_into(*n.args[0], out);
        out += ')';
        return;
    case NodeKind::Call:
        out += builtin_name(n.fn);
        out += '(';
        for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i) out += ", ";
            print_into(*n.args[i], out);
        }
        out += ')';
        return;
    default: {
        static constexpr std::string_view ops = "+-*/^";
        const char op = ops[static_cast<int>(n.kind) - static_cast<int>(NodeKind::Add)];
        out += '(';
        print_into(*n.args[0], out);
        out += ' ';
        out += op;
        out += ' ';
        print_into(*n.args[1], out);
        out += ')';
    }
    }
}

double eval_node(const Node& n, double x, double y) {
    switch (n.kind) {
    case NodeKind::Constant: return n.value;
    case NodeKind::VarX: return x;
    case NodeKind::VarY: return y;
    case NodeKind::Neg: return -eval_node(*n.args[0], x, y);
    case NodeKind::Call: {
        const double a = eval_node(*n.args[0], x, y);
        const double b = n.args.size() > 1 ? eval_node(*n.args[1], x, y) : 0.0;
        return apply_builtin(n.fn, a, b);
    }
    default:
        return apply_binary(n.kind, eval_node(*n.args[0], x, y), eval_node(*n.args[1], x, y));
    }
}

// ---------------------------------------------------------------- differentiation

struct Differentiator {
    Var v;
    bool flagged = false;

    Expr d(const Expr& e) {
        if (!e.depends_on(v)) return Expr::constant(0.0);
        const Node& n = e.root();
        auto arg = [&](std::size_t i) { return Expr(n.args[i]); };
        switch (n.kind) {
        case NodeKind::Constant: return Expr::constant(0.0);
        case NodeKind::VarX:
        case NodeKind::VarY: return Expr::constant(1.0);
        case NodeKind::Neg: return -d(arg(0));
        case NodeKind::Add: return d(arg(0)) + d(arg(1));
        case NodeKind::Sub: return d(arg(0)) - d(arg(1));
        case NodeKind::Mul: return d(arg(0)) * arg(1) + arg(0) * d(arg(1));
        case NodeKind::Div: {
            const Expr u = arg(0), w = arg(1);
            return (d(u) * w - u * d(w)) / pow(w, Expr::constant(2.0));
        }
        case NodeKind::Pow: {
            const Expr u = arg(0), p = arg(1);
            if (!p.depends_on(v)) return p * pow(u, p - Expr::constant(1.0)) * d(u);
            if (!u.depends_on(v)) return e * call(Builtin::Log, u) * d(p);
            return e * (d(p) * call(Builtin::Log, u) + p * d(u) / u);
        }
        case NodeKind::Call: return d_call(e, n);
        }
        return Expr::constant(0.0);
    }

    Expr d_call(const Expr& e, const Node& n) {
        const Expr u(n.args[0]);
        switch (n.fn) {
        case Builtin::Sin: return call(Builtin::Cos, u) * d(u);
        case Builtin::Cos: return -call(Builtin::Sin, u) * d(u);
        case Builtin::Exp: return e * d(u);
        case Builtin::Log: return d(u) / u;
        case Builtin::Sqrt: return d(u) / (Expr::constant(2.0) * e);
        case Builtin::Floor: flagged = true; return Expr::constant(0.0);
        case Builtin::Abs: flagged = true; return d(u) * u / e;
        case Builtin::Min:
        case Builtin::Max: {
            // min(u,w)' = (u' + w' - (u'-w') sgn(u-w)) / 2, max with + sign; sgn(z) = z/|z|.
            flagged = true;
            const Expr w(n.args[1]);
            const Expr du = d(u), dw = d(w);
            const Expr sgn = (u - w) / call(Builtin::Abs, u - w);
            const Expr jump = (du - dw) * sgn;
            const Expr sum = n.fn == Builtin::Min ? du + dw - jump : du + dw + jump;
            return sum / Expr::constant(2.0);
        }
        }
        return Expr::constant(0.0);
    }
};

Expr substitute_node(const NodePtr& n, const Expr& fx, const Expr& fy) {
    switch (n->kind) {
    case NodeKind::Constant: return Expr(n);
    case NodeKind::VarX: return fx;
    case NodeKind::VarY: return fy;
    default: {
        std::vector<NodePtr> args;
        args.reserve(n->args.size());
        for (const auto& a : n->args) args.push_back(substitute_node(a, fx, fy).node());
        return Expr(make_node(n->kind, n->value, n->fn, std::move(args)));
    }
    }
}

bool depends(const Node& n, NodeKind var) {
    if (n.kind == var) return true;
    for (const auto& a : n.args)
        if (depends(*a, var)) return true;
    return false;
}

bool contains_fn(const Node& n, Builtin fn) {
    if (n.kind == NodeKind::Call && n.fn == fn) return true;
    for (const auto& a : n.args)
        if (contains_fn(*a, fn)) return true;
    return false;
}

bool equal_nodes(const Node& a, const Node& b) {
    if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
    if (a.kind == NodeKind::Constant && a.value != b.value) return false;
    if (a.kind == NodeKind::Call && a.fn != b.fn) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!equal_nodes(*a.args[i], *b.args[i])) return false;
    return true;
}

Expr fold_or(NodeKind kind, const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) {
        const double v = apply_binary(kind, a.root().value, b.root().value);
        if (std::isfinite(v)) return Expr::constant(v);
    }
    return make_binary(kind, a, b);
}

} // namespace

// ---------------------------------------------------------------- public API

std::string_view builtin_name(Builtin fn) {
    for (const auto& [name, b] : kBuiltins)
        if (b == fn) return name;
    return "?";
}

std::optional<Builtin> builtin_from_name(std::string_view name) {
    for (const auto& [n, b] : kBuiltins)
        if (n == name) return b;
    return std::nullopt;
}

std::size_t builtin_arity(Builtin fn) {
    return fn == Builtin::Min || fn == Builtin::Max ? 2 : 1;
}

Expr::Expr() : root_(make_node(NodeKind::Constant)) {}

Expr::Expr(NodePtr root) : root_(std::move(root)) {}

Expr Expr::constant(double v) { return Expr(make_node(NodeKind::Constant, v)); }

Expr Expr::var(Var v) { return Expr(make_node(v == Var::X ? NodeKind::VarX : NodeKind::VarY)); }

Expr Expr::call(Builtin fn, std::vector<Expr> args) {
    if (args.size() != builtin_arity(fn))
        throw InvalidArgument("wrong number of arguments for " + std::string(builtin_name(fn)));
    std::vector<NodePtr> nodes;
    for (auto& a : args) nodes.push_back(a.node());
    return Expr(make_node(NodeKind::Call, 0.0, fn, std::move(nodes)));
}

bool Expr::depends_on(Var v) const {
    return depends(*root_, v == Var::X ? NodeKind::VarX : NodeKind::VarY);
}

bool Expr::contains(Builtin fn) const { return contains_fn(*root_, fn); }

bool Expr::structurally_equal(const Expr& other) const { return equal_nodes(*root_, *other.root_); }

Expr make_unary(NodeKind kind, Expr operand) {
    return Expr(make_node(kind, 0.0, Builtin::Sin, {operand.node()}));
}

Expr make_binary(NodeKind kind, Expr lhs, Expr rhs) {
    return Expr(make_node(kind, 0.0, Builtin::Sin, {lhs.node(), rhs.node()}));
}

Expr operator+(const Expr& a, const Expr& b) {
    if (a.is_constant(0.0)) return b;
    if (b.is_constant(0.0)) return a;
    return fold_or(NodeKind::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
    if (b.is_constant(0.0)) return a;
    if (a.is_constant(0.0)) return -b;
    return fold_or(NodeKind::Sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
    if (a.is_constant(1.0)) return b;
    if (b.is_constant(1.0)) return a;
    return fold_or(NodeKind::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
    if (b.is_constant(1.0)) return a;
    if (a.is_constant(0.0) && !b.is_constant(0.0)) return Expr::constant(0.0);
    return fold_or(NodeKind::Div, a, b);
}

Expr operator-(const Expr& a) {
    if (a.is_constant()) return Expr::constant(-a.root().value);
    if (a.kind() == NodeKind::Neg) return Expr(a.root().args[0]);
    return make_unary(NodeKind::Neg, a);
}

Expr pow(const Expr& base, const Expr& exponent) {
    if (exponent.is_constant(1.0)) return base;
    if (exponent.is_constant(0.0)) return Expr::constant(1.0);
    return fold_or(NodeKind::Pow, base, exponent);
}

Expr call(Builtin fn, const Expr& arg) {
    if (arg.is_constant()) {
        const double v = apply_builtin(fn, arg.root().value, 0.0);
        if (std::isfinite(v)) return Expr::constant(v);
    }
    return Expr::call(fn, {arg});
}

ParseError::ParseError(ParseErrorKind kind, std::size_t offset, const std::string& message)
    : Error(std::string(to_string(kind)) + " at offset " + std::to_string(offset) + ": " + message),
      kind_(kind),
      offset_(offset) {}

std::string_view to_string(ParseErrorKind kind) {
    switch (kind) {
    case ParseErrorKind::UnexpectedToken: return "unexpected token";
    case ParseErrorKind::UnbalancedParenthesis: return "unbalanced parenthesis";
    case ParseErrorKind::UnknownIdentifier: return "unknown identifier";
    case ParseErrorKind::ArityMismatch: return "arity mismatch";
    }
    return "parse error";
}

Expr parse(std::string_view src) { return Parser(src).parse_all(); }

std::string print(const Expr& e) {
    std::string out;
    print_into(e.root(), out);
    return out;
}

double eval(const Expr& e, double x, double y) { return eval_node(e.root(), x, y); }

double real_pow(double base, double exponent) {
    if (exponent == std::trunc(exponent)) return std::pow(base, exponent);
    if (base < 0.0) return std::nan("");
    if (base == 0.0) return exponent > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::exp(exponent * std::log(base));
}

Derivative differentiate(const Expr& e, Var v) {
    Differentiator diff{v};
    Expr out = diff.d(e);
    return {std::move(out), diff.flagged};
}

Expr substitute(const Expr& e, const Expr& for_x, const Expr& for_y) {
    return substitute_node(e.node(), for_x, for_y);
}

// ---------------------------------------------------------------- Program

namespace {

void emit(const Node& n, std::vector<std::pair<const Node*, std::size_t>>& order) {
    for (const auto& a : n.args) emit(*a, order);
    order.push_back({&n, 0});
}

} // namespace

Program::Program(const Expr& e) {
    std::vector<std::pair<const Node*, std::size_t>> order;
    emit(e.root(), order);
    std::size_t depth = 0;
    for (const auto& [n, unused] : order) {
        code_.push_back({n->kind, n->fn, n->value});
        switch (n->kind) {
        case NodeKind::Constant:
        case NodeKind::VarX:
        case NodeKind::VarY: ++depth; break;
        case NodeKind::Neg: break;
        case NodeKind::Call: depth -= n->args.size() - 1; break;
        default: --depth; break;
        }
        max_stack_ = std::max(max_stack_, depth);
    }
}

double Program::operator()(double x, double y) const {
    constexpr std::size_t kInline = 64;
    std::array<double, kInline> inline_stack{};
    std::vector<double> heap_stack;
    double* stack = inline_stack.data();
    if (max_stack_ > kInline) {
        heap_stack.resize(max_stack_);
        stack = heap_stack.data();
    }
    std::size_t sp = 0;
    for (const Instr& in : code_) {
        switch (in.op) {
        case NodeKind::Constant: stack[sp++] = in.value; break;
        case NodeKind::VarX: stack[sp++] = x; break;
        case NodeKind::VarY: stack[sp++] = y; break;
        case NodeKind::Neg: stack[sp - 1] = -stack[sp - 1]; break;
        case NodeKind::Call:
            if (builtin_arity(in.fn) == 2) {
                stack[sp - 2] = apply_builtin(in.fn, stack[sp - 2], stack[sp - 1]);
                --sp;
            } else {
                stack[sp - 1] = apply_builtin(in.fn, stack[sp - 1], 0.0);
            }
            break;
        default:
            stack[sp - 2] = apply_binary(in.op, stack[sp - 2], stack[sp - 1]);
            --sp;
            break;
        }
    }
    return stack[0];
}

} // namespace steff2d::expr
