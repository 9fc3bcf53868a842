#pragma once
// Real-valued arithmetic expressions in n variables. A point belongs to the
// domain of an expression exactly when evaluation stays finite everywhere.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "limitscout/errors.hpp"
#include "limitscout/format.hpp"

namespace limitscout {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, const std::string& message)
        : std::runtime_error("parse error at offset " + std::to_string(offset) + ": " + message),
          offset_(offset), message_(message) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::size_t offset_;
    std::string message_;
};

/// Defined(v) with v finite, or Undefined (std::nullopt).
using EvalResult = std::optional<double>;

namespace detail {

enum class Op { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt, Abs };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    Op op = Op::Const;
    double value = 0.0;
    int var = 0;  // 1-based
    Func fn = Func::Sin;
    NodePtr lhs;
    NodePtr rhs;
};

inline const char* func_name(Func f) {
    switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Tan: return "tan";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sqrt: return "sqrt";
    case Func::Abs: return "abs";
    }
    return "?";
}

inline std::optional<Func> func_from_name(std::string_view name) {
    static constexpr Func all[] = {Func::Sin, Func::Cos, Func::Tan, Func::Exp,
                                   Func::Log, Func::Sqrt, Func::Abs};
    for (Func f : all)
        if (name == func_name(f)) return f;
    return std::nullopt;
}

// Real power; a negative base needs an integral exponent.
inline double real_pow(double base, double exponent) {
    if (base < 0.0 && std::nearbyint(exponent) != exponent)
        return std::numeric_limits<double>::quiet_NaN();
    return std::pow(base, exponent);
}

inline bool eval_node(const Node& n, std::span<const double> point, double& out) {
    double a = 0.0;
    double b = 0.0;
    switch (n.op) {
    case Op::Const:
        out = n.value;
        break;
    case Op::Var:
        out = point[static_cast<std::size_t>(n.var - 1)];
        break;
    case Op::Neg:
        if (!eval_node(*n.lhs, point, a)) return false;
        out = -a;
        break;
    case Op::Call:
        if (!eval_node(*n.lhs, point, a)) return false;
        switch (n.fn) {
        case Func::Sin: out = std::sin(a); break;
        case Func::Cos: out = std::cos(a); break;
        case Func::Tan: out = std::tan(a); break;
        case Func::Exp: out = std::exp(a); break;
        case Func::Log: out = a > 0.0 ? std::log(a) : std::numeric_limits<double>::quiet_NaN(); break;
        case Func::Sqrt: out = std::sqrt(a); break;
        case Func::Abs: out = std::fabs(a); break;
        }
        break;
    default:
        if (!eval_node(*n.lhs, point, a)) return false;
        if (!eval_node(*n.rhs, point, b)) return false;
        switch (n.op) {
        case Op::Add: out = a + b; break;
        case Op::Sub: out = a - b; break;
        case Op::Mul: out = a * b; break;
        case Op::Div: out = a / b; break;
        case Op::Pow: out = real_pow(a, b); break;
        default: return false;
        }
        break;
    }
    return std::isfinite(out);
}

inline void collect_vars(const Node& n, std::set<int>& out) {
    if (n.op == Op::Var) out.insert(n.var);
    if (n.lhs) collect_vars(*n.lhs, out);
    if (n.rhs) collect_vars(*n.rhs, out);
}

inline void print_node(const Node& n, std::string& out) {
    switch (n.op) {
    case Op::Const:
        if (n.value < 0.0) {
            out += "(" + format_double(n.value) + ")";
        } else {
            out += format_double(n.value);
        }
        return;
    case Op::Var:
        out += "x" + std::to_string(n.var);
        return;
    case Op::Neg:
        out += "(-";
        print_node(*n.lhs, out);
        out += ")";
        return;
    case Op::Call:
        out += func_name(n.fn);
        out += "(";
        print_node(*n.lhs, out);
        out += ")";
        return;
    default:
        break;
    }
    const char* sym = n.op == Op::Add ? " + " : n.op == Op::Sub ? " - " : n.op == Op::Mul ? " * "
                    : n.op == Op::Div ? " / " : "^";
    out += "(";
    print_node(*n.lhs, out);
    out += sym;
    print_node(*n.rhs, out);
    out += ")";
}

// Recursive descent over
//   expr  := term (("+"|"-") term)*
//   term  := unary (("*"|"/") unary)*
//   unary := "-" unary | power
//   power := atom ("^" unary)?
//   atom  := number | variable | func "(" expr ")" | "(" expr ")"
class Parser {
public:
    Parser(std::string_view src, int arity) : src_(src), arity_(arity) {}

    NodePtr run() {
        NodePtr root = expr();
        skip_ws();
        if (pos_ != src_.size()) fail(pos_, "unexpected character '" + std::string(1, src_[pos_]) + "'");
        return root;
    }

private:
    [[noreturn]] void fail(std::size_t at, const std::string& msg) const { throw ParseError(at, msg); }

    void skip_ws() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' || src_[pos_] == '\r'))
            ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    static NodePtr binary(Op op, NodePtr l, NodePtr r) {
        auto n = std::make_shared<Node>();
        n->op = op;
        n->lhs = std::move(l);
        n->rhs = std::move(r);
        return n;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) lhs = binary(Op::Add, lhs, term());
            else if (accept('-')) lhs = binary(Op::Sub, lhs, term());
            else return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) lhs = binary(Op::Mul, lhs, unary());
            else if (accept('/')) lhs = binary(Op::Div, lhs, unary());
            else return lhs;
        }
    }

    NodePtr unary() {
        if (accept('-')) {
            auto n = std::make_shared<Node>();
            n->op = Op::Neg;
            n->lhs = unary();
            return n;
        }
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (accept('^')) return binary(Op::Pow, base, unary());
        return base;
    }

    static bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
    static bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
    static bool is_digit(char c) { return c >= '0' && c <= '9'; }

    NodePtr atom() {
        skip_ws();
        if (pos_ >= src_.size()) fail(pos_, "unexpected end of input");
        const std::size_t start = pos_;
        const char c = src_[pos_];

        if (c == '(') {
            ++pos_;
            NodePtr inner = expr();
            if (!accept(')')) fail(pos_, "expected ')'");
            return inner;
        }
        if (is_digit(c) || c == '.') return number();
        if (is_ident_start(c)) {
            while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
            const std::string_view name = src_.substr(start, pos_ - start);
            if (auto fn = func_from_name(name)) {
                if (!accept('(')) fail(pos_, "expected '(' after function '" + std::string(name) + "'");
                auto n = std::make_shared<Node>();
                n->op = Op::Call;
                n->fn = *fn;
                n->lhs = expr();
                if (!accept(')')) fail(pos_, "expected ')'");
                return n;
            }
            const int var = variable_index(name);
            if (var == 0) fail(start, "unknown identifier '" + std::string(name) + "'");
            if (var < 0 || var > arity_) fail(start, "unknown variable '" + std::string(name) + "'");
            auto n = std::make_shared<Node>();
            n->op = Op::Var;
            n->var = var;
            return n;
        }
        fail(start, "unexpected character '" + std::string(1, c) + "'");
    }

    // 0 = not a variable name; -1 = variable name not valid at this arity.
    int variable_index(std::string_view name) const {
        if (name.size() == 1 && (name[0] == 'x' || name[0] == 'y' || name[0] == 'z')) {
            if (arity_ > 3) return -1;
            return name[0] == 'x' ? 1 : name[0] == 'y' ? 2 : 3;
        }
        if (name.size() == 2 && name[0] == 'x' && name[1] >= '1' && name[1] <= '9') return name[1] - '0';
        return 0;
    }

    NodePtr number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
            if (p < src_.size() && is_digit(src_[p])) {
                while (p < src_.size() && is_digit(src_[p])) ++p;
                pos_ = p;
            }
        }
        double v = 0.0;
        const char* first = src_.data() + start;
        const char* last = src_.data() + pos_;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec == std::errc::result_out_of_range || (ec == std::errc() && !std::isfinite(v)))
            fail(start, "numeric literal out of range");
        if (ec != std::errc() || ptr != last) fail(start, "malformed number");
        auto n = std::make_shared<Node>();
        n->op = Op::Const;
        n->value = v;
        return n;
    }

    std::string_view src_;
    int arity_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Immutable parsed expression; cheap to copy and safe to share across threads.
class Expression {
public:
    int arity() const noexcept { return arity_; }

    /// Evaluates at `point`. Throws DimensionError on a length mismatch.
    EvalResult evaluate(std::span<const double> point) const {
        if (point.size() != static_cast<std::size_t>(arity_))
            throw DimensionError("evaluate: point has dimension " + std::to_string(point.size()) +
                                 ", expression has arity " + std::to_string(arity_));
        double v = 0.0;
        if (!detail::eval_node(*root_, point, v)) return std::nullopt;
        return v;
    }

    std::set<int> free_variables() const {
        std::set<int> out;
        detail::collect_vars(*root_, out);
        return out;
    }

    /// Fully parenthesized form; re-parses to an identical tree.
    std::string to_string() const {
        std::string out;
        detail::print_node(*root_, out);
        return out;
    }

    friend Expression parse(std::string_view source, int arity);

private:
    Expression(detail::NodePtr root, int arity) : root_(std::move(root)), arity_(arity) {}

    detail::NodePtr root_;
    int arity_;
};

inline Expression parse(std::string_view source, int arity) {
    if (arity < 1) throw UsageError("parse: arity must be positive");
    detail::Parser p(source, arity);
    return Expression(p.run(), arity);
}

inline EvalResult evaluate(const Expression& e, std::span<const double> point) { return e.evaluate(point); }

inline std::set<int> free_variables(const Expression& e) { return e.free_variables(); }

}  // namespace limitscout
