#include "sbvp/expr.hpp"

#include "sbvp/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <utility>
#include <variant>

namespace sbvp {

struct Expr::Node {
    struct Constant {
        double value;
    };
    struct Variable {};
    struct Unary {
        UnaryOp op;
        Expr operand;
    };
    struct Binary {
        BinaryOp op;
        Expr lhs;
        Expr rhs;
    };

    std::variant<Constant, Variable, Unary, Binary> data;
    int depth = 1;
};

Expr Expr::constant(double value) {
    return Expr(std::make_shared<const Node>(Node{Node::Constant{value}}));
}

Expr Expr::variable() {
    return Expr(std::make_shared<const Node>(Node{Node::Variable{}}));
}

Expr Expr::unary(UnaryOp op, Expr operand) {
    const int depth = operand.depth() + 1;
    return Expr(std::make_shared<const Node>(Node{Node::Unary{op, std::move(operand)}, depth}));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
    const int depth = std::max(lhs.depth(), rhs.depth()) + 1;
    return Expr(std::make_shared<const Node>(Node{Node::Binary{op, std::move(lhs), std::move(rhs)}, depth}));
}

int Expr::depth() const {
    return root_->depth;
}

bool Expr::is_constant() const {
    return std::holds_alternative<Node::Constant>(root_->data);
}

namespace {

constexpr std::array<std::pair<std::string_view, UnaryOp>, 7> kFunctions{{
    {"sin", UnaryOp::Sin},
    {"cos", UnaryOp::Cos},
    {"exp", UnaryOp::Exp},
    {"log", UnaryOp::Log},
    {"sqrt", UnaryOp::Sqrt},
    {"abs", UnaryOp::Abs},
    {"tanh", UnaryOp::Tanh},
}};

std::string_view function_name(UnaryOp op) {
    for (const auto& [name, fn] : kFunctions) {
        if (fn == op) return name;
    }
    return "-";
}

double checked(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw EvalError(std::string("expression is not finite (") + what + ")");
    }
    return v;
}

double apply(UnaryOp op, double v) {
    switch (op) {
    case UnaryOp::Negate: return -v;
    case UnaryOp::Sin: return checked(std::sin(v), "sin");
    case UnaryOp::Cos: return checked(std::cos(v), "cos");
    case UnaryOp::Exp: return checked(std::exp(v), "exp overflow");
    case UnaryOp::Log:
        if (v <= 0.0) throw EvalError("log of a non-positive number");
        return checked(std::log(v), "log");
    case UnaryOp::Sqrt:
        if (v < 0.0) throw EvalError("sqrt of a negative number");
        return std::sqrt(v);
    case UnaryOp::Abs: return std::fabs(v);
    case UnaryOp::Tanh: return std::tanh(v);
    }
    return v;
}

double apply(BinaryOp op, double l, double r) {
    switch (op) {
    case BinaryOp::Add: return checked(l + r, "overflow in +");
    case BinaryOp::Sub: return checked(l - r, "overflow in -");
    case BinaryOp::Mul: return checked(l * r, "overflow in *");
    case BinaryOp::Div:
        if (r == 0.0) throw EvalError("division by zero");
        return checked(l / r, "overflow in /");
    case BinaryOp::Pow:
        if (l < 0.0 && std::trunc(r) != r) {
            throw EvalError("negative base with non-integer exponent");
        }
        if (l == 0.0 && r < 0.0) throw EvalError("zero raised to a negative power");
        return checked(std::pow(l, r), "overflow in ^");
    }
    return 0.0;
}

std::string format_number(double v) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), end);
}

char binary_symbol(BinaryOp op) {
    switch (op) {
    case BinaryOp::Add: return '+';
    case BinaryOp::Sub: return '-';
    case BinaryOp::Mul: return '*';
    case BinaryOp::Div: return '/';
    case BinaryOp::Pow: return '^';
    }
    return '?';
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr parse() {
        Expr e = expr();
        check_depth(e);
        skip_ws();
        if (pos_ != text_.size()) {
            throw ParseError(pos_, "operator or end of input");
        }
        return e;
    }

private:
    // Bounds recursion on adversarial input such as "((((...".
    static constexpr int kMaxDepth = 200;
    // Bounds the tree height so evaluation and destruction cannot exhaust the stack.
    static constexpr int kMaxTreeDepth = 2000;

    Expr check_depth(Expr e) const {
        if (e.depth() > kMaxTreeDepth) throw ParseError(pos_, "a shorter expression");
        return e;
    }

    struct DepthGuard {
        explicit DepthGuard(Parser& p) : p(p) {
            if (++p.depth_ > kMaxDepth) throw ParseError(p.pos_, "shallower nesting");
        }
        ~DepthGuard() { --p.depth_; }
        Parser& p;
    };

    void skip_ws() {
        while (pos_ < text_.size() &&
               (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r')) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) throw ParseError(pos_, std::string("'") + c + "'");
    }

    Expr expr() {
        DepthGuard guard(*this);
        Expr lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = check_depth(Expr::binary(BinaryOp::Add, std::move(lhs), term()));
            } else if (accept('-')) {
                lhs = check_depth(Expr::binary(BinaryOp::Sub, std::move(lhs), term()));
            } else {
                return lhs;
            }
        }
    }

    Expr term() {
        Expr lhs = factor();
        for (;;) {
            if (accept('*')) {
                lhs = check_depth(Expr::binary(BinaryOp::Mul, std::move(lhs), factor()));
            } else if (accept('/')) {
                lhs = check_depth(Expr::binary(BinaryOp::Div, std::move(lhs), factor()));
            } else {
                return lhs;
            }
        }
    }

    Expr factor() {
        DepthGuard guard(*this);
        if (accept('-')) return Expr::unary(UnaryOp::Negate, factor());
        return power();
    }

    Expr power() {
        Expr base = atom();
        if (accept('^')) return Expr::binary(BinaryOp::Pow, std::move(base), factor());
        return base;
    }

    static bool is_digit(char c) { return c >= '0' && c <= '9'; }
    static bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }

    Expr number() {
        const std::size_t start = pos_;
        std::size_t p = pos_;
        bool digits = false;
        while (p < text_.size() && is_digit(text_[p])) { ++p; digits = true; }
        if (p < text_.size() && text_[p] == '.') {
            ++p;
            while (p < text_.size() && is_digit(text_[p])) { ++p; digits = true; }
        }
        if (!digits) throw ParseError(start, "number");
        if (p < text_.size() && (text_[p] == 'e' || text_[p] == 'E')) {
            std::size_t q = p + 1;
            if (q < text_.size() && (text_[q] == '+' || text_[q] == '-')) ++q;
            if (q >= text_.size() || !is_digit(text_[q])) throw ParseError(q, "exponent digits");
            while (q < text_.size() && is_digit(text_[q])) ++q;
            p = q;
        }
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + p, value);
        if (ec == std::errc::result_out_of_range) throw ParseError(start, "number in double range");
        if (ec != std::errc() || ptr != text_.data() + p) throw ParseError(start, "number");
        pos_ = p;
        return Expr::constant(value);
    }

    Expr atom() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError(pos_, "number, 'x', function or '('");
        const char c = text_[pos_];
        if (is_digit(c) || c == '.') return number();
        if (c == '(') {
            ++pos_;
            Expr inner = expr();
            expect(')');
            return inner;
        }
        if (is_alpha(c)) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && (is_alpha(text_[pos_]) || is_digit(text_[pos_]))) ++pos_;
            const std::string_view ident = text_.substr(start, pos_ - start);
            if (ident == "x") return Expr::variable();
            for (const auto& [name, op] : kFunctions) {
                if (name == ident) {
                    expect('(');
                    Expr arg = expr();
                    expect(')');
                    return Expr::unary(op, std::move(arg));
                }
            }
            throw UnknownFunction(start, std::string(ident));
        }
        throw ParseError(pos_, "number, 'x', function or '('");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int depth_ = 0;
};

} // namespace

double Expr::operator()(double x) const {
    return std::visit(
        [x](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Node::Constant>) {
                return checked(n.value, "constant");
            } else if constexpr (std::is_same_v<T, Node::Variable>) {
                return x;
            } else if constexpr (std::is_same_v<T, Node::Unary>) {
                return apply(n.op, n.operand(x));
            } else {
                return apply(n.op, n.lhs(x), n.rhs(x));
            }
        },
        root_->data);
}

std::string Expr::to_string() const {
    return std::visit(
        [](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Node::Constant>) {
                // Negative literals are not in the grammar.
                if (std::signbit(n.value)) return "(-" + format_number(-n.value) + ")";
                return format_number(n.value);
            } else if constexpr (std::is_same_v<T, Node::Variable>) {
                return "x";
            } else if constexpr (std::is_same_v<T, Node::Unary>) {
                if (n.op == UnaryOp::Negate) return "(-" + n.operand.to_string() + ")";
                return std::string(function_name(n.op)) + "(" + n.operand.to_string() + ")";
            } else {
                return "(" + n.lhs.to_string() + " " + binary_symbol(n.op) + " " + n.rhs.to_string() + ")";
            }
        },
        root_->data);
}

Expr parse_expr(std::string_view text) {
    return Parser(text).parse();
}

} // namespace sbvp
