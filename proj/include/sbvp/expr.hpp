#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace sbvp {

enum class UnaryOp { Negate, Sin, Cos, Exp, Log, Sqrt, Abs, Tanh };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

/**
 * Immutable expression tree in the single variable x.
 *
 * Grammar accepted by parse_expr:
 *
 *   expr   := term (("+"|"-") term)*
 *   term   := factor (("*"|"/") factor)*
 *   factor := "-" factor | power
 *   power  := atom ("^" factor)?
 *   atom   := NUMBER | "x" | IDENT "(" expr ")" | "(" expr ")"
 *   IDENT  := sin | cos | exp | log | sqrt | abs | tanh
 *
 * Nodes are shared and never mutated, so copies are cheap and evaluation is
 * safe from any number of threads.
 */
class Expr {
public:
    struct Node;

    static Expr constant(double value);
    static Expr variable();
    static Expr unary(UnaryOp op, Expr operand);
    static Expr binary(BinaryOp op, Expr lhs, Expr rhs);

    /// Throws EvalError when the result (or any intermediate) is NaN or infinite.
    double operator()(double x) const;

    /// Fully parenthesised text that parse_expr maps back to an equivalent tree.
    std::string to_string() const;

    /// Height of the tree; a single leaf has depth 1.
    int depth() const;

    /// True if the tree is a single constant node.
    bool is_constant() const;

    const Node& root() const { return *root_; }

private:
    explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

    std::shared_ptr<const Node> root_;
};

Expr parse_expr(std::string_view text);

inline double eval_expr(const Expr& e, double x) { return e(x); }

} // namespace sbvp
