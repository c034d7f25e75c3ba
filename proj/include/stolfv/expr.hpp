#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "stolfv/mesh.hpp"

namespace stolfv {

enum class ExprKind { Number, Variable, Unary, Binary, Call };

enum class Func { Sin, Cos, Exp, Log, Sqrt, Abs };

/// Immutable expression tree node. Variables are indexed 0 = x, 1 = y, 2 = z;
/// the constants pi and e are folded into Number nodes at parse time.
struct ExprNode {
    ExprKind kind = ExprKind::Number;
    double value = 0.0;
    int variable = 0;
    char op = 0;
    Func func = Func::Sin;
    std::shared_ptr<const ExprNode> lhs;
    std::shared_ptr<const ExprNode> rhs;
};

class Expr {
public:
    Expr() = default;
    explicit Expr(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {}

    const ExprNode* root() const { return root_.get(); }
    bool empty() const { return root_ == nullptr; }

    /// Evaluates at p; throws EvalError on domain violations or non-finite results.
    double operator()(const Point& p) const;
    double operator()(double x) const { return (*this)(Point{x, 0.0, 0.0}); }

    /// Highest variable index used plus one (0 for constants).
    int arity() const;

    /// Fully parenthesised text that parses back to the same tree.
    std::string to_string() const;

    friend bool operator==(const Expr& a, const Expr& b);

private:
    std::shared_ptr<const ExprNode> root_;
};

Expr parse_expr(std::string_view text);

}  // namespace stolfv
