#include "stolfv/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "stolfv/errors.hpp"

namespace stolfv {

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr number(double v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Number;
    n->value = v;
    return n;
}

NodePtr variable(int k) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Variable;
    n->variable = k;
    return n;
}

NodePtr unary(char op, NodePtr a) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Unary;
    n->op = op;
    n->lhs = std::move(a);
    return n;
}

NodePtr binary(char op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Binary;
    n->op = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

NodePtr call(Func f, NodePtr a) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Call;
    n->func = f;
    n->lhs = std::move(a);
    return n;
}

struct FuncName {
    const char* name;
    Func func;
};

constexpr FuncName kFuncs[] = {{"sin", Func::Sin},   {"cos", Func::Cos},   {"exp", Func::Exp},
                               {"log", Func::Log},   {"sqrt", Func::Sqrt}, {"abs", Func::Abs}};

const char* func_name(Func f) {
    for (const auto& e : kFuncs) {
        if (e.func == f) return e.name;
    }
    return "?";
}

// Grammar:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | ident | ident '(' expr ')' | '(' expr ')'
class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip();
        if (pos_ != s_.size()) throw SyntaxError("unexpected trailing input", pos_);
        return e;
    }

private:
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) lhs = binary('+', lhs, term());
            else if (accept('-')) lhs = binary('-', lhs, term());
            else return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary_expr();
        for (;;) {
            if (accept('*')) lhs = binary('*', lhs, unary_expr());
            else if (accept('/')) lhs = binary('/', lhs, unary_expr());
            else return lhs;
        }
    }

    NodePtr unary_expr() {
        if (accept('-')) return unary('-', unary_expr());
        if (accept('+')) return unary_expr();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return binary('^', base, unary_expr());
        return base;
    }

    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) throw SyntaxError("unexpected end of input", pos_);
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!accept(')')) throw SyntaxError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number_literal();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw SyntaxError(std::string("unexpected character '") + c + "'", pos_);
    }

    NodePtr number_literal() {
        const std::size_t start = pos_;
        double v = 0.0;
        auto res = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
        if (res.ec == std::errc::result_out_of_range) throw SyntaxError("number out of range", start);
        if (res.ec != std::errc()) throw SyntaxError("malformed number", start);
        pos_ = static_cast<std::size_t>(res.ptr - s_.data());
        return number(v);
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        const std::string_view id = s_.substr(start, pos_ - start);
        for (const auto& f : kFuncs) {
            if (id == f.name) {
                if (!accept('(')) throw SyntaxError("expected '(' after function name", pos_);
                NodePtr arg = expr();
                if (!accept(')')) throw SyntaxError("expected ')'", pos_);
                return call(f.func, arg);
            }
        }
        if (id == "x") return variable(0);
        if (id == "y") return variable(1);
        if (id == "z") return variable(2);
        if (id == "pi") return number(std::numbers::pi);
        if (id == "e") return number(std::numbers::e);
        throw SyntaxError("unknown identifier '" + std::string(id) + "'", start);
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

double checked(double v, const char* what) {
    if (!std::isfinite(v)) throw EvalError(std::string("non-finite result in ") + what);
    return v;
}

double eval(const ExprNode* n, const Point& p) {
    switch (n->kind) {
        case ExprKind::Number: return n->value;
        case ExprKind::Variable: return p[n->variable];
        case ExprKind::Unary: return -eval(n->lhs.get(), p);
        case ExprKind::Binary: {
            const double a = eval(n->lhs.get(), p);
            const double b = eval(n->rhs.get(), p);
            switch (n->op) {
                case '+': return checked(a + b, "addition");
                case '-': return checked(a - b, "subtraction");
                case '*': return checked(a * b, "multiplication");
                case '/':
                    if (b == 0.0) throw EvalError("division by zero");
                    return checked(a / b, "division");
                case '^':
                    if (a < 0.0 && b != std::floor(b)) throw EvalError("negative base with non-integer exponent");
                    if (a == 0.0 && b < 0.0) throw EvalError("zero raised to a negative power");
                    return checked(std::pow(a, b), "power");
            }
            throw EvalError("unknown operator");
        }
        case ExprKind::Call: {
            const double a = eval(n->lhs.get(), p);
            switch (n->func) {
                case Func::Sin: return std::sin(a);
                case Func::Cos: return std::cos(a);
                case Func::Exp: return checked(std::exp(a), "exp");
                case Func::Log:
                    if (!(a > 0.0)) throw EvalError("log of a non-positive number");
                    return std::log(a);
                case Func::Sqrt:
                    if (a < 0.0) throw EvalError("sqrt of a negative number");
                    return std::sqrt(a);
                case Func::Abs: return std::abs(a);
            }
            throw EvalError("unknown function");
        }
    }
    throw EvalError("corrupt expression");
}

int arity_of(const ExprNode* n) {
    if (n == nullptr) return 0;
    if (n->kind == ExprKind::Variable) return n->variable + 1;
    return std::max(arity_of(n->lhs.get()), arity_of(n->rhs.get()));
}

void print(const ExprNode* n, std::string& out) {
    switch (n->kind) {
        case ExprKind::Number: {
            char buf[64];
            auto r = std::to_chars(buf, buf + sizeof buf, n->value, std::chars_format::general, 17);
            out.append(buf, r.ptr);
            return;
        }
        case ExprKind::Variable: out += "xyz"[n->variable]; return;
        case ExprKind::Unary:
            out += "(-";
            print(n->lhs.get(), out);
            out += ")";
            return;
        case ExprKind::Binary:
            out += "(";
            print(n->lhs.get(), out);
            out += n->op;
            print(n->rhs.get(), out);
            out += ")";
            return;
        case ExprKind::Call:
            out += func_name(n->func);
            out += "(";
            print(n->lhs.get(), out);
            out += ")";
            return;
    }
}

bool equal(const ExprNode* a, const ExprNode* b) {
    if (a == b) return true;
    if (a == nullptr || b == nullptr || a->kind != b->kind) return false;
    switch (a->kind) {
        case ExprKind::Number: return a->value == b->value;
        case ExprKind::Variable: return a->variable == b->variable;
        case ExprKind::Unary: return equal(a->lhs.get(), b->lhs.get());
        case ExprKind::Binary: return a->op == b->op && equal(a->lhs.get(), b->lhs.get()) && equal(a->rhs.get(), b->rhs.get());
        case ExprKind::Call: return a->func == b->func && equal(a->lhs.get(), b->lhs.get());
    }
    return false;
}

}  // namespace

Expr parse_expr(std::string_view text) { return Expr(Parser(text).parse()); }

double Expr::operator()(const Point& p) const {
    if (!root_) throw EvalError("empty expression");
    return checked(eval(root_.get(), p), "expression");
}

int Expr::arity() const { return arity_of(root_.get()); }

std::string Expr::to_string() const {
    std::string out;
    if (root_) print(root_.get(), out);
    return out;
}

bool operator==(const Expr& a, const Expr& b) { return equal(a.root(), b.root()); }

}  // namespace stolfv
