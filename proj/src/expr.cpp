#include "skewalg/expr.hpp"

#include <cmath>

namespace skewalg {

const char* func_name(FuncKind f) {
    switch (f) {
        case FuncKind::Sin: return "sin";
        case FuncKind::Cos: return "cos";
        case FuncKind::Exp: return "exp";
        case FuncKind::Ln: return "ln";
        case FuncKind::Sqrt: return "sqrt";
    }
    return "?";
}

std::optional<FuncKind> func_from_name(const std::string& name) {
    if (name == "sin") return FuncKind::Sin;
    if (name == "cos") return FuncKind::Cos;
    if (name == "exp") return FuncKind::Exp;
    if (name == "ln") return FuncKind::Ln;
    if (name == "sqrt") return FuncKind::Sqrt;
    return std::nullopt;
}

Expr make_expr_node(ExprNode n) {
    return Expr(std::make_shared<const ExprNode>(std::move(n)));
}

Expr ExprNode::left() const { return Expr(left_); }
Expr ExprNode::right() const { return Expr(right_); }

Expr::Expr() {
    ExprNode n;
    n.kind = NodeKind::Number;
    n.value = Rational(0);
    node_ = std::make_shared<const ExprNode>(std::move(n));
}

Expr Expr::num(long long v) { return num(Rational(v)); }

Expr Expr::num(const Rational& r) {
    ExprNode n;
    n.kind = NodeKind::Number;
    n.value = r;
    return make_expr_node(std::move(n));
}

Expr Expr::sym(const std::string& name) {
    ExprNode n;
    n.kind = NodeKind::Symbol;
    n.name = name;
    return make_expr_node(std::move(n));
}

Expr Expr::call(FuncKind f, Expr arg) {
    ExprNode n;
    n.kind = NodeKind::Func;
    n.func = f;
    n.left_ = arg.ptr();
    return make_expr_node(std::move(n));
}

namespace {
Expr binary(NodeKind k, Expr a, Expr b) {
    ExprNode n;
    n.kind = k;
    n.left_ = a.ptr();
    n.right_ = b.ptr();
    return make_expr_node(std::move(n));
}
} // namespace

// Light constant folding on construction keeps hand-built tensor formulas
// from drowning in "+0" and "*1" nodes; canonical simplification does the rest.
Expr operator+(const Expr& a, const Expr& b) {
    if (a.is_zero_literal()) return b;
    if (b.is_zero_literal()) return a;
    if (a.is_rational() && b.is_rational())
        return Expr::num(*a.as_rational() + *b.as_rational());
    return binary(NodeKind::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
    if (b.is_zero_literal()) return a;
    if (a.is_rational() && b.is_rational())
        return Expr::num(*a.as_rational() - *b.as_rational());
    return binary(NodeKind::Sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_zero_literal() || b.is_zero_literal()) return Expr::num(0);
    if (a.is_rational() && a.as_rational()->is_one()) return b;
    if (b.is_rational() && b.as_rational()->is_one()) return a;
    if (a.is_rational() && b.is_rational())
        return Expr::num(*a.as_rational() * *b.as_rational());
    return binary(NodeKind::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
    if (b.is_rational() && b.as_rational()->is_one()) return a;
    if (a.is_rational() && b.is_rational() && !b.as_rational()->is_zero())
        return Expr::num(*a.as_rational() / *b.as_rational());
    return binary(NodeKind::Div, a, b);
}

Expr Expr::operator-() const { return Expr::num(-1) * *this; }

Expr pow(const Expr& base, long long exponent) {
    if (exponent == 1) return base;
    if (exponent == 0) return Expr::num(1);
    if (base.is_rational() && (exponent > 0 || !base.as_rational()->is_zero()))
        return Expr::num(base.as_rational()->pow(exponent));
    ExprNode n;
    n.kind = NodeKind::Pow;
    n.exponent = exponent;
    n.left_ = base.ptr();
    return make_expr_node(std::move(n));
}

bool Expr::is_rational() const { return node_->kind == NodeKind::Number; }

std::optional<Rational> Expr::as_rational() const {
    if (node_->kind == NodeKind::Number) return node_->value;
    return std::nullopt;
}

bool Expr::is_zero_literal() const {
    return node_->kind == NodeKind::Number && node_->value.is_zero();
}

namespace {
void collect_symbols(const ExprNode& n, std::set<std::string>& out) {
    switch (n.kind) {
        case NodeKind::Number: break;
        case NodeKind::Symbol: out.insert(n.name); break;
        case NodeKind::Pow:
        case NodeKind::Func: collect_symbols(n.left().node(), out); break;
        default:
            collect_symbols(n.left().node(), out);
            collect_symbols(n.right().node(), out);
    }
}
} // namespace

std::set<std::string> Expr::free_symbols() const {
    std::set<std::string> out;
    collect_symbols(*node_, out);
    return out;
}

bool Expr::identical(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    const ExprNode& x = *a.node_;
    const ExprNode& y = *b.node_;
    if (x.kind != y.kind) return false;
    switch (x.kind) {
        case NodeKind::Number: return x.value == y.value;
        case NodeKind::Symbol: return x.name == y.name;
        case NodeKind::Pow:
            return x.exponent == y.exponent && identical(x.left(), y.left());
        case NodeKind::Func:
            return x.func == y.func && identical(x.left(), y.left());
        default:
            return identical(x.left(), y.left()) && identical(x.right(), y.right());
    }
}

// --- printing -------------------------------------------------------------

namespace {

bool is_negation(const ExprNode& n) {
    return n.kind == NodeKind::Mul && n.left().node().kind == NodeKind::Number &&
           n.left().node().value == Rational(-1);
}

// precedence: Add/Sub = 1, Mul/Div = 2, Pow = 3, atoms = 4
int precedence(const ExprNode& n) {
    switch (n.kind) {
        case NodeKind::Add:
        case NodeKind::Sub: return 1;
        case NodeKind::Mul:
            return is_negation(n) ? 1 : 2;
        case NodeKind::Div: return 2;
        case NodeKind::Pow: return 3;
        case NodeKind::Number:
            return n.value.sign() < 0 || !n.value.is_integer() ? 2 : 4;
        default: return 4;
    }
}

void print_node(const ExprNode& n, std::string& out, int parent_prec, bool right_side) {
    int prec = precedence(n);
    bool parens = prec < parent_prec || (prec == parent_prec && right_side && prec <= 2);
    if (parens) out.push_back('(');
    switch (n.kind) {
        case NodeKind::Number: out += n.value.to_string(); break;
        case NodeKind::Symbol: out += n.name; break;
        case NodeKind::Add:
            print_node(n.left().node(), out, 1, false);
            out += " + ";
            print_node(n.right().node(), out, 1, true);
            break;
        case NodeKind::Sub:
            print_node(n.left().node(), out, 1, false);
            out += " - ";
            print_node(n.right().node(), out, 1, true);
            break;
        case NodeKind::Mul:
            if (is_negation(n)) {
                out += "-";
                print_node(n.right().node(), out, 2, false);
                break;
            }
            print_node(n.left().node(), out, 2, false);
            out += "*";
            print_node(n.right().node(), out, 2, true);
            break;
        case NodeKind::Div:
            print_node(n.left().node(), out, 2, false);
            out += "/";
            print_node(n.right().node(), out, 2, true);
            break;
        case NodeKind::Pow:
            print_node(n.left().node(), out, 4, false);
            out += "^";
            if (n.exponent < 0) {
                out += "(" + std::to_string(n.exponent) + ")";
            } else {
                out += std::to_string(n.exponent);
            }
            break;
        case NodeKind::Func:
            out += func_name(n.func);
            out.push_back('(');
            print_node(n.left().node(), out, 0, false);
            out.push_back(')');
            break;
    }
    if (parens) out.push_back(')');
}

} // namespace

std::string Expr::to_string() const {
    std::string out;
    print_node(*node_, out, 0, false);
    return out;
}

// --- evaluation -------------------------------------------------------------

namespace {

Scalar apply_func(FuncKind f, const Scalar& a) {
    double x = a.to_double();
    switch (f) {
        case FuncKind::Sin: return Scalar(std::sin(x));
        case FuncKind::Cos: return Scalar(std::cos(x));
        case FuncKind::Exp: return Scalar(std::exp(x));
        case FuncKind::Ln:
            if (x <= 0.0) throw EvalError("ln of non-positive value");
            return Scalar(std::log(x));
        case FuncKind::Sqrt:
            if (x < 0.0) throw EvalError("sqrt of negative value");
            return Scalar(std::sqrt(x));
    }
    throw EvalError("unknown function");
}

} // namespace

Scalar eval_scalar(const Expr& e, const Env& env) {
    const ExprNode& n = e.node();
    switch (n.kind) {
        case NodeKind::Number: return Scalar(n.value);
        case NodeKind::Symbol: {
            auto it = env.find(n.name);
            if (it == env.end()) throw EvalError("unbound symbol: " + n.name);
            return it->second;
        }
        case NodeKind::Add: {
            Scalar a = eval_scalar(n.left(), env), b = eval_scalar(n.right(), env);
            if (a.exact() && b.exact()) return Scalar(a.rational() + b.rational());
            return Scalar(a.to_double() + b.to_double());
        }
        case NodeKind::Sub: {
            Scalar a = eval_scalar(n.left(), env), b = eval_scalar(n.right(), env);
            if (a.exact() && b.exact()) return Scalar(a.rational() - b.rational());
            return Scalar(a.to_double() - b.to_double());
        }
        case NodeKind::Mul: {
            Scalar a = eval_scalar(n.left(), env), b = eval_scalar(n.right(), env);
            if (a.exact() && b.exact()) return Scalar(a.rational() * b.rational());
            return Scalar(a.to_double() * b.to_double());
        }
        case NodeKind::Div: {
            Scalar a = eval_scalar(n.left(), env), b = eval_scalar(n.right(), env);
            if (b.exact() ? b.rational().is_zero() : b.to_double() == 0.0)
                throw EvalError("division by zero");
            if (a.exact() && b.exact()) return Scalar(a.rational() / b.rational());
            return Scalar(a.to_double() / b.to_double());
        }
        case NodeKind::Pow: {
            Scalar a = eval_scalar(n.left(), env);
            if (a.exact()) {
                if (n.exponent < 0 && a.rational().is_zero())
                    throw EvalError("zero raised to a negative power");
                return Scalar(a.rational().pow(n.exponent));
            }
            double base = a.to_double();
            if (n.exponent < 0 && base == 0.0)
                throw EvalError("zero raised to a negative power");
            return Scalar(std::pow(base, static_cast<double>(n.exponent)));
        }
        case NodeKind::Func: return apply_func(n.func, eval_scalar(n.left(), env));
    }
    throw EvalError("corrupt expression node");
}

double eval_expr(const Expr& e, const Env& env) {
    return eval_scalar(e, env).to_double();
}

} // namespace skewalg
