#include "skewalg/canonical.hpp"
#include "skewalg/expr.hpp"

namespace skewalg {

namespace {

Expr diff_raw(const Expr& e, const std::string& var) {
    const ExprNode& n = e.node();
    switch (n.kind) {
        case NodeKind::Number: return Expr::num(0);
        case NodeKind::Symbol: return Expr::num(n.name == var ? 1 : 0);
        case NodeKind::Add: return diff_raw(n.left(), var) + diff_raw(n.right(), var);
        case NodeKind::Sub: return diff_raw(n.left(), var) - diff_raw(n.right(), var);
        case NodeKind::Mul:
            return diff_raw(n.left(), var) * n.right() + n.left() * diff_raw(n.right(), var);
        case NodeKind::Div:
            return (diff_raw(n.left(), var) * n.right() - n.left() * diff_raw(n.right(), var)) /
                   pow(n.right(), 2);
        case NodeKind::Pow:
            return Expr::num(n.exponent) * pow(n.left(), n.exponent - 1) * diff_raw(n.left(), var);
        case NodeKind::Func: {
            Expr du = diff_raw(n.left(), var);
            switch (n.func) {
                case FuncKind::Sin: return Expr::call(FuncKind::Cos, n.left()) * du;
                case FuncKind::Cos: return Expr::num(-1) * Expr::call(FuncKind::Sin, n.left()) * du;
                case FuncKind::Exp: return Expr::call(FuncKind::Exp, n.left()) * du;
                case FuncKind::Ln: return du / n.left();
                case FuncKind::Sqrt:
                    return du / (Expr::num(2) * Expr::call(FuncKind::Sqrt, n.left()));
            }
        }
    }
    throw ExprError("corrupt expression node");
}

Expr subst_raw(const Expr& e, const std::map<std::string, Expr>& bindings) {
    const ExprNode& n = e.node();
    switch (n.kind) {
        case NodeKind::Number: return e;
        case NodeKind::Symbol: {
            auto it = bindings.find(n.name);
            return it == bindings.end() ? e : it->second;
        }
        case NodeKind::Add: return subst_raw(n.left(), bindings) + subst_raw(n.right(), bindings);
        case NodeKind::Sub: return subst_raw(n.left(), bindings) - subst_raw(n.right(), bindings);
        case NodeKind::Mul: return subst_raw(n.left(), bindings) * subst_raw(n.right(), bindings);
        case NodeKind::Div: return subst_raw(n.left(), bindings) / subst_raw(n.right(), bindings);
        case NodeKind::Pow: return pow(subst_raw(n.left(), bindings), n.exponent);
        case NodeKind::Func: return Expr::call(n.func, subst_raw(n.left(), bindings));
    }
    throw ExprError("corrupt expression node");
}

} // namespace

Expr diff_expr(const Expr& e, const std::string& var) {
    return simplify(diff_raw(e, var));
}

Expr subst_expr(const Expr& e, const std::map<std::string, Expr>& bindings) {
    return simplify(subst_raw(e, bindings));
}

} // namespace skewalg
