#include "skewalg/holonomy.hpp"

#include <cmath>

#include "skewalg/reduction.hpp"

namespace skewalg {

PathSpec::PathSpec(AlgebroidPtr host, std::vector<Expr> base, std::vector<Expr> fiber)
    : host_(std::move(host)), base_(std::move(base)), fiber_(std::move(fiber)) {
    if (!host_) throw DomainError("PathSpec: null algebroid");
    if (static_cast<int>(base_.size()) != host_->base_dim())
        throw DomainError("PathSpec: base component count != base dimension");
    if (static_cast<int>(fiber_.size()) != host_->rank())
        throw DomainError("PathSpec: fiber component count != rank");
    std::set<std::string> allowed(host_->params().begin(), host_->params().end());
    allowed.insert("t");
    for (const auto* list : {&base_, &fiber_})
        for (const auto& e : *list)
            for (const auto& sym : e.free_symbols())
                if (!allowed.count(sym))
                    throw DomainError("PathSpec: component mentions " + sym +
                                      " (only t and parameters are allowed)");
}

std::vector<double> PathSpec::base_at(double t, const Env& params) const {
    Env env = params;
    env["t"] = Scalar(t);
    std::vector<double> out;
    for (const auto& e : base_) out.push_back(eval_expr(e, env));
    return out;
}

namespace {

// substitute x^a -> x^a(t) in a base-coordinate expression
Expr along_path(const PathSpec& p, const Expr& e) {
    std::map<std::string, Expr> bind;
    const auto& coords = p.host()->coords();
    for (size_t a = 0; a < coords.size(); ++a) bind[coords[a]] = p.base_components()[a];
    return subst_expr(e, bind);
}

} // namespace

AdmissibilityReport check_admissible(const PathSpec& p, int samples, double tol,
                                     const Env& params) {
    if (samples < 2) throw DomainError("check_admissible: need at least 2 samples");
    const AlgebroidPtr& E = p.host();
    std::vector<Expr> defects;
    for (int a = 0; a < E->base_dim(); ++a) {
        Expr acc = Expr::num(0);
        for (int i = 0; i < E->rank(); ++i)
            acc += p.fiber_components()[i] * along_path(p, E->rho(i, a));
        acc -= diff_expr(p.base_components()[a], "t");
        defects.push_back(simplify(acc));
    }
    AdmissibilityReport report;
    for (int s = 0; s < samples; ++s) {
        double t = static_cast<double>(s) / (samples - 1);
        Env env = params;
        env["t"] = Scalar(t);
        for (const auto& d : defects)
            report.max_defect = std::max(report.max_defect, std::abs(eval_expr(d, env)));
    }
    report.ok = report.max_defect <= tol;
    return report;
}

double line_integral(const EForm& alpha, const PathSpec& p, int steps, const Env& params) {
    require_same_host(alpha.host(), p.host(), "line_integral");
    if (alpha.degree() != 1) throw DomainError("line_integral: form degree must be 1");
    if (steps < 1) throw DomainError("line_integral: steps must be >= 1");

    auto ac = alpha.components();
    Expr integrand = Expr::num(0);
    for (int i = 0; i < p.host()->rank(); ++i)
        integrand += along_path(p, ac[i]) * p.fiber_components()[i];
    integrand = simplify(integrand);

    auto g = [&](double t) {
        Env env = params;
        env["t"] = Scalar(t);
        return eval_expr(integrand, env);
    };
    double h = 1.0 / steps;
    double sum = 0.0;
    for (int k = 0; k < steps; ++k) {
        double t0 = k * h;
        sum += (h / 6.0) * (g(t0) + 4.0 * g(t0 + h / 2.0) + g(t0 + h));
    }
    return sum;
}

std::vector<double> rk4_integrate(
    const std::function<std::vector<double>(double, const std::vector<double>&)>& field,
    std::vector<double> state, double t0, double t1, int steps) {
    if (steps < 1) throw DomainError("rk4_integrate: steps must be >= 1");
    double h = (t1 - t0) / steps;
    size_t n = state.size();
    for (int s = 0; s < steps; ++s) {
        double t = t0 + s * h;
        auto k1 = field(t, state);
        std::vector<double> tmp(n);
        for (size_t i = 0; i < n; ++i) tmp[i] = state[i] + 0.5 * h * k1[i];
        auto k2 = field(t + 0.5 * h, tmp);
        for (size_t i = 0; i < n; ++i) tmp[i] = state[i] + 0.5 * h * k2[i];
        auto k3 = field(t + 0.5 * h, tmp);
        for (size_t i = 0; i < n; ++i) tmp[i] = state[i] + h * k3[i];
        auto k4 = field(t + h, tmp);
        for (size_t i = 0; i < n; ++i)
            state[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return state;
}

std::vector<double> parallel_transport(const EConnection& conn, const PathSpec& p,
                                       const std::vector<double>& v0, int steps,
                                       const Env& params) {
    require_same_host(conn.host(), p.host(), "parallel_transport");
    int s = conn.aux_rank();
    if (static_cast<int>(v0.size()) != s)
        throw DomainError("parallel_transport: initial vector size != auxiliary rank");
    auto adm = check_admissible(p, 101, 1e-8, params);
    if (!adm.ok)
        throw DomainError("parallel_transport: path is not admissible (defect " +
                          std::to_string(adm.max_defect) + ")");

    // A^j_k(t) = -sum_i Gamma^j_ik(x(t)) gamma^i(t)
    std::vector<std::vector<Expr>> A(s, std::vector<Expr>(s, Expr::num(0)));
    for (int j = 0; j < s; ++j)
        for (int k = 0; k < s; ++k) {
            Expr acc = Expr::num(0);
            for (int i = 0; i < p.host()->rank(); ++i)
                acc -= along_path(p, conn.gamma(i, k, j)) * p.fiber_components()[i];
            A[j][k] = simplify(acc);
        }

    auto field = [&](double t, const std::vector<double>& y) {
        Env env = params;
        env["t"] = Scalar(t);
        std::vector<double> out(s, 0.0);
        for (int j = 0; j < s; ++j)
            for (int k = 0; k < s; ++k) {
                if (A[j][k].is_zero_literal()) continue;
                out[j] += eval_expr(A[j][k], env) * y[k];
            }
        return out;
    };
    return rk4_integrate(field, v0, 0.0, 1.0, steps);
}

double transport_determinant(const EConnection& conn, const PathSpec& p, int steps,
                             const Env& params) {
    require_same_host(conn.host(), p.host(), "transport_determinant");
    auto adm = check_admissible(p, 101, 1e-8, params);
    if (!adm.ok)
        throw DomainError("transport_determinant: path is not admissible (defect " +
                          std::to_string(adm.max_defect) + ")");

    Expr trace = Expr::num(0);
    for (int i = 0; i < p.host()->rank(); ++i) {
        Expr tr = Expr::num(0);
        for (int j = 0; j < conn.aux_rank(); ++j) tr += conn.gamma(i, j, j);
        trace -= along_path(p, tr) * p.fiber_components()[i];
    }
    trace = simplify(trace);

    auto field = [&](double t, const std::vector<double>& y) {
        Env env = params;
        env["t"] = Scalar(t);
        return std::vector<double>{eval_expr(trace, env) * y[0]};
    };
    return rk4_integrate(field, {1.0}, 0.0, 1.0, steps)[0];
}

HolonomyResult relative_holonomy(const AlgebroidPtr& E, int n0, int m0, const PathSpec& p,
                                 int steps, const Env& params) {
    AlgebroidPtr E0 = restrict_algebroid(E, n0, m0);
    require_same_host(E0, p.host(), "relative_holonomy");

    // base path must close up
    for (int a = 0; a < m0; ++a) {
        Env env0 = params, env1 = params;
        env0["t"] = Scalar(0.0);
        env1["t"] = Scalar(1.0);
        double x0 = eval_expr(p.base_components()[a], env0);
        double x1 = eval_expr(p.base_components()[a], env1);
        if (std::abs(x0 - x1) > 1e-12)
            throw DomainError("relative_holonomy: base path is not a loop");
    }

    EConnection conn = normal_connection(E, n0, m0);
    EForm rel = relative_modular_class(E, n0, m0).representative;

    HolonomyResult out;
    out.ode_value = transport_determinant(conn, p, steps, params);
    out.formula_value = std::exp(line_integral(rel, p, steps, params));
    return out;
}

std::vector<double> flow_complete_lift(const Section& X, double t_end,
                                       const std::vector<double>& v0, int steps,
                                       const Env& params) {
    VectorFieldExpr lift = complete_lift(X);
    size_t dim = lift.coords().size();
    if (v0.size() != dim)
        throw DomainError("flow_complete_lift: point size != dim E");

    auto field = [&](double, const std::vector<double>& y) {
        Env env = params;
        for (size_t i = 0; i < dim; ++i) env[lift.coords()[i]] = Scalar(y[i]);
        std::vector<double> out(dim, 0.0);
        for (size_t i = 0; i < dim; ++i) {
            out[i] = eval_expr(lift.components()[i], env);
            if (!std::isfinite(out[i]))
                throw DomainError("flow_complete_lift: singular evaluation");
        }
        for (double yi : y)
            if (std::abs(yi) > 1e12)
                throw DomainError("flow_complete_lift: trajectory blow-up");
        return out;
    };
    return rk4_integrate(field, v0, 0.0, t_end, steps);
}

} // namespace skewalg
