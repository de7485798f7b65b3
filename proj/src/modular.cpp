#include "skewalg/modular.hpp"

#include <cmath>

#include "skewalg/reduction.hpp"
#include "skewalg/rng.hpp"

namespace skewalg {

// --- EConnection -----------------------------------------------------------

EConnection::EConnection(AlgebroidPtr host, int aux_rank)
    : host_(std::move(host)), s_(aux_rank) {
    if (!host_) throw DomainError("EConnection: null algebroid");
    if (s_ < 1) throw DomainError("EConnection: auxiliary rank must be >= 1");
}

Expr EConnection::gamma(int i, int k, int j) const {
    if (i < 0 || i >= host_->rank() || k < 0 || k >= s_ || j < 0 || j >= s_)
        throw DomainError("EConnection: index out of range");
    auto it = gamma_.find({i, k, j});
    return it == gamma_.end() ? Expr::num(0) : it->second;
}

void EConnection::set_gamma(int i, int k, int j, Expr value) {
    if (i < 0 || i >= host_->rank() || k < 0 || k >= s_ || j < 0 || j >= s_)
        throw DomainError("EConnection: index out of range");
    auto allowed = host_->scalar_symbols();
    for (const auto& sym : value.free_symbols())
        if (!allowed.count(sym))
            throw DomainError("EConnection: coefficient mentions non-base symbol " + sym);
    gamma_[{i, k, j}] = std::move(value);
}

// --- BundleMetric ------------------------------------------------------------

BundleMetric make_bundle_metric(AlgebroidPtr host, ExprMatrix g, uint64_t seed) {
    if (!host) throw DomainError("bundle metric: null algebroid");
    size_t n = static_cast<size_t>(host->rank());
    if (g.size() != n) throw DomainError("bundle metric: row count != rank");
    for (const auto& row : g)
        if (row.size() != n) throw DomainError("bundle metric: column count != rank");
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (!exprs_equal(g[i][j], g[j][i]).equal)
                throw DomainError("bundle metric: not symmetric");

    // nondegeneracy at sampled points
    Expr det = matrix_det(g);
    Rng rng(seed);
    std::set<std::string> symset = host->scalar_symbols();
    std::vector<std::string> syms(symset.begin(), symset.end());
    bool seen_nonzero = false;
    for (int t = 0; t < 16 && !seen_nonzero; ++t) {
        Env env;
        for (const auto& s : syms) env[s] = Scalar(rng.uniform(-2.0, 2.0));
        try {
            if (std::abs(eval_expr(det, env)) > 1e-12) seen_nonzero = true;
        } catch (const EvalError&) {
            continue;
        }
    }
    if (!seen_nonzero) throw DomainError("bundle metric: degenerate (|det| <= 1e-12 at samples)");

    BundleMetric out;
    out.host_ = std::move(host);
    out.g_ = std::move(g);
    return out;
}

BundleMetric identity_metric(const AlgebroidPtr& host) {
    return make_bundle_metric(host, expr_identity(host->rank()));
}

// --- modular form ------------------------------------------------------------

ModularClassRep modular_form(const AlgebroidPtr& E) {
    int n = E->rank();
    EForm rep(E, 1);
    for (int i = 0; i < n; ++i) {
        Expr acc = Expr::num(0);
        for (int k = 0; k < n; ++k) acc += E->c(i, k, k);
        for (int a = 0; a < E->base_dim(); ++a)
            acc += diff_expr(E->rho(i, a), E->coords()[a]);
        rep.add_term({i}, acc);
    }
    return {rep.simplified()};
}

EConnection canonical_line_connection(const AlgebroidPtr& E) {
    int n = E->rank();
    // top multivector e_1 ^ .. ^ e_n stands in for the frame factor of the
    // coordinate section of L^E = top E (x) top T*M
    EMultivector top(E, n);
    IndexTuple all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    top.add_term(all, Expr::num(1));

    EConnection conn(E, 1);
    for (int i = 0; i < n; ++i) {
        Expr frame_part = lie_derivative(Section::basis(E, i), top).coeff(all);
        Expr volume_part = anchor_vf(Section::basis(E, i)).divergence();
        conn.set_gamma(i, 0, 0, simplify(frame_part + volume_part));
    }
    return conn;
}

EForm char_form(const EConnection& conn, const Expr& sigma_coeff) {
    if (conn.aux_rank() != 1)
        throw DomainError("char_form: connection must live on a line bundle");
    if (provably_zero(sigma_coeff))
        throw DomainError("char_form: trivializing section is identically zero");
    const AlgebroidPtr& E = conn.host();
    EForm out(E, 1);
    for (int i = 0; i < E->rank(); ++i) {
        Expr acc = conn.gamma(i, 0, 0);
        Expr dsigma = E->anchor_on(i, sigma_coeff);
        if (!dsigma.is_zero_literal()) acc += dsigma / sigma_coeff;
        out.add_term({i}, acc);
    }
    return out.simplified();
}

// --- mechanical Hamiltonians ----------------------------------------------------

Expr mechanical_hamiltonian(const BundleMetric& g, const Expr& potential) {
    const AlgebroidPtr& E = g.host();
    auto allowed = E->scalar_symbols();
    for (const auto& sym : potential.free_symbols())
        if (!allowed.count(sym))
            throw DomainError("mechanical_hamiltonian: potential mentions " + sym);

    ExprMatrix ginv;
    try {
        ginv = matrix_inverse(g.entries());
    } catch (const ExprError&) {
        throw DomainError("mechanical_hamiltonian: singular metric");
    }
    auto xi = E->momentum_names();
    Expr acc = Expr::num(0);
    int n = E->rank();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            acc += Expr::sym(xi[i]) * ginv[i][j] * Expr::sym(xi[j]);
    return simplify(acc / Expr::num(2) + potential);
}

Mt0Report mt0_residual(const AlgebroidPtr& E, const Expr& H, const std::vector<Env>& points) {
    VectorFieldExpr XH = hamiltonian_vf(E, H);
    Expr div = simplify(XH.divergence());
    Expr lifted = simplify(vertical_lift_oneform(modular_form(E).representative).apply(H));
    Mt0Report report;
    for (const auto& env : points) {
        try {
            double lhs = eval_expr(lifted, env);
            double rhs = eval_expr(div, env);
            report.max_residual = std::max(report.max_residual, std::abs(rhs - lhs));
            ++report.evaluated;
        } catch (const EvalError&) {
            ++report.skipped;
        }
    }
    return report;
}

std::vector<Env> random_phase_points(const AlgebroidPtr& E, int count, uint64_t seed,
                                     double lo, double hi) {
    Rng rng(seed);
    std::set<std::string> symset = E->scalar_symbols();
    for (const auto& xi : E->momentum_names()) symset.insert(xi);
    std::vector<Env> out;
    for (int t = 0; t < count; ++t) {
        Env env;
        for (const auto& s : symset) env[s] = Scalar(rng.uniform(lo, hi));
        out.push_back(std::move(env));
    }
    return out;
}

// --- subalgebroid-relative constructions -----------------------------------------

namespace {

std::map<std::string, Expr> transversal_zero(const AlgebroidPtr& E, int m0) {
    std::map<std::string, Expr> bind;
    for (int A = m0; A < E->base_dim(); ++A) bind[E->coords()[A]] = Expr::num(0);
    return bind;
}

} // namespace

EConnection normal_connection(const AlgebroidPtr& E, int n0, int m0) {
    auto report = subalgebroid_check(E, n0, m0);
    if (!report.ok)
        throw DomainError("normal_connection: subalgebroid conditions fail");
    if (n0 >= E->rank())
        throw DomainError("normal_connection: trivial normal bundle (n0 = n)");
    AlgebroidPtr E0 = restrict_algebroid(E, n0, m0);
    auto zero = transversal_zero(E, m0);
    int s = E->rank() - n0;
    EConnection conn(E0, s);
    for (int iota = 0; iota < n0; ++iota)
        for (int J = n0; J < E->rank(); ++J)
            for (int K = n0; K < E->rank(); ++K) {
                Expr value = subst_expr(E->c(iota, J, K), zero);
                if (!value.is_zero_literal())
                    conn.set_gamma(iota, J - n0, K - n0, value);
            }
    return conn;
}

ModularClassRep relative_modular_class(const AlgebroidPtr& E, int n0, int m0) {
    auto report = subalgebroid_check(E, n0, m0);
    if (!report.ok)
        throw DomainError("relative_modular_class: subalgebroid conditions fail");
    AlgebroidPtr E0 = restrict_algebroid(E, n0, m0);
    auto zero = transversal_zero(E, m0);
    EForm rep(E0, 1);
    for (int iota = 0; iota < n0; ++iota) {
        Expr acc = Expr::num(0);
        for (int K = n0; K < E->rank(); ++K) acc -= E->c(iota, K, K);
        rep.add_term({iota}, subst_expr(acc, zero));
    }
    return {rep.simplified()};
}

bool exactness_check(const AlgebroidPtr& E, const EForm& alpha, const Expr& witness) {
    require_same_host(E, alpha.host(), "exactness_check");
    if (alpha.degree() != 1) throw DomainError("exactness_check: degree must be 1");
    EForm df = de_rham(EForm::function(E, witness));
    return (alpha - df).symbolically_zero();
}

} // namespace skewalg
