#include "skewalg/reduction.hpp"

#include <algorithm>
#include <cmath>

#include "skewalg/rng.hpp"

namespace skewalg {

// --- subalgebroid check ------------------------------------------------------

namespace {

std::map<std::string, Expr> adapted_zero(const AlgebroidPtr& E, int m0) {
    std::map<std::string, Expr> bind;
    for (int A = m0; A < E->base_dim(); ++A) bind[E->coords()[A]] = Expr::num(0);
    return bind;
}

// worst |value| of e over random samples of its free symbols
double sampled_magnitude(const Expr& e, int samples, uint64_t seed) {
    Rng rng(seed);
    auto symset = e.free_symbols();
    std::vector<std::string> syms(symset.begin(), symset.end());
    double worst = 0.0;
    int got = 0, attempts = 0;
    while (got < samples && attempts < samples * 50 + 50) {
        ++attempts;
        Env env;
        for (const auto& s : syms) env[s] = Scalar(rng.uniform(-2.0, 2.0));
        try {
            worst = std::max(worst, std::abs(eval_expr(e, env)));
            ++got;
        } catch (const EvalError&) {
            continue;
        }
    }
    return worst;
}

} // namespace

SubalgebroidReport subalgebroid_check(const AlgebroidPtr& E, int n0, int m0,
                                      int samples, double tol, uint64_t seed) {
    if (n0 < 1 || n0 > E->rank()) throw DomainError("subalgebroid_check: n0 out of range");
    if (m0 < 0 || m0 > E->base_dim()) throw DomainError("subalgebroid_check: m0 out of range");
    auto zero = adapted_zero(E, m0);

    SubalgebroidReport report;
    report.ok = true;

    auto examine = [&](const Expr& raw, const std::string& label) {
        Expr value = subst_expr(raw, zero);
        if (provably_zero(value)) return;
        double mag = sampled_magnitude(value, samples, seed);
        if (provably_nonzero(value) || mag > tol) {
            report.ok = false;
            report.max_violation = std::max(report.max_violation, mag);
            report.failures.push_back(label + " = " + value.to_string());
        } else {
            // numerically zero but not certified by the canonical form
            report.decided_symbolically = false;
        }
    };

    for (int iota = 0; iota < n0; ++iota)
        for (int A = m0; A < E->base_dim(); ++A)
            examine(E->rho(iota, A),
                    "rho^" + std::to_string(A + 1) + "_" + std::to_string(iota + 1));
    for (int iota = 0; iota < n0; ++iota)
        for (int iota2 = iota + 1; iota2 < n0; ++iota2)
            for (int K = n0; K < E->rank(); ++K)
                examine(E->c(iota, iota2, K), "c^" + std::to_string(K + 1) + "_" +
                                                  std::to_string(iota + 1) +
                                                  std::to_string(iota2 + 1));
    return report;
}

AlgebroidPtr restrict_algebroid(const AlgebroidPtr& E, int n0, int m0) {
    auto report = subalgebroid_check(E, n0, m0);
    if (!report.ok)
        throw DomainError("restrict_algebroid: not a subalgebroid in adapted coordinates");
    auto zero = adapted_zero(E, m0);

    std::vector<std::string> coords(E->coords().begin(), E->coords().begin() + m0);
    std::vector<std::string> frame(E->frame().begin(), E->frame().begin() + n0);

    std::vector<std::tuple<int, int, int, Expr>> c_entries;
    for (int i = 0; i < n0; ++i)
        for (int j = i + 1; j < n0; ++j)
            for (int k = 0; k < n0; ++k) {
                Expr value = subst_expr(E->c(i, j, k), zero);
                if (!value.is_zero_literal()) c_entries.emplace_back(i, j, k, value);
            }
    std::vector<std::tuple<int, int, Expr>> rho_entries;
    for (int i = 0; i < n0; ++i)
        for (int a = 0; a < m0; ++a) {
            Expr value = subst_expr(E->rho(i, a), zero);
            if (!value.is_zero_literal()) rho_entries.emplace_back(i, a, value);
        }
    return make_algebroid(m0, n0, coords, frame, E->params(), c_entries, rho_entries);
}

// --- projections ----------------------------------------------------------------

AlgebroidPtr project_along(const AlgebroidPtr& E, const ExprMatrix& new_basis, int n0) {
    if (E->base_dim() != 0)
        throw DomainError("project_along: supported for point bases (skew algebras) only");
    int n = E->rank();
    if (static_cast<int>(new_basis.size()) != n)
        throw DomainError("project_along: basis matrix must be n x n");
    for (const auto& row : new_basis)
        if (static_cast<int>(row.size()) != n)
            throw DomainError("project_along: basis matrix must be n x n");
    if (n0 < 1 || n0 > n) throw DomainError("project_along: n0 out of range");

    ExprMatrix inv;
    try {
        inv = matrix_inverse(new_basis);
    } catch (const ExprError&) {
        throw DomainError("project_along: singular basis matrix");
    }

    std::vector<std::string> frame;
    for (int i = 1; i <= n0; ++i) frame.push_back("e" + std::to_string(i));

    std::vector<std::tuple<int, int, int, Expr>> c_entries;
    for (int i = 0; i < n0; ++i)
        for (int j = i + 1; j < n0; ++j) {
            // [d_i, d_j] in the ambient frame
            std::vector<Expr> br(n, Expr::num(0));
            for (int r = 0; r < n; ++r)
                for (int s = 0; s < n; ++s) {
                    if (r == s) continue;
                    for (int t = 0; t < n; ++t)
                        br[t] += new_basis[r][i] * new_basis[s][j] * E->c(r, s, t);
                }
            // decompose in the new basis and truncate the complement part
            for (int kappa = 0; kappa < n0; ++kappa) {
                Expr acc = Expr::num(0);
                for (int t = 0; t < n; ++t) acc += inv[kappa][t] * br[t];
                Expr value = simplify(acc);
                if (!value.is_zero_literal()) c_entries.emplace_back(i, j, kappa, value);
            }
        }
    return make_algebroid(0, n0, {}, frame, E->params(), c_entries, {});
}

std::vector<std::vector<Expr>> orthogonal_complement(const BundleMetric& g,
                                                     const ExprMatrix& D_basis) {
    int n = g.host()->rank();
    if (static_cast<int>(D_basis.size()) != n)
        throw DomainError("orthogonal_complement: D basis must have n rows");
    int n0 = static_cast<int>(D_basis[0].size());
    // rows: g(d_col, .) for each column of D
    ExprMatrix system(n0, std::vector<Expr>(n, Expr::num(0)));
    for (int col = 0; col < n0; ++col)
        for (int cand = 0; cand < n; ++cand) {
            Expr acc = Expr::num(0);
            for (int r = 0; r < n; ++r) acc += D_basis[r][col] * g.entry(r, cand);
            system[col][cand] = simplify(acc);
        }
    auto basis = matrix_nullspace(system);
    if (static_cast<int>(basis.size()) != n - n0)
        throw DomainError("orthogonal_complement: rank-deficient span");
    return basis;
}

ExprMatrix sleigh_metric(const Expr& mass, const Expr& inertia, const Expr& a, const Expr& b) {
    Expr zero = Expr::num(0);
    Expr mb = Expr::num(-1) * b * mass;
    Expr ma = Expr::num(-1) * a * mass;
    Expr big = inertia + mass * (a * a + b * b);
    return {{mass, zero, mb}, {zero, mass, ma}, {mb, ma, big}};
}

SleighResult chaplygin_sleigh(const Expr& mass, const Expr& inertia, const Expr& a,
                              const Expr& b, SleighComplement complement) {
    Expr denom = simplify(inertia + mass * a * a);
    if (provably_zero(denom))
        throw DomainError("chaplygin_sleigh: degenerate parameters (J + m a^2 = 0)");

    std::set<std::string> param_set;
    for (const Expr* e : {&mass, &inertia, &a, &b})
        for (const auto& s : e->free_symbols()) param_set.insert(s);
    std::vector<std::string> params(param_set.begin(), param_set.end());

    AlgebroidPtr se2 = make_algebroid(0, 3, {}, {"E1", "E2", "E3"}, params,
                                      {{2, 0, 1, Expr::num(1)}, {1, 2, 0, Expr::num(1)}}, {});

    // columns e1 = E3, e2 = E1, e3 = complement, in the (E1,E2,E3) frame
    ExprMatrix basis(3, std::vector<Expr>(3, Expr::num(0)));
    basis[2][0] = Expr::num(1); // e1 = E3
    basis[0][1] = Expr::num(1); // e2 = E1
    if (complement == SleighComplement::Paper) {
        basis[0][2] = Expr::num(-1) * mass * a * b;
        basis[1][2] = inertia + mass * a * a;
        basis[2][2] = Expr::num(-1) * mass * a;
    } else {
        BundleMetric mu = make_bundle_metric(se2, sleigh_metric(mass, inertia, a, b));
        // D = span{E3, E1}, in the (e1, e2) order of the projected frame
        ExprMatrix Dspan(3, std::vector<Expr>(2, Expr::num(0)));
        Dspan[2][0] = Expr::num(1);
        Dspan[0][1] = Expr::num(1);
        auto comp = orthogonal_complement(mu, Dspan);
        for (int r = 0; r < 3; ++r) basis[r][2] = comp[0][r];
    }

    SleighResult out;
    out.basis = basis;
    out.algebroid = project_along(se2, basis, 2);
    out.modular = modular_form(out.algebroid);
    out.c112 = out.algebroid->c(0, 1, 0);
    out.c212 = out.algebroid->c(0, 1, 1);
    return out;
}

// --- direct products --------------------------------------------------------------

namespace {

std::string fresh_name(std::string base, std::set<std::string>& used) {
    std::string name = base;
    while (used.count(name)) name += "_2";
    used.insert(name);
    return name;
}

} // namespace

AlgebroidPtr direct_product(const AlgebroidPtr& E1, const AlgebroidPtr& E2) {
    std::set<std::string> used;
    auto keep = [&used](const std::vector<std::string>& names) {
        for (const auto& n : names) used.insert(n);
    };
    keep(E1->coords());
    keep(E1->frame());
    keep(E1->params());

    // shared parameter names stay shared; coordinate/frame clashes are renamed
    std::map<std::string, Expr> rename2;
    std::vector<std::string> coords = E1->coords();
    for (const auto& c : E2->coords()) {
        std::string name = used.count(c) ? fresh_name(c, used) : (used.insert(c), c);
        if (name != c) rename2[c] = Expr::sym(name);
        coords.push_back(name);
    }
    std::vector<std::string> frame = E1->frame();
    for (const auto& f : E2->frame()) {
        std::string name = used.count(f) ? fresh_name(f, used) : (used.insert(f), f);
        frame.push_back(name);
    }
    std::vector<std::string> params = E1->params();
    for (const auto& p : E2->params())
        if (std::find(params.begin(), params.end(), p) == params.end()) {
            if (used.count(p)) {
                std::string name = fresh_name(p, used);
                rename2[p] = Expr::sym(name);
                params.push_back(name);
            } else {
                used.insert(p);
                params.push_back(p);
            }
        }

    auto remap = [&rename2](const Expr& e) {
        return rename2.empty() ? e : subst_expr(e, rename2);
    };

    int m1 = E1->base_dim(), n1 = E1->rank();
    std::vector<std::tuple<int, int, int, Expr>> c_entries;
    for (const auto& [key, value] : E1->c_entries())
        c_entries.emplace_back(std::get<0>(key), std::get<1>(key), std::get<2>(key), value);
    for (const auto& [key, value] : E2->c_entries())
        c_entries.emplace_back(std::get<0>(key) + n1, std::get<1>(key) + n1,
                               std::get<2>(key) + n1, remap(value));
    std::vector<std::tuple<int, int, Expr>> rho_entries;
    for (const auto& [key, value] : E1->rho_entries())
        rho_entries.emplace_back(key.first, key.second, value);
    for (const auto& [key, value] : E2->rho_entries())
        rho_entries.emplace_back(key.first + n1, key.second + m1, remap(value));

    return make_algebroid(m1 + E2->base_dim(), n1 + E2->rank(), coords, frame, params,
                          c_entries, rho_entries);
}

// --- morphisms and relations --------------------------------------------------------

Morphism identity_morphism(const AlgebroidPtr& E) {
    Morphism phi;
    phi.source = E;
    phi.leg.target = E;
    phi.leg.fiber_map = expr_identity(E->rank());
    for (const auto& c : E->coords()) phi.leg.base_map.push_back(Expr::sym(c));
    return phi;
}

namespace {

void check_leg_shape(int source_rank, const BundleLeg& leg, const char* what) {
    if (!leg.target) throw DomainError(std::string(what) + ": null target");
    if (static_cast<int>(leg.fiber_map.size()) != leg.target->rank())
        throw DomainError(std::string(what) + ": fiber map row count != target rank");
    for (const auto& row : leg.fiber_map)
        if (static_cast<int>(row.size()) != source_rank)
            throw DomainError(std::string(what) + ": fiber map column count != source rank");
    if (static_cast<int>(leg.base_map.size()) != leg.target->base_dim())
        throw DomainError(std::string(what) + ": base map entry count != target base dim");
}

// substitution sending target coordinates to their base-map expressions
std::map<std::string, Expr> leg_substitution(const BundleLeg& leg) {
    std::map<std::string, Expr> bind;
    for (int b = 0; b < leg.target->base_dim(); ++b)
        bind[leg.target->coords()[b]] = leg.base_map[b];
    return bind;
}

// pullback of a p-form along a bundle leg onto a host for the source
EForm pullback_along(const AlgebroidPtr& source_host, const BundleLeg& leg, const EForm& alpha) {
    require_same_host(leg.target, alpha.host(), "pullback");
    auto bind = leg_substitution(leg);
    int p = alpha.degree();
    int n_src = source_host->rank();
    EForm out(source_host, p);
    for (const auto& I : increasing_tuples(n_src, p)) {
        Expr acc = Expr::num(0);
        // sum over target tuples with multilinear fiber-map factors
        for (const auto& [J, aJ] : alpha.coeffs()) {
            // expand alpha_J <F e_{I1} ^ .. ^ F e_{Ip}, e^J ...> = det of F rows
            // via permanent-with-signs: determinant of the p x p minor F[J][I]
            ExprMatrix minor(p, std::vector<Expr>(p, Expr::num(0)));
            for (int r = 0; r < p; ++r)
                for (int c2 = 0; c2 < p; ++c2) minor[r][c2] = leg.fiber_map[J[r]][I[c2]];
            Expr det = matrix_det(minor);
            if (!det.is_zero_literal()) acc += subst_expr(aJ, bind) * det;
        }
        out.add_term(I, acc);
    }
    return out.simplified();
}

} // namespace

EForm pullback_form(const Morphism& Phi, const EForm& alpha) {
    check_leg_shape(Phi.source->rank(), Phi.leg, "pullback_form");
    if (alpha.degree() != 1) throw DomainError("pullback_form: degree must be 1");
    return pullback_along(Phi.source, Phi.leg, alpha);
}

MorphismReport morphism_check(const Morphism& Phi, int samples, double tol) {
    check_leg_shape(Phi.source->rank(), Phi.leg, "morphism_check");
    const AlgebroidPtr& E1 = Phi.source;
    const AlgebroidPtr& E2 = Phi.leg.target;
    auto bind = leg_substitution(Phi.leg);

    MorphismReport report;
    report.ok = true;
    auto examine = [&](const EForm& defect, const std::string& label) {
        for (const auto& [t, e] : defect.coeffs()) {
            if (provably_zero(e)) continue;
            double mag = sampled_magnitude(e, samples, 0xfade01);
            if (provably_nonzero(e) || mag > tol) {
                report.ok = false;
                report.max_violation = std::max(report.max_violation, mag);
                report.failures.push_back(label);
                return;
            }
        }
    };

    // generators of degree 0: target coordinates
    for (int b = 0; b < E2->base_dim(); ++b) {
        EForm lhs = pullback_along(E1, Phi.leg, de_rham(EForm::function(E2, Expr::sym(E2->coords()[b]))));
        EForm rhs = de_rham(EForm::function(E1, Phi.leg.base_map[b]));
        examine((lhs - rhs).simplified(), "d intertwining on coordinate " + E2->coords()[b]);
    }
    // generators of degree 1: the dual frame of the target
    for (int K = 0; K < E2->rank(); ++K) {
        EForm lhs = pullback_along(E1, Phi.leg, de_rham(EForm::basis(E2, K)));
        EForm rhs = de_rham(pullback_along(E1, Phi.leg, EForm::basis(E2, K)));
        examine((lhs - rhs).simplified(), "d intertwining on dual frame " + E2->frame()[K]);
    }
    return report;
}

ModularClassRep morphism_modular_class(const Morphism& Phi) {
    auto report = morphism_check(Phi);
    if (!report.ok)
        throw DomainError("morphism_modular_class: not a skew algebroid morphism");
    EForm rep = modular_form(Phi.source).representative -
                pullback_form(Phi, modular_form(Phi.leg.target).representative);
    return {rep.simplified()};
}

LinearRelation relation_from_graph(const Morphism& Phi) {
    LinearRelation R;
    R.carrier_rank = Phi.source->rank();
    R.carrier_coords = Phi.source->coords();
    R.carrier_params = Phi.source->params();
    R.leg1.target = Phi.source;
    R.leg1.fiber_map = expr_identity(Phi.source->rank());
    for (const auto& c : Phi.source->coords()) R.leg1.base_map.push_back(Expr::sym(c));
    R.leg2 = Phi.leg;
    return R;
}

LinearRelation relation_swap(const LinearRelation& R) {
    LinearRelation S = R;
    std::swap(S.leg1, S.leg2);
    return S;
}

AlgebroidPtr relation_carrier(const LinearRelation& R) {
    std::vector<std::string> frame;
    for (int i = 1; i <= R.carrier_rank; ++i) frame.push_back("r" + std::to_string(i));
    return make_algebroid(static_cast<int>(R.carrier_coords.size()), R.carrier_rank,
                          R.carrier_coords, frame, R.carrier_params, {}, {});
}

EForm relation_modular_class(const LinearRelation& R) {
    AlgebroidPtr carrier = relation_carrier(R);
    check_leg_shape(R.carrier_rank, R.leg1, "relation_modular_class leg1");
    check_leg_shape(R.carrier_rank, R.leg2, "relation_modular_class leg2");
    EForm lhs = pullback_along(carrier, R.leg1, modular_form(R.leg1.target).representative);
    EForm rhs = pullback_along(carrier, R.leg2, modular_form(R.leg2.target).representative);
    return (lhs - rhs).simplified();
}

// --- cotangent algebroid --------------------------------------------------------------

Expr PoissonBivector::entry(int i, int j) const {
    if (i < 0 || j < 0 || i >= dim || j >= dim)
        throw DomainError("PoissonBivector: index out of range");
    if (i == j) return Expr::num(0);
    bool flip = i > j;
    if (flip) std::swap(i, j);
    auto it = entries.find({i, j});
    if (it == entries.end()) return Expr::num(0);
    return flip ? Expr::num(-1) * it->second : it->second;
}

PoissonBivector make_poisson(int dim, std::vector<std::string> coords,
                             std::vector<std::string> params,
                             std::vector<std::tuple<int, int, Expr>> entries) {
    if (dim < 1) throw DomainError("PoissonBivector: dim must be >= 1");
    if (static_cast<int>(coords.size()) != dim)
        throw DomainError("PoissonBivector: coordinate count != dim");
    PoissonBivector out;
    out.dim = dim;
    out.coords = std::move(coords);
    out.params = std::move(params);
    for (auto& [i, j, e] : entries) {
        if (i < 0 || j < 0 || i >= dim || j >= dim || i == j)
            throw DomainError("PoissonBivector: bad entry indices");
        int a = i, b = j;
        Expr value = e;
        if (a > b) {
            std::swap(a, b);
            value = Expr::num(-1) * value;
        }
        if (!out.entries.emplace(std::make_pair(a, b), value).second)
            throw DomainError("PoissonBivector: duplicate entry");
    }
    return out;
}

AlgebroidPtr cotangent_algebroid(const PoissonBivector& lambda) {
    int m = lambda.dim;
    std::vector<std::string> frame;
    for (const auto& c : lambda.coords) frame.push_back("d" + c);

    std::vector<std::tuple<int, int, int, Expr>> c_entries;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            Expr lam = lambda.entry(i, j);
            if (lam.is_zero_literal()) continue;
            for (int k = 0; k < m; ++k) {
                Expr value = diff_expr(lam, lambda.coords[k]);
                if (!value.is_zero_literal()) c_entries.emplace_back(i, j, k, value);
            }
        }
    std::vector<std::tuple<int, int, Expr>> rho_entries;
    for (int i = 0; i < m; ++i)
        for (int a = 0; a < m; ++a) {
            Expr value = lambda.entry(i, a);
            if (!value.is_zero_literal()) rho_entries.emplace_back(i, a, value);
        }
    return make_algebroid(m, m, lambda.coords, frame, lambda.params, c_entries, rho_entries);
}

} // namespace skewalg
