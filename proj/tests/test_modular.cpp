#include <doctest.h>

#include "fixtures.hpp"
#include "skewalg/modular.hpp"
#include "skewalg/reduction.hpp"

using namespace skewalg;
using namespace fixtures;

namespace {

bool form_is(const EForm& got, const std::vector<Expr>& expect) {
    auto comps = got.components();
    for (size_t i = 0; i < comps.size(); ++i)
        if (!exprs_equal(comps[i], expect[i]).equal) return false;
    return true;
}

} // namespace

TEST_CASE("modular_form basics") {
    // se(2) is modular
    CHECK(modular_form(se2()).representative.symbolically_zero());

    // aff(1): phi = e^1
    auto A = aff1();
    CHECK(form_is(modular_form(A).representative, {Expr::num(1), Expr::num(0)}));

    // m=1, n=1, rho = x: phi = (d rho/dx) e^1 = e^1
    auto L = line_rho_x();
    CHECK(form_is(modular_form(L).representative, {Expr::num(1)}));

    // sleigh D: (mab/(J+ma^2)) e^1 - (ma/(J+ma^2)) e^2
    auto D = sleigh_d_symbolic();
    CHECK(form_is(modular_form(D).representative,
                  {parse_on(D, "m*a*b/(J+m*a^2)"), parse_on(D, "-m*a/(J+m*a^2)")}));
}

TEST_CASE("canonical line connection reproduces the modular form") {
    for (const auto& E : {se2(), so3(), aff1(), sleigh_d_symbolic(), tangent_r2_poly(),
                          rank2_nonconst_anchor(), line_rho_x(), nonlie()}) {
        EForm via_connection = char_form(canonical_line_connection(E), Expr::num(1));
        CHECK((via_connection - modular_form(E).representative).symbolically_zero());
    }
}

TEST_CASE("char_form: explicit coefficients and the gauge law") {
    auto L = rank2_nonconst_anchor();

    // sigma = 1: the form is just the Gamma coefficients
    EConnection conn(L, 1);
    conn.set_gamma(0, 0, 0, Expr::sym("x"));
    conn.set_gamma(1, 0, 0, Expr::num(3));
    CHECK(form_is(char_form(conn, Expr::num(1)), {Expr::sym("x"), Expr::num(3)}));

    // gauge law: char_form(exp(f) sigma) - char_form(sigma) = d f
    Rng rng(5150);
    for (const auto& E : {line_rho_x(), tangent_r2_poly(), rank2_nonconst_anchor()}) {
        EConnection base(E, 1);
        for (int i = 0; i < E->rank(); ++i) base.set_gamma(i, 0, 0, random_poly(rng, E->coords()));
        Expr f = random_poly(rng, E->coords());
        Expr sigma = Expr::num(1) + pow(Expr::sym(E->coords()[0]), 2); // nowhere zero
        Expr sigma_prime = Expr::call(FuncKind::Exp, f) * sigma;
        EForm difference = char_form(base, sigma_prime) - char_form(base, sigma);
        EForm df = de_rham(EForm::function(E, f));
        CHECK((difference - df).symbolically_zero());
    }

    CHECK_THROWS_AS(char_form(conn, Expr::num(0)), DomainError);
}

TEST_CASE("mechanical_hamiltonian") {
    auto S = so3();
    Expr H0 = mechanical_hamiltonian(identity_metric(S), Expr::num(0));
    CHECK(exprs_equal(H0, parse_expr("(xi1^2+xi2^2+xi3^2)/2", {"xi1", "xi2", "xi3"})).equal);

    // g = diag(2) on a rank-1 algebra: H = xi1^2/4
    auto line = make_algebroid(0, 1, {}, {"e1"}, {}, {}, {});
    BundleMetric g2 = make_bundle_metric(line, {{Expr::num(2)}});
    CHECK(exprs_equal(mechanical_hamiltonian(g2, Expr::num(0)),
                      parse_expr("xi1^2/4", {"xi1"}))
              .equal);

    // identity metric with potential V = x^2 over m=1
    auto L = line_rho_x();
    Expr H = mechanical_hamiltonian(identity_metric(L), pow(Expr::sym("x"), 2));
    CHECK(exprs_equal(H, parse_expr("xi1^2/2 + x^2", {"x", "xi1"})).equal);

    // singular metric rejected
    auto A = abelian(2);
    ExprMatrix degenerate = {{Expr::num(1), Expr::num(1)}, {Expr::num(1), Expr::num(1)}};
    CHECK_THROWS_AS(make_bundle_metric(A, degenerate), DomainError);
    // asymmetric metric rejected
    ExprMatrix asym = {{Expr::num(1), Expr::num(2)}, {Expr::num(1), Expr::num(1)}};
    CHECK_THROWS_AS(make_bundle_metric(A, asym), DomainError);
}

TEST_CASE("mt0 divergence identity") {
    // sleigh D with the mechanical Hamiltonian
    auto D = sleigh_d_symbolic();
    Expr HD = mechanical_hamiltonian(identity_metric(D), Expr::num(0));
    auto reportD = mt0_residual(D, HD, random_phase_points(D, 100, 777));
    CHECK(reportD.evaluated == 100);
    CHECK(reportD.max_residual <= 1e-9);

    // abelian: both sides vanish exactly
    auto A = abelian(3);
    Expr HA = mechanical_hamiltonian(identity_metric(A), Expr::num(0));
    auto reportA = mt0_residual(A, HA, random_phase_points(A, 10, 778));
    CHECK(reportA.max_residual == 0.0);

    // so(3) free Hamiltonian
    auto S = so3();
    Expr HS = mechanical_hamiltonian(identity_metric(S), Expr::num(0));
    auto reportS = mt0_residual(S, HS, random_phase_points(S, 100, 779));
    CHECK(reportS.max_residual <= 1e-9);

    // non-mechanical Hamiltonians satisfy the identity too (mt0 is unconditional)
    auto L = rank2_nonconst_anchor();
    Expr weird = parse_expr("xi1^2*xi2 + x*xi2^2 + sin(x)*xi1", {"x", "xi1", "xi2"});
    auto reportW = mt0_residual(L, weird, random_phase_points(L, 100, 780));
    CHECK(reportW.max_residual <= 1e-9);
}

TEST_CASE("vanishing criterion via the mechanical pairing") {
    // phi = 0 iff (phi)^v(H) == 0 for the identity-metric mechanical Hamiltonian
    for (const auto& E : {se2(), so3(), aff1(), sleigh_d_symbolic(), line_rho_x()}) {
        Expr H = mechanical_hamiltonian(identity_metric(E), Expr::num(0));
        Expr paired = vertical_lift_oneform(modular_form(E).representative).apply(H);
        bool modular = modular_form(E).representative.symbolically_zero();
        bool pairing_vanishes = exprs_equal(paired, Expr::num(0)).equal;
        CHECK(modular == pairing_vanishes);
    }
}

TEST_CASE("normal_connection") {
    // aff(1), E0 = span{e1}: Gamma^2_12 = 1 -> gamma(0,0,0) on the rank-1 normal bundle
    auto A = aff1();
    EConnection cA = normal_connection(A, 1, 0);
    CHECK(cA.aux_rank() == 1);
    CHECK(exprs_equal(cA.gamma(0, 0, 0), Expr::num(1)).equal);

    // abelian: all zero
    auto Ab = abelian(3);
    EConnection cAb = normal_connection(Ab, 1, 0);
    CHECK(cAb.gamma(0, 0, 0).is_zero_literal());

    // se(2) translation ideal span{E1,E2}: trace-free normal action
    auto S = se2();
    EConnection cS = normal_connection(S, 2, 0);
    CHECK(cS.gamma(0, 0, 0).is_zero_literal());
    CHECK(cS.gamma(1, 0, 0).is_zero_literal());
}

TEST_CASE("relative_modular_class") {
    auto A = aff1();
    auto rel = relative_modular_class(A, 1, 0);
    CHECK(form_is(rel.representative, {Expr::num(-1)}));

    auto S = se2();
    CHECK(relative_modular_class(S, 2, 0).representative.symbolically_zero());

    auto Ab = abelian(3);
    CHECK(relative_modular_class(Ab, 2, 0).representative.symbolically_zero());
}

TEST_CASE("relative class equals mod(E0) minus pullback, and minus the normal trace") {
    // the (aa1)-style decomposition on several adapted subalgebroids
    struct Case {
        AlgebroidPtr E;
        int n0, m0;
    };
    std::vector<Case> cases = {{aff1(), 1, 0}, {se2(), 2, 0}, {so3(), 1, 0},
                               {tangent_r2(), 1, 1}};
    for (const auto& [E, n0, m0] : cases) {
        auto E0 = restrict_algebroid(E, n0, m0);
        auto rel = relative_modular_class(E, n0, m0);

        // mod(E0) - j^*(mod(E)): the pullback of the coordinate representative
        // along the inclusion is coefficient restriction
        std::map<std::string, Expr> zero;
        for (int A2 = m0; A2 < E->base_dim(); ++A2) zero[E->coords()[A2]] = Expr::num(0);
        EForm pulled(E0, 1);
        auto parent_mod = modular_form(E).representative.components();
        for (int i = 0; i < n0; ++i) pulled.add_term({i}, subst_expr(parent_mod[i], zero));
        EForm expected = modular_form(E0).representative - pulled;
        CHECK((rel.representative - expected).symbolically_zero());

        // Thm 5.2 shape: relative class = -char_form of the top normal connection
        if (n0 < E->rank()) {
            EConnection nc = normal_connection(E, n0, m0);
            EConnection top(E0, 1);
            for (int i = 0; i < n0; ++i) {
                Expr trace = Expr::num(0);
                for (int k = 0; k < nc.aux_rank(); ++k) trace += nc.gamma(i, k, k);
                top.set_gamma(i, 0, 0, simplify(trace));
            }
            EForm neg_char = char_form(top, Expr::num(1)).scaled(Expr::num(-1));
            CHECK((rel.representative - neg_char).symbolically_zero());
        }
    }
}

TEST_CASE("exactness_check") {
    // rho = x on x>0: e^1 = d(ln x)
    auto L = line_rho_x();
    CHECK(exactness_check(L, EForm::basis(L, 0), Expr::call(FuncKind::Ln, Expr::sym("x"))));

    // point base: d f = 0, so e^1 is not exact with any witness
    auto A = aff1();
    CHECK_FALSE(exactness_check(A, EForm::basis(A, 0), Expr::num(7)));

    // round trip through de_rham
    auto T = tangent_r2_poly();
    Expr f = pow(Expr::sym("x1"), 2);
    CHECK(exactness_check(T, de_rham(EForm::function(T, f)), f));
}
