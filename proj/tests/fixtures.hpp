#ifndef SKEWALG_TESTS_FIXTURES_HPP
#define SKEWALG_TESTS_FIXTURES_HPP

#include <string>
#include <vector>

#include "skewalg/algebroid.hpp"
#include "skewalg/rng.hpp"

namespace fixtures {

using namespace skewalg;

inline Expr E1() { return Expr::num(1); }

inline Expr parse_on(const AlgebroidPtr& E, const std::string& text) {
    return parse_expr(text, E->scalar_symbols());
}

// se(2): [E3,E1]=E2, [E2,E3]=E1, [E1,E2]=0 (0-based: c(2,0,1)=1, c(1,2,0)=1)
inline AlgebroidPtr se2() {
    return make_algebroid(0, 3, {}, {"E1", "E2", "E3"}, {},
                          {{2, 0, 1, Expr::num(1)}, {1, 2, 0, Expr::num(1)}}, {});
}

// so(3): [e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e2
inline AlgebroidPtr so3() {
    return make_algebroid(0, 3, {}, {"e1", "e2", "e3"}, {},
                          {{0, 1, 2, Expr::num(1)}, {1, 2, 0, Expr::num(1)}, {2, 0, 1, Expr::num(1)}},
                          {});
}

// aff(1): [e1,e2] = e2
inline AlgebroidPtr aff1() {
    return make_algebroid(0, 2, {}, {"e1", "e2"}, {}, {{0, 1, 1, Expr::num(1)}}, {});
}

inline AlgebroidPtr abelian(int n) {
    std::vector<std::string> frame;
    for (int i = 1; i <= n; ++i) frame.push_back("a" + std::to_string(i));
    return make_algebroid(0, n, {}, frame, {}, {}, {});
}

// the crafted non-Lie skew algebra: c^3_12 = 1, c^1_13 = 1
inline AlgebroidPtr nonlie() {
    return make_algebroid(0, 3, {}, {"e1", "e2", "e3"}, {},
                          {{0, 1, 2, Expr::num(1)}, {0, 2, 0, Expr::num(1)}}, {});
}

// TM(R^2) in the coordinate frame
inline AlgebroidPtr tangent_r2() {
    return make_algebroid(2, 2, {"x1", "x2"}, {"e1", "e2"}, {}, {},
                          {{0, 0, Expr::num(1)}, {1, 1, Expr::num(1)}});
}

// TM(R^2) in the polynomial frame e1 = d/dx1, e2 = x1 d/dx1 + d/dx2
inline AlgebroidPtr tangent_r2_poly() {
    return make_algebroid(2, 2, {"x1", "x2"}, {"e1", "e2"}, {},
                          {{0, 1, 0, Expr::num(1)}},
                          {{0, 0, Expr::num(1)}, {1, 0, Expr::sym("x1")}, {1, 1, Expr::num(1)}});
}

// TM(R) with identity anchor
inline AlgebroidPtr tm_r1() {
    return make_algebroid(1, 1, {"x"}, {"e1"}, {}, {}, {{0, 0, Expr::num(1)}});
}

// m = 1, n = 1, rho = x
inline AlgebroidPtr line_rho_x() {
    return make_algebroid(1, 1, {"x"}, {"e1"}, {}, {}, {{0, 0, Expr::sym("x")}});
}

// m=1, n=2, rho = (1, x), c = 0: frame Jacobiator vanishes but the anchor
// is not bracket-compatible
inline AlgebroidPtr anchor_defect() {
    return make_algebroid(1, 2, {"x"}, {"e1", "e2"}, {}, {},
                          {{0, 0, Expr::num(1)}, {1, 0, Expr::sym("x")}});
}

// rank 2 over R^1 with non-constant anchor (and a Lie bracket induced by the
// vector fields d/dx and x d/dx)
inline AlgebroidPtr rank2_nonconst_anchor() {
    return make_algebroid(1, 2, {"x"}, {"e1", "e2"}, {},
                          {{0, 1, 0, Expr::num(1)}},
                          {{0, 0, Expr::num(1)}, {1, 0, Expr::sym("x")}});
}

// sleigh constants as an abstract rank-2 skew algebra over the parameters
inline AlgebroidPtr sleigh_d_symbolic() {
    std::set<std::string> ps = {"m", "J", "a", "b"};
    Expr A = parse_expr("m*a/(J+m*a^2)", ps);
    Expr B = parse_expr("m*a*b/(J+m*a^2)", ps);
    return make_algebroid(0, 2, {}, {"e1", "e2"}, {"m", "J", "a", "b"},
                          {{0, 1, 0, A}, {0, 1, 1, B}}, {});
}

inline Expr random_poly(Rng& rng, const std::vector<std::string>& vars, int max_degree = 2) {
    Expr acc = Expr::num(static_cast<long long>(rng.below(7)) - 3);
    for (const auto& v : vars) {
        for (int d = 1; d <= max_degree; ++d) {
            long long coeff = static_cast<long long>(rng.below(7)) - 3;
            if (coeff != 0) acc += Expr::num(coeff) * pow(Expr::sym(v), d);
        }
    }
    return acc;
}

inline Section random_section(Rng& rng, const AlgebroidPtr& E, int max_degree = 1) {
    std::vector<Expr> comps;
    for (int i = 0; i < E->rank(); ++i) comps.push_back(random_poly(rng, E->coords(), max_degree));
    return Section::from_components(E, comps);
}

inline EForm random_form(Rng& rng, const AlgebroidPtr& E, int degree, int max_degree = 1) {
    EForm out(E, degree);
    for (const auto& t : increasing_tuples(E->rank(), degree))
        out.add_term(t, random_poly(rng, E->coords(), max_degree));
    return out;
}

} // namespace fixtures

#endif
