#include <doctest.h>

#include <cmath>

#include "skewalg/canonical.hpp"
#include "skewalg/expr.hpp"
#include "skewalg/rng.hpp"

using namespace skewalg;

namespace {

Expr P(const std::string& text, std::set<std::string> syms = {"x", "y", "z"}) {
    return parse_expr(text, syms);
}

double ev(const Expr& e, const Env& env) { return eval_expr(e, env); }

} // namespace

TEST_CASE("parser: arithmetic and symbols") {
    Expr e = P("2*x + y^2", {"x", "y"});
    CHECK(ev(e, {{"x", 1}, {"y", 2.0}}) == doctest::Approx(6.0).epsilon(1e-15));

    Expr sleigh = P("m*a/(J+m*a^2)", {"m", "a", "J"});
    CHECK(ev(sleigh, {{"m", 1}, {"a", 0.5}, {"J", 2}}) == doctest::Approx(2.0 / 9.0).epsilon(1e-15));

    CHECK_THROWS_AS(P("foo+1", {"x"}), ParseError);
    CHECK_THROWS_WITH_AS(P("foo+1", {"x"}),
                         doctest::Contains("unknown symbol: foo"), ParseError);
    CHECK_THROWS_AS(P("2*(x+", {"x"}), ParseError);
    CHECK_THROWS_AS(P("x^y", {"x", "y"}), ParseError);
    CHECK_THROWS_AS(P("tan(x)", {"x"}), ParseError);
}

TEST_CASE("parser: literals become exact rationals") {
    auto half = P("0.5").as_rational();
    REQUIRE(half.has_value());
    CHECK(*half == Rational(1, 2));

    auto third = P("1/3").as_rational();
    REQUIRE(third.has_value());
    CHECK(*third == Rational(1, 3));

    auto big = P("0.333333333333333333333333").as_rational();
    REQUIRE(big.has_value());
    CHECK(big->den().to_string().size() == 25); // 10^24, exact
}

TEST_CASE("eval: exact rational path") {
    Expr e = P("x^2");
    Scalar s = eval_scalar(e, {{"x", Rational(3)}});
    CHECK(s.exact());
    CHECK(s.rational() == Rational(9));

    CHECK_THROWS_AS(ev(P("1/x"), {{"x", 0}}), EvalError);
    CHECK(ev(P("exp(1)"), {}) == doctest::Approx(2.718281828459045).epsilon(1e-15));
    CHECK_THROWS_AS(ev(P("ln(x)"), {{"x", -1.0}}), EvalError);
    CHECK_THROWS_AS(ev(P("sqrt(x)"), {{"x", -4.0}}), EvalError);
    CHECK_THROWS_AS(ev(P("x + z"), {{"x", 1}}), EvalError); // unbound z
}

TEST_CASE("diff: elementary rules") {
    CHECK(exprs_equal(diff_expr(P("x^2"), "x"), P("2*x")).equal);
    CHECK(exprs_equal(diff_expr(P("sin(x)*x"), "x"), P("cos(x)*x + sin(x)")).equal);
    CHECK(exprs_equal(diff_expr(P("1/x"), "x"), P("-1/x^2")).equal);
    CHECK(exprs_equal(diff_expr(P("exp(2*x)"), "x"), P("2*exp(2*x)")).equal);
    CHECK(exprs_equal(diff_expr(P("ln(x)"), "x"), P("1/x")).equal);
    CHECK(exprs_equal(diff_expr(P("sqrt(x)"), "x"), P("1/(2*sqrt(x))")).equal);
}

TEST_CASE("diff agrees with central finite differences") {
    const char* exprs[] = {"x^3 - 2*x*y + y^2", "sin(x)*cos(y)", "exp(x/2) + ln(2 + x^2)",
                           "sqrt(4 + x^2 + y^2)", "x/(1 + y^2)"};
    Rng rng(20240811);
    for (const char* text : exprs) {
        Expr e = P(text, {"x", "y"});
        Expr dx = diff_expr(e, "x");
        const double h = 1e-5;
        for (int k = 0; k < 100; ++k) {
            double x = rng.uniform(-1.5, 1.5), y = rng.uniform(-1.5, 1.5);
            double central = (ev(e, {{"x", x + h}, {"y", y}}) - ev(e, {{"x", x - h}, {"y", y}})) / (2 * h);
            double exact = ev(dx, {{"x", x}, {"y", y}});
            CHECK(std::abs(exact - central) <= 1e-6);
        }
    }
}

TEST_CASE("subst: simultaneous substitution") {
    Expr e = P("x + y^2", {"x", "y"});
    Expr r = subst_expr(e, {{"y", Expr::num(0)}});
    CHECK(Expr::identical(r, P("x")));

    CHECK(Expr::identical(subst_expr(P("y*x"), {{"y", Expr::num(0)}}), Expr::num(0)));
    CHECK(exprs_equal(subst_expr(P("x+y"), {{"x", Expr::sym("y")}}), P("2*y")).equal);

    // simultaneous, not sequential: x->y, y->x swaps
    Expr swap = subst_expr(P("x - y"), {{"x", Expr::sym("y")}, {"y", Expr::sym("x")}});
    CHECK(exprs_equal(swap, P("y - x")).equal);

    // empty substitution is exactly simplification
    Expr f = P("(x+1)^2 - x^2");
    CHECK(Expr::identical(subst_expr(f, {}), simplify(f)));
}

TEST_CASE("simplify: canonical and idempotent") {
    Expr a = simplify(P("(x+1)^2"));
    Expr b = simplify(P("x^2 + 2*x + 1"));
    CHECK(Expr::identical(a, b));
    CHECK(Expr::identical(simplify(a), a));

    // fraction reduction via polynomial gcd
    Expr c = simplify(P("(x^2 - 1)/(x - 1)"));
    CHECK(Expr::identical(c, simplify(P("x + 1"))));

    // traversal-order independence with transcendental atoms
    CHECK(Expr::identical(simplify(P("sin(x) + cos(x)")), simplify(P("cos(x) + sin(x)"))));
    // atoms keyed by canonical argument
    CHECK(Expr::identical(simplify(P("sin(x+x)")), simplify(P("sin(2*x)"))));

    CHECK_THROWS_AS(simplify(P("1/(x - x)")), ExprError);

    Expr mixed = P("(x - y)^3/(1 + x^2) - z*x + 5/7");
    Expr s = simplify(mixed);
    CHECK(Expr::identical(simplify(s), s));
}

TEST_CASE("print/parse round trip lands on the same canonical form") {
    const char* cases[] = {"(x+1)^2/(y - 3)", "-x + 2/3*y^4", "sin(x)^2*cos(y)/x",
                           "sqrt(1 + x^2) - exp(-2*x)", "x^(-2) + 1/7"};
    for (const char* text : cases) {
        Expr e = simplify(P(text));
        Expr round = parse_expr(e.to_string(), {"x", "y", "z"});
        CHECK(Expr::identical(simplify(round), e));
    }
}

TEST_CASE("exprs_equal: canonical and numeric routes") {
    auto r1 = exprs_equal(P("(x+1)^2"), P("x^2+2*x+1"));
    CHECK(r1.equal);
    CHECK(r1.method == EqualityMethod::Canonical);

    auto r2 = exprs_equal(P("x"), P("x+1"));
    CHECK(!r2.equal);
    CHECK(r2.method == EqualityMethod::Canonical);

    auto r3 = exprs_equal(P("sin(x)^2 + cos(x)^2"), P("1"));
    CHECK(r3.equal);
    CHECK(r3.method == EqualityMethod::Numeric);

    auto r4 = exprs_equal(P("sin(x)"), P("cos(x)"));
    CHECK(!r4.equal);

    // singular points get resampled rather than poisoning the verdict
    auto r5 = exprs_equal(P("ln(x^2)"), P("2*ln(sqrt(x^2))"));
    CHECK(r5.equal);
}

TEST_CASE("exprs_equal: reflexive and symmetric on a random corpus") {
    const char* corpus[] = {"x*y - y^2/3", "sin(x)+x^3", "exp(x)*x", "1/(2+x^2)", "sqrt(9+y^2)"};
    for (const char* a : corpus) {
        CHECK(exprs_equal(P(a), P(a)).equal);
        for (const char* b : corpus) {
            CHECK(exprs_equal(P(a), P(b)).equal == exprs_equal(P(b), P(a)).equal);
        }
    }
}

TEST_CASE("scientific-notation literals and integer exponent edge cases") {
    CHECK(ev(P("1e-3"), {}) == doctest::Approx(0.001).epsilon(1e-15));
    CHECK(ev(P("2.5e2"), {}) == doctest::Approx(250.0).epsilon(1e-15));
    CHECK(ev(P("x^(-2)"), {{"x", 2.0}}) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(ev(P("x^-2"), {{"x", 2.0}}) == doctest::Approx(0.25).epsilon(1e-15));
}
