#include "skewalg/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "skewalg/rng.hpp"

namespace skewalg {

namespace {

// --- multivariate polynomials over Rational -------------------------------

// sparse exponent vector: (atom id, exponent > 0), sorted by atom id
using Monomial = std::vector<std::pair<int, int>>;

int total_degree(const Monomial& m) {
    int d = 0;
    for (auto& [a, e] : m) d += e;
    return d;
}

// graded lexicographic order, atom 0 has highest lex precedence
struct MonoLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        int da = total_degree(a), db = total_degree(b);
        if (da != db) return da < db;
        size_t i = 0, j = 0;
        while (i < a.size() || j < b.size()) {
            int atom_a = i < a.size() ? a[i].first : INT32_MAX;
            int atom_b = j < b.size() ? b[j].first : INT32_MAX;
            if (atom_a != atom_b) {
                // the one holding the smaller atom has higher lex rank
                return atom_a > atom_b;
            }
            if (a[i].second != b[j].second) return a[i].second < b[j].second;
            ++i;
            ++j;
        }
        return false;
    }
};

Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial r;
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            r.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            r.push_back(b[j++]);
        } else {
            r.emplace_back(a[i].first, a[i].second + b[j].second);
            ++i;
            ++j;
        }
    }
    return r;
}

// divides exactly (all exponents in b <= those in a)? quotient in r
bool mono_div(const Monomial& a, const Monomial& b, Monomial& r) {
    r.clear();
    size_t i = 0;
    for (auto& [atom, exp] : b) {
        while (i < a.size() && a[i].first < atom) r.push_back(a[i++]);
        if (i == a.size() || a[i].first != atom || a[i].second < exp) return false;
        if (a[i].second > exp) r.emplace_back(atom, a[i].second - exp);
        ++i;
    }
    while (i < a.size()) r.push_back(a[i++]);
    return true;
}

struct Poly {
    std::map<Monomial, Rational, MonoLess> terms;

    bool is_zero() const { return terms.empty(); }
    bool is_constant() const {
        return terms.empty() || (terms.size() == 1 && terms.begin()->first.empty());
    }
    Rational constant_value() const {
        return terms.empty() ? Rational(0) : terms.begin()->second;
    }

    static Poly constant(const Rational& r) {
        Poly p;
        if (!r.is_zero()) p.terms.emplace(Monomial{}, r);
        return p;
    }
    static Poly atom(int id) {
        Poly p;
        p.terms.emplace(Monomial{{id, 1}}, Rational(1));
        return p;
    }

    void add_term(const Monomial& m, const Rational& c) {
        if (c.is_zero()) return;
        auto it = terms.find(m);
        if (it == terms.end()) {
            terms.emplace(m, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms.erase(it);
        }
    }
};

Poly operator+(const Poly& a, const Poly& b) {
    Poly r = a;
    for (auto& [m, c] : b.terms) r.add_term(m, c);
    return r;
}

Poly operator-(const Poly& a, const Poly& b) {
    Poly r = a;
    for (auto& [m, c] : b.terms) r.add_term(m, -c);
    return r;
}

Poly operator*(const Poly& a, const Poly& b) {
    Poly r;
    for (auto& [ma, ca] : a.terms)
        for (auto& [mb, cb] : b.terms) r.add_term(mono_mul(ma, mb), ca * cb);
    return r;
}

Poly operator*(const Poly& a, const Rational& s) {
    Poly r;
    if (s.is_zero()) return r;
    for (auto& [m, c] : a.terms) r.terms.emplace(m, c * s);
    return r;
}

Poly poly_pow(const Poly& base, unsigned e) {
    Poly result = Poly::constant(Rational(1));
    Poly b = base;
    while (e) {
        if (e & 1u) result = result * b;
        b = b * b;
        e >>= 1;
    }
    return result;
}

int main_atom(const Poly& p) {
    int v = -1;
    for (auto& [m, c] : p.terms)
        for (auto& [atom, exp] : m) v = std::max(v, atom);
    return v;
}

int degree_in(const Poly& p, int v) {
    int d = 0;
    for (auto& [m, c] : p.terms)
        for (auto& [atom, exp] : m)
            if (atom == v) d = std::max(d, exp);
    return d;
}

// view as univariate in v: degree -> coefficient poly (v removed)
std::map<int, Poly> by_degree(const Poly& p, int v) {
    std::map<int, Poly> out;
    for (auto& [m, c] : p.terms) {
        int d = 0;
        Monomial rest;
        for (auto& [atom, exp] : m) {
            if (atom == v) d = exp;
            else rest.emplace_back(atom, exp);
        }
        out[d].add_term(rest, c);
    }
    return out;
}

// leading coefficient poly w.r.t. v
Poly leading_coeff(const Poly& p, int v) {
    auto m = by_degree(p, v);
    return m.empty() ? Poly() : m.rbegin()->second;
}

// single-divisor multivariate division; true iff remainder is zero
bool try_div_exact(const Poly& a, const Poly& b, Poly& q) {
    q = Poly();
    if (b.is_zero()) return false;
    if (a.is_zero()) return true;
    if (b.is_constant()) {
        Rational inv = b.constant_value().inverse();
        q = a * inv;
        return true;
    }
    Poly r = a;
    auto lead_b = *b.terms.rbegin();
    while (!r.is_zero()) {
        auto lead_r = *r.terms.rbegin();
        Monomial t;
        if (!mono_div(lead_r.first, lead_b.first, t)) return false;
        Rational c = lead_r.second / lead_b.second;
        Poly term;
        term.terms.emplace(t, c);
        q = q + term;
        r = r - term * b;
    }
    return true;
}

Rational rational_content(const Poly& p) {
    Rational g(0);
    for (auto& [m, c] : p.terms) g = Rational::gcd(g, c);
    return g.is_zero() ? Rational(1) : g;
}

Poly poly_gcd(const Poly& a, const Poly& b);

// gcd of the univariate-in-v coefficient polys
Poly content_wrt(const Poly& p, int v) {
    Poly g;
    for (auto& [d, coeff] : by_degree(p, v)) g = poly_gcd(g, coeff);
    return g;
}

Poly primitive_wrt(const Poly& p, int v) {
    Poly c = content_wrt(p, v);
    Poly q;
    if (!try_div_exact(p, c, q)) return p; // unreachable for correct content
    return q;
}

// pseudo-remainder of a by b in the variable v
Poly pseudo_rem(Poly a, const Poly& b, int v) {
    int db = degree_in(b, v);
    Poly lb = leading_coeff(b, v);
    Poly vpow = Poly::atom(v);
    while (!a.is_zero() && degree_in(a, v) >= db) {
        int da = degree_in(a, v);
        Poly la = leading_coeff(a, v);
        Poly shift = da == db ? Poly::constant(Rational(1)) : poly_pow(vpow, da - db);
        a = a * lb - b * (la * shift);
    }
    return a;
}

// sign of the leading (max-monomial) coefficient
int lead_sign(const Poly& p) {
    return p.is_zero() ? 0 : p.terms.rbegin()->second.sign();
}

Poly normalize_unit(const Poly& p) {
    if (p.is_zero()) return p;
    Rational c = rational_content(p);
    if (lead_sign(p) < 0) c = -c;
    Poly q;
    try_div_exact(p, Poly::constant(c), q);
    return q;
}

Poly poly_gcd(const Poly& a, const Poly& b) {
    if (a.is_zero()) return normalize_unit(b);
    if (b.is_zero()) return normalize_unit(a);
    if (a.is_constant() || b.is_constant()) return Poly::constant(Rational(1));
    int v = std::max(main_atom(a), main_atom(b));
    int da = degree_in(a, v), db = degree_in(b, v);
    if (da == 0) return poly_gcd(a, content_wrt(b, v));
    if (db == 0) return poly_gcd(b, content_wrt(a, v));
    Poly cont = poly_gcd(content_wrt(a, v), content_wrt(b, v));
    Poly A = primitive_wrt(a, v);
    Poly B = primitive_wrt(b, v);
    if (degree_in(A, v) < degree_in(B, v)) std::swap(A, B);
    // primitive PRS; polynomial sizes in this project stay tiny
    for (;;) {
        Poly r = pseudo_rem(A, B, v);
        if (r.is_zero()) return normalize_unit(cont * primitive_wrt(B, v));
        if (degree_in(r, v) == 0) return normalize_unit(cont);
        A = B;
        B = primitive_wrt(r, v);
    }
}

// --- atoms ------------------------------------------------------------------

struct Atom {
    std::string key;
    Expr expr; // canonical expression this atom denotes
    bool transcendental;
};

struct AtomTable {
    std::vector<Atom> atoms;
    std::map<std::string, int> index;

    int intern(const std::string& key, const Expr& e, bool transcendental) {
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(atoms.size());
        atoms.push_back({key, e, transcendental});
        index.emplace(key, id);
        return id;
    }
};

// --- rational functions -------------------------------------------------------

struct RatFunc {
    Poly num, den; // den never zero

    static RatFunc from_poly(Poly p) { return {std::move(p), Poly::constant(Rational(1))}; }
};

void reduce(RatFunc& f) {
    if (f.den.is_zero()) throw ExprError("division by zero in simplification");
    if (f.num.is_zero()) {
        f.den = Poly::constant(Rational(1));
        return;
    }
    Poly g = poly_gcd(f.num, f.den);
    if (!g.is_constant()) {
        Poly qn, qd;
        try_div_exact(f.num, g, qn);
        try_div_exact(f.den, g, qd);
        f.num = qn;
        f.den = qd;
    }
    // one shared rational scale: combined content 1, positive leading den coeff
    Rational c = Rational::gcd(rational_content(f.num), rational_content(f.den));
    if (lead_sign(f.den) < 0) c = -c;
    Poly qn, qd;
    try_div_exact(f.num, Poly::constant(c), qn);
    try_div_exact(f.den, Poly::constant(c), qd);
    f.num = qn;
    f.den = qd;
}

RatFunc rf_add(const RatFunc& a, const RatFunc& b) {
    RatFunc r{a.num * b.den + b.num * a.den, a.den * b.den};
    reduce(r);
    return r;
}

RatFunc rf_sub(const RatFunc& a, const RatFunc& b) {
    RatFunc r{a.num * b.den - b.num * a.den, a.den * b.den};
    reduce(r);
    return r;
}

RatFunc rf_mul(const RatFunc& a, const RatFunc& b) {
    RatFunc r{a.num * b.num, a.den * b.den};
    reduce(r);
    return r;
}

RatFunc rf_div(const RatFunc& a, const RatFunc& b) {
    if (b.num.is_zero()) throw ExprError("division by zero in simplification");
    RatFunc r{a.num * b.den, a.den * b.num};
    reduce(r);
    return r;
}

RatFunc rf_pow(const RatFunc& a, long long e) {
    if (e == 0) return RatFunc::from_poly(Poly::constant(Rational(1)));
    bool invert = e < 0;
    unsigned k = static_cast<unsigned>(invert ? -e : e);
    RatFunc r{poly_pow(a.num, k), poly_pow(a.den, k)};
    if (invert) {
        if (r.num.is_zero()) throw ExprError("zero raised to a negative power");
        std::swap(r.num, r.den);
    }
    reduce(r);
    return r;
}

// --- canonicalization ----------------------------------------------------------

Expr rebuild(const RatFunc& f, const AtomTable& table);

class Canonicalizer {
public:
    AtomTable table;

    RatFunc build(const Expr& e) {
        const ExprNode& n = e.node();
        switch (n.kind) {
            case NodeKind::Number:
                return RatFunc::from_poly(Poly::constant(n.value));
            case NodeKind::Symbol:
                return RatFunc::from_poly(
                    Poly::atom(table.intern("s:" + n.name, Expr::sym(n.name), false)));
            case NodeKind::Add: return rf_add(build(n.left()), build(n.right()));
            case NodeKind::Sub: return rf_sub(build(n.left()), build(n.right()));
            case NodeKind::Mul: return rf_mul(build(n.left()), build(n.right()));
            case NodeKind::Div: return rf_div(build(n.left()), build(n.right()));
            case NodeKind::Pow: return rf_pow(build(n.left()), n.exponent);
            case NodeKind::Func: return build_func(n.func, n.left());
        }
        throw ExprError("corrupt expression node");
    }

private:
    RatFunc build_func(FuncKind f, const Expr& arg) {
        RatFunc af = build(arg);
        Expr carg = rebuild(af, table);
        if (auto r = carg.as_rational()) {
            if (auto folded = fold_constant(f, *r)) return RatFunc::from_poly(Poly::constant(*folded));
        }
        Expr atom_expr = Expr::call(f, carg);
        std::string key = std::string("t:") + func_name(f) + ":" + carg.to_string();
        return RatFunc::from_poly(Poly::atom(table.intern(key, atom_expr, true)));
    }

    // only the exact cases; everything else stays an opaque atom
    static std::optional<Rational> fold_constant(FuncKind f, const Rational& r) {
        switch (f) {
            case FuncKind::Sin:
                if (r.is_zero()) return Rational(0);
                return std::nullopt;
            case FuncKind::Cos:
                if (r.is_zero()) return Rational(1);
                return std::nullopt;
            case FuncKind::Exp:
                if (r.is_zero()) return Rational(1);
                return std::nullopt;
            case FuncKind::Ln:
                if (r.is_one()) return Rational(0);
                return std::nullopt;
            case FuncKind::Sqrt: {
                if (r.sign() < 0) return std::nullopt;
                if (r.is_zero()) return Rational(0);
                // exact square roots of rationals only
                auto isqrt = [](const BigInt& v) -> std::optional<BigInt> {
                    if (v.is_zero()) return BigInt(0);
                    double dv = v.to_double();
                    if (!std::isfinite(dv) || dv > 8.0e37) return std::nullopt;
                    double guess = std::max(1.0, std::floor(std::sqrt(dv)));
                    BigInt x(static_cast<long long>(std::min(guess, 9.0e18)));
                    // double sqrt is within a few ulps; settle exactly
                    while (x * x > v) x = x - BigInt(1);
                    while ((x + BigInt(1)) * (x + BigInt(1)) <= v) x = x + BigInt(1);
                    return x * x == v ? std::optional<BigInt>(x) : std::nullopt;
                };
                auto sn = isqrt(r.num());
                if (!sn) return std::nullopt;
                auto sd = isqrt(r.den());
                if (!sd) return std::nullopt;
                return Rational(*sn, *sd);
            }
        }
        return std::nullopt;
    }
};

// remap atom ids so they follow the sorted order of atom keys; keeps
// canonicalization independent of traversal order
RatFunc remap_sorted(const RatFunc& f, const AtomTable& table, std::vector<int>& perm) {
    std::vector<int> order(table.atoms.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return table.atoms[a].key < table.atoms[b].key;
    });
    perm.assign(order.size(), 0);
    for (size_t rank = 0; rank < order.size(); ++rank) perm[order[rank]] = static_cast<int>(rank);

    auto remap_poly = [&](const Poly& p) {
        Poly out;
        for (auto& [m, c] : p.terms) {
            Monomial nm;
            for (auto& [atom, exp] : m) nm.emplace_back(perm[atom], exp);
            std::sort(nm.begin(), nm.end());
            out.add_term(nm, c);
        }
        return out;
    };
    return {remap_poly(f.num), remap_poly(f.den)};
}

Expr poly_to_expr(const Poly& p, const std::vector<Expr>& atom_exprs) {
    if (p.is_zero()) return Expr::num(0);
    Expr acc;
    bool first = true;
    // descending monomial order: leading term first
    for (auto it = p.terms.rbegin(); it != p.terms.rend(); ++it) {
        const Monomial& m = it->first;
        Rational c = it->second;
        bool negative = c.sign() < 0;
        Rational mag = negative ? -c : c;
        Expr term;
        bool have = false;
        if (!mag.is_one() || m.empty()) {
            term = Expr::num(mag);
            have = true;
        }
        for (auto& [atom, exp] : m) {
            Expr f = exp == 1 ? atom_exprs[atom] : pow(atom_exprs[atom], exp);
            term = have ? term * f : f;
            have = true;
        }
        if (first) {
            acc = negative ? Expr::num(-1) * term : term;
            first = false;
        } else {
            acc = negative ? acc - term : acc + term;
        }
    }
    return acc;
}

Expr rebuild(const RatFunc& f, const AtomTable& table) {
    std::vector<int> perm;
    RatFunc sorted = remap_sorted(f, table, perm);
    RatFunc copy = sorted;
    reduce(copy);

    std::vector<Expr> atom_exprs(table.atoms.size());
    for (size_t i = 0; i < table.atoms.size(); ++i) atom_exprs[perm[i]] = table.atoms[i].expr;

    Expr numerator = poly_to_expr(copy.num, atom_exprs);
    if (copy.den.is_constant() && copy.den.constant_value().is_one()) return numerator;
    Expr denominator = poly_to_expr(copy.den, atom_exprs);
    return numerator / denominator;
}

bool has_transcendental(const Poly& p, const AtomTable& table) {
    for (auto& [m, c] : p.terms)
        for (auto& [atom, exp] : m)
            if (table.atoms[atom].transcendental) return true;
    return false;
}

} // namespace

Expr simplify(const Expr& e) {
    Canonicalizer canon;
    RatFunc f = canon.build(e);
    return rebuild(f, canon.table);
}

namespace {

// randomized comparison on [-2,2]^vars, rejection-resampling singular points
bool numeric_agree(const Expr& a, const Expr& b, const std::vector<std::string>& vars,
                   int trials, double tol, uint64_t seed) {
    Rng rng(seed);
    int accepted = 0;
    int attempts = 0;
    const int max_attempts = trials * 200 + 200;
    while (accepted < trials && attempts < max_attempts) {
        ++attempts;
        Env env;
        for (const auto& v : vars) env[v] = Scalar(rng.uniform(-2.0, 2.0));
        try {
            double va = eval_expr(a, env);
            double vb = eval_expr(b, env);
            if (!std::isfinite(va) || !std::isfinite(vb)) continue;
            if (std::abs(va - vb) > tol) return false;
            ++accepted;
        } catch (const EvalError&) {
            continue; // singular sample, resample
        }
    }
    if (accepted == 0)
        throw EvalError("exprs_equal: could not sample a nonsingular point");
    return true;
}

} // namespace

EqualityResult exprs_equal(const Expr& a, const Expr& b, const std::vector<std::string>& vars,
                           int trials, double tol, uint64_t seed) {
    if (trials < 1) throw ExprError("exprs_equal: trials must be >= 1");
    Canonicalizer canon;
    try {
        RatFunc fa = canon.build(a);
        RatFunc fb = canon.build(b);
        RatFunc diff = rf_sub(fa, fb);
        if (diff.num.is_zero()) return {true, EqualityMethod::Canonical};
        if (!has_transcendental(diff.num, canon.table))
            return {false, EqualityMethod::Canonical};
    } catch (const ExprError&) {
        // division by a canonically-zero subterm: leave it to sampling
    }
    return {numeric_agree(a, b, vars, trials, tol, seed), EqualityMethod::Numeric};
}

EqualityResult exprs_equal(const Expr& a, const Expr& b) {
    auto syms = a.free_symbols();
    for (const auto& s : b.free_symbols()) syms.insert(s);
    return exprs_equal(a, b, std::vector<std::string>(syms.begin(), syms.end()));
}

EqualityResult expr_is_zero(const Expr& e) { return exprs_equal(e, Expr::num(0)); }

bool provably_zero(const Expr& e) {
    Canonicalizer canon;
    RatFunc f = canon.build(e);
    return f.num.is_zero();
}

bool provably_nonzero(const Expr& e) {
    Canonicalizer canon;
    RatFunc f = canon.build(e);
    return !f.num.is_zero() && !has_transcendental(f.num, canon.table);
}

} // namespace skewalg
