#include "skewalg/algebroid.hpp"

#include <algorithm>

namespace skewalg {

// --- SkewAlgebroid ------------------------------------------------------------

Expr SkewAlgebroid::c(int i, int j, int k) const {
    if (i < 0 || j < 0 || k < 0 || i >= n_ || j >= n_ || k >= n_)
        throw DomainError("structure function index out of range");
    if (i == j) return Expr::num(0);
    bool flip = i > j;
    if (flip) std::swap(i, j);
    auto it = c_.find({i, j, k});
    if (it == c_.end()) return Expr::num(0);
    return flip ? Expr::num(-1) * it->second : it->second;
}

Expr SkewAlgebroid::rho(int i, int a) const {
    if (i < 0 || i >= n_ || a < 0 || a >= m_)
        throw DomainError("anchor index out of range");
    auto it = rho_.find({i, a});
    return it == rho_.end() ? Expr::num(0) : it->second;
}

Expr SkewAlgebroid::anchor_on(int i, const Expr& f) const {
    Expr out = Expr::num(0);
    for (int a = 0; a < m_; ++a) out += rho(i, a) * diff_expr(f, coords_[a]);
    return out;
}

std::set<std::string> SkewAlgebroid::scalar_symbols() const {
    std::set<std::string> s(coords_.begin(), coords_.end());
    s.insert(params_.begin(), params_.end());
    return s;
}

std::vector<std::string> SkewAlgebroid::momentum_names() const {
    std::vector<std::string> out;
    for (int i = 1; i <= n_; ++i) out.push_back("xi" + std::to_string(i));
    return out;
}

std::vector<std::string> SkewAlgebroid::fiber_names() const {
    std::vector<std::string> out;
    for (int i = 1; i <= n_; ++i) out.push_back("y" + std::to_string(i));
    return out;
}

AlgebroidPtr make_algebroid(int m, int n, std::vector<std::string> coords,
                            std::vector<std::string> frame,
                            std::vector<std::string> params,
                            const std::vector<std::tuple<int, int, int, Expr>>& c_entries,
                            const std::vector<std::tuple<int, int, Expr>>& rho_entries) {
    if (m < 0) throw DomainError("base dimension must be >= 0");
    if (n < 1) throw DomainError("rank must be >= 1");
    if (static_cast<int>(coords.size()) != m) throw DomainError("coordinate name count != base dimension");
    if (static_cast<int>(frame.size()) != n) throw DomainError("frame name count != rank");

    std::set<std::string> seen;
    for (const auto* list : {&coords, &frame, &params})
        for (const auto& name : *list)
            if (!seen.insert(name).second)
                throw DomainError("duplicate name in coords/frame/params: " + name);

    auto algebroid = std::make_shared<SkewAlgebroid>();
    SkewAlgebroid& E = *algebroid;
    E.m_ = m;
    E.n_ = n;
    E.coords_ = std::move(coords);
    E.frame_ = std::move(frame);
    E.params_ = std::move(params);

    auto check_scalar = [&](const Expr& e, const std::string& what) {
        auto allowed = E.scalar_symbols();
        for (const auto& sym : e.free_symbols()) {
            if (allowed.count(sym)) continue;
            for (const auto& f : E.frame_)
                if (sym == f)
                    throw DomainError(what + " mentions fiber symbol " + sym);
            throw DomainError(what + " mentions unknown symbol " + sym);
        }
    };

    for (const auto& [i, j, k, expr] : c_entries) {
        if (i < 0 || j < 0 || k < 0 || i >= n || j >= n || k >= n)
            throw DomainError("c entry index out of range");
        if (i == j)
            throw DomainError("c entry with i == j violates antisymmetry");
        check_scalar(expr, "structure function c");
        int a = i, b = j;
        Expr value = expr;
        if (a > b) {
            std::swap(a, b);
            value = Expr::num(-1) * value;
        }
        if (!E.c_.emplace(std::make_tuple(a, b, k), value).second)
            throw DomainError("duplicate c entry");
    }
    for (const auto& [i, a, expr] : rho_entries) {
        if (i < 0 || i >= n || a < 0 || a >= m)
            throw DomainError("rho entry index out of range");
        check_scalar(expr, "anchor component rho");
        if (!E.rho_.emplace(std::make_pair(i, a), expr).second)
            throw DomainError("duplicate rho entry");
    }
    return algebroid;
}

bool same_structure(const AlgebroidPtr& a, const AlgebroidPtr& b) {
    if (!a || !b) return false;
    if (a == b) return true;
    if (a->base_dim() != b->base_dim() || a->rank() != b->rank()) return false;
    if (a->coords() != b->coords() || a->frame() != b->frame() || a->params() != b->params())
        return false;
    auto exprs_match = [](const Expr& x, const Expr& y) {
        return Expr::identical(x, y) || provably_zero(x - y);
    };
    const auto& ca = a->c_entries();
    const auto& cb = b->c_entries();
    if (ca.size() != cb.size()) return false;
    for (auto ia = ca.begin(), ib = cb.begin(); ia != ca.end(); ++ia, ++ib) {
        if (ia->first != ib->first || !exprs_match(ia->second, ib->second)) return false;
    }
    const auto& ra = a->rho_entries();
    const auto& rb = b->rho_entries();
    if (ra.size() != rb.size()) return false;
    for (auto ia = ra.begin(), ib = rb.begin(); ia != ra.end(); ++ia, ++ib) {
        if (ia->first != ib->first || !exprs_match(ia->second, ib->second)) return false;
    }
    return true;
}

void require_same_host(const AlgebroidPtr& a, const AlgebroidPtr& b, const char* op) {
    if (!same_structure(a, b))
        throw DomainError(std::string(op) + ": arguments live on different algebroids");
}

// --- tuples --------------------------------------------------------------------

int sort_index_tuple(IndexTuple& t) {
    int sign = 1;
    for (size_t i = 1; i < t.size(); ++i) {
        for (size_t j = i; j > 0 && t[j] < t[j - 1]; --j) {
            std::swap(t[j], t[j - 1]);
            sign = -sign;
        }
    }
    for (size_t i = 1; i < t.size(); ++i)
        if (t[i] == t[i - 1]) return 0;
    return sign;
}

std::vector<IndexTuple> increasing_tuples(int n, int p) {
    std::vector<IndexTuple> out;
    if (p < 0 || p > n) return out;
    if (p == 0) {
        out.push_back({});
        return out;
    }
    IndexTuple cur(p);
    for (int i = 0; i < p; ++i) cur[i] = i;
    for (;;) {
        out.push_back(cur);
        int pos = p - 1;
        while (pos >= 0 && cur[pos] == n - p + pos) --pos;
        if (pos < 0) break;
        ++cur[pos];
        for (int i = pos + 1; i < p; ++i) cur[i] = cur[i - 1] + 1;
    }
    return out;
}

// --- Graded --------------------------------------------------------------------

template <Variance V>
Graded<V>::Graded(AlgebroidPtr host, int degree) : host_(std::move(host)), degree_(degree) {
    if (!host_) throw DomainError("null algebroid");
    if (degree_ < 0 || degree_ > host_->rank() + 1)
        throw DomainError("degree out of range");
}

template <Variance V>
Graded<V> Graded<V>::function(AlgebroidPtr host, Expr f) {
    Graded g(std::move(host), 0);
    if (!f.is_zero_literal()) g.coeff_.emplace(IndexTuple{}, std::move(f));
    return g;
}

template <Variance V>
Graded<V> Graded<V>::basis(AlgebroidPtr host, int index) {
    Graded g(std::move(host), 1);
    if (index < 0 || index >= g.host_->rank()) throw DomainError("basis index out of range");
    g.coeff_.emplace(IndexTuple{index}, Expr::num(1));
    return g;
}

template <Variance V>
Graded<V> Graded<V>::from_components(AlgebroidPtr host, const std::vector<Expr>& comps) {
    Graded g(std::move(host), 1);
    if (static_cast<int>(comps.size()) != g.host_->rank())
        throw DomainError("component count != rank");
    for (int i = 0; i < g.host_->rank(); ++i)
        if (!comps[i].is_zero_literal()) g.coeff_.emplace(IndexTuple{i}, comps[i]);
    return g;
}

template <Variance V>
Expr Graded<V>::coeff(IndexTuple t) const {
    auto it = coeff_.find(t);
    return it == coeff_.end() ? Expr::num(0) : it->second;
}

template <Variance V>
Expr Graded<V>::eval_on(IndexTuple t) const {
    int sign = sort_index_tuple(t);
    if (sign == 0) return Expr::num(0);
    Expr c = coeff(t);
    return sign < 0 ? Expr::num(-1) * c : c;
}

template <Variance V>
void Graded<V>::add_term(IndexTuple t, const Expr& e) {
    if (static_cast<int>(t.size()) != degree_) throw DomainError("tuple length != degree");
    int sign = sort_index_tuple(t);
    if (sign == 0 || e.is_zero_literal()) return;
    Expr value = sign < 0 ? Expr::num(-1) * e : e;
    auto it = coeff_.find(t);
    if (it == coeff_.end()) {
        coeff_.emplace(std::move(t), value);
    } else {
        it->second += value;
        if (it->second.is_zero_literal()) coeff_.erase(it);
    }
}

template <Variance V>
std::vector<Expr> Graded<V>::components() const {
    if (degree_ != 1) throw DomainError("components(): degree must be 1");
    std::vector<Expr> out(host_->rank(), Expr::num(0));
    for (auto& [t, e] : coeff_) out[t[0]] = e;
    return out;
}

template <Variance V>
Graded<V> Graded<V>::operator+(const Graded& o) const {
    require_same_host(host_, o.host_, "add");
    if (degree_ != o.degree_) throw DomainError("degree mismatch in add");
    Graded r = *this;
    for (auto& [t, e] : o.coeff_) r.add_term(t, e);
    return r;
}

template <Variance V>
Graded<V> Graded<V>::operator-(const Graded& o) const {
    require_same_host(host_, o.host_, "sub");
    if (degree_ != o.degree_) throw DomainError("degree mismatch in sub");
    Graded r = *this;
    for (auto& [t, e] : o.coeff_) r.add_term(t, Expr::num(-1) * e);
    return r;
}

template <Variance V>
Graded<V> Graded<V>::scaled(const Expr& f) const {
    Graded r(host_, degree_);
    for (auto& [t, e] : coeff_) r.add_term(t, f * e);
    return r;
}

template <Variance V>
Graded<V> Graded<V>::wedge(const Graded& o) const {
    require_same_host(host_, o.host_, "wedge");
    int p = degree_ + o.degree_;
    if (p > host_->rank()) return Graded(host_, host_->rank()); // zero above top degree
    Graded r(host_, p);
    for (auto& [s, a] : coeff_) {
        for (auto& [t, b] : o.coeff_) {
            IndexTuple merged = s;
            merged.insert(merged.end(), t.begin(), t.end());
            r.add_term(std::move(merged), a * b);
        }
    }
    return r;
}

template <Variance V>
Graded<V> Graded<V>::simplified() const {
    Graded r(host_, degree_);
    for (auto& [t, e] : coeff_) {
        Expr s = simplify(e);
        if (!s.is_zero_literal()) r.coeff_.emplace(t, std::move(s));
    }
    return r;
}

template <Variance V>
bool Graded<V>::symbolically_zero(int trials, double tol) const {
    for (auto& [t, e] : coeff_) {
        auto syms = e.free_symbols();
        if (!exprs_equal(e, Expr::num(0), {syms.begin(), syms.end()}, trials, tol).equal)
            return false;
    }
    return true;
}

template class Graded<Variance::Multivector>;
template class Graded<Variance::Form>;

Expr pairing(const EForm& alpha, const EMultivector& T) {
    require_same_host(alpha.host(), T.host(), "pairing");
    if (alpha.degree() != T.degree()) throw DomainError("pairing: degree mismatch");
    Expr out = Expr::num(0);
    for (auto& [t, a] : alpha.coeffs()) out += a * T.coeff(t);
    return out;
}

// --- VectorFieldExpr -------------------------------------------------------------

VectorFieldExpr::VectorFieldExpr(std::vector<std::string> coords, std::vector<Expr> comps)
    : coords_(std::move(coords)), comps_(std::move(comps)) {
    if (coords_.size() != comps_.size())
        throw DomainError("vector field: component count != coordinate count");
}

Expr VectorFieldExpr::apply(const Expr& f) const {
    Expr out = Expr::num(0);
    for (size_t a = 0; a < coords_.size(); ++a) out += comps_[a] * diff_expr(f, coords_[a]);
    return out;
}

Expr VectorFieldExpr::divergence() const {
    Expr out = Expr::num(0);
    for (size_t a = 0; a < coords_.size(); ++a) out += diff_expr(comps_[a], coords_[a]);
    return out;
}

VectorFieldExpr VectorFieldExpr::operator+(const VectorFieldExpr& o) const {
    if (coords_ != o.coords_) throw DomainError("vector field add: coordinate mismatch");
    std::vector<Expr> comps(comps_.size());
    for (size_t i = 0; i < comps.size(); ++i) comps[i] = comps_[i] + o.comps_[i];
    return {coords_, comps};
}

VectorFieldExpr VectorFieldExpr::operator-(const VectorFieldExpr& o) const {
    if (coords_ != o.coords_) throw DomainError("vector field sub: coordinate mismatch");
    std::vector<Expr> comps(comps_.size());
    for (size_t i = 0; i < comps.size(); ++i) comps[i] = comps_[i] - o.comps_[i];
    return {coords_, comps};
}

VectorFieldExpr VectorFieldExpr::commutator(const VectorFieldExpr& v, const VectorFieldExpr& w) {
    if (v.coords_ != w.coords_) throw DomainError("commutator: coordinate mismatch");
    std::vector<Expr> comps(v.comps_.size(), Expr::num(0));
    for (size_t a = 0; a < comps.size(); ++a)
        comps[a] = v.apply(w.comps_[a]) - w.apply(v.comps_[a]);
    return {v.coords_, comps};
}

VectorFieldExpr VectorFieldExpr::simplified() const {
    std::vector<Expr> comps(comps_.size());
    for (size_t i = 0; i < comps.size(); ++i) comps[i] = simplify(comps_[i]);
    return {coords_, comps};
}

bool VectorFieldExpr::symbolically_zero(int trials, double tol) const {
    for (const auto& e : comps_) {
        auto syms = e.free_symbols();
        if (!exprs_equal(e, Expr::num(0), {syms.begin(), syms.end()}, trials, tol).equal)
            return false;
    }
    return true;
}

// --- operations -----------------------------------------------------------------

VectorFieldExpr anchor_vf(const Section& X) {
    if (X.degree() != 1) throw DomainError("anchor_vf: section must have degree 1");
    const auto& E = *X.host();
    std::vector<Expr> comps(E.base_dim(), Expr::num(0));
    auto xc = X.components();
    for (int a = 0; a < E.base_dim(); ++a)
        for (int i = 0; i < E.rank(); ++i) comps[a] += xc[i] * E.rho(i, a);
    return {E.coords(), comps};
}

Section bracket(const Section& X, const Section& Y) {
    require_same_host(X.host(), Y.host(), "bracket");
    if (X.degree() != 1 || Y.degree() != 1) throw DomainError("bracket: degree must be 1");
    const auto& E = *X.host();
    int n = E.rank();
    auto xc = X.components(), yc = Y.components();
    VectorFieldExpr rx = anchor_vf(X), ry = anchor_vf(Y);
    std::vector<Expr> comps(n, Expr::num(0));
    for (int k = 0; k < n; ++k) {
        Expr acc = Expr::num(0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                acc += xc[i] * yc[j] * E.c(i, j, k);
            }
        acc += rx.apply(yc[k]) - ry.apply(xc[k]);
        comps[k] = simplify(acc);
    }
    return Section::from_components(X.host(), comps);
}

Section jacobiator(const Section& X, const Section& Y, const Section& Z) {
    require_same_host(X.host(), Y.host(), "jacobiator");
    require_same_host(Y.host(), Z.host(), "jacobiator");
    Section r = bracket(bracket(X, Y), Z) + bracket(bracket(Y, Z), X) + bracket(bracket(Z, X), Y);
    return r.simplified();
}

VectorFieldExpr almost_lie_defect(const Section& X, const Section& Y) {
    require_same_host(X.host(), Y.host(), "almost_lie_defect");
    VectorFieldExpr lhs = anchor_vf(bracket(X, Y));
    VectorFieldExpr rhs = VectorFieldExpr::commutator(anchor_vf(X), anchor_vf(Y));
    return (lhs - rhs).simplified();
}

bool is_lie(const AlgebroidPtr& E, int trials) {
    if (trials < 1) throw DomainError("is_lie: trials must be >= 1");
    int n = E->rank();
    std::vector<Section> e;
    for (int i = 0; i < n; ++i) e.push_back(Section::basis(E, i));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (!almost_lie_defect(e[i], e[j]).symbolically_zero(trials)) return false;
            for (int k = j + 1; k < n; ++k)
                if (!jacobiator(e[i], e[j], e[k]).symbolically_zero(trials)) return false;
        }
    return true;
}

EForm de_rham(const EForm& omega) {
    const AlgebroidPtr& E = omega.host();
    int n = E->rank();
    int p = omega.degree();
    if (p >= n) return EForm(E, std::min(p + 1, n + 1)); // differentiates to zero
    EForm out(E, p + 1);
    for (const auto& J : increasing_tuples(n, p + 1)) {
        Expr acc = Expr::num(0);
        for (int a = 0; a <= p; ++a) {
            IndexTuple rest;
            for (int r = 0; r <= p; ++r)
                if (r != a) rest.push_back(J[r]);
            Expr term = E->anchor_on(J[a], omega.coeff(rest));
            acc += (a % 2 == 0) ? term : Expr::num(-1) * term;
        }
        for (int a = 0; a <= p; ++a)
            for (int b = a + 1; b <= p; ++b) {
                IndexTuple rest;
                for (int r = 0; r <= p; ++r)
                    if (r != a && r != b) rest.push_back(J[r]);
                for (int k = 0; k < n; ++k) {
                    Expr ck = E->c(J[a], J[b], k);
                    if (ck.is_zero_literal()) continue;
                    IndexTuple args = rest;
                    args.insert(args.begin(), k);
                    Expr w = omega.eval_on(args);
                    if (w.is_zero_literal()) continue;
                    Expr term = ck * w;
                    acc += ((a + b) % 2 == 0) ? term : Expr::num(-1) * term;
                }
            }
        out.add_term(J, acc);
    }
    return out.simplified();
}

EMultivector lie_derivative(const Section& X, const EMultivector& T) {
    require_same_host(X.host(), T.host(), "lie_derivative");
    if (X.degree() != 1) throw DomainError("lie_derivative: X must have degree 1");
    const AlgebroidPtr& E = X.host();
    int n = E->rank();
    VectorFieldExpr rx = anchor_vf(X);
    std::vector<std::vector<Expr>> ad(n);
    for (int j = 0; j < n; ++j) ad[j] = bracket(X, Section::basis(E, j)).components();

    EMultivector out(E, T.degree());
    for (auto& [t, coeffExpr] : T.coeffs()) {
        out.add_term(t, rx.apply(coeffExpr));
        for (size_t r = 0; r < t.size(); ++r) {
            for (int k = 0; k < n; ++k) {
                const Expr& b = ad[t[r]][k];
                if (b.is_zero_literal()) continue;
                IndexTuple replaced = t;
                replaced[r] = k;
                out.add_term(replaced, coeffExpr * b);
            }
        }
    }
    return out.simplified();
}

EForm lie_derivative(const Section& X, const EForm& omega) {
    require_same_host(X.host(), omega.host(), "lie_derivative");
    if (X.degree() != 1) throw DomainError("lie_derivative: X must have degree 1");
    const AlgebroidPtr& E = X.host();
    int n = E->rank();
    int p = omega.degree();
    VectorFieldExpr rx = anchor_vf(X);
    std::vector<std::vector<Expr>> ad(n);
    for (int j = 0; j < n; ++j) ad[j] = bracket(X, Section::basis(E, j)).components();

    EForm out(E, p);
    for (const auto& J : increasing_tuples(n, p)) {
        Expr acc = rx.apply(omega.coeff(J));
        for (int r = 0; r < p; ++r) {
            for (int k = 0; k < n; ++k) {
                const Expr& b = ad[J[r]][k];
                if (b.is_zero_literal()) continue;
                IndexTuple replaced = J;
                replaced[r] = k;
                acc -= b * omega.eval_on(replaced);
            }
        }
        out.add_term(J, acc);
    }
    return out.simplified();
}

EForm interior_product(const Section& X, const EForm& omega) {
    require_same_host(X.host(), omega.host(), "interior_product");
    if (omega.degree() < 1) throw DomainError("interior_product: form degree must be >= 1");
    const AlgebroidPtr& E = X.host();
    auto xc = X.components();
    EForm out(E, omega.degree() - 1);
    for (const auto& J : increasing_tuples(E->rank(), omega.degree() - 1)) {
        Expr acc = Expr::num(0);
        for (int k = 0; k < E->rank(); ++k) {
            if (xc[k].is_zero_literal()) continue;
            IndexTuple args = J;
            args.insert(args.begin(), k);
            acc += xc[k] * omega.eval_on(args);
        }
        out.add_term(J, acc);
    }
    return out.simplified();
}

namespace {

void check_symbols_within(const Expr& e, const std::set<std::string>& allowed, const char* what) {
    for (const auto& sym : e.free_symbols())
        if (!allowed.count(sym))
            throw DomainError(std::string(what) + ": stray symbol " + sym);
}

} // namespace

VectorFieldExpr hamiltonian_vf(const AlgebroidPtr& E, const Expr& H) {
    int m = E->base_dim(), n = E->rank();
    auto xi = E->momentum_names();
    std::set<std::string> allowed = E->scalar_symbols();
    allowed.insert(xi.begin(), xi.end());
    check_symbols_within(H, allowed, "hamiltonian_vf");

    std::vector<std::string> coords = E->coords();
    coords.insert(coords.end(), xi.begin(), xi.end());

    std::vector<Expr> dH_dxi(n), dH_dx(m);
    for (int i = 0; i < n; ++i) dH_dxi[i] = diff_expr(H, xi[i]);
    for (int a = 0; a < m; ++a) dH_dx[a] = diff_expr(H, E->coords()[a]);

    std::vector<Expr> comps(m + n, Expr::num(0));
    for (int b = 0; b < m; ++b) {
        Expr acc = Expr::num(0);
        for (int i = 0; i < n; ++i) acc += E->rho(i, b) * dH_dxi[i];
        comps[b] = simplify(acc);
    }
    for (int j = 0; j < n; ++j) {
        Expr acc = Expr::num(0);
        for (int i = 0; i < n; ++i) {
            if (i == j) continue;
            for (int k = 0; k < n; ++k) {
                Expr ck = E->c(i, j, k);
                if (ck.is_zero_literal()) continue;
                acc += ck * Expr::sym(xi[k]) * dH_dxi[i];
            }
        }
        for (int a = 0; a < m; ++a) acc -= E->rho(j, a) * dH_dx[a];
        comps[m + j] = simplify(acc);
    }
    return {coords, comps};
}

VectorFieldExpr vertical_lift_oneform(const EForm& alpha) {
    if (alpha.degree() != 1) throw DomainError("vertical_lift_oneform: degree must be 1");
    const AlgebroidPtr& E = alpha.host();
    auto xi = E->momentum_names();
    std::vector<std::string> coords = E->coords();
    coords.insert(coords.end(), xi.begin(), xi.end());
    std::vector<Expr> comps(E->base_dim() + E->rank(), Expr::num(0));
    auto ac = alpha.components();
    for (int i = 0; i < E->rank(); ++i) comps[E->base_dim() + i] = ac[i];
    return {coords, comps};
}

VectorFieldExpr complete_lift(const Section& X) {
    if (X.degree() != 1) throw DomainError("complete_lift: section must have degree 1");
    const AlgebroidPtr& E = X.host();
    int m = E->base_dim(), n = E->rank();
    auto y = E->fiber_names();
    std::vector<std::string> coords = E->coords();
    coords.insert(coords.end(), y.begin(), y.end());

    auto f = X.components();
    std::vector<Expr> comps(m + n, Expr::num(0));
    for (int a = 0; a < m; ++a) {
        Expr acc = Expr::num(0);
        for (int i = 0; i < n; ++i) acc += f[i] * E->rho(i, a);
        comps[a] = simplify(acc);
    }
    for (int k = 0; k < n; ++k) {
        Expr acc = Expr::num(0);
        for (int i = 0; i < n; ++i) {
            Expr yi = Expr::sym(y[i]);
            for (int a = 0; a < m; ++a)
                acc += yi * E->rho(i, a) * diff_expr(f[k], E->coords()[a]);
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                Expr ck = E->c(i, j, k);
                if (!ck.is_zero_literal()) acc += ck * yi * f[j];
            }
        }
        comps[m + k] = simplify(acc);
    }
    return {coords, comps};
}

Expr dual_poisson_bracket(const AlgebroidPtr& E, const Expr& f, const Expr& g) {
    int m = E->base_dim(), n = E->rank();
    auto xi = E->momentum_names();
    std::set<std::string> allowed = E->scalar_symbols();
    allowed.insert(xi.begin(), xi.end());
    check_symbols_within(f, allowed, "dual_poisson_bracket");
    check_symbols_within(g, allowed, "dual_poisson_bracket");

    std::vector<Expr> f_xi(n), g_xi(n), f_x(m), g_x(m);
    for (int i = 0; i < n; ++i) {
        f_xi[i] = diff_expr(f, xi[i]);
        g_xi[i] = diff_expr(g, xi[i]);
    }
    for (int a = 0; a < m; ++a) {
        f_x[a] = diff_expr(f, E->coords()[a]);
        g_x[a] = diff_expr(g, E->coords()[a]);
    }
    Expr acc = Expr::num(0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            for (int k = 0; k < n; ++k) {
                Expr ck = E->c(i, j, k);
                if (!ck.is_zero_literal()) acc += ck * Expr::sym(xi[k]) * f_xi[i] * g_xi[j];
            }
        }
    for (int i = 0; i < n; ++i)
        for (int b = 0; b < m; ++b) {
            Expr r = E->rho(i, b);
            if (r.is_zero_literal()) continue;
            acc += r * (f_xi[i] * g_x[b] - g_xi[i] * f_x[b]);
        }
    return simplify(acc);
}

Expr momentum_function(const Section& X) {
    if (X.degree() != 1) throw DomainError("momentum_function: degree must be 1");
    auto xi = X.host()->momentum_names();
    auto comps = X.components();
    Expr acc = Expr::num(0);
    for (int i = 0; i < X.host()->rank(); ++i) acc += comps[i] * Expr::sym(xi[i]);
    return acc;
}

LinearBivector linear_bivector(const AlgebroidPtr& E) {
    int m = E->base_dim(), n = E->rank();
    auto xi = E->momentum_names();
    LinearBivector out;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Expr acc = Expr::num(0);
            for (int k = 0; k < n; ++k) acc += E->c(i, j, k) * Expr::sym(xi[k]);
            out.momentum_brackets[{i, j}] = simplify(acc);
        }
    out.mixed_brackets.assign(n, std::vector<Expr>(m, Expr::num(0)));
    for (int i = 0; i < n; ++i)
        for (int b = 0; b < m; ++b) out.mixed_brackets[i][b] = E->rho(i, b);
    return out;
}

} // namespace skewalg
