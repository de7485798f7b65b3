#ifndef SKEWALG_ALGEBROID_HPP
#define SKEWALG_ALGEBROID_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "skewalg/canonical.hpp"
#include "skewalg/expr.hpp"

namespace skewalg {

class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

class SkewAlgebroid;
using AlgebroidPtr = std::shared_ptr<const SkewAlgebroid>;

/// Skew algebroid in a fixed trivialization: base coordinates x^a, frame
/// e_1..e_n, structure functions c^k_ij(x) (antisymmetric in i,j) and anchor
/// components rho^a_i(x). Structure functions may mention parameters.
/// m = 0 encodes a skew algebra over a point.
class SkewAlgebroid {
public:
    int base_dim() const { return m_; }
    int rank() const { return n_; }
    const std::vector<std::string>& coords() const { return coords_; }
    const std::vector<std::string>& frame() const { return frame_; }
    const std::vector<std::string>& params() const { return params_; }

    /// c^k_ij with the antisymmetric closure; zero when i == j or unset.
    Expr c(int i, int j, int k) const;
    /// rho^a_i; zero when unset.
    Expr rho(int i, int a) const;

    /// stored entries (i < j only)
    const std::map<std::tuple<int, int, int>, Expr>& c_entries() const { return c_; }
    const std::map<std::pair<int, int>, Expr>& rho_entries() const { return rho_; }

    /// rho(e_i) applied to a base function
    Expr anchor_on(int i, const Expr& f) const;

    /// coords + params: the symbols structure functions may mention
    std::set<std::string> scalar_symbols() const;
    /// momentum coordinates xi1..xin on E*
    std::vector<std::string> momentum_names() const;
    /// linear fiber coordinates y1..yn on E
    std::vector<std::string> fiber_names() const;

    friend AlgebroidPtr make_algebroid(int m, int n, std::vector<std::string> coords,
                                       std::vector<std::string> frame,
                                       std::vector<std::string> params,
                                       const std::vector<std::tuple<int, int, int, Expr>>& c_entries,
                                       const std::vector<std::tuple<int, int, Expr>>& rho_entries);

private:
    int m_ = 0, n_ = 1;
    std::vector<std::string> coords_, frame_, params_;
    std::map<std::tuple<int, int, int>, Expr> c_;   // key (i,j,k), i<j
    std::map<std::pair<int, int>, Expr> rho_;       // key (i,a)
};

/// Validating constructor. c entries are (i,j,k,expr) meaning
/// [e_i,e_j] gets expr*e_k; any i != j accepted and normalized to i < j by
/// antisymmetry. rho entries are (i,a,expr). All indices 0-based.
AlgebroidPtr make_algebroid(int m, int n, std::vector<std::string> coords,
                            std::vector<std::string> frame,
                            std::vector<std::string> params,
                            const std::vector<std::tuple<int, int, int, Expr>>& c_entries,
                            const std::vector<std::tuple<int, int, Expr>>& rho_entries);

// --- graded coefficient tables ------------------------------------------------

using IndexTuple = std::vector<int>;

/// sorts t in place; returns the permutation sign, or 0 on repeated indices
int sort_index_tuple(IndexTuple& t);

/// all strictly increasing p-tuples from {0..n-1}
std::vector<IndexTuple> increasing_tuples(int n, int p);

enum class Variance { Multivector, Form };

/// Degree-p element of Lambda(E) (Variance::Multivector) or Lambda(E*)
/// (Variance::Form), stored as Expr coefficients over strictly increasing
/// frame-index tuples. Degree 0 is a base function either way.
template <Variance V>
class Graded {
public:
    Graded() = default;
    Graded(AlgebroidPtr host, int degree);

    static Graded function(AlgebroidPtr host, Expr f); // degree 0
    static Graded basis(AlgebroidPtr host, int index); // e_index resp. e^index
    /// degree 1 from a full component list
    static Graded from_components(AlgebroidPtr host, const std::vector<Expr>& comps);

    const AlgebroidPtr& host() const { return host_; }
    int degree() const { return degree_; }
    const std::map<IndexTuple, Expr>& coeffs() const { return coeff_; }

    Expr coeff(IndexTuple t) const;      // strictly increasing tuple
    Expr eval_on(IndexTuple t) const;    // any tuple; sign-sorted, 0 on repeats
    void add_term(IndexTuple t, const Expr& e); // any tuple; sign-normalized

    /// degree-1 component vector (X^1..X^n resp. alpha_1..alpha_n)
    std::vector<Expr> components() const;

    Graded operator+(const Graded& o) const;
    Graded operator-(const Graded& o) const;
    Graded scaled(const Expr& f) const;
    Graded wedge(const Graded& o) const;

    /// canonical simplification of every coefficient, dropping zeros
    Graded simplified() const;
    bool symbolically_zero(int trials = 32, double tol = 1e-9) const;

private:
    AlgebroidPtr host_;
    int degree_ = 0;
    std::map<IndexTuple, Expr> coeff_;
};

using EMultivector = Graded<Variance::Multivector>;
using EForm = Graded<Variance::Form>;
using Section = EMultivector; // degree 1

/// <e^{i1}^..^e^{ip}, e_{j1}^..^e_{jp}> = delta on increasing tuples
Expr pairing(const EForm& alpha, const EMultivector& T);

/// Same instance, or structurally identical data (dimensions, names, and
/// structure-function trees). Lets values built against two equal
/// constructions (e.g. two restrict calls) interoperate.
bool same_structure(const AlgebroidPtr& a, const AlgebroidPtr& b);

void require_same_host(const AlgebroidPtr& a, const AlgebroidPtr& b, const char* op);

// --- coordinate vector fields ---------------------------------------------------

/// A vector field given by one Expr component per named coordinate
/// (on M, on E with (x,y), or on E* with (x,xi)).
class VectorFieldExpr {
public:
    VectorFieldExpr() = default;
    VectorFieldExpr(std::vector<std::string> coords, std::vector<Expr> comps);

    const std::vector<std::string>& coords() const { return coords_; }
    const std::vector<Expr>& components() const { return comps_; }

    /// directional derivative sum_a V^a df/dx^a
    Expr apply(const Expr& f) const;
    Expr divergence() const;

    VectorFieldExpr operator+(const VectorFieldExpr& o) const;
    VectorFieldExpr operator-(const VectorFieldExpr& o) const;
    static VectorFieldExpr commutator(const VectorFieldExpr& v, const VectorFieldExpr& w);

    VectorFieldExpr simplified() const;
    bool symbolically_zero(int trials = 32, double tol = 1e-9) const;

private:
    std::vector<std::string> coords_;
    std::vector<Expr> comps_;
};

// --- operations -----------------------------------------------------------------

/// anchor image rho(X) as a vector field on M
VectorFieldExpr anchor_vf(const Section& X);

/// [X,Y]^k = sum X^i Y^j c^k_ij + rho(X)(Y^k) - rho(Y)(X^k), simplified
Section bracket(const Section& X, const Section& Y);

/// [[X,Y],Z] + [[Y,Z],X] + [[Z,X],Y]
Section jacobiator(const Section& X, const Section& Y, const Section& Z);

/// Lie algebroid test: Jacobiator on frame triples and anchor compatibility
/// on frame pairs, decided symbolically (numeric fallback with `trials`).
bool is_lie(const AlgebroidPtr& E, int trials = 32);

/// rho([X,Y]) - [rho(X),rho(Y)] on M
VectorFieldExpr almost_lie_defect(const Section& X, const Section& Y);

/// de Rham derivative: on functions (df)_i = sum_a rho^a_i df/dx^a, on higher
/// degrees by the duality-normalized derivation rule (<d e^i, e_j^e_k> = -c^i_jk).
EForm de_rham(const EForm& omega);

EMultivector lie_derivative(const Section& X, const EMultivector& T);
EForm lie_derivative(const Section& X, const EForm& omega);

/// alternating contraction in the first slot; degree drops by one
EForm interior_product(const Section& X, const EForm& omega);

/// X_H on E* with coordinates (x^1..x^m, xi1..xin)
VectorFieldExpr hamiltonian_vf(const AlgebroidPtr& E, const Expr& H);

/// vertical lift of a 1-form: sum_i alpha_i(x) d/dxi_i
VectorFieldExpr vertical_lift_oneform(const EForm& alpha);

/// complete lift d_T(X) on E with coordinates (x^1..x^m, y1..yn)
VectorFieldExpr complete_lift(const Section& X);

/// the linear bivector on E*: {xi_i,xi_j} = sum_k c^k_ij xi_k, {xi_i,x^b} = rho^b_i
struct LinearBivector {
    std::map<std::pair<int, int>, Expr> momentum_brackets; // (i,j), i<j
    std::vector<std::vector<Expr>> mixed_brackets;         // [i][b] = {xi_i, x^b}
};
LinearBivector linear_bivector(const AlgebroidPtr& E);

/// {f,g} of two functions on E* (variables x^a, xi_i) induced by the linear
/// bivector; the bracket/anchor are recovered through iota(X) = sum X^i xi_i
Expr dual_poisson_bracket(const AlgebroidPtr& E, const Expr& f, const Expr& g);

/// the linear function iota(X) on E*
Expr momentum_function(const Section& X);

} // namespace skewalg

#endif
