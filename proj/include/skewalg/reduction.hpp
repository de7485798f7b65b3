#ifndef SKEWALG_REDUCTION_HPP
#define SKEWALG_REDUCTION_HPP

#include "skewalg/algebroid.hpp"
#include "skewalg/linalg.hpp"
#include "skewalg/modular.hpp"

namespace skewalg {

// --- subalgebroids in adapted coordinates ---------------------------------

struct SubalgebroidReport {
    bool ok = false;
    double max_violation = 0.0;
    bool decided_symbolically = true;
    std::vector<std::string> failures;
};

/// E0 = span{e_1..e_n0} over {x^{m0+1} = .. = x^m = 0}: checks
/// rho^A_iota(x^alpha,0) = 0 and c^K_{iota iota'}(x^alpha,0) = 0.
SubalgebroidReport subalgebroid_check(const AlgebroidPtr& E, int n0, int m0,
                                      int samples = 32, double tol = 1e-9,
                                      uint64_t seed = 0x5ab5abull);

/// the induced skew algebroid on E0 (throws when the check fails)
AlgebroidPtr restrict_algebroid(const AlgebroidPtr& E, int n0, int m0);

// --- nonholonomic projection ------------------------------------------------

/// For a skew algebra (point base): express the bracket in the basis given by
/// the columns of new_basis (first n0 columns span D, the rest a complement C)
/// and truncate the C-components. n0 = n is a plain change of basis.
AlgebroidPtr project_along(const AlgebroidPtr& E, const ExprMatrix& new_basis, int n0);

/// basis of the g-orthogonal complement of span(D_basis columns)
std::vector<std::vector<Expr>> orthogonal_complement(const BundleMetric& g,
                                                     const ExprMatrix& D_basis);

enum class SleighComplement { Paper, Metric };

struct SleighResult {
    AlgebroidPtr algebroid;       // rank-2 skew algebra on D
    ModularClassRep modular;      // its modular form
    ExprMatrix basis;             // the se(2) basis used (columns e1,e2,e3)
    Expr c112, c212;              // projected structure constants
};

/// Chaplygin sleigh reduction on se(2). Arguments may be symbols or numbers.
/// The `paper` complement is the fixed classical choice
/// e3 = -ma E3 - mab E1 + (J+ma^2) E2; `metric` solves for the mu-orthogonal
/// complement of D = span{E3, E1} instead (the two differ by a sign in the
/// projected structure constants).
SleighResult chaplygin_sleigh(const Expr& mass, const Expr& inertia, const Expr& a,
                              const Expr& b, SleighComplement complement = SleighComplement::Paper);

/// the sleigh kinetic-energy metric on se(2) in the basis (E1,E2,E3)
ExprMatrix sleigh_metric(const Expr& mass, const Expr& inertia, const Expr& a, const Expr& b);

// --- products, morphisms, relations -----------------------------------------

/// block-diagonal direct product; coordinate/frame names renamed on clash
AlgebroidPtr direct_product(const AlgebroidPtr& E1, const AlgebroidPtr& E2);

/// vector bundle map into `target`: fiber map F^j_i(x) (e_i -> sum_j F^j_i f_j)
/// and base map phi^b(x), both over the source base coordinates
struct BundleLeg {
    AlgebroidPtr target;
    ExprMatrix fiber_map;        // n_target x n_source
    std::vector<Expr> base_map;  // m_target entries
};

struct Morphism {
    AlgebroidPtr source;
    BundleLeg leg;
};

Morphism identity_morphism(const AlgebroidPtr& E);

struct MorphismReport {
    bool ok = false;
    double max_violation = 0.0;
    std::vector<std::string> failures;
};

/// Does the pullback intertwine the de Rham derivatives? Checked on the
/// generators of the target (coordinate functions and the dual frame).
MorphismReport morphism_check(const Morphism& Phi, int samples = 32, double tol = 1e-9);

/// (Phi^* alpha)_i(x) = sum_j F^j_i(x) alpha_j(phi(x)) for degree-1 alpha
EForm pullback_form(const Morphism& Phi, const EForm& alpha);

/// mod(Phi) = mod(E1) - Phi^*(mod(E2)); requires morphism_check to pass
ModularClassRep morphism_modular_class(const Morphism& Phi);

/// Linear relation between skew algebroids: a subbundle of E1 x E2 presented
/// by a carrier bundle (rank r over the carrier base) with legs into both
/// factors. No algebroid structure on the carrier is assumed.
struct LinearRelation {
    int carrier_rank = 0;
    std::vector<std::string> carrier_coords;
    std::vector<std::string> carrier_params;
    BundleLeg leg1, leg2;
};

/// graph of a morphism as a relation (carrier = source bundle)
LinearRelation relation_from_graph(const Morphism& Phi);

/// legs exchanged
LinearRelation relation_swap(const LinearRelation& R);

/// carrier bundle as a structureless (abelian, zero-anchor) algebroid so the
/// pulled-back forms have a host to live on
AlgebroidPtr relation_carrier(const LinearRelation& R);

/// mod(R) = j1^*(mod E1) - j2^*(mod E2) as a 1-form on the carrier
EForm relation_modular_class(const LinearRelation& R);

// --- cotangent algebroid of a Poisson bivector --------------------------------

struct PoissonBivector {
    int dim = 0;
    std::vector<std::string> coords;
    std::vector<std::string> params;
    std::map<std::pair<int, int>, Expr> entries; // (i,j), i<j

    Expr entry(int i, int j) const; // antisymmetric closure
};

PoissonBivector make_poisson(int dim, std::vector<std::string> coords,
                             std::vector<std::string> params,
                             std::vector<std::tuple<int, int, Expr>> entries);

/// Lie algebroid on T*M: frame dx^i, rho(dx^i) = sum_a Lambda^{ia} d_a,
/// c^k_ij = d Lambda^{ij} / dx^k
AlgebroidPtr cotangent_algebroid(const PoissonBivector& lambda);

} // namespace skewalg

#endif
