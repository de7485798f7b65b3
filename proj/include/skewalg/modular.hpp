#ifndef SKEWALG_MODULAR_HPP
#define SKEWALG_MODULAR_HPP

#include "skewalg/algebroid.hpp"
#include "skewalg/linalg.hpp"

namespace skewalg {

/// E-connection on an auxiliary rank-s bundle with frame f_1..f_s:
/// nabla_{e_i} f_k = sum_j Gamma^j_ik f_j.
class EConnection {
public:
    EConnection(AlgebroidPtr host, int aux_rank);

    const AlgebroidPtr& host() const { return host_; }
    int aux_rank() const { return s_; }

    /// Gamma^j_ik; zero when unset
    Expr gamma(int i, int k, int j) const;
    void set_gamma(int i, int k, int j, Expr value);

private:
    AlgebroidPtr host_;
    int s_;
    std::map<std::tuple<int, int, int>, Expr> gamma_; // key (i,k,j)
};

/// Degree-1 representative of a modular-type class, taken w.r.t. the
/// coordinate section; representatives differ by d of a base function.
struct ModularClassRep {
    EForm representative;
};

/// Fiberwise metric on E given by a symmetric matrix g_ij(x).
class BundleMetric {
public:
    const AlgebroidPtr& host() const { return host_; }
    const ExprMatrix& entries() const { return g_; }
    Expr entry(int i, int j) const { return g_[i][j]; }

    friend BundleMetric make_bundle_metric(AlgebroidPtr host, ExprMatrix g, uint64_t seed);

private:
    AlgebroidPtr host_;
    ExprMatrix g_;
};

/// Validates exact symmetry and numeric nondegeneracy (|det| > 1e-12 at
/// sampled points).
BundleMetric make_bundle_metric(AlgebroidPtr host, ExprMatrix g, uint64_t seed = 0xbadc0de1ull);

/// identity metric convenience
BundleMetric identity_metric(const AlgebroidPtr& host);

/// modular form w.r.t. the coordinate section:
/// phi_i = sum_k c^k_ik + sum_a d(rho^a_i)/dx^a
ModularClassRep modular_form(const AlgebroidPtr& E);

/// The canonical line-bundle connection on L^E = top E x top T*M w.r.t. the
/// coordinate section, computed from the Lie-derivative machinery (an
/// independent route to the modular form).
EConnection canonical_line_connection(const AlgebroidPtr& E);

/// characteristic form of sigma for a rank-1 connection:
/// phi_i = Gamma^1_i1 + rho(e_i)(sigma)/sigma
EForm char_form(const EConnection& conn, const Expr& sigma_coeff);

/// H = 1/2 xi^T g(x)^{-1} xi + V(x) in the momenta xi1..xin
Expr mechanical_hamiltonian(const BundleMetric& g, const Expr& potential);

struct Mt0Report {
    double max_residual = 0.0;
    int evaluated = 0;
    int skipped = 0;
};

/// max over sample points of |div(X_H) - (phi)^v(H)| with the divergence
/// taken w.r.t. the coordinate volume on E*; singular points are skipped
/// and counted
Mt0Report mt0_residual(const AlgebroidPtr& E, const Expr& H, const std::vector<Env>& points);

/// random evaluation points for (x, xi, params) in [lo,hi]
std::vector<Env> random_phase_points(const AlgebroidPtr& E, int count, uint64_t seed,
                                     double lo = -2.0, double hi = 2.0);

/// linear holonomy connection on the normal bundle of the adapted
/// subalgebroid: Gamma^K_{iota J} = c^K_{iota J}(x^alpha, 0), hosted on
/// restrict(E, n0, m0)
EConnection normal_connection(const AlgebroidPtr& E, int n0, int m0);

/// relative modular class representative -sum_K c^K_{iota K}(x^alpha,0) e^iota
/// over restrict(E, n0, m0)
ModularClassRep relative_modular_class(const AlgebroidPtr& E, int n0, int m0);

/// true iff alpha == de_rham(witness) symbolically
bool exactness_check(const AlgebroidPtr& E, const EForm& alpha, const Expr& witness);

} // namespace skewalg

#endif
