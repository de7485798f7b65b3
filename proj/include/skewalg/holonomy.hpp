#ifndef SKEWALG_HOLONOMY_HPP
#define SKEWALG_HOLONOMY_HPP

#include <functional>

#include "skewalg/modular.hpp"

namespace skewalg {

/// Admissible-path candidate t -> (x(t), gamma(t)), t in [0,1], with Expr
/// components in the parameter "t" (and algebroid parameters).
class PathSpec {
public:
    PathSpec(AlgebroidPtr host, std::vector<Expr> base, std::vector<Expr> fiber);

    const AlgebroidPtr& host() const { return host_; }
    const std::vector<Expr>& base_components() const { return base_; }
    const std::vector<Expr>& fiber_components() const { return fiber_; }

    /// numeric base point x(t)
    std::vector<double> base_at(double t, const Env& params = {}) const;

private:
    AlgebroidPtr host_;
    std::vector<Expr> base_, fiber_;
};

struct AdmissibilityReport {
    bool ok = false;
    double max_defect = 0.0;
};

/// max_t | sum_i gamma^i(t) rho^a_i(x(t)) - dx^a/dt | at equally spaced samples
AdmissibilityReport check_admissible(const PathSpec& p, int samples = 101, double tol = 1e-8,
                                     const Env& params = {});

/// int_0^1 <alpha(x(t)), gamma(t)> dt by composite Simpson with `steps` panels
double line_integral(const EForm& alpha, const PathSpec& p, int steps = 1000,
                     const Env& params = {});

/// classical fixed-step 4th-order integration of dY^j/dt = -Gamma^j_ik gamma^i Y^k
std::vector<double> parallel_transport(const EConnection& conn, const PathSpec& p,
                                       const std::vector<double>& v0, int steps = 1000,
                                       const Env& params = {});

/// integrates dh/dt = -(sum_ij Gamma^j_ij gamma^i) h, h(0)=1
double transport_determinant(const EConnection& conn, const PathSpec& p, int steps = 1000,
                             const Env& params = {});

struct HolonomyResult {
    double ode_value = 0.0;     // determinant of the normal parallel transport
    double formula_value = 0.0; // exp of the line integral of the relative class
};

/// Both sides of the holonomy identity for the adapted subalgebroid
/// (n0, m0); p lives on restrict(E, n0, m0) and must cover a base loop.
HolonomyResult relative_holonomy(const AlgebroidPtr& E, int n0, int m0, const PathSpec& p,
                                 int steps = 1000, const Env& params = {});

/// flow of the complete lift of X from the point v0 = (x, y) of E; aborts on
/// blow-up (|component| > 1e12)
std::vector<double> flow_complete_lift(const Section& X, double t_end,
                                       const std::vector<double>& v0, int steps = 1000,
                                       const Env& params = {});

/// fixed-step classical Runge-Kutta on a small dense system
std::vector<double> rk4_integrate(
    const std::function<std::vector<double>(double, const std::vector<double>&)>& field,
    std::vector<double> state, double t0, double t1, int steps);

} // namespace skewalg

#endif
