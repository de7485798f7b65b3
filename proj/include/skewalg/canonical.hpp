#ifndef SKEWALG_CANONICAL_HPP
#define SKEWALG_CANONICAL_HPP

#include <cstdint>
#include <vector>

#include "skewalg/expr.hpp"

namespace skewalg {

// Canonical form: a multivariate polynomial fraction over exact rationals in
// "atoms" (symbols plus opaque transcendental subtrees keyed by their
// canonicalized argument). Fractions are GCD-reduced with a fixed scalar
// normalization, so structural equality of simplified trees decides equality
// of the rational fragment exactly.

/// Canonically simplify. Idempotent: simplify(simplify(e)) is structurally
/// identical to simplify(e). Throws ExprError when a denominator is
/// identically zero.
Expr simplify(const Expr& e);

enum class EqualityMethod { Canonical, Numeric };

struct EqualityResult {
    bool equal;
    EqualityMethod method;
    explicit operator bool() const { return equal; }
};

/// Decide equality. Tries canonical normal forms first; when transcendental
/// atoms keep the difference from reducing, falls back to randomized
/// evaluation at `trials` points in [-2,2]^vars (resampling away from
/// singular points), equal within `tol`.
EqualityResult exprs_equal(const Expr& a, const Expr& b,
                           const std::vector<std::string>& vars,
                           int trials = 32, double tol = 1e-9,
                           uint64_t seed = 0x5eeda15ull);

/// Same, with vars = union of the free symbols of a and b.
EqualityResult exprs_equal(const Expr& a, const Expr& b);

/// exprs_equal against the zero expression.
EqualityResult expr_is_zero(const Expr& e);

/// True when the canonical normal form alone proves e == 0.
bool provably_zero(const Expr& e);

/// True when the canonical normal form alone proves e != 0 (rational
/// fragment only; inconclusive for transcendental atoms returns false).
bool provably_nonzero(const Expr& e);

} // namespace skewalg

#endif
