#ifndef SKEWALG_LINALG_HPP
#define SKEWALG_LINALG_HPP

#include <vector>

#include "skewalg/expr.hpp"

namespace skewalg {

/// Dense matrix of symbolic entries; exact fraction-field arithmetic with
/// canonical-form zero tests. Sized for the small systems of this domain.
using ExprMatrix = std::vector<std::vector<Expr>>;

ExprMatrix expr_identity(int n);

Expr matrix_det(const ExprMatrix& a);

/// adjugate/determinant inverse; throws ExprError when det is canonically zero
ExprMatrix matrix_inverse(const ExprMatrix& a);

ExprMatrix matrix_mul(const ExprMatrix& a, const ExprMatrix& b);

/// solve a x = b for one right-hand side (square a)
std::vector<Expr> matrix_solve(const ExprMatrix& a, const std::vector<Expr>& b);

/// basis of the null space of a (r x c), via exact Gaussian elimination with
/// canonical-form pivot tests; free variables set to 1 in column order
std::vector<std::vector<Expr>> matrix_nullspace(const ExprMatrix& a);

} // namespace skewalg

#endif
