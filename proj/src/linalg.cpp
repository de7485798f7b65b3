#include "skewalg/linalg.hpp"

#include "skewalg/canonical.hpp"

namespace skewalg {

ExprMatrix expr_identity(int n) {
    ExprMatrix a(n, std::vector<Expr>(n, Expr::num(0)));
    for (int i = 0; i < n; ++i) a[i][i] = Expr::num(1);
    return a;
}

Expr matrix_det(const ExprMatrix& a) {
    size_t n = a.size();
    if (n == 0) return Expr::num(1);
    if (n == 1) return simplify(a[0][0]);
    // cofactor expansion along the first row; fine for the sizes we meet
    Expr det = Expr::num(0);
    for (size_t j = 0; j < n; ++j) {
        if (a[0][j].is_zero_literal()) continue;
        ExprMatrix minor;
        for (size_t r = 1; r < n; ++r) {
            std::vector<Expr> row;
            for (size_t c = 0; c < n; ++c)
                if (c != j) row.push_back(a[r][c]);
            minor.push_back(std::move(row));
        }
        Expr term = a[0][j] * matrix_det(minor);
        det += (j % 2 == 0) ? term : Expr::num(-1) * term;
    }
    return simplify(det);
}

ExprMatrix matrix_inverse(const ExprMatrix& a) {
    size_t n = a.size();
    Expr det = matrix_det(a);
    if (provably_zero(det)) throw ExprError("matrix_inverse: singular matrix");
    ExprMatrix inv(n, std::vector<Expr>(n, Expr::num(0)));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            ExprMatrix minor;
            for (size_t r = 0; r < n; ++r) {
                if (r == j) continue;
                std::vector<Expr> row;
                for (size_t c = 0; c < n; ++c)
                    if (c != i) row.push_back(a[r][c]);
                minor.push_back(std::move(row));
            }
            Expr cof = matrix_det(minor);
            if ((i + j) % 2 == 1) cof = Expr::num(-1) * cof;
            inv[i][j] = simplify(cof / det);
        }
    }
    return inv;
}

ExprMatrix matrix_mul(const ExprMatrix& a, const ExprMatrix& b) {
    size_t r = a.size(), k = b.size(), c = k ? b[0].size() : 0;
    ExprMatrix out(r, std::vector<Expr>(c, Expr::num(0)));
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < c; ++j) {
            Expr acc = Expr::num(0);
            for (size_t t = 0; t < k; ++t) acc += a[i][t] * b[t][j];
            out[i][j] = simplify(acc);
        }
    return out;
}

std::vector<Expr> matrix_solve(const ExprMatrix& a, const std::vector<Expr>& b) {
    ExprMatrix inv = matrix_inverse(a);
    std::vector<Expr> out(b.size(), Expr::num(0));
    for (size_t i = 0; i < b.size(); ++i) {
        Expr acc = Expr::num(0);
        for (size_t j = 0; j < b.size(); ++j) acc += inv[i][j] * b[j];
        out[i] = simplify(acc);
    }
    return out;
}

std::vector<std::vector<Expr>> matrix_nullspace(const ExprMatrix& a) {
    size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    ExprMatrix m = a;
    std::vector<int> pivot_col_of_row;
    size_t row = 0;
    for (size_t col = 0; col < cols && row < rows; ++col) {
        // find a provably nonzero pivot in this column
        size_t pick = rows;
        for (size_t r = row; r < rows; ++r) {
            m[r][col] = simplify(m[r][col]);
            if (provably_nonzero(m[r][col])) {
                pick = r;
                break;
            }
        }
        if (pick == rows) {
            // treat entries we cannot certify nonzero as zero (rational
            // entries are always decidable; transcendental ones are not)
            continue;
        }
        std::swap(m[row], m[pick]);
        Expr inv = Expr::num(1) / m[row][col];
        for (size_t c2 = col; c2 < cols; ++c2) m[row][c2] = simplify(m[row][c2] * inv);
        for (size_t r = 0; r < rows; ++r) {
            if (r == row || m[r][col].is_zero_literal()) continue;
            Expr f = m[r][col];
            for (size_t c2 = col; c2 < cols; ++c2)
                m[r][c2] = simplify(m[r][c2] - f * m[row][c2]);
        }
        pivot_col_of_row.push_back(static_cast<int>(col));
        ++row;
    }
    std::vector<bool> is_pivot(cols, false);
    for (int pc : pivot_col_of_row) is_pivot[pc] = true;

    std::vector<std::vector<Expr>> basis;
    for (size_t free_col = 0; free_col < cols; ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<Expr> v(cols, Expr::num(0));
        v[free_col] = Expr::num(1);
        for (size_t r = 0; r < pivot_col_of_row.size(); ++r)
            v[pivot_col_of_row[r]] = simplify(Expr::num(-1) * m[r][free_col]);
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace skewalg
