#ifndef NLPOLY_MATRIX_HPP
#define NLPOLY_MATRIX_HPP

// Dense exact integer matrices: fraction-free elimination, rank, and
// rational solving. Dimensions in this library stay below a dozen, so
// everything is row-major vectors of GMP integers.

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "nlpoly/error.hpp"
#include "nlpoly/integer.hpp"

namespace nlpoly {

using IntVector = std::vector<Integer>;
using IntMatrix = std::vector<IntVector>;

inline Integer dot(std::span<const Integer> u, std::span<const Integer> v)
{
    if (u.size() != v.size()) throw DimensionError("dot product of vectors with different lengths");
    Integer acc = 0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * v[i];
    return acc;
}

inline Integer squared_norm(std::span<const Integer> v) { return dot(v, v); }

inline bool is_zero(std::span<const Integer> v)
{
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

inline IntMatrix transpose(const IntMatrix& a)
{
    if (a.empty()) return {};
    IntMatrix t(a[0].size(), IntVector(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
    return t;
}

/// Gram matrix A A^t.
inline IntMatrix gram(const IntMatrix& rows)
{
    IntMatrix g(rows.size(), IntVector(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            g[i][j] = dot(rows[i], rows[j]);
            g[j][i] = g[i][j];
        }
    return g;
}

/// Determinant by Bareiss fraction-free elimination.
inline Integer determinant(IntMatrix a)
{
    const std::size_t n = a.size();
    for (const auto& row : a)
        if (row.size() != n) throw DimensionError("determinant of a non-square matrix");
    if (n == 0) return 1;
    int sgn = 1;
    Integer prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t piv = k + 1;
            while (piv < n && a[piv][k] == 0) ++piv;
            if (piv == n) return 0;
            std::swap(a[k], a[piv]);
            sgn = -sgn;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Integer t = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    return sgn * a[n - 1][n - 1];
}

/// Rank of an integer matrix, fraction-free.
inline std::size_t rank(IntMatrix a)
{
    if (a.empty()) return 0;
    const std::size_t rows = a.size(), cols = a[0].size();
    std::size_t r = 0;
    Integer prev = 1;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && a[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[r], a[piv]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j) {
                Integer t = a[i][j] * a[r][c] - a[i][c] * a[r][j];
                mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        ++r;
    }
    return r;
}

/// Solves x * rows = target over the rationals for full-row-rank `rows`.
/// Returns nullopt when target is outside the rational row span.
inline std::optional<std::vector<Rational>> solve_row_combination(const IntMatrix& rows,
                                                                  std::span<const Integer> target)
{
    const std::size_t k = rows.size();
    if (k == 0) {
        if (is_zero(target)) return std::vector<Rational>{};
        return std::nullopt;
    }
    const std::size_t n = rows[0].size();
    if (target.size() != n) throw DimensionError("target length differs from row length");
    // Augmented system in columns: A^t x = target, A^t is n x k.
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(k + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) m[i][j] = rows[j][i];
        m[i][k] = target[i];
    }
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < k && r < n; ++c) {
        std::size_t piv = r;
        while (piv < n && m[piv][c] == 0) ++piv;
        if (piv == n) continue;
        std::swap(m[r], m[piv]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rational f = m[i][c] / m[r][c];
            for (std::size_t j = c; j <= k; ++j) m[i][j] -= f * m[r][j];
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < n; ++i)
        if (m[i][k] != 0) return std::nullopt;
    std::vector<Rational> x(k, Rational(0));
    for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = m[i][k] / m[i][pivot_col[i]];
    return x;
}

} // namespace nlpoly

#endif // NLPOLY_MATRIX_HPP
