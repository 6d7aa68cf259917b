#ifndef NLPOLY_LATTICE_HPP
#define NLPOLY_LATTICE_HPP

// Exact integer lattices: Gram determinants, integral LLL, Lagrange
// reduction, membership, and orthogonal lattices (direct kernel route and
// the scaled embedding route) with their Cauchy-Binet determinant.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "nlpoly/error.hpp"
#include "nlpoly/integer.hpp"
#include "nlpoly/matrix.hpp"

namespace nlpoly {

/// Ordered list of linearly independent integer row vectors of common length.
class LatticeBasis {
public:
    explicit LatticeBasis(IntMatrix rows) : rows_(std::move(rows))
    {
        if (rows_.empty()) throw DimensionError("a lattice basis needs at least one row");
        const std::size_t n = rows_[0].size();
        for (const auto& r : rows_)
            if (r.size() != n) throw DimensionError("basis rows have different lengths");
        if (nlpoly::rank(rows_) != rows_.size()) throw RankError("basis rows are linearly dependent");
    }

    [[nodiscard]] std::size_t rank() const { return rows_.size(); }
    [[nodiscard]] std::size_t ambient_dim() const { return rows_[0].size(); }
    [[nodiscard]] const IntMatrix& rows() const { return rows_; }
    [[nodiscard]] const IntVector& operator[](std::size_t i) const { return rows_[i]; }

    friend bool operator==(const LatticeBasis&, const LatticeBasis&) = default;

private:
    IntMatrix rows_;
};

/// Diagonal matrix with nonzero integer entries acting on row vectors.
class DiagonalScaling {
public:
    explicit DiagonalScaling(IntVector entries) : entries_(std::move(entries))
    {
        for (const auto& e : entries_)
            if (e == 0) throw DomainError("diagonal scaling entries must be nonzero");
    }

    static DiagonalScaling identity(std::size_t n) { return DiagonalScaling(IntVector(n, Integer(1))); }

    /// diag(1, s, ..., s^d).
    static DiagonalScaling powers(const Integer& s, std::size_t d)
    {
        IntVector e(d + 1);
        for (std::size_t i = 0; i <= d; ++i) e[i] = ipow(s, i);
        return DiagonalScaling(std::move(e));
    }

    /// diag(1, s, ..., s^(d-2), s^d): the coordinate x^(d-1) is dropped.
    static DiagonalScaling powers_skipping_second_highest(const Integer& s, std::size_t d)
    {
        IntVector e;
        for (std::size_t i = 0; i + 1 < d; ++i) e.push_back(ipow(s, i));
        e.push_back(ipow(s, d));
        return DiagonalScaling(std::move(e));
    }

    [[nodiscard]] std::size_t size() const { return entries_.size(); }
    [[nodiscard]] const IntVector& entries() const { return entries_; }

    [[nodiscard]] IntVector apply(const IntVector& v) const
    {
        check(v);
        IntVector r(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] * entries_[i];
        return r;
    }

    [[nodiscard]] IntMatrix apply(const IntMatrix& rows) const
    {
        IntMatrix out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(apply(r));
        return out;
    }

    /// Componentwise exact division; throws if a coordinate is not divisible.
    [[nodiscard]] IntVector unapply(const IntVector& v) const
    {
        check(v);
        IntVector r(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) r[i] = exact_div(v[i], entries_[i]);
        return r;
    }

private:
    void check(const IntVector& v) const
    {
        if (v.size() != entries_.size()) throw DimensionError("scaling size differs from vector length");
    }

    IntVector entries_;
};

/// det(B B^t); its square root is the lattice determinant.
inline Integer gram_det_squared(const LatticeBasis& basis) { return determinant(gram(basis.rows())); }

/// Upper bound 1 + n/4 on Hermite's constant gamma_n, diagnostics only.
inline Rational hermite_constant_bound(std::size_t n)
{
    return ratio(static_cast<long>(n) + 4, 4);
}

namespace detail {

// Round lambda/d to the nearest integer, halves toward zero (d > 0).
inline Integer round_half_toward_zero(const Integer& lambda, const Integer& d)
{
    Integer a = abs(lambda);
    Integer q = ceil_div(2 * a - d, 2 * d);
    if (q < 0) q = 0;
    return lambda < 0 ? Integer(-q) : q;
}

} // namespace detail

/// Integral LLL reduction (exact Gram-Schmidt data kept as integers d_i and
/// lambda_ij = d_j mu_ij). delta is a rational in (1/4, 1]; size reduction
/// rounds exact halves toward zero so the output is deterministic.
inline LatticeBasis lll_reduce(const LatticeBasis& basis, const Rational& delta = Rational(99, 100))
{
    if (delta <= Rational(1, 4) || delta > 1) throw DomainError("LLL delta must lie in (1/4, 1]");
    const Integer P = delta.get_num(), Q = delta.get_den();
    const std::size_t K = basis.rank();
    std::vector<IntVector> b(K + 1);
    for (std::size_t i = 0; i < K; ++i) b[i + 1] = basis[i];
    if (K == 1) return basis;

    std::vector<Integer> d(K + 1, Integer(0));
    std::vector<std::vector<Integer>> lam(K + 1, std::vector<Integer>(K + 1, Integer(0)));
    d[0] = 1;
    d[1] = squared_norm(b[1]);

    auto red = [&](std::size_t k, std::size_t l) {
        if (2 * abs(lam[k][l]) <= d[l]) return;
        Integer q = detail::round_half_toward_zero(lam[k][l], d[l]);
        if (q == 0) return;
        for (std::size_t t = 0; t < b[k].size(); ++t) b[k][t] -= q * b[l][t];
        lam[k][l] -= q * d[l];
        for (std::size_t i = 1; i < l; ++i) lam[k][i] -= q * lam[l][i];
    };

    std::size_t k = 2, kmax = 1;
    auto swapi = [&](std::size_t kk) {
        std::swap(b[kk], b[kk - 1]);
        for (std::size_t j = 1; j + 2 <= kk; ++j) std::swap(lam[kk][j], lam[kk - 1][j]);
        const Integer l = lam[kk][kk - 1];
        Integer B = (d[kk - 2] * d[kk] + l * l);
        mpz_divexact(B.get_mpz_t(), B.get_mpz_t(), d[kk - 1].get_mpz_t());
        for (std::size_t i = kk + 1; i <= kmax; ++i) {
            Integer t = lam[i][kk];
            Integer nk = d[kk] * lam[i][kk - 1] - l * t;
            mpz_divexact(nk.get_mpz_t(), nk.get_mpz_t(), d[kk - 1].get_mpz_t());
            lam[i][kk] = nk;
            Integer nk1 = B * t + l * lam[i][kk];
            mpz_divexact(nk1.get_mpz_t(), nk1.get_mpz_t(), d[kk].get_mpz_t());
            lam[i][kk - 1] = nk1;
        }
        d[kk - 1] = B;
    };

    while (k <= K) {
        if (k > kmax) {
            kmax = k;
            for (std::size_t j = 1; j <= k; ++j) {
                Integer u = dot(b[k], b[j]);
                for (std::size_t i = 1; i < j; ++i) {
                    u = d[i] * u - lam[k][i] * lam[j][i];
                    mpz_divexact(u.get_mpz_t(), u.get_mpz_t(), d[i - 1].get_mpz_t());
                }
                if (j < k) lam[k][j] = u;
                else {
                    if (u == 0) throw RankError("LLL input rows are linearly dependent");
                    d[k] = u;
                }
            }
        }
        red(k, k - 1);
        if (Q * d[k] * d[k - 2] < P * d[k - 1] * d[k - 1] - Q * lam[k][k - 1] * lam[k][k - 1]) {
            swapi(k);
            if (k > 2) --k;
            continue;
        }
        for (std::size_t l = k - 1; l-- > 1;) red(k, l);
        ++k;
    }
    IntMatrix out(b.begin() + 1, b.end());
    return LatticeBasis(std::move(out));
}

/// Independent check of the LLL conditions on exact rational Gram-Schmidt data.
inline bool is_lll_reduced(const LatticeBasis& basis, const Rational& delta = Rational(99, 100))
{
    const std::size_t k = basis.rank();
    const std::size_t n = basis.ambient_dim();
    std::vector<std::vector<Rational>> star(k, std::vector<Rational>(n));
    std::vector<Rational> bnorm(k);
    std::vector<std::vector<Rational>> mu(k, std::vector<Rational>(k));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t t = 0; t < n; ++t) star[i][t] = basis[i][t];
        for (std::size_t j = 0; j < i; ++j) {
            Rational ip = 0;
            for (std::size_t t = 0; t < n; ++t) ip += Rational(basis[i][t]) * star[j][t];
            mu[i][j] = ip / bnorm[j];
            for (std::size_t t = 0; t < n; ++t) star[i][t] -= mu[i][j] * star[j][t];
        }
        bnorm[i] = 0;
        for (std::size_t t = 0; t < n; ++t) bnorm[i] += star[i][t] * star[i][t];
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (abs(mu[i][j]) > Rational(1, 2)) return false;
    for (std::size_t i = 1; i < k; ++i)
        if (bnorm[i] < (delta - mu[i][i - 1] * mu[i][i - 1]) * bnorm[i - 1]) return false;
    return true;
}

/// Gauss-Lagrange reduction of a rank-2 basis: afterwards |b1| = lambda_1 and |b2| = lambda_2.
inline LatticeBasis lagrange_reduce(const LatticeBasis& basis)
{
    if (basis.rank() != 2) throw DimensionError("Lagrange reduction needs exactly two basis vectors");
    IntVector b1 = basis[0], b2 = basis[1];
    Integer n1 = squared_norm(b1), n2 = squared_norm(b2);
    if (n2 < n1) {
        std::swap(b1, b2);
        std::swap(n1, n2);
    }
    for (;;) {
        Integer q = detail::round_half_toward_zero(dot(b1, b2), n1);
        if (q != 0)
            for (std::size_t t = 0; t < b2.size(); ++t) b2[t] -= q * b1[t];
        n2 = squared_norm(b2);
        if (n2 < n1) {
            std::swap(b1, b2);
            std::swap(n1, n2);
        } else {
            break;
        }
    }
    return LatticeBasis(IntMatrix{b1, b2});
}

/// True when v is an integer combination of the basis rows.
inline bool contains(const LatticeBasis& basis, const IntVector& v)
{
    auto x = solve_row_combination(basis.rows(), v);
    if (!x) return false;
    return std::all_of(x->begin(), x->end(), [](const Rational& q) { return q.get_den() == 1; });
}

/// Mutual membership: both bases generate the same lattice.
inline bool same_lattice(const LatticeBasis& a, const LatticeBasis& b)
{
    if (a.rank() != b.rank() || a.ambient_dim() != b.ambient_dim()) return false;
    for (const auto& r : a.rows())
        if (!contains(b, r)) return false;
    for (const auto& r : b.rows())
        if (!contains(a, r)) return false;
    return true;
}

/// Basis of the orthogonal lattice Z^n intersected with the orthogonal
/// complement of span(gens), via unimodular column elimination on gens;
/// the result is LLL-reduced.
inline LatticeBasis orthogonal_basis(const LatticeBasis& gens)
{
    const std::size_t k = gens.rank(), n = gens.ambient_dim();
    if (k >= n) throw DimensionError("orthogonal lattice needs fewer generators than the ambient dimension");
    IntMatrix a = gens.rows();
    // u holds the accumulated column transform; column c of u is u[.][c].
    IntMatrix u(n, IntVector(n, Integer(0)));
    for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;

    auto combine = [&](std::size_t r, std::size_t c, const Integer& x, const Integer& y, const Integer& z,
                       const Integer& w) {
        // (col_r, col_c) <- (x col_r + y col_c, z col_r + w col_c)
        for (auto& row : a) {
            Integer nr = x * row[r] + y * row[c];
            Integer nc = z * row[r] + w * row[c];
            row[r] = std::move(nr);
            row[c] = std::move(nc);
        }
        for (auto& row : u) {
            Integer nr = x * row[r] + y * row[c];
            Integer nc = z * row[r] + w * row[c];
            row[r] = std::move(nr);
            row[c] = std::move(nc);
        }
    };

    std::size_t piv = 0;
    for (std::size_t i = 0; i < k && piv < n; ++i) {
        for (std::size_t c = piv + 1; c < n; ++c) {
            if (a[i][c] == 0) continue;
            if (a[i][piv] == 0) {
                combine(piv, c, 0, 1, 1, 0);
                continue;
            }
            Integer x, y;
            Integer g = xgcd(a[i][piv], a[i][c], x, y);
            Integer z = -exact_div(a[i][c], g);
            Integer w = exact_div(a[i][piv], g);
            combine(piv, c, x, y, z, w);
        }
        if (a[i][piv] != 0) ++piv;
    }
    IntMatrix kernel;
    for (std::size_t c = piv; c < n; ++c) {
        IntVector v(n);
        for (std::size_t r = 0; r < n; ++r) v[r] = u[r][c];
        kernel.push_back(std::move(v));
    }
    return lll_reduce(LatticeBasis(std::move(kernel)));
}

/// Determinant data of the scaled orthogonal lattice.
struct OrthoDetReport {
    Rational det_squared;
    Integer omega; // gcd of all k x k minors of the generator matrix
};

namespace detail {

template <typename F>
void for_each_subset(std::size_t n, std::size_t k, F&& f)
{
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (;;) {
        f(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

} // namespace detail

/// Cauchy-Binet evaluation:
/// det^2 = (prod S_j^2 / Omega^2) * sum over column subsets (minor / prod S_i)^2.
inline OrthoDetReport orthogonal_det(const LatticeBasis& gens, const DiagonalScaling& S)
{
    const std::size_t k = gens.rank(), n = gens.ambient_dim();
    if (S.size() != n) throw DimensionError("scaling size differs from the ambient dimension");
    Integer omega = 0;
    Rational sum = 0;
    detail::for_each_subset(n, k, [&](const std::vector<std::size_t>& cols) {
        IntMatrix sub(k, IntVector(k));
        Integer scale = 1;
        for (std::size_t j = 0; j < k; ++j) {
            for (std::size_t i = 0; i < k; ++i) sub[i][j] = gens[i][cols[j]];
            scale *= S.entries()[cols[j]];
        }
        Integer minor = determinant(std::move(sub));
        omega = igcd(omega, minor);
        if (minor != 0) sum += ratio(minor * minor, scale * scale);
    });
    if (omega == 0) throw RankError("generator matrix has no nonzero maximal minor");
    Integer prod = 1;
    for (const auto& e : S.entries()) prod *= e;
    const Rational det2 = ratio(prod * prod, omega * omega) * sum;
    return {det2, omega};
}

/// LLL-reduced basis of the scaled orthogonal lattice (rows are y*S with y
/// orthogonal to gens) from the embedding (S | X * gens^t). With no X the
/// smallest power of two above 2^((n-1)/2 + (n-k)(n-k-1)/4) * det is used;
/// the embedding is retried with doubled X if reduction leaves fewer than
/// n-k rows with zero tail.
inline LatticeBasis orthogonal_basis_scaled(const LatticeBasis& gens, const DiagonalScaling& S,
                                            std::optional<Integer> X = std::nullopt,
                                            const Rational& delta = Rational(99, 100))
{
    const std::size_t k = gens.rank(), n = gens.ambient_dim();
    if (k >= n) throw DimensionError("orthogonal lattice needs fewer generators than the ambient dimension");
    if (S.size() != n) throw DimensionError("scaling size differs from the ambient dimension");
    for (const auto& e : S.entries())
        if (e <= 0) throw DomainError("embedding route needs positive scaling entries");

    Integer x;
    if (X) {
        if (*X <= 0) throw DomainError("embedding weight X must be positive");
        x = *X;
    } else {
        // X^2 > 2^(2e) det^2 with 2e = (n-1) + (n-k)(n-k-1)/2.
        const Rational det2 = orthogonal_det(gens, S).det_squared;
        const unsigned long two_e = (n - 1) + (n - k) * (n - k - 1) / 2;
        const Rational bound = det2 * Rational(ipow(Integer(2), two_e));
        x = 1;
        while (Rational(x * x) <= bound) x *= 2;
    }

    for (int attempt = 0; attempt < 64; ++attempt, x *= 2) {
        IntMatrix d(n, IntVector(n + k, Integer(0)));
        for (std::size_t j = 0; j < n; ++j) {
            d[j][j] = S.entries()[j];
            for (std::size_t i = 0; i < k; ++i) d[j][n + i] = x * gens[i][j];
        }
        LatticeBasis reduced = lll_reduce(LatticeBasis(std::move(d)), delta);
        IntMatrix out;
        bool ok = true;
        for (std::size_t r = 0; r < n - k; ++r) {
            const IntVector& row = reduced[r];
            for (std::size_t i = 0; i < k; ++i)
                if (row[n + i] != 0) ok = false;
            if (!ok) break;
            out.emplace_back(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(n));
        }
        if (!ok) continue;
        for (const auto& row : out) {
            IntVector y = S.unapply(row);
            for (std::size_t i = 0; i < k; ++i)
                if (dot(y, gens[i]) != 0) throw Error("embedding produced a non-orthogonal vector");
        }
        return LatticeBasis(std::move(out));
    }
    throw Error("embedding weight X could not be made large enough");
}

} // namespace nlpoly

#endif // NLPOLY_LATTICE_HPP
