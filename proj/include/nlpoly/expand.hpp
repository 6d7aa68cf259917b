#ifndef NLPOLY_EXPAND_HPP
#define NLPOLY_EXPAND_HPP

// Base-(m,p) expansion and the orthogonal-lattice bases built from it.

#include <cstddef>
#include <vector>

#include "nlpoly/error.hpp"
#include "nlpoly/gp.hpp"
#include "nlpoly/integer.hpp"
#include "nlpoly/lattice.hpp"
#include "nlpoly/poly.hpp"

namespace nlpoly {

/// Fixed high coefficients a_j..a_n of a polynomial f with f(m/p) p^n = k~ N.
struct ExpansionRequest {
    unsigned n = 0;
    unsigned j = 0;
    IntVector high; // high[i] is the coefficient of x^(j+i), i = 0..n-j
    Integer m, p, k_tilde, N;
};

/// Computes the remaining coefficients a_{j-1}..a_0 digit by digit. Each
/// a_i = (r_i + t_i p) / m^i with t_i = -r_i / p (mod |m|^i) taken in
/// [-|m|^i/2, |m|^i/2); an exact half rounds down.
inline IntPoly base_mp_expand(const ExpansionRequest& req)
{
    const unsigned n = req.n, j = req.j;
    if (n < 1 || j < 1 || j > n) throw InputError("expansion needs 1 <= j <= n");
    if (req.high.size() != n - j + 1) throw InputError("expected n - j + 1 fixed coefficients");
    if (req.m == 0 || req.p == 0 || req.k_tilde == 0 || req.N == 0)
        throw InputError("m, p, k~ and N must be nonzero");
    if (igcd(req.m, req.p) != 1) throw InputError("gcd(m, p) != 1");
    if (req.high.back() == 0) throw InputError("leading coefficient a_n must be nonzero");

    const Integer kN = req.k_tilde * req.N;
    IntVector a(n + 1, Integer(0));
    for (unsigned i = j; i <= n; ++i) a[i] = req.high[i - j];

    Integer fixed = 0;
    for (unsigned i = j; i <= n; ++i) fixed += a[i] * ipow(req.m, i) * ipow(req.p, n - i);
    if (!divides(ipow(req.p, n - j + 1), kN - fixed))
        throw InputError("p^(n-j+1) does not divide k~N - sum a_i m^i p^(n-i)");

    Integer r;
    if (j == n) {
        r = kN;
    } else {
        Integer upper = 0;
        for (unsigned i = j + 1; i <= n; ++i) upper += a[i] * ipow(req.m, i) * ipow(req.p, n - i);
        r = exact_div(kN - upper, ipow(req.p, n - j));
    }
    const Integer abs_m = abs(req.m);
    for (unsigned i = j; i-- > 0;) {
        r = exact_div(r - a[i + 1] * ipow(req.m, i + 1), req.p);
        const Integer mi = ipow(abs_m, i);
        Integer t = 0;
        if (mi != 1) {
            t = mod(-r * invmod(req.p, mi), mi);
            if (2 * t >= mi) t -= mi;
        }
        a[i] = exact_div(r + t * req.p, ipow(req.m, i));
    }
    return IntPoly(std::move(a));
}

namespace detail {

inline void check_identity(const IntPoly& f, unsigned n, const Integer& m, const Integer& p, const Integer& kN)
{
    if (f.homogeneous_value(m, p, n) != kN) throw InputError("polynomial does not satisfy f(m/p) p^n = k~N");
}

} // namespace detail

/// Rows f~, (px - m)x^(d-2), ..., (px - m): a basis of the integers
/// orthogonal to build_gp_d1(params).
inline LatticeBasis basis_rows_d1(const GpParams& params, const IntPoly& ftilde)
{
    const DerivedParams dp = params.derive(Family::d1);
    const unsigned d = params.d;
    if (ftilde.degree() != d || ftilde.leading() != dp.a_tilde)
        throw InputError("f~ must have degree d and leading coefficient a~");
    detail::check_identity(ftilde, d, params.m, params.p, dp.k_tilde * params.N);
    IntMatrix rows;
    rows.push_back(ftilde.padded(d + 1));
    for (unsigned i = d - 1; i-- > 0;) {
        IntVector row(d + 1, Integer(0));
        row[i] = -params.m;
        row[i + 1] = params.p;
        rows.push_back(std::move(row));
    }
    return LatticeBasis(std::move(rows));
}

/// Inserts a zero at coordinate d-1 of a compressed (d-coordinate) row.
inline IntVector expand_zero_coordinate(const IntVector& compressed)
{
    IntVector v(compressed.begin(), compressed.end() - 1);
    v.push_back(0);
    v.push_back(compressed.back());
    return v;
}

/// Drops coordinate d-1 (which must be zero) from a length-(d+1) row.
inline IntVector compress_zero_coordinate(const IntVector& full)
{
    if (full.size() < 3 || full[full.size() - 2] != 0) throw DomainError("coordinate d-1 is not zero");
    IntVector v(full.begin(), full.end() - 2);
    v.push_back(full.back());
    return v;
}

/// Rows over coordinates (0..d-2, d): f~ then (px - m)x^i for i = d-3..0.
/// Expanded with a zero at d-1 they are orthogonal to both length-(d+1)
/// windows of build_gp_d2(params).
inline LatticeBasis basis_rows_d2_zero(const GpParams& params, const IntPoly& ftilde)
{
    const DerivedParams dp = params.derive(Family::d2_zero);
    const unsigned d = params.d;
    if (ftilde.degree() != d || ftilde.leading() != dp.a_tilde)
        throw InputError("f~ must have degree d and leading coefficient a~");
    if (ftilde.coeff(d - 1) != 0) throw InputError("f~ must have zero x^(d-1) coefficient");
    detail::check_identity(ftilde, d, params.m, params.p, dp.k_tilde * params.N);
    IntMatrix rows;
    rows.push_back(compress_zero_coordinate(ftilde.padded(d + 1)));
    for (unsigned i = d - 2; i-- > 0;) {
        IntVector row(d, Integer(0));
        row[i] = -params.m;
        row[i + 1] = params.p;
        rows.push_back(std::move(row));
    }
    return LatticeBasis(std::move(rows));
}

/// Bezout pair (a_{d+1}, a_d) with a_{d+1} m + a_d p = a~, a_{d+1} > 0 and
/// |a_d| minimal (ties: smaller a_{d+1}).
inline std::pair<Integer, Integer> leading_bezout_pair(const Integer& m, const Integer& p, const Integer& a_tilde)
{
    Integer x, y;
    const Integer g = xgcd(m, p, x, y);
    if (g != 1 && g != -1) throw ConstructionError("gcd(m, p) != 1");
    // Particular solution, then the family (x0 + t p, y0 - t m).
    const Integer x0 = x * a_tilde * g, y0 = y * a_tilde * g;
    auto hi = [&](const Integer& t) { return Integer(x0 + t * p); };
    auto lo = [&](const Integer& t) { return Integer(y0 - t * m); };
    std::vector<Integer> cand;
    const Integer t_star = floor_div(y0, m);
    for (int dt = -1; dt <= 2; ++dt) cand.push_back(t_star + dt);
    // Boundary of the half-line where x0 + t p > 0.
    Integer tb = p > 0 ? Integer(floor_div(-x0, p) + 1) : Integer(ceil_div(-x0, p) - 1);
    for (int dt = -1; dt <= 1; ++dt) cand.push_back(tb + dt);
    std::optional<Integer> best;
    for (const auto& t : cand) {
        if (hi(t) <= 0) continue;
        if (!best || abs(lo(t)) < abs(lo(*best)) || (abs(lo(t)) == abs(lo(*best)) && hi(t) < hi(*best))) best = t;
    }
    if (!best) throw ConstructionError("no Bezout pair with positive leading coefficient");
    return {hi(*best), lo(*best)};
}

/// The degree-(d+1) expansion used by basis_rows_d2_full.
inline IntPoly expansion_d2_full(const GpParams& params)
{
    const DerivedParams dp = params.derive(Family::d2_zero);
    auto [ad1, ad] = leading_bezout_pair(params.m, params.p, dp.a_tilde);
    return base_mp_expand({params.d + 1, params.d, {ad, ad1}, params.m, params.p, dp.k_tilde, params.N});
}

/// (d+1) x (d+2) basis of the integers orthogonal to the full length-(d+2)
/// progression: f~ of degree d+1, (px - m)x^d, then (px - m)x^i for i = d-2..0.
inline LatticeBasis basis_rows_d2_full(const GpParams& params)
{
    const unsigned d = params.d;
    if (d < 1) throw ConstructionError("degree must be positive");
    const IntPoly ft = expansion_d2_full(params);
    IntMatrix rows;
    rows.push_back(ft.padded(d + 2));
    auto shifted = [&](unsigned i) {
        IntVector row(d + 2, Integer(0));
        row[i] = -params.m;
        row[i + 1] = params.p;
        return row;
    };
    rows.push_back(shifted(d));
    for (unsigned i = d - 1; i-- > 0;) rows.push_back(shifted(i));
    return LatticeBasis(std::move(rows));
}

} // namespace nlpoly

#endif // NLPOLY_EXPAND_HPP
