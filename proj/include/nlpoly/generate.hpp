#ifndef NLPOLY_GENERATE_HPP
#define NLPOLY_GENERATE_HPP

// Polynomial pair generation: build the scaled orthogonal basis, reduce it,
// unscale the first rows into f1 and f2, and score the pair.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nlpoly/error.hpp"
#include "nlpoly/expand.hpp"
#include "nlpoly/gp.hpp"
#include "nlpoly/integer.hpp"
#include "nlpoly/lattice.hpp"
#include "nlpoly/poly.hpp"

namespace nlpoly {

struct PairScores {
    Rational norm1_sq, norm2_sq; // squared skewed norms at the pair's skew
    double norm1_exp = 0, norm2_exp = 0, product_exponent = 0;
    Rational sin_sq_theta;
    bool coprime = false;
    Integer resultant;
    Integer required_divisor;          // a~ k~ N (d1), a~^2 k~ N (d2-zero); N without params or below degree d
    std::optional<bool> resultant_ok;  // unset when the pair is not coprime
};

/// Common root m/p modulo N shared by every generated polynomial.
struct RootWitness {
    Integer m, p, N;
};

struct CandidatePair {
    IntPoly f1, f2;
    Integer skew;
    Family family = Family::d1;
    RootWitness root;
    std::optional<GpParams> params;
    PairScores scores;
    bool degree_fixed_up = false;      // f2 replaced by f1 + f2
    bool sin_guarantee_forfeited = false;
};

/// First vector of the reduced basis has degree below d; carries that polynomial.
struct ShortVectorError : Error {
    ShortVectorError(const std::string& what, IntPoly f) : Error(what), poly(std::move(f)) {}
    IntPoly poly;
};

/// p^deg(f) f(m/p) = 0 (mod N).
inline bool has_common_root(const IntPoly& f, const RootWitness& w)
{
    if (f.is_zero()) return true;
    return divides(w.N, f.homogeneous_value(w.m, w.p, f.checked_degree()));
}

namespace detail {

inline IntPoly sign_normalized(IntPoly f)
{
    if (!f.is_zero() && f.leading() < 0) return -f;
    return f;
}

// a~k~N (a~^2 k~N for the zero family) divides the resultant only for two
// degree-d polynomials; otherwise the common root gives N alone.
inline Integer required_divisor(const CandidatePair& pair)
{
    if (!pair.params) return pair.root.N;
    const unsigned d = pair.params->d;
    if (pair.f1.is_zero() || pair.f2.is_zero() || pair.f1.checked_degree() != d || pair.f2.checked_degree() != d)
        return pair.root.N;
    const DerivedParams dp = pair.params->derive(pair.family);
    Integer r = dp.a_tilde * dp.k_tilde * pair.params->N;
    if (pair.family == Family::d2_zero) r *= dp.a_tilde;
    return abs(r);
}

// Picks f1, f2 from reduced rows, substituting the third row when the first
// two give the same polynomial up to sign.
inline std::pair<IntPoly, IntPoly> pick_pair(const std::vector<IntPoly>& polys)
{
    if (polys.size() < 2) throw DimensionError("reduced basis has fewer than two vectors");
    IntPoly f1 = sign_normalized(polys[0]);
    IntPoly f2 = sign_normalized(polys[1]);
    if (f1 == f2 && polys.size() > 2) f2 = sign_normalized(polys[2]);
    return {std::move(f1), std::move(f2)};
}

} // namespace detail

/// Fills norms, exponents, sin^2 theta and the resultant divisibility check.
inline PairScores score_pair(const CandidatePair& pair, std::optional<Rational> skew_override = {})
{
    const Rational s = skew_override ? *skew_override : Rational(pair.skew);
    const Integer& N = pair.root.N;
    PairScores sc;
    sc.norm1_sq = skewed_norm(pair.f1, s).value_squared;
    sc.norm2_sq = skewed_norm(pair.f2, s).value_squared;
    sc.norm1_exp = 0.5 * log_base(sc.norm1_sq, N);
    sc.norm2_exp = 0.5 * log_base(sc.norm2_sq, N);
    sc.product_exponent = sc.norm1_exp + sc.norm2_exp;
    sc.sin_sq_theta = sin_theta(pair.f1, pair.f2, s).sin_squared;
    sc.required_divisor = detail::required_divisor(pair);
    if (pair.f1.checked_degree() >= 1 && pair.f2.checked_degree() >= 1) {
        sc.resultant = resultant(pair.f1, pair.f2);
        sc.coprime = sc.resultant != 0;
        if (sc.coprime) sc.resultant_ok = divides(sc.required_divisor, sc.resultant);
    }
    return sc;
}

namespace detail {

inline CandidatePair finish(IntPoly f1, IntPoly f2, const Integer& s, Family family, const RootWitness& w,
                            std::optional<GpParams> params)
{
    CandidatePair out{std::move(f1), std::move(f2), s, family, w, std::move(params), {}, false, false};
    out.scores = score_pair(out);
    return out;
}

} // namespace detail

/// Length-(d+1) generation: expansion with a~ = a/g, k~ = k/g, LLL on B S
/// with S = diag(1, s, ..., s^d), first two rows unscaled into f1 and f2.
inline CandidatePair generate_pair(const GpParams& params, const Integer& s,
                                   const Rational& delta = Rational(99, 100))
{
    if (s < 1) throw DomainError("skew must be a positive integer");
    const DerivedParams dp = params.derive(Family::d1);
    const unsigned d = params.d;
    const IntPoly ft = base_mp_expand({d, d, {dp.a_tilde}, params.m, params.p, dp.k_tilde, params.N});
    const LatticeBasis B = basis_rows_d1(params, ft);
    const DiagonalScaling S = DiagonalScaling::powers(s, d);
    const LatticeBasis reduced = lll_reduce(LatticeBasis(S.apply(B.rows())), delta);
    std::vector<IntPoly> polys;
    for (const auto& row : reduced.rows()) polys.emplace_back(S.unapply(row));
    auto [f1, f2] = detail::pick_pair(polys);
    return detail::finish(std::move(f1), std::move(f2), s, Family::d1, {params.m, params.p, params.N}, params);
}

/// Length-(d+2) generation: polynomials with zero x^(d-1) coefficient from
/// the compressed basis scaled by diag(1, s, ..., s^(d-2), s^d).
inline CandidatePair generate_pair_zero(const GpParams& params, const Integer& s,
                                        const Rational& delta = Rational(99, 100))
{
    if (s < 1) throw DomainError("skew must be a positive integer");
    const DerivedParams dp = params.derive(Family::d2_zero);
    const unsigned d = params.d;
    const IntPoly ft =
        base_mp_expand({d, d - 1, {Integer(0), dp.a_tilde}, params.m, params.p, dp.k_tilde, params.N});
    const LatticeBasis B = basis_rows_d2_zero(params, ft);
    const DiagonalScaling S = DiagonalScaling::powers_skipping_second_highest(s, d);
    const LatticeBasis reduced = lll_reduce(LatticeBasis(S.apply(B.rows())), delta);
    std::vector<IntPoly> polys;
    for (const auto& row : reduced.rows()) polys.emplace_back(expand_zero_coordinate(S.unapply(row)));
    auto [f1, f2] = detail::pick_pair(polys);
    return detail::finish(std::move(f1), std::move(f2), s, Family::d2_zero, {params.m, params.p, params.N},
                          params);
}

/// Generation from k stacked length-(d+1) progressions sharing one ratio.
/// A two-dimensional orthogonal lattice is Lagrange-reduced, which yields the
/// successive minima and sin^2 theta >= 3/4.
inline CandidatePair generate_from_gps(const std::vector<GeomProgression>& gps, unsigned d, const Integer& s,
                                       const Rational& delta = Rational(99, 100))
{
    if (s < 1) throw DomainError("skew must be a positive integer");
    if (gps.empty() || gps.size() >= d) throw DimensionError("need 1 <= k < d progressions");
    for (const auto& g : gps)
        if (g.length() != d + 1) throw DimensionError("progressions must have length d + 1");
    const GeomProgression* anchor = nullptr;
    for (const auto& g : gps) {
        const GpValidation v = validate_gp(g);
        if (!v.valid()) throw ConstructionError("input is not a progression modulo N with its ratio witness");
        if (!anchor && v.nonzero_terms && v.first_coprime) anchor = &g;
    }
    if (!anchor) throw ConstructionError("no progression with nonzero terms and gcd(c_0, N) = 1");
    for (const auto& g : gps)
        if (g.modulus != anchor->modulus || g.ratio_num * anchor->ratio_den != g.ratio_den * anchor->ratio_num)
            throw ConstructionError("progressions do not share one ratio modulo N");
    IntMatrix rows;
    for (const auto& g : gps) rows.push_back(g.terms);
    if (rank(rows) != rows.size()) throw RankError("progressions are linearly dependent");
    const LatticeBasis gens(std::move(rows));
    const DiagonalScaling S = DiagonalScaling::powers(s, d);
    LatticeBasis reduced = orthogonal_basis_scaled(gens, S, std::nullopt, delta);
    const bool two_dim = reduced.rank() == 2;
    if (two_dim) reduced = lagrange_reduce(reduced);
    std::vector<IntPoly> polys;
    for (const auto& row : reduced.rows()) polys.emplace_back(S.unapply(row));
    auto [f1, f2] = detail::pick_pair(polys);
    CandidatePair out = detail::finish(std::move(f1), std::move(f2), s, Family::d1,
                                       {anchor->ratio_num, anchor->ratio_den, anchor->modulus}, std::nullopt);
    if (two_dim && out.scores.sin_sq_theta < Rational(3, 4))
        throw Error("Lagrange-reduced pair violates sin^2 theta >= 3/4");
    return out;
}

/// If deg f2 < d, replaces f2 by f1 + f2 (degree d). The sin theta
/// guarantee of the reduced basis no longer applies afterwards.
inline CandidatePair fixup_degree(CandidatePair pair, unsigned d)
{
    if (pair.f1.is_zero() || pair.f1.checked_degree() < d)
        throw ShortVectorError("first reduced vector has degree below d; decrease the skew", pair.f1);
    if (!pair.f2.is_zero() && pair.f2.checked_degree() == d) return pair;
    pair.f2 = pair.f1 + pair.f2;
    pair.degree_fixed_up = true;
    pair.sin_guarantee_forfeited = true;
    pair.scores = score_pair(pair);
    return pair;
}

} // namespace nlpoly

#endif // NLPOLY_GENERATE_HPP
