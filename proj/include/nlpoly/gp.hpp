#ifndef NLPOLY_GP_HPP
#define NLPOLY_GP_HPP

// Geometric progressions modulo N: the classified length-(d+1) family, the
// length-(d+2) family with vanishing x^(d-1) structure, validation,
// normalization by gcd(a~, k~), slicing, and skewed norms.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nlpoly/error.hpp"
#include "nlpoly/integer.hpp"
#include "nlpoly/lattice.hpp"
#include "nlpoly/matrix.hpp"
#include "nlpoly/poly.hpp"

namespace nlpoly {

/// Which construction a parameter tuple feeds: the length-(d+1) progression,
/// or the length-(d+2) progression whose polynomials lack an x^(d-1) term.
enum class Family { d1, d2_zero };

inline std::string to_string(Family f) { return f == Family::d1 ? "d1" : "d2-zero"; }

inline Family parse_family(const std::string& s)
{
    if (s == "d1") return Family::d1;
    if (s == "d2-zero" || s == "d2") return Family::d2_zero;
    throw InputError("unknown family '" + s + "' (expected d1 or d2-zero)");
}

/// Terms c_0..c_{l-1} with ratio witness m/p modulo N: p c_{i+1} = m c_i (mod N).
struct GeomProgression {
    IntVector terms;
    Integer modulus;
    Integer ratio_num;
    Integer ratio_den;

    [[nodiscard]] std::size_t length() const { return terms.size(); }

    friend bool operator==(const GeomProgression&, const GeomProgression&) = default;
};

/// Values derived from a parameter tuple for one family.
struct DerivedParams {
    Integer last_term_part; // (a m^d - kN)/p for d1, (a m^d - kN)/p^2 for d2-zero
    Integer g;              // gcd(a, last_term_part)
    Integer a_tilde;
    Integer k_tilde;
};

/// The tuple (d, a, p, m, k, N) driving every construction.
struct GpParams {
    unsigned d = 0;
    Integer a, p, m, k, N;

    /// Throws ConstructionError naming the first violated condition.
    void validate(Family family) const
    {
        if (d < 2) throw ConstructionError("degree d must be at least 2");
        if (family == Family::d2_zero && d < 3) throw ConstructionError("the length-(d+2) family needs d >= 3");
        if (a == 0 || p == 0 || m == 0 || k == 0) throw ConstructionError("a, p, m and k must be nonzero");
        if (N <= 0) throw ConstructionError("N must be positive");
        if (igcd(m, p) != 1) throw ConstructionError("gcd(m, p) != 1");
        if (igcd(a * p, N) != 1) throw ConstructionError("gcd(a p, N) != 1");
        const Integer num = a * ipow(m, d) - k * N;
        const Integer den = family == Family::d1 ? p : p * p;
        if (!divides(den, num))
            throw ConstructionError(family == Family::d1 ? "(a m^d - k N)/p is not an integer"
                                                         : "(a m^d - k N)/p^2 is not an integer");
        if (num == 0) throw ConstructionError("a m^d - k N is zero");
    }

    [[nodiscard]] DerivedParams derive(Family family) const
    {
        validate(family);
        const Integer num = a * ipow(m, d) - k * N;
        DerivedParams out;
        out.last_term_part = exact_div(num, family == Family::d1 ? p : p * p);
        out.g = igcd(a, out.last_term_part);
        out.a_tilde = exact_div(a, out.g);
        out.k_tilde = exact_div(k, out.g);
        return out;
    }

    friend bool operator==(const GpParams&, const GpParams&) = default;
};

namespace detail {

inline IntVector rational_prefix(const GpParams& pr)
{
    IntVector t(pr.d);
    for (unsigned i = 0; i < pr.d; ++i) t[i] = pr.a * ipow(pr.p, pr.d - 1 - i) * ipow(pr.m, i);
    return t;
}

} // namespace detail

/// [a p^(d-1), a p^(d-2) m, ..., a m^(d-1), (a m^d - kN)/p].
inline GeomProgression build_gp_d1(const GpParams& pr)
{
    const DerivedParams dp = pr.derive(Family::d1);
    IntVector t = detail::rational_prefix(pr);
    t.push_back(dp.last_term_part * 1);
    return {std::move(t), pr.N, pr.m, pr.p};
}

/// Length d+2 progression ending (a m^d - kN)/p, m (a m^d - kN)/p^2.
inline GeomProgression build_gp_d2(const GpParams& pr)
{
    const DerivedParams dp = pr.derive(Family::d2_zero);
    IntVector t = detail::rational_prefix(pr);
    t.push_back(dp.last_term_part * pr.p);
    t.push_back(pr.m * dp.last_term_part);
    return {std::move(t), pr.N, pr.m, pr.p};
}

/// Montgomery's two-quadratics progression [p, m, (m^2 - N)/p].
inline GeomProgression montgomery_gp(const Integer& N, const Integer& p, const Integer& m)
{
    return build_gp_d1(GpParams{2, 1, p, m, 1, N});
}

/// Williams / Prest-Zimmermann progression [1, m, ..., m^(d-1), m^d - N].
inline GeomProgression base_m_gp(const Integer& N, unsigned d, const Integer& m)
{
    return build_gp_d1(GpParams{d, 1, 1, m, 1, N});
}

/// Koo-Jo-Kwon length-(d+2) progression, the a = 1 case of build_gp_d2.
inline GeomProgression kjk_gp(const Integer& N, unsigned d, const Integer& p, const Integer& m, const Integer& k)
{
    return build_gp_d2(GpParams{d, 1, p, m, k, N});
}

inline bool is_rational_gp(std::span<const Integer> c)
{
    for (const auto& x : c)
        if (x == 0) return false;
    for (std::size_t i = 1; i + 1 < c.size(); ++i)
        if (c[i] * c[i] != c[i - 1] * c[i + 1]) return false;
    return true;
}

struct GpValidation {
    bool ratio_ok = false;           // p c_{i+1} = m c_i (mod N) for all i
    bool den_coprime = false;        // gcd(p, N) = 1
    bool nonzero_terms = false;      // property (1)
    bool first_coprime = false;      // property (2): gcd(c_0, N) = 1
    bool prefix_rational = false;    // property (3): [c_0..c_{l-2}] rational
    bool whole_not_rational = false; // property (4)

    [[nodiscard]] bool valid() const { return ratio_ok && den_coprime; }
    [[nodiscard]] bool classified() const
    {
        return valid() && nonzero_terms && first_coprime && prefix_rational && whole_not_rational;
    }
};

inline GpValidation validate_gp(const GeomProgression& gp)
{
    GpValidation v;
    const Integer& N = gp.modulus;
    v.den_coprime = N > 0 && igcd(gp.ratio_den, N) == 1;
    v.ratio_ok = N > 0;
    for (std::size_t i = 0; v.ratio_ok && i + 1 < gp.terms.size(); ++i)
        v.ratio_ok = divides(N, gp.ratio_den * gp.terms[i + 1] - gp.ratio_num * gp.terms[i]);
    v.nonzero_terms = std::none_of(gp.terms.begin(), gp.terms.end(), [](const Integer& x) { return x == 0; });
    v.first_coprime = !gp.terms.empty() && igcd(gp.terms[0], N) == 1;
    if (gp.terms.size() >= 2) {
        v.prefix_rational = is_rational_gp(std::span<const Integer>(gp.terms).first(gp.terms.size() - 1));
        v.whole_not_rational = !is_rational_gp(gp.terms);
    }
    return v;
}

/// Validation of bare terms: the ratio is recovered as c_1/c_0 mod N, which
/// needs gcd(c_0, N) = 1.
inline GpValidation validate_gp(const IntVector& terms, const Integer& N)
{
    if (terms.size() < 2 || N <= 1 || igcd(terms[0], N) != 1) {
        GpValidation v;
        v.nonzero_terms = std::none_of(terms.begin(), terms.end(), [](const Integer& x) { return x == 0; });
        return v;
    }
    const Integer r = mod(terms[1] * invmod(terms[0], N), N);
    return validate_gp(GeomProgression{terms, N, r, 1});
}

/// Recovers a canonical (a, p, m, k) with p > 0 from a progression satisfying
/// the four classification properties, or nullopt when none exists.
inline std::optional<GpParams> decompose_gp(const IntVector& c, const Integer& N)
{
    if (c.size() < 3 || N <= 0) return std::nullopt;
    const unsigned d = static_cast<unsigned>(c.size() - 1);
    Integer a = 0;
    for (unsigned i = 0; i < d; ++i) a = igcd(a, c[i]);
    if (a == 0) return std::nullopt;
    if (c[0] < 0) a = -a;
    const Integer pd1 = c[0] / a; // p^(d-1) > 0
    if (pd1 <= 0) return std::nullopt;
    Integer p;
    if (mpz_root(p.get_mpz_t(), pd1.get_mpz_t(), d - 1) == 0) return std::nullopt;
    const Integer den = a * ipow(p, d - 2);
    if (!divides(den, c[1])) return std::nullopt;
    const Integer m = c[1] / den;
    GpParams pr{d, a, p, m, 0, N};
    const Integer num = a * ipow(m, d) - p * c[d];
    if (num == 0 || !divides(N, num)) return std::nullopt;
    pr.k = num / N;
    try {
        if (build_gp_d1(pr).terms != c) return std::nullopt;
    } catch (const ConstructionError&) {
        return std::nullopt;
    }
    return pr;
}

/// Divides out g = gcd(a~, k~): c* = [c_0/g^d, ..., c_{d-1}/g, c_d] with ratio g m/p.
/// The witness is stored as m / (p/g). Identity when g = 1.
inline GeomProgression normalize_gp(const GpParams& pr)
{
    const DerivedParams dp = pr.derive(Family::d1);
    GeomProgression gp = build_gp_d1(pr);
    const Integer g = igcd(dp.a_tilde, dp.k_tilde);
    if (g == 1) return gp;
    for (unsigned i = 0; i < pr.d; ++i) gp.terms[i] = exact_div(gp.terms[i], ipow(g, pr.d - i));
    gp.ratio_den = exact_div(pr.p, g);
    return gp;
}

/// Length-(d+1) windows [c_j..c_{j+d}], j = 0..l-d-1; needs d < l < 2d.
inline std::vector<GeomProgression> slice_initial_gp(const GeomProgression& gp, std::size_t d)
{
    const std::size_t l = gp.length();
    if (!(d < l && l < 2 * d)) throw DimensionError("slicing needs d < length < 2d");
    std::vector<GeomProgression> out;
    for (std::size_t j = 0; j + d < l; ++j) {
        IntVector t(gp.terms.begin() + static_cast<std::ptrdiff_t>(j),
                    gp.terms.begin() + static_cast<std::ptrdiff_t>(j + d + 1));
        out.push_back({std::move(t), gp.modulus, gp.ratio_num, gp.ratio_den});
    }
    return out;
}

/// True when the progressions are linearly independent (the sliced set must be).
inline bool independent(const std::vector<GeomProgression>& gps)
{
    IntMatrix rows;
    for (const auto& g : gps) rows.push_back(g.terms);
    return !rows.empty() && rank(rows) == rows.size();
}

struct GpNorm {
    SkewedNorm norm;          // ||c||_{2, 1/s}
    Rational target_exponent; // ((2d-1)(l-d) - (d-1)) / (2d(l-d)), the optimal log_N size
};

/// ||c||^2_{2,1/s} = sum c_i^2 s^(d - 2i) with d = length - 1; the target
/// exponent is computed for the polynomial degree `poly_degree` (defaults to
/// length - 1, i.e. l = d + 1).
inline GpNorm gp_skewed_norm(const GeomProgression& gp, const Integer& s, std::optional<unsigned> poly_degree = {})
{
    if (s <= 0) throw DomainError("skew must be positive");
    if (gp.terms.empty()) throw DomainError("empty progression");
    const long d = static_cast<long>(gp.terms.size()) - 1;
    Rational acc = 0;
    for (long i = 0; i <= d; ++i) {
        const Integer& c = gp.terms[static_cast<std::size_t>(i)];
        acc += Rational(c * c) * rpow_signed(Rational(s), d - 2 * i);
    }
    const long l = d + 1;
    const long pd = poly_degree ? static_cast<long>(*poly_degree) : d;
    Rational target = 0;
    if (l > pd) {
        target = Rational((2 * pd - 1) * (l - pd) - (pd - 1), 2 * pd * (l - pd));
        target.canonicalize();
    }
    return {{acc}, target};
}

} // namespace nlpoly

#endif // NLPOLY_GP_HPP
