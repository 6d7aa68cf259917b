#ifndef NLPOLY_PARAMS_HPP
#define NLPOLY_PARAMS_HPP

// Parameter selection: the target m~ = (kN/a)^(1/d), skew formulas, the
// constraint triple, m near m~ in a residue class, collision search and
// candidate enumeration.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nlpoly/error.hpp"
#include "nlpoly/gp.hpp"
#include "nlpoly/integer.hpp"
#include "nlpoly/modular.hpp"

namespace nlpoly {

/// (d, a, k, N) with m~ = (kN/a)^(1/d) held implicitly; every comparison
/// with m~ is an exact d-th power comparison.
struct SelectionTarget {
    unsigned d = 0;
    Integer a, k, N;

    void check() const
    {
        if (d < 1) throw InputError("degree must be positive");
        if (a <= 0 || k <= 0 || N <= 0) throw InputError("a, k and N must be positive");
    }

    [[nodiscard]] Integer kN() const { return k * N; }

    /// Largest x >= 0 with a x^d <= kN.
    [[nodiscard]] Integer m_floor() const
    {
        check();
        return iroot_floor(ratio(kN(), a), d);
    }

    /// Smallest integer x >= m~.
    [[nodiscard]] Integer m_ceil() const
    {
        Integer f = m_floor();
        if (a * ipow(f, d) != kN()) ++f;
        return f;
    }

    /// Nearest integer floor(m~ + 1/2).
    [[nodiscard]] Integer m_tilde0() const
    {
        check();
        const Integer twice = iroot_floor(Rational(ipow(Integer(2), d) * kN(), a), d); // floor(2 m~)
        return floor_div(twice + 1, Integer(2));
    }

    /// m >= m~.
    [[nodiscard]] bool at_least_tilde(const Integer& m) const { return m >= 0 && a * ipow(m, d) >= kN(); }

    /// m - m~ <= w.
    [[nodiscard]] bool within(const Integer& m, const Rational& w) const
    {
        const Rational x = Rational(m) - w;
        if (x <= 0) return true;
        return a * ipow(x.get_num(), d) <= kN() * ipow(x.get_den(), d);
    }
};

namespace detail {

// Unclamped floor values; zero when the bracket is below sqrt 2.
inline Integer skew_floor_d1(unsigned d, const Integer& m, const Integer& a_tilde)
{
    if (d < 1 || a_tilde == 0) throw InputError("need d >= 1 and a~ != 0");
    const unsigned long E = static_cast<unsigned long>(d) * d - d + 2;
    return iroot_floor(ratio(2 * m * m, a_tilde * a_tilde * Integer(d + 1) * ipow(Integer(2), E / 2)), E);
}

inline Integer skew_floor_d2(unsigned d, const Integer& p, const Integer& a_tilde)
{
    if (d < 1 || a_tilde == 0) throw InputError("need d >= 1 and a~ != 0");
    if (p <= 0) throw InputError("p must be positive");
    const unsigned long E = static_cast<unsigned long>(d) * d - 3UL * d + 4;
    return iroot_floor(ratio(2 * p * p, a_tilde * a_tilde * Integer(d) * ipow(Integer(2), E / 2)), E);
}

} // namespace detail

/// floor((1/sqrt 2)((m/a~) sqrt(2/(d+1)))^(2/E)) with E = d^2 - d + 2,
/// evaluated as an exact E-th root; at least 1.
inline Integer skew_formula_d1(unsigned d, const Integer& m, const Integer& a_tilde)
{
    return std::max(Integer(1), detail::skew_floor_d1(d, m, a_tilde));
}

/// floor((1/sqrt 2)((p/a~) sqrt(2/d))^(2/E)) with E = d^2 - 3d + 4; at least 1.
inline Integer skew_formula_d2(unsigned d, const Integer& p, const Integer& a_tilde)
{
    return std::max(Integer(1), detail::skew_floor_d2(d, p, a_tilde));
}

/// Skew of the length-(d+1) triple; m must be at least m~.
inline Integer skew_for_d1(const SelectionTarget& t, const Integer& m, const Integer& a_tilde)
{
    if (!t.at_least_tilde(m)) throw DomainError("m is below (kN/a)^(1/d)");
    return skew_formula_d1(t.d, m, a_tilde);
}

inline Integer skew_for_d2(const SelectionTarget& t, const Integer& p, const Integer& a_tilde)
{
    return skew_formula_d2(t.d, p, a_tilde);
}

/// Parameters with a chosen skew and the family they were selected for.
struct ParamCandidate {
    GpParams params;
    Integer s;
    Family family = Family::d1;

    friend bool operator==(const ParamCandidate&, const ParamCandidate&) = default;
};

struct ConstraintReport {
    bool params_valid = false;
    bool m_at_least_tilde = false; // 0 <= m - m~
    bool m_within_window = false;  // m - m~ <= ps/d
    bool skew_matches = false;     // s equals the formula value
    bool ps_le_m = false;
    // Informational, outside the triple.
    bool m_tilde_lower_bound = false; // the bound that makes s/d >= 1 automatic
    bool s_over_d_at_least_one = false;
    Integer formula_skew;
    std::string invalid_reason;

    [[nodiscard]] bool ok() const
    {
        return params_valid && m_at_least_tilde && m_within_window && skew_matches && ps_le_m;
    }
};

inline ConstraintReport check_constraints(const ParamCandidate& cand)
{
    ConstraintReport rep;
    const GpParams& pr = cand.params;
    DerivedParams dp;
    try {
        if (pr.a <= 0 || pr.k <= 0 || pr.p <= 0) throw ConstructionError("a, k and p must be positive");
        dp = pr.derive(cand.family);
    } catch (const Error& e) {
        rep.invalid_reason = e.what();
        return rep;
    }
    rep.params_valid = true;
    const SelectionTarget t{pr.d, pr.a, pr.k, pr.N};
    const unsigned d = pr.d;
    rep.m_at_least_tilde = t.at_least_tilde(pr.m);
    rep.m_within_window = t.within(pr.m, ratio(pr.p * cand.s, Integer(d)));
    // A formula value of zero is no valid skew, so the clamp is not applied here.
    rep.formula_skew = cand.family == Family::d1 ? detail::skew_floor_d1(d, pr.m, dp.a_tilde)
                                                 : detail::skew_floor_d2(d, pr.p, dp.a_tilde);
    rep.skew_matches = rep.formula_skew >= 1 && cand.s == rep.formula_skew;
    rep.ps_le_m = pr.p * cand.s <= pr.m;
    rep.s_over_d_at_least_one = cand.s >= d;
    // m~ >= 2^(d(d-1)/4) a (d+1)^((d^2-d+3)/2), raised to the 4d-th power.
    const unsigned long dd = d;
    const Integer rhs_inner = ipow(Integer(2), dd * (dd - 1)) * ipow(pr.a, 4) * ipow(Integer(d + 1), 2 * (dd * dd - dd + 3));
    rep.m_tilde_lower_bound = ipow(t.kN(), 4) >= ipow(pr.a, 4) * ipow(rhs_inner, d);
    return rep;
}

/// Partition of a search over its ordered work items.
struct Shard {
    unsigned index = 0;
    unsigned count = 1;

    [[nodiscard]] bool owns(std::size_t ordinal) const { return ordinal % count == index; }

    void check() const
    {
        if (count == 0 || index >= count) throw InputError("shard index must be below the shard count");
    }
};

namespace detail {

inline void check_factor_coprime(const SelectionTarget& t, const std::vector<PrimePower>& factors)
{
    for (const auto& f : factors)
        if (divides(f.prime, t.a * Integer(t.d) * t.kN()))
            throw DomainError("a prime factor of p divides a d k N");
}

inline std::vector<PrimePower> squared(std::vector<PrimePower> f)
{
    for (auto& x : f) x.exponent *= 2;
    return f;
}

inline Integer default_window_skew(const SelectionTarget& t, const Integer& p, Family family)
{
    return family == Family::d1 ? skew_formula_d1(t.d, t.m_ceil(), t.a) : skew_formula_d2(t.d, p, t.a);
}

// m = r (mod q) with 0 <= m - m~ <= w, at most per_residue per class (0: all).
inline std::vector<Integer> m_in_window(const SelectionTarget& t, const std::vector<Integer>& residues,
                                        const Integer& q, const Rational& w, std::size_t per_residue)
{
    const Integer base = t.m_ceil();
    std::vector<Integer> out;
    for (const auto& r : residues) {
        std::size_t taken = 0;
        for (Integer m = base + mod(r - base, q); t.within(m, w); m += q) {
            out.push_back(m);
            if (per_residue && ++taken == per_residue) break;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace detail

/// Every m with a m^d = kN modulo p (d1) or p^2 (d2-zero) and
/// 0 <= m - m~ <= window, ascending, truncated to limit when nonzero.
/// The default window is p s / d with the skew formula evaluated at a~ = a.
/// With p = 1 and no explicit window every integer qualifies, so only the
/// classical choice m = ceil(m~) is returned.
inline std::vector<Integer> find_m_near(const SelectionTarget& t, const Integer& p, Family family,
                                        std::optional<Rational> window = {}, std::size_t limit = 0,
                                        unsigned long seed = 0)
{
    t.check();
    if (p < 1) throw InputError("p must be positive");
    if (p == 1 && !window) return {t.m_ceil()};
    const std::vector<PrimePower> fp = factorize(p, seed);
    detail::check_factor_coprime(t, fp);
    const std::vector<PrimePower> fq = family == Family::d1 ? fp : detail::squared(fp);
    const Integer q = family == Family::d1 ? p : p * p;
    const Rational w = window ? *window : ratio(p * detail::default_window_skew(t, p, family), Integer(t.d));
    std::vector<Integer> out =
        detail::m_in_window(t, roots_mod_composite(t.a, t.k, t.N, t.d, fq, seed), q, w, limit);
    if (limit && out.size() > limit) out.resize(limit);
    return out;
}

namespace detail {

inline std::vector<Integer> primes_in(const Integer& lo, const Integer& hi)
{
    std::vector<Integer> out;
    Integer p = lo - 1;
    for (;;) {
        mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
        if (p > hi) break;
        out.push_back(p);
    }
    return out;
}

inline bool candidate_order(const ParamCandidate& x, const ParamCandidate& y)
{
    if (x.params.p != y.params.p) return x.params.p < y.params.p;
    return x.params.m < y.params.m;
}

} // namespace detail

/// Collisions r* with a(m~0 + r*)^d = kN (mod p1^2 p2^2) and |r*| <= r_bound
/// over distinct primes p1 < p2 in [lo, hi]. Each prime's lifted roots are
/// expanded over the r* window and bucketed; a bucket hit by two primes is a
/// collision. Emits d2-zero candidates p = p1 p2, m = m~0 + r* ordered by
/// (p, m). The skew is the formula value; the constraint triple is not
/// imposed here (see check_constraints).
inline std::vector<ParamCandidate> collision_search(const SelectionTarget& t, const Integer& lo, const Integer& hi,
                                                    const Integer& r_bound, Shard shard = {},
                                                    unsigned long seed = 0)
{
    t.check();
    shard.check();
    if (lo < 3) throw InputError("prime range must start at 3 or above");
    if (t.d < 3) throw InputError("the length-(d+2) family needs d >= 3");
    if (r_bound < 0) throw InputError("r_bound must be nonnegative");
    const Integer m0 = t.m_tilde0();
    const Integer adkN = t.a * Integer(t.d) * t.kN();
    std::vector<Integer> primes;
    for (auto& p : detail::primes_in(lo, hi))
        if (!divides(p, adkN)) primes.push_back(p);

    std::map<Integer, std::vector<std::size_t>> buckets;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        const Integer& p = primes[i];
        const Integer p2 = p * p;
        for (const auto& y : roots_mod_p(t.a, t.k, t.N, t.d, p, seed)) {
            const Integer rr = mod(hensel_lift(t.a, t.k, t.N, t.d, p, y) - m0, p2);
            for (Integer r = -r_bound + mod(rr + r_bound, p2); r <= r_bound; r += p2) buckets[r].push_back(i);
        }
    }

    std::vector<ParamCandidate> out;
    for (const auto& [r, idx] : buckets) {
        if (idx.size() < 2) continue;
        const Integer m = m0 + r;
        if (m <= 0) continue;
        for (std::size_t u = 0; u < idx.size(); ++u)
            for (std::size_t v = u + 1; v < idx.size(); ++v) {
                const std::size_t i = std::min(idx[u], idx[v]), j = std::max(idx[u], idx[v]);
                if (i == j || !shard.owns(i)) continue;
                GpParams pr{t.d, t.a, primes[i] * primes[j], m, t.k, t.N};
                DerivedParams dp;
                try {
                    dp = pr.derive(Family::d2_zero);
                } catch (const ConstructionError&) {
                    continue;
                }
                out.push_back({pr, skew_formula_d2(t.d, pr.p, dp.a_tilde), Family::d2_zero});
            }
    }
    std::sort(out.begin(), out.end(), detail::candidate_order);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

struct EnumerationOptions {
    Integer p_min = 1;        // bounds on each prime-power factor of p; p = 1 is
    Integer p_max = 1;        // emitted first when p_min <= 1
    unsigned max_factors = 3; // distinct primes per composite p
    std::size_t limit = 0;    // 0: unlimited
    std::size_t m_per_root = 1;
    Shard shard;
    unsigned long seed = 0;
};

namespace detail {

struct PoolEntry {
    PrimePower factor;
    Integer value;
};

inline void combine_pool(const std::vector<PoolEntry>& pool, std::size_t start, unsigned depth_left,
                         std::vector<PrimePower>& cur, const Integer& value, const Integer& cap,
                         std::vector<std::pair<Integer, std::vector<PrimePower>>>& out)
{
    for (std::size_t i = start; i < pool.size(); ++i) {
        const Integer next = value * pool[i].value;
        if (next > cap) break; // pool is ascending
        bool clash = false;
        for (const auto& c : cur) clash = clash || c.prime == pool[i].factor.prime;
        if (clash) continue;
        cur.push_back(pool[i].factor);
        out.emplace_back(next, cur);
        if (depth_left > 1) combine_pool(pool, i + 1, depth_left - 1, cur, next, cap, out);
        cur.pop_back();
    }
}

} // namespace detail

/// Deterministic stream of candidates satisfying check_constraints: the
/// p = 1 classical candidate first, then p ascending over products of up to
/// max_factors coprime prime powers from [p_min, p_max] whose primes do not
/// divide a d k N, each with its CRT-assembled roots and the smallest m per
/// root class. Sharded by the ordinal of p in that order.
inline std::vector<ParamCandidate> enumerate_candidates(const SelectionTarget& t, Family family,
                                                        const EnumerationOptions& opt)
{
    t.check();
    opt.shard.check();
    if (family == Family::d2_zero && t.d < 3) throw InputError("the length-(d+2) family needs d >= 3");
    const Integer adkN = t.a * Integer(t.d) * t.kN();
    const Integer cap = t.m_ceil(); // ps <= m forces p <= m

    std::vector<std::pair<Integer, std::vector<PrimePower>>> ps;
    if (opt.p_min <= 1) ps.emplace_back(Integer(1), std::vector<PrimePower>{});
    std::vector<detail::PoolEntry> pool;
    for (const auto& prime : detail::primes_in(Integer(2), opt.p_max)) {
        if (divides(prime, adkN)) continue;
        Integer q = prime;
        for (unsigned e = 1; q <= opt.p_max; ++e, q *= prime)
            if (q >= opt.p_min) pool.push_back({{prime, e}, q});
    }
    std::sort(pool.begin(), pool.end(), [](const auto& x, const auto& y) { return x.value < y.value; });
    std::vector<PrimePower> cur;
    std::vector<std::pair<Integer, std::vector<PrimePower>>> combos;
    if (opt.max_factors > 0) detail::combine_pool(pool, 0, opt.max_factors, cur, Integer(1), cap, combos);
    std::stable_sort(combos.begin(), combos.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (auto& c : combos) {
        std::sort(c.second.begin(), c.second.end(), [](const auto& x, const auto& y) { return x.prime < y.prime; });
        ps.push_back(std::move(c));
    }

    std::vector<ParamCandidate> out;
    for (std::size_t ord = 0; ord < ps.size(); ++ord) {
        if (!opt.shard.owns(ord)) continue;
        const auto& [p, fp] = ps[ord];
        const std::vector<PrimePower> fq = family == Family::d1 ? fp : detail::squared(fp);
        const Integer q = family == Family::d1 ? p : p * p;
        const std::vector<Integer> roots = roots_mod_composite(t.a, t.k, t.N, t.d, fq, opt.seed);
        if (roots.empty()) continue;
        const Rational w(p * detail::default_window_skew(t, p, family), Integer(t.d));
        for (const auto& m : detail::m_in_window(t, roots, q, w, opt.m_per_root)) {
            GpParams pr{t.d, t.a, p, m, t.k, t.N};
            DerivedParams dp;
            try {
                dp = pr.derive(family);
            } catch (const ConstructionError&) {
                continue;
            }
            const Integer s = family == Family::d1 ? skew_formula_d1(t.d, m, dp.a_tilde)
                                                   : skew_formula_d2(t.d, p, dp.a_tilde);
            ParamCandidate cand{pr, s, family};
            if (!check_constraints(cand).ok()) continue;
            out.push_back(std::move(cand));
            if (opt.limit && out.size() >= opt.limit) return out;
        }
    }
    return out;
}

} // namespace nlpoly

#endif // NLPOLY_PARAMS_HPP
