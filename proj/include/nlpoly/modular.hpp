#ifndef NLPOLY_MODULAR_HPP
#define NLPOLY_MODULAR_HPP

// Modular root finding for a x^d = kN, Hensel lifting, CRT and factoring.

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "nlpoly/error.hpp"
#include "nlpoly/integer.hpp"

namespace nlpoly {

/// Primes below this bound are solved by exhaustive evaluation.
inline constexpr unsigned long kBruteForceRootBound = 1024;

namespace detail {

// Dense polynomials over Z/pZ, lowest coefficient first, kept trimmed.
using ModPoly = std::vector<Integer>;

inline void mp_trim(ModPoly& f)
{
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline ModPoly mp_mul(const ModPoly& f, const ModPoly& g, const Integer& p)
{
    if (f.empty() || g.empty()) return {};
    ModPoly r(f.size() + g.size() - 1, Integer(0));
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) r[i + j] += f[i] * g[j];
    for (auto& c : r) c = mod(c, p);
    mp_trim(r);
    return r;
}

// Remainder of f by a nonzero g.
inline ModPoly mp_rem(ModPoly f, const ModPoly& g, const Integer& p)
{
    const Integer inv = invmod(g.back(), p);
    while (f.size() >= g.size()) {
        const Integer q = mod(f.back() * inv, p);
        const std::size_t shift = f.size() - g.size();
        for (std::size_t i = 0; i < g.size(); ++i) f[shift + i] = mod(f[shift + i] - q * g[i], p);
        mp_trim(f);
    }
    return f;
}

inline ModPoly mp_divexact(ModPoly f, const ModPoly& g, const Integer& p)
{
    const Integer inv = invmod(g.back(), p);
    ModPoly q(f.size() - g.size() + 1, Integer(0));
    while (f.size() >= g.size()) {
        const Integer c = mod(f.back() * inv, p);
        const std::size_t shift = f.size() - g.size();
        q[shift] = c;
        for (std::size_t i = 0; i < g.size(); ++i) f[shift + i] = mod(f[shift + i] - c * g[i], p);
        mp_trim(f);
    }
    return q;
}

inline ModPoly mp_monic(ModPoly f, const Integer& p)
{
    if (f.empty()) return f;
    const Integer inv = invmod(f.back(), p);
    for (auto& c : f) c = mod(c * inv, p);
    return f;
}

inline ModPoly mp_gcd(ModPoly a, ModPoly b, const Integer& p)
{
    while (!b.empty()) {
        ModPoly r = mp_rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return mp_monic(std::move(a), p);
}

// base^e mod (f, p).
inline ModPoly mp_powmod(const ModPoly& base, Integer e, const ModPoly& f, const Integer& p)
{
    ModPoly result{Integer(1)};
    ModPoly b = mp_rem(base, f, p);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) result = mp_rem(mp_mul(result, b, p), f, p);
        e >>= 1;
        if (e > 0) b = mp_rem(mp_mul(b, b, p), f, p);
    }
    return result;
}

inline ModPoly mp_sub(ModPoly f, const ModPoly& g, const Integer& p)
{
    if (f.size() < g.size()) f.resize(g.size(), Integer(0));
    for (std::size_t i = 0; i < g.size(); ++i) f[i] = mod(f[i] - g[i], p);
    mp_trim(f);
    return f;
}

// Splits a monic squarefree product of distinct linear factors into its roots.
inline void equal_degree_split(const ModPoly& f, const Integer& p, gmp_randclass& rng, std::vector<Integer>& roots)
{
    if (f.size() <= 1) return;
    if (f.size() == 2) {
        roots.push_back(mod(-f[0], p));
        return;
    }
    const Integer half = (p - 1) / 2;
    for (;;) {
        const Integer delta = rng.get_z_range(p);
        ModPoly h = mp_powmod(ModPoly{delta, Integer(1)}, half, f, p);
        h = mp_sub(std::move(h), ModPoly{Integer(1)}, p);
        ModPoly g = mp_gcd(f, h, p);
        if (g.size() > 1 && g.size() < f.size()) {
            equal_degree_split(g, p, rng, roots);
            equal_degree_split(mp_monic(mp_divexact(f, g, p), p), p, rng, roots);
            return;
        }
    }
}

} // namespace detail

/// All x in [0, p) with a x^d = kN (mod p), ascending. p must be prime and
/// coprime to a d k N. Large p use randomized equal-degree splitting of
/// gcd(x^d - c, x^p - x) with the given seed.
inline std::vector<Integer> roots_mod_p(const Integer& a, const Integer& k, const Integer& N, unsigned d,
                                        const Integer& p, unsigned long seed = 0)
{
    if (d < 1) throw InputError("degree must be positive");
    if (!is_probable_prime(p)) throw DomainError("roots_mod_p needs a prime modulus");
    if (divides(p, a * Integer(d) * k * N)) throw DomainError("prime divides a d k N");
    const Integer c = mod(k * N * invmod(a, p), p);
    std::vector<Integer> roots;
    if (p < kBruteForceRootBound) {
        for (Integer x = 0; x < p; ++x)
            if (powmod(x, d, p) == c) roots.push_back(x);
        return roots;
    }
    // x^d - c and x^p mod it.
    detail::ModPoly f(d + 1, Integer(0));
    f[0] = mod(-c, p);
    f[d] = 1;
    detail::ModPoly xp = detail::mp_powmod(detail::ModPoly{Integer(0), Integer(1)}, p, f, p);
    detail::ModPoly split = detail::mp_gcd(f, detail::mp_sub(xp, {Integer(0), Integer(1)}, p), p);
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(seed);
    detail::equal_degree_split(split, p, rng, roots);
    std::sort(roots.begin(), roots.end());
    return roots;
}

/// One Newton step for f(x) = a x^d - kN from modulus q to q * p, where
/// a d r^(d-1) must be a unit mod p. Result in [0, q p).
inline Integer hensel_step(const Integer& a, const Integer& k, const Integer& N, unsigned d, const Integer& p,
                           const Integer& q, const Integer& r)
{
    const Integer fr = a * ipow(r, d) - k * N;
    if (!divides(q, fr)) throw DomainError("r is not a root modulo the current modulus");
    const Integer deriv = mod(a * Integer(d) * ipow(r, d - 1), p);
    if (deriv == 0) throw DomainError("singular root: a d r^(d-1) is divisible by p");
    const Integer t = mod(-exact_div(fr, q) * invmod(deriv, p), p);
    return mod(r + t * q, q * p);
}

/// Lifts a simple root r of a x^d = kN (mod p) to r* mod p^2 with r* = r (mod p).
inline Integer hensel_lift(const Integer& a, const Integer& k, const Integer& N, unsigned d, const Integer& p,
                           const Integer& r)
{
    return hensel_step(a, k, N, d, p, p, r);
}

/// Roots of a x^d = kN modulo p^e for a prime p coprime to a d k N.
inline std::vector<Integer> roots_mod_prime_power(const Integer& a, const Integer& k, const Integer& N, unsigned d,
                                                  const Integer& p, unsigned e, unsigned long seed = 0)
{
    std::vector<Integer> roots;
    if (p == 2) {
        if (divides(Integer(2), a * Integer(d) * k * N)) throw DomainError("prime divides a d k N");
        for (Integer x = 0; x < 2; ++x)
            if (divides(Integer(2), a * ipow(x, d) - k * N)) roots.push_back(x);
    } else {
        roots = roots_mod_p(a, k, N, d, p, seed);
    }
    Integer q = p;
    for (unsigned i = 1; i < e; ++i, q *= p)
        for (auto& r : roots) r = hensel_step(a, k, N, d, p, q, r);
    std::sort(roots.begin(), roots.end());
    return roots;
}

/// x = r1 (mod m1), x = r2 (mod m2) for coprime moduli; result in [0, m1 m2).
inline Integer crt_pair(const Integer& r1, const Integer& m1, const Integer& r2, const Integer& m2)
{
    if (igcd(m1, m2) != 1) throw DomainError("CRT moduli are not coprime");
    const Integer t = mod((r2 - r1) * invmod(m1, m2), m2);
    return mod(r1 + m1 * t, m1 * m2);
}

struct PrimePower {
    Integer prime;
    unsigned exponent = 0;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

namespace detail {

inline Integer pollard_brent(const Integer& n, unsigned long seed)
{
    if (mpz_even_p(n.get_mpz_t())) return 2;
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(seed);
    for (;;) {
        Integer y = rng.get_z_range(n), c = rng.get_z_range(n - 1) + 1, g = 1, q = 1, x, ys;
        const unsigned long m = 128;
        unsigned long r = 1;
        while (g == 1) {
            x = y;
            for (unsigned long i = 0; i < r; ++i) y = mod(y * y + c, n);
            for (unsigned long kk = 0; kk < r && g == 1; kk += m) {
                ys = y;
                for (unsigned long i = 0; i < std::min(m, r - kk); ++i) {
                    y = mod(y * y + c, n);
                    q = mod(q * abs(Integer(x - y)), n);
                }
                g = igcd(q, n);
            }
            r *= 2;
        }
        if (g == n) {
            do {
                ys = mod(ys * ys + c, n);
                g = igcd(abs(Integer(x - ys)), n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

inline void factor_into(const Integer& n, std::vector<Integer>& primes, unsigned long seed)
{
    if (n == 1) return;
    if (is_probable_prime(n)) {
        primes.push_back(n);
        return;
    }
    const Integer f = pollard_brent(n, seed);
    factor_into(f, primes, seed + 1);
    factor_into(n / f, primes, seed + 1);
}

} // namespace detail

/// Prime factorization of n >= 1, primes ascending.
inline std::vector<PrimePower> factorize(Integer n, unsigned long seed = 0)
{
    if (n < 1) throw DomainError("factorize needs a positive integer");
    std::vector<Integer> primes;
    for (unsigned long p = 2; p < 10000 && Integer(p) * p <= n; p += (p == 2 ? 1 : 2))
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            primes.emplace_back(p);
            n /= p;
        }
    detail::factor_into(n, primes, seed);
    std::sort(primes.begin(), primes.end());
    std::vector<PrimePower> out;
    for (const auto& q : primes) {
        if (!out.empty() && out.back().prime == q) ++out.back().exponent;
        else out.push_back({q, 1});
    }
    return out;
}

/// Roots of a x^d = kN modulo an arbitrary q >= 1 whose prime factors do
/// not divide a d k N, assembled by CRT; ascending in [0, q).
inline std::vector<Integer> roots_mod_composite(const Integer& a, const Integer& k, const Integer& N, unsigned d,
                                                const std::vector<PrimePower>& factors, unsigned long seed = 0)
{
    std::vector<Integer> acc{Integer(0)};
    Integer modulus = 1;
    for (const auto& pp : factors) {
        const std::vector<Integer> local = roots_mod_prime_power(a, k, N, d, pp.prime, pp.exponent, seed);
        const Integer q = ipow(pp.prime, pp.exponent);
        std::vector<Integer> next;
        for (const auto& r1 : acc)
            for (const auto& r2 : local) next.push_back(crt_pair(r1, modulus, r2, q));
        acc = std::move(next);
        modulus *= q;
        if (acc.empty()) break;
    }
    std::sort(acc.begin(), acc.end());
    return acc;
}

} // namespace nlpoly

#endif // NLPOLY_MODULAR_HPP
