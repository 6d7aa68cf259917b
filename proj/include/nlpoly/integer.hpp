#ifndef NLPOLY_INTEGER_HPP
#define NLPOLY_INTEGER_HPP

// Arbitrary precision integer helpers shared by every module.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "nlpoly/error.hpp"

namespace nlpoly {

using Integer = mpz_class;
using Rational = mpq_class;

inline Integer ipow(const Integer& base, unsigned long exp)
{
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

inline Rational rpow(const Rational& base, unsigned long exp)
{
    Rational r(ipow(base.get_num(), exp), ipow(base.get_den(), exp));
    r.canonicalize();
    return r;
}

/// Rational power with a signed exponent; base must be nonzero when exp < 0.
inline Rational rpow_signed(const Rational& base, long exp)
{
    if (exp >= 0) return rpow(base, static_cast<unsigned long>(exp));
    if (base == 0) throw DomainError("negative power of zero");
    return rpow(Rational(base.get_den(), base.get_num()), static_cast<unsigned long>(-exp));
}

/// floor(x^(1/k)) for x >= 0.
inline Integer iroot_floor(const Integer& x, unsigned long k)
{
    if (x < 0) throw DomainError("iroot_floor of a negative integer");
    Integer r;
    mpz_root(r.get_mpz_t(), x.get_mpz_t(), k);
    return r;
}

/// ceil(x^(1/k)) for x >= 0.
inline Integer iroot_ceil(const Integer& x, unsigned long k)
{
    if (x < 0) throw DomainError("iroot_ceil of a negative integer");
    Integer r;
    int exact = mpz_root(r.get_mpz_t(), x.get_mpz_t(), k);
    if (!exact) ++r;
    return r;
}

/// num/den in lowest terms; mpq arithmetic requires canonical operands.
inline Rational ratio(const Integer& num, const Integer& den)
{
    if (den == 0) throw DomainError("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// floor(q^(1/k)) for a nonnegative rational q.
inline Integer iroot_floor(const Rational& q, unsigned long k)
{
    if (q < 0) throw DomainError("iroot_floor of a negative rational");
    Integer fl;
    mpz_fdiv_q(fl.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return iroot_floor(fl, k);
}

inline Integer floor_div(const Integer& a, const Integer& b)
{
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Integer ceil_div(const Integer& a, const Integer& b)
{
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Integer floor(const Rational& q)
{
    return floor_div(q.get_num(), q.get_den());
}

/// Residue of a in [0, |m|).
inline Integer mod(const Integer& a, const Integer& m)
{
    Integer r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline bool divides(const Integer& d, const Integer& x)
{
    if (d == 0) return x == 0;
    return mpz_divisible_p(x.get_mpz_t(), d.get_mpz_t()) != 0;
}

/// Exact quotient; throws when d does not divide x.
inline Integer exact_div(const Integer& x, const Integer& d)
{
    if (d == 0 || !divides(d, x)) throw DomainError("inexact division");
    Integer q;
    mpz_divexact(q.get_mpz_t(), x.get_mpz_t(), d.get_mpz_t());
    return q;
}

inline Integer igcd(const Integer& a, const Integer& b)
{
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

/// Inverse of a modulo m (m > 1); throws if not invertible.
inline Integer invmod(const Integer& a, const Integer& m)
{
    Integer r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw DomainError("element is not invertible modulo " + m.get_str());
    return r;
}

inline Integer powmod(const Integer& b, const Integer& e, const Integer& m)
{
    Integer r;
    mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
    return r;
}

/// Extended gcd: returns g and sets x, y with a*x + b*y = g.
inline Integer xgcd(const Integer& a, const Integer& b, Integer& x, Integer& y)
{
    Integer g;
    mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline int sign(const Integer& x) { return sgn(x); }

inline bool is_probable_prime(const Integer& n)
{
    return n > 1 && mpz_probab_prime_p(n.get_mpz_t(), 30) != 0;
}

/// Natural logarithm of |x| for x != 0, valid far beyond double range.
inline double log_abs(const Integer& x)
{
    if (x == 0) return -std::numeric_limits<double>::infinity();
    long exp = 0;
    double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
    return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::log(2.0);
}

inline double log_abs(const Rational& q)
{
    return log_abs(q.get_num()) - log_abs(q.get_den());
}

/// log_N of a positive rational quantity.
inline double log_base(const Rational& x, const Integer& base)
{
    return log_abs(x) / log_abs(base);
}

/// Parses a decimal integer with optional sign; rejects anything else.
inline Integer parse_integer(std::string_view text)
{
    std::string s(text);
    auto first = s.find_first_not_of(" \t\r\n");
    auto last = s.find_last_not_of(" \t\r\n");
    if (first == std::string::npos) throw InputError("empty integer");
    s = s.substr(first, last - first + 1);
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw InputError("malformed integer '" + s + "'");
    for (std::size_t j = i; j < s.size(); ++j)
        if (s[j] < '0' || s[j] > '9') throw InputError("malformed integer '" + s + "'");
    if (s[0] == '+') s.erase(0, 1);
    return Integer(s, 10);
}

inline std::string to_string(const Integer& x) { return x.get_str(); }

inline std::string to_string(const Rational& x) { return x.get_str(); }

inline Integer from_u64(std::uint64_t v)
{
    Integer r;
    mpz_import(r.get_mpz_t(), 1, -1, sizeof v, 0, 0, &v);
    return r;
}

inline std::uint64_t to_u64(const Integer& x)
{
    if (x < 0 || mpz_sizeinbase(x.get_mpz_t(), 2) > 64) throw DomainError("value does not fit 64 bits");
    std::uint64_t v = 0;
    mpz_export(&v, nullptr, -1, sizeof v, 0, 0, x.get_mpz_t());
    return v;
}

} // namespace nlpoly

#endif // NLPOLY_INTEGER_HPP
