#ifndef NLPOLY_POLY_HPP
#define NLPOLY_POLY_HPP

// Dense integer polynomials, skewed coefficient norms, Sylvester resultants
// and the skewed resultant lower bound for pairs with a common root mod N.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nlpoly/error.hpp"
#include "nlpoly/integer.hpp"
#include "nlpoly/matrix.hpp"

namespace nlpoly {

/// Integer polynomial stored densely; coeffs()[i] is the coefficient of x^i.
/// The coefficient vector never has a trailing zero, so the zero polynomial
/// is the empty vector and has no degree.
class IntPoly {
public:
    IntPoly() = default;

    explicit IntPoly(IntVector coeffs) : coeffs_(std::move(coeffs)) { trim(); }

    IntPoly(std::initializer_list<Integer> coeffs) : coeffs_(coeffs) { trim(); }

    /// Builds a polynomial from highest-degree coefficient first, as polynomials are usually written.
    static IntPoly from_high(std::initializer_list<Integer> high_first)
    {
        IntVector c(high_first.begin(), high_first.end());
        std::reverse(c.begin(), c.end());
        return IntPoly(std::move(c));
    }

    static IntPoly monomial(const Integer& c, std::size_t deg)
    {
        IntVector v(deg + 1, Integer(0));
        v[deg] = c;
        return IntPoly(std::move(v));
    }

    [[nodiscard]] bool is_zero() const { return coeffs_.empty(); }

    [[nodiscard]] std::optional<std::size_t> degree() const
    {
        if (coeffs_.empty()) return std::nullopt;
        return coeffs_.size() - 1;
    }

    /// Degree of a nonzero polynomial; throws on zero.
    [[nodiscard]] std::size_t checked_degree() const
    {
        if (coeffs_.empty()) throw DomainError("the zero polynomial has no degree");
        return coeffs_.size() - 1;
    }

    [[nodiscard]] const IntVector& coeffs() const { return coeffs_; }

    /// Coefficient of x^i, zero beyond the degree.
    [[nodiscard]] Integer coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Integer(0); }

    [[nodiscard]] const Integer& leading() const
    {
        if (coeffs_.empty()) throw DomainError("the zero polynomial has no leading coefficient");
        return coeffs_.back();
    }

    /// Coefficients padded with zeros to length n (n must cover the degree).
    [[nodiscard]] IntVector padded(std::size_t n) const
    {
        if (coeffs_.size() > n) throw DimensionError("padding below the polynomial length");
        IntVector v = coeffs_;
        v.resize(n, Integer(0));
        return v;
    }

    [[nodiscard]] Integer content() const
    {
        Integer g = 0;
        for (const auto& c : coeffs_) g = igcd(g, c);
        return g;
    }

    /// p^n * f(m/p) = sum a_i m^i p^(n-i); n must be at least the degree.
    [[nodiscard]] Integer homogeneous_value(const Integer& m, const Integer& p, std::size_t n) const
    {
        if (!coeffs_.empty() && coeffs_.size() - 1 > n) throw DomainError("homogenising degree below polynomial degree");
        Integer acc = 0;
        Integer mp = 1;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            acc += coeffs_[i] * mp * ipow(p, n - i);
            mp *= m;
        }
        return acc;
    }

    [[nodiscard]] Integer operator()(const Integer& x) const
    {
        Integer acc = 0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    friend IntPoly operator+(const IntPoly& f, const IntPoly& g)
    {
        IntVector v(std::max(f.coeffs_.size(), g.coeffs_.size()), Integer(0));
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.coeff(i) + g.coeff(i);
        return IntPoly(std::move(v));
    }

    friend IntPoly operator-(const IntPoly& f) { return f * Integer(-1); }

    friend IntPoly operator-(const IntPoly& f, const IntPoly& g) { return f + (-g); }

    friend IntPoly operator*(const IntPoly& f, const Integer& c)
    {
        IntVector v = f.coeffs_;
        for (auto& x : v) x *= c;
        return IntPoly(std::move(v));
    }

    friend IntPoly operator*(const IntPoly& f, const IntPoly& g)
    {
        if (f.is_zero() || g.is_zero()) return {};
        IntVector v(f.coeffs_.size() + g.coeffs_.size() - 1, Integer(0));
        for (std::size_t i = 0; i < f.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < g.coeffs_.size(); ++j) v[i + j] += f.coeffs_[i] * g.coeffs_[j];
        return IntPoly(std::move(v));
    }

    friend bool operator==(const IntPoly&, const IntPoly&) = default;

    [[nodiscard]] std::string to_string() const
    {
        if (coeffs_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = coeffs_.size(); i-- > 0;) {
            const Integer& c = coeffs_[i];
            if (c == 0) continue;
            if (!first) os << (c < 0 ? " - " : " + ");
            else if (c < 0) os << "-";
            Integer a = abs(c);
            if (a != 1 || i == 0) os << a;
            if (i >= 1) os << "x";
            if (i >= 2) os << "^" << i;
            first = false;
        }
        return os.str();
    }

private:
    void trim()
    {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }

    IntVector coeffs_;
};

inline std::ostream& operator<<(std::ostream& os, const IntPoly& f) { return os << f.to_string(); }

/// Exact squared skewed 2-norm with a floating view in base-N logarithms.
struct SkewedNorm {
    Rational value_squared;

    /// log_N of the (non-squared) norm.
    [[nodiscard]] double log_base_N(const Integer& N) const { return 0.5 * log_base(value_squared, N); }
};

/// sum a_i^2 s^(2i - d) with d = deg f. Rational skews are accepted for rescoring.
inline SkewedNorm skewed_norm(const IntPoly& f, const Rational& s)
{
    if (f.is_zero()) throw DomainError("skewed norm of the zero polynomial");
    if (s <= 0) throw DomainError("skew must be positive");
    const long d = static_cast<long>(f.checked_degree());
    Rational acc = 0;
    for (long i = 0; i <= d; ++i) {
        const Integer& a = f.coeffs()[static_cast<std::size_t>(i)];
        if (a == 0) continue;
        acc += Rational(a * a) * rpow_signed(s, 2 * i - d);
    }
    return {acc};
}

inline SkewedNorm skewed_norm(const IntPoly& f, const Integer& s) { return skewed_norm(f, Rational(s)); }

/// Sylvester matrix: deg g shifted rows of f (highest coefficient first), then deg f rows of g.
inline IntMatrix sylvester_matrix(const IntPoly& f, const IntPoly& g)
{
    if (f.is_zero() || g.is_zero()) throw DomainError("Sylvester matrix of a zero polynomial");
    const std::size_t m = f.checked_degree(), n = g.checked_degree();
    if (m < 1 || n < 1) throw DomainError("Sylvester matrix needs non-constant polynomials");
    const std::size_t size = m + n;
    IntMatrix syl(size, IntVector(size, Integer(0)));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t i = 0; i <= m; ++i) syl[r][r + i] = f.coeffs()[m - i];
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t i = 0; i <= n; ++i) syl[n + r][r + i] = g.coeffs()[n - i];
    return syl;
}

inline Integer resultant(const IntPoly& f, const IntPoly& g) { return determinant(sylvester_matrix(f, g)); }

struct AngleEstimate {
    Rational sin_squared;
};

/// sin^2 of the angle between (a_i s^i) and (b_i s^i), both padded to max degree.
inline AngleEstimate sin_theta(const IntPoly& f, const IntPoly& g, const Rational& s)
{
    if (f.is_zero() || g.is_zero()) throw DomainError("angle with the zero polynomial");
    if (s <= 0) throw DomainError("skew must be positive");
    const std::size_t len = std::max(f.coeffs().size(), g.coeffs().size());
    Rational uu = 0, vv = 0, uv = 0;
    Rational sp = 1;
    for (std::size_t i = 0; i < len; ++i) {
        Rational u = Rational(f.coeff(i)) * sp;
        Rational v = Rational(g.coeff(i)) * sp;
        uu += u * u;
        vv += v * v;
        uv += u * v;
        sp *= s;
    }
    Rational sin2 = 1 - (uv * uv) / (uu * vv);
    sin2.canonicalize();
    return {sin2};
}

inline AngleEstimate sin_theta(const IntPoly& f, const IntPoly& g, const Integer& s)
{
    return sin_theta(f, g, Rational(s));
}

/// Outcome of N <= |sin t|^min(m,n) ||f1||^n ||f2||^m evaluated in squared form.
struct ResultantBoundReport {
    bool holds = false;
    bool equality = false;
    double lhs_log_N = 1.0; // log_N(N)
    double rhs_log_N = 0.0;
};

inline ResultantBoundReport check_resultant_bound(const IntPoly& f1, const IntPoly& f2, const Integer& N,
                                                  const Rational& s)
{
    const std::size_t m = f1.checked_degree(), n = f2.checked_degree();
    if (m < 1 || n < 1) throw DomainError("resultant bound needs non-constant polynomials");
    const Rational sin2 = sin_theta(f1, f2, s).sin_squared;
    const Rational rhs_sq = rpow(sin2, std::min(m, n)) * rpow(skewed_norm(f1, s).value_squared, n) *
                            rpow(skewed_norm(f2, s).value_squared, m);
    const Rational lhs_sq = Rational(N * N);
    ResultantBoundReport rep;
    rep.holds = lhs_sq <= rhs_sq;
    rep.equality = lhs_sq == rhs_sq;
    rep.rhs_log_N = rhs_sq == 0 ? -std::numeric_limits<double>::infinity() : 0.5 * log_base(rhs_sq, N);
    return rep;
}

inline ResultantBoundReport check_resultant_bound(const IntPoly& f1, const IntPoly& f2, const Integer& N,
                                                  const Integer& s)
{
    return check_resultant_bound(f1, f2, N, Rational(s));
}

} // namespace nlpoly

#endif // NLPOLY_POLY_HPP
