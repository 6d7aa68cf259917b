#include <gtest/gtest.h>

#include <random>

#include "nlpoly/gp.hpp"
#include "nlpoly/lattice.hpp"
#include "oracles.hpp"

using namespace nlpoly;

namespace {

Integer random_bits(std::mt19937_64& rng, unsigned bits)
{
    Integer x = 0;
    for (unsigned b = 0; b < bits; b += 32) x = (x << 32) + Integer(static_cast<unsigned long>(rng() & 0xffffffffUL));
    return (x % (Integer(1) << bits)) | (Integer(1) << (bits - 1));
}

// Random valid tuple for the given family with a 64-bit N; k is solved from
// the congruence a m^d = k N (mod p or p^2).
GpParams random_params(std::mt19937_64& rng, unsigned d, Family family)
{
    std::uniform_int_distribution<long> small(1, 50), big(2, 100000);
    for (;;) {
        GpParams pr;
        pr.d = d;
        pr.N = random_bits(rng, 64) | 1;
        pr.a = small(rng);
        pr.p = big(rng);
        pr.m = random_bits(rng, 24) + big(rng);
        if (igcd(pr.m, pr.p) != 1 || igcd(pr.a * pr.p, pr.N) != 1) continue;
        const Integer q = family == Family::d1 ? pr.p : pr.p * pr.p;
        pr.k = mod(pr.a * ipow(pr.m, d) * invmod(pr.N, q), q);
        if (pr.k == 0) pr.k = q;
        if (pr.a * ipow(pr.m, d) == pr.k * pr.N) continue;
        return pr;
    }
}

} // namespace

TEST(BuildGp, MontgomeryAndBaseM)
{
    const GeomProgression mg = montgomery_gp(Integer(10403), Integer(7), Integer(99));
    EXPECT_EQ(mg.terms, (IntVector{7, 99, -86}));
    const Integer m = 22;
    const GeomProgression bm = base_m_gp(Integer(10403), 3, m);
    EXPECT_EQ(bm.terms, (IntVector{1, 22, 484, 10648 - 10403}));
    EXPECT_TRUE(validate_gp(mg).classified());
    EXPECT_TRUE(validate_gp(bm).classified());
}

TEST(BuildGp, KFiveCubicTupleFromC91)
{
    const GpParams pr{3, 1, Integer("934237167355490922"), Integer("2837086552973239856241381969109"), 5, oracle::c91()};
    const GeomProgression gp = build_gp_d1(pr);
    const GpValidation v = validate_gp(gp);
    EXPECT_TRUE(v.valid());
    EXPECT_TRUE(v.classified());
    EXPECT_EQ(gp.terms[0], pr.p * pr.p);
}

TEST(BuildGp, DivisibilityFailureIsNamed)
{
    const GpParams bad{3, 1, 2, 3, 1, 93}; // 27 - 93 is even but not divisible by 4
    try {
        (void)build_gp_d2(bad);
        FAIL() << "expected ConstructionError";
    } catch (const ConstructionError& e) {
        EXPECT_NE(std::string(e.what()).find("p^2"), std::string::npos);
    }
    EXPECT_THROW(build_gp_d1(GpParams{3, 1, 2, 4, 1, 91}), ConstructionError); // gcd(m, p) = 2
    EXPECT_THROW(build_gp_d2(GpParams{2, 1, 1, 5, 1, 29}), ConstructionError); // d too small
}

TEST(BuildGpD2, HandInstance)
{
    // (125 - 29) / 4 = 24: terms 4, 10, 25, 48, 5 * 24.
    const GpParams pr{3, 1, 2, 5, 1, 29};
    const GeomProgression gp = build_gp_d2(pr);
    EXPECT_EQ(gp.terms, (IntVector{4, 10, 25, 48, 120}));
    IntVector rel(4);
    for (std::size_t i = 0; i < 4; ++i) rel[i] = pr.m * gp.terms[i] - pr.p * gp.terms[i + 1];
    EXPECT_EQ(rel, (IntVector{0, 0, 29, 0}));
    EXPECT_TRUE(validate_gp(gp).valid());
}

TEST(BuildGpD2, KooJoKwonShape)
{
    const Integer N = 10403, p = 3, m = 5, k = 1;
    // 125 - 10403 = -10278 = -9 * 1142
    const GeomProgression gp = kjk_gp(N, 3, p, m, k);
    EXPECT_EQ(gp.terms, (IntVector{9, 15, 25, -3426, -5710}));
}

TEST(BuildGpD2, HeadTailRelationRandom)
{
    std::mt19937_64 rng(11);
    for (int it = 0; it < 100; ++it) {
        const unsigned d = 3 + it % 4;
        const GpParams pr = random_params(rng, d, Family::d2_zero);
        const GeomProgression gp = build_gp_d2(pr);
        ASSERT_EQ(gp.length(), d + 2);
        for (std::size_t i = 0; i <= d; ++i) {
            const Integer rel = pr.m * gp.terms[i] - pr.p * gp.terms[i + 1];
            ASSERT_EQ(rel, i == d - 1 ? Integer(pr.k * pr.N) : Integer(0)) << "i=" << i;
        }
        ASSERT_TRUE(validate_gp(gp).valid());
    }
}

TEST(ValidateGp, HandCases)
{
    const Integer N = 101, m = 7;
    EXPECT_TRUE(validate_gp(IntVector{1, m, m * m + N}, N).valid());
    EXPECT_FALSE(validate_gp(IntVector{2, 4, 9}, Integer(7)).valid());
    const GpValidation v = validate_gp(IntVector{1, m, m * m}, N);
    EXPECT_TRUE(v.valid());
    EXPECT_FALSE(v.whole_not_rational);
    EXPECT_FALSE(validate_gp(GeomProgression{{1, 2, 4}, 10, 2, 5}).valid()); // gcd(p, N) > 1
}

TEST(ValidateGp, ClassificationRoundTrip)
{
    std::mt19937_64 rng(12);
    for (int it = 0; it < 100; ++it) {
        const unsigned d = 2 + it % 5;
        const GpParams pr = random_params(rng, d, Family::d1);
        const GeomProgression gp = build_gp_d1(pr);
        ASSERT_TRUE(validate_gp(gp).classified());
        const auto dec = decompose_gp(gp.terms, pr.N);
        ASSERT_TRUE(dec.has_value());
        EXPECT_EQ(build_gp_d1(*dec).terms, gp.terms);
        EXPECT_GT(dec->p, 0);
    }
    EXPECT_FALSE(decompose_gp(IntVector{1, 2, 4}, Integer(101)).has_value());
}

TEST(NormalizeGp, IdentityWhenCoprime)
{
    const GpParams pr{3, 1, 1, 22, 1, 10403};
    EXPECT_EQ(normalize_gp(pr), build_gp_d1(pr));
}

TEST(NormalizeGp, GEqualsTwoInstance)
{
    // Search small tuples for gcd(a~, k~) = 2. The identity gcd(a~, k~) = gcd(k~, p)
    // forces p even.
    std::optional<GpParams> found;
    for (long a = 2; a <= 16 && !found; a += 2)
        for (long k = 2; k <= 16 && !found; k += 2)
            for (long p = 2; p <= 16 && !found; p += 2)
                for (long m = 1; m <= 60 && !found; m += 2)
                    for (long N = 3; N <= 99 && !found; N += 2) {
                        const GpParams pr{3, a, p, m, k, N};
                        try {
                            const DerivedParams dp = pr.derive(Family::d1);
                            if (igcd(dp.a_tilde, dp.k_tilde) == 2) found = pr;
                        } catch (const ConstructionError&) {
                        }
                    }
    ASSERT_TRUE(found.has_value());
    const GpParams& pr = *found;
    const DerivedParams dp = pr.derive(Family::d1);
    EXPECT_EQ(igcd(dp.a_tilde, dp.k_tilde), igcd(dp.k_tilde, pr.p));

    const GeomProgression c = build_gp_d1(pr), cs = normalize_gp(pr);
    for (unsigned i = 0; i < pr.d; ++i) EXPECT_EQ(cs.terms[i] * ipow(Integer(2), pr.d - i), c.terms[i]);
    EXPECT_EQ(cs.terms[pr.d], c.terms[pr.d]);
    EXPECT_EQ(cs.ratio_den * 2, pr.p);
    EXPECT_TRUE(validate_gp(cs).valid());

    for (long s = 1; s <= 20; ++s) {
        const Rational lhs = gp_skewed_norm(cs, Integer(2 * s)).norm.value_squared;
        const Rational rhs = gp_skewed_norm(c, Integer(s)).norm.value_squared / Rational(ipow(Integer(2), pr.d));
        EXPECT_EQ(lhs, rhs);
    }
}

TEST(SliceGp, Windows)
{
    const GpParams pr{3, 1, 2, 5, 1, 29};
    const GeomProgression gp = build_gp_d2(pr);
    const auto w = slice_initial_gp(gp, 3);
    ASSERT_EQ(w.size(), 2u);
    EXPECT_EQ(w[0].terms, (IntVector{4, 10, 25, 48}));
    EXPECT_EQ(w[1].terms, (IntVector{10, 25, 48, 120}));
    EXPECT_TRUE(independent(w));

    const GeomProgression four = build_gp_d1(GpParams{3, 1, 1, 22, 1, 10403});
    const auto single = slice_initial_gp(four, 3);
    ASSERT_EQ(single.size(), 1u);
    EXPECT_EQ(single[0], four);

    const GeomProgression len7{{1, 2, 4, 8, 16, 32, 65}, 1000003, 2, 1};
    EXPECT_EQ(slice_initial_gp(len7, 4).size(), 3u);
    EXPECT_THROW(slice_initial_gp(len7, 3), DimensionError);
    EXPECT_THROW(slice_initial_gp(four, 4), DimensionError);
}

TEST(GpSkewedNorm, Values)
{
    const Integer m = 12345;
    const GeomProgression gp{{1, m, m * m}, 1000003, m, 1};
    const GpNorm n = gp_skewed_norm(gp, Integer(1));
    EXPECT_EQ(n.norm.value_squared, Rational(1 + m * m + m * m * m * m));
    EXPECT_EQ(n.target_exponent, Rational(1, 2)); // l = d + 1: d / 2d
    const GeomProgression five{{1, 1, 1, 1, 2}, 7, 1, 1};
    EXPECT_EQ(gp_skewed_norm(five, Integer(1), 3u).target_exponent, Rational(2, 3)); // (5*2 - 2) / 12
    EXPECT_THROW(gp_skewed_norm(gp, Integer(0)), DomainError);
}

TEST(GpSkewedNorm, C91ExponentReported)
{
    const Integer N = oracle::c91();
    Integer m;
    mpz_root(m.get_mpz_t(), N.get_mpz_t(), 3);
    m += 1;
    const GeomProgression gp = base_m_gp(N, 3, m);
    const double e = gp_skewed_norm(gp, Integer(23271635)).norm.log_base_N(N);
    RecordProperty("c91_gp_exponent", std::to_string(e));
    EXPECT_GT(e, 0.0);
}

TEST(GpDetBound, OrthogonalDetWithinBound)
{
    std::mt19937_64 rng(13);
    for (int it = 0; it < 30; ++it) {
        const unsigned d = 3 + it % 3;
        const Integer s = 1 + it % 9;
        const DiagonalScaling S = DiagonalScaling::powers(s, d);

        const GpParams p1 = random_params(rng, d, Family::d1);
        const GeomProgression g1 = build_gp_d1(p1);
        const Rational det1 = orthogonal_det(LatticeBasis({g1.terms}), S).det_squared;
        const Rational bound1 = Rational(ipow(s, d * d)) * gp_skewed_norm(g1, s).norm.value_squared;
        EXPECT_LE(det1, bound1);

        const GpParams p2 = random_params(rng, d, Family::d2_zero);
        const auto w = slice_initial_gp(build_gp_d2(p2), d);
        const Rational det2 = orthogonal_det(LatticeBasis({w[0].terms, w[1].terms}), S).det_squared;
        const Rational bound2 = Rational(ipow(s, d * (d - 1))) / Rational(p2.N * p2.N) *
                                gp_skewed_norm(w[0], s).norm.value_squared *
                                gp_skewed_norm(w[1], s).norm.value_squared;
        EXPECT_LE(det2, bound2);
    }
}
