#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nlpoly/generate.hpp"
#include "nlpoly/params.hpp"
#include "oracles.hpp"

using namespace nlpoly;

namespace {

const Integer kC91M("1659138281147271980794587079218"); // ceil(c91^(1/3))

IntPoly from_high_strings(std::initializer_list<const char*> hi)
{
    IntVector c;
    for (const char* s : hi) c.insert(c.begin(), Integer(s));
    return IntPoly(c);
}

// (||f_i S||^2)^(d-i+1) <= 2^(d(d-1)/2) s^(d^2) (a~/a)^2 ||c||^2_{2,1/s}, with ||f S||^2 = s^d ||f||^2_{2,s}.
bool theorem_bound_holds(const CandidatePair& pr)
{
    const GpParams& p = *pr.params;
    const unsigned d = p.d;
    const DerivedParams dp = p.derive(Family::d1);
    const Rational s(pr.skew);
    const Rational c2 = gp_skewed_norm(build_gp_d1(p), pr.skew).norm.value_squared;
    const Rational rhs = Rational(ipow(Integer(2), d * (d - 1) / 2)) * rpow(s, d * d) *
                         ratio(dp.a_tilde * dp.a_tilde, p.a * p.a) * c2;
    const Rational n1 = pr.scores.norm1_sq * rpow(s, d), n2 = pr.scores.norm2_sq * rpow(s, d);
    return rpow(n1, d) <= rhs && rpow(n2, d - 1) <= rhs;
}

// N^(1/d) / |sin theta| <= ||f1|| ||f2||, raised to the 2d-th power.
bool generation_bound_holds(const CandidatePair& pr, unsigned d)
{
    const Rational N(pr.root.N);
    const Rational lhs = N * N;
    const Rational rhs = rpow(pr.scores.sin_sq_theta, d) * rpow(pr.scores.norm1_sq * pr.scores.norm2_sq, d);
    return lhs <= rhs;
}

Integer random_u64(std::mt19937_64& rng) { return from_u64(rng()); }

} // namespace

TEST(GeneratePair, C91CubicPair)
{
    const GpParams pr{3, 1, 1, kC91M, 1, oracle::c91()};
    const CandidatePair out = generate_pair(pr, Integer(23271635));
    EXPECT_EQ(out.f1, from_high_strings({"10363104", "-23437957", "-21147168576512214234486",
                                         "-109084939899748327411476171840"}));
    EXPECT_EQ(out.f2, from_high_strings({"66955475", "-151431419", "23469760045042762614639",
                                         "-754597461912921474902918473271"}));
    EXPECT_NEAR(out.scores.norm1_exp, 0.206, 0.003);
    EXPECT_NEAR(out.scores.norm2_exp, 0.210, 0.003);
    EXPECT_TRUE(has_common_root(out.f1, out.root));
    EXPECT_TRUE(has_common_root(out.f2, out.root));
    ASSERT_TRUE(out.scores.resultant_ok.has_value());
    EXPECT_TRUE(*out.scores.resultant_ok);
    EXPECT_EQ(out.scores.required_divisor, oracle::c91());
    EXPECT_TRUE(theorem_bound_holds(out));
    EXPECT_TRUE(generation_bound_holds(out, 3));
}

TEST(GeneratePair, C91KFivePair)
{
    const GpParams pr{3, 1, Integer("934237167355490922"), Integer("2837086552973239856241381969109"), 5,
                      oracle::c91()};
    const CandidatePair out = generate_pair(pr, Integer(26611809));
    EXPECT_NEAR(out.scores.product_exponent, 0.368, 0.005);
    EXPECT_EQ(out.f1, from_high_strings({"21545", "3349054", "-10356871479051937193", "1263295294354066431546642250"}));
    EXPECT_EQ(out.f2,
              from_high_strings({"1356640", "210882368", "-652118673869097609994", "-11972068980454909092333428939"}));
    EXPECT_TRUE(has_common_root(out.f1, out.root));
    EXPECT_TRUE(has_common_root(out.f2, out.root));
    EXPECT_TRUE(theorem_bound_holds(out));
}

TEST(GeneratePair, C91LargeSkewPairs)
{
    const Integer N = oracle::c91();
    const GpParams pr{3, 1, Integer("310502797375403107200"), Integer("1659138281393456348393832527057"), 1, N};
    const CandidatePair base = generate_pair(pr, Integer(23271635));
    EXPECT_NEAR(base.scores.product_exponent, 0.396, 0.005);
    EXPECT_NEAR(score_pair(base, Rational(Integer(5001852224))).product_exponent, 0.370, 0.005);

    // At these skews the second reduced vector is p x - m; the printed cubics are f1 and f1 + f2.
    const CandidatePair h = fixup_degree(generate_pair(pr, Integer(6425664302)), 3);
    EXPECT_EQ(h.f1, from_high_strings({"2", "-46088505322", "130858683603618028497", "616682434763766331165127093132"}));
    EXPECT_EQ(h.f2, from_high_strings({"2", "-46088505322", "441361480979021135697", "-1042455846629690017228705433925"}));
    EXPECT_NEAR(h.scores.product_exponent, 0.347, 0.005);

    const GpParams pk{3, 1, Integer("633983687139"), Integer("1659138281147271980652828686480"), 1, N};
    const CandidatePair k = fixup_degree(generate_pair(pk, Integer(4898436262)), 3);
    EXPECT_EQ(k.f1, from_high_strings({"8", "-55", "157979116111722504146", "78672185263313067882594467256"}));
    EXPECT_EQ(k.f2, from_high_strings({"8", "-55", "157979116745706191285", "-1580466095883958912770234219224"}));
    EXPECT_NEAR(k.scores.product_exponent, 0.345, 0.005);
    for (const auto* c : {&base, &h, &k}) {
        EXPECT_TRUE(has_common_root(c->f1, c->root));
        EXPECT_TRUE(has_common_root(c->f2, c->root));
    }
}

TEST(GeneratePair, QuadraticSmallN)
{
    const GpParams pr{2, 1, 1, 102, 1, 10403};
    const CandidatePair out = generate_pair(pr, Integer(1));
    EXPECT_EQ(out.f1.checked_degree(), 2u);
    EXPECT_TRUE(has_common_root(out.f1, out.root));
    EXPECT_TRUE(has_common_root(out.f2, out.root));
    EXPECT_TRUE(theorem_bound_holds(out));
    EXPECT_GT(out.f1.leading(), 0);
    EXPECT_GT(out.f2.leading(), 0);
}

TEST(GeneratePair, RejectsBadInput)
{
    EXPECT_THROW(generate_pair(GpParams{3, 1, 1, 22, 1, 10403}, Integer(0)), DomainError);
    EXPECT_THROW(generate_pair(GpParams{3, 1, 2, 22, 1, 10403}, Integer(1)), ConstructionError);
    EXPECT_THROW(generate_pair_zero(GpParams{3, 1, 2, 3, 1, 93}, Integer(1)), ConstructionError);
    EXPECT_THROW(generate_pair_zero(GpParams{2, 1, 1, 102, 1, 10403}, Integer(1)), ConstructionError);
}

TEST(GeneratePair, PipelineCommonRootAndDivisibility)
{
    std::mt19937_64 rng(31);
    const std::vector<long> small_p{1, 1, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 77, 143, 221};
    int runs = 0, coprime = 0, full_degree = 0;
    while (runs < 100) {
        const unsigned d = 3 + static_cast<unsigned>(rng() % 3);
        const SelectionTarget t{d, Integer(1 + rng() % 4), Integer(1 + rng() % 6), random_u64(rng) | 1};
        const Integer p = small_p[rng() % small_p.size()];
        const Family fam = (rng() % 2 && d >= 3) ? Family::d2_zero : Family::d1;
        std::vector<Integer> ms;
        try {
            ms = find_m_near(t, p, fam, std::nullopt, 1);
        } catch (const DomainError&) {
            continue;
        }
        if (ms.empty()) continue;
        const GpParams pr{d, t.a, p, ms[0], t.k, t.N};
        DerivedParams dp;
        try {
            dp = pr.derive(fam);
        } catch (const ConstructionError&) {
            continue;
        }
        const Integer s = fam == Family::d1 ? skew_formula_d1(d, pr.m, dp.a_tilde) : skew_formula_d2(d, p, dp.a_tilde);
        const CandidatePair out = fam == Family::d1 ? generate_pair(pr, s) : generate_pair_zero(pr, s);
        ASSERT_TRUE(has_common_root(out.f1, out.root)) << "run " << runs;
        ASSERT_TRUE(has_common_root(out.f2, out.root)) << "run " << runs;
        if (fam == Family::d2_zero) {
            ASSERT_EQ(out.f1.coeff(d - 1), 0);
            ASSERT_EQ(out.f2.coeff(d - 1), 0);
        }
        if (out.scores.coprime) {
            ++coprime;
            ASSERT_TRUE(out.scores.resultant_ok.value_or(false))
                << "run " << runs << " d=" << d << " fam=" << (fam == Family::d1) << " a=" << t.a << " k=" << t.k
                << " N=" << t.N << " p=" << p << " m=" << pr.m << " s=" << s << " f1=" << out.f1.to_string()
                << " f2=" << out.f2.to_string() << " res=" << out.scores.resultant << " req=" << out.scores.required_divisor;
            Integer req = t.N;
            if (out.f1.checked_degree() == d && out.f2.checked_degree() == d) {
                req *= dp.a_tilde * dp.k_tilde;
                if (fam == Family::d2_zero) req *= dp.a_tilde;
                ++full_degree;
            }
            ASSERT_TRUE(divides(req, out.scores.resultant));
        }
        if (fam == Family::d1) EXPECT_TRUE(theorem_bound_holds(out));
        if (out.scores.coprime && out.f1.checked_degree() == d && out.f2.checked_degree() == d)
            EXPECT_TRUE(generation_bound_holds(out, d));
        ++runs;
    }
    EXPECT_GT(coprime, 50);
    EXPECT_GT(full_degree, 30);
}

TEST(GeneratePair, LeadingTwoDivisibility)
{
    std::mt19937_64 rng(32);
    int checked = 0;
    for (int it = 0; it < 400 && checked < 20; ++it) {
        const SelectionTarget t{3, 2, Integer(1 + rng() % 5), random_u64(rng) | 1};
        const Integer p = 1 + 2 * (rng() % 20);
        std::vector<Integer> ms;
        try {
            ms = find_m_near(t, p, Family::d1, std::nullopt, 1);
        } catch (const DomainError&) {
            continue;
        }
        if (ms.empty()) continue;
        const GpParams pr{3, 2, p, ms[0], t.k, t.N};
        const DerivedParams dp = pr.derive(Family::d1);
        const CandidatePair out = generate_pair(pr, skew_formula_d1(3, pr.m, dp.a_tilde));
        if (!out.scores.coprime) continue;
        EXPECT_TRUE(divides(dp.a_tilde * dp.k_tilde * t.N, resultant(out.f1, out.f2)));
        ++checked;
    }
    EXPECT_EQ(checked, 20);
}

TEST(GeneratePair, SharedFactorSkipsDivisibility)
{
    CandidatePair pr;
    pr.f1 = IntPoly::from_high({1, 0, -1});
    pr.f2 = IntPoly::from_high({1, -1});
    pr.skew = 1;
    pr.root = {1, 1, 7};
    const PairScores sc = score_pair(pr);
    EXPECT_FALSE(sc.coprime);
    EXPECT_FALSE(sc.resultant_ok.has_value());
}

TEST(GeneratePairZero, CollisionInstance)
{
    // Frozen 48-bit collision instance.
    const GpParams pr{3, 1, 2039369, 4812942, 1, Integer("140841431708413")};
    const CandidatePair out = generate_pair_zero(pr, Integer(912));
    EXPECT_EQ(out.f1.coeff(2), 0);
    EXPECT_EQ(out.f2.coeff(2), 0);
    EXPECT_EQ(out.f1, IntPoly::from_high({1, 0, -6839, 16127}));
    EXPECT_EQ(out.f2, IntPoly::from_high({2039369, -4812942}));
    EXPECT_TRUE(has_common_root(out.f1, out.root));
    EXPECT_TRUE(has_common_root(out.f2, out.root));
}

TEST(GeneratePairZero, AOneIsTheLengthDPlusTwoLattice)
{
    std::mt19937_64 rng(33);
    int done = 0;
    while (done < 20) {
        const SelectionTarget t{3 + static_cast<unsigned>(rng() % 2), 1, Integer(1 + rng() % 3), random_u64(rng) | 1};
        const Integer p = 5 + rng() % 60;
        std::vector<Integer> ms;
        try {
            ms = find_m_near(t, p, Family::d2_zero, std::nullopt, 1);
        } catch (const DomainError&) {
            continue;
        }
        if (ms.empty()) continue;
        const GpParams pr{t.d, 1, p, ms[0], t.k, t.N};
        const CandidatePair out = generate_pair_zero(pr, skew_formula_d2(t.d, p, Integer(1)));
        const GeomProgression g = kjk_gp(t.N, t.d, p, ms[0], t.k);
        const auto w = slice_initial_gp(g, t.d);
        for (const auto* f : {&out.f1, &out.f2}) {
            const IntVector v = f->padded(t.d + 1);
            ASSERT_EQ(oracle::dot(v, w[0].terms), 0);
            ASSERT_EQ(oracle::dot(v, w[1].terms), 0);
        }
        ++done;
    }
}

TEST(GenerateFromGps, SingleProgressionSameLattice)
{
    const Integer N = oracle::c91();
    const GpParams pr{3, 1, 1, kC91M, 1, N};
    const Integer s = 23271635;
    const CandidatePair a = generate_from_gps({build_gp_d1(pr)}, 3, s);
    const CandidatePair b = generate_pair(pr, s);
    const DerivedParams dp = pr.derive(Family::d1);
    const LatticeBasis rows =
        basis_rows_d1(pr, base_mp_expand({3, 3, {dp.a_tilde}, pr.m, pr.p, dp.k_tilde, N}));
    for (const auto* f : {&a.f1, &a.f2, &b.f1, &b.f2}) EXPECT_TRUE(oracle::in_span(rows.rows(), f->padded(4)));
    EXPECT_TRUE(has_common_root(a.f1, a.root));
    EXPECT_FALSE(a.params.has_value());
    EXPECT_NEAR(a.scores.product_exponent, b.scores.product_exponent, 0.01);
}

TEST(GenerateFromGps, SlicedWindowsMatchZeroLattice)
{
    const GpParams pr{3, 1, 2039369, 4812942, 1, Integer("140841431708413")};
    const auto w = slice_initial_gp(build_gp_d2(pr), 3);
    const CandidatePair a = generate_from_gps(w, 3, Integer(912));
    const CandidatePair b = generate_pair_zero(pr, Integer(912));
    EXPECT_GE(a.scores.sin_sq_theta, Rational(3, 4));
    const IntMatrix la{a.f1.padded(4), a.f2.padded(4)}, lb{b.f1.padded(4), b.f2.padded(4)};
    EXPECT_TRUE(oracle::same_lattice(la, lb));
}

TEST(GenerateFromGps, MontgomeryTwoQuadratics)
{
    std::mt19937_64 rng(34);
    int done = 0;
    while (done < 30) {
        const Integer N = random_u64(rng) >> 4 | 1;
        const Integer p = 3 + rng() % 2000;
        if (igcd(p, N) != 1 || !is_probable_prime(p)) continue;
        const SelectionTarget t{2, 1, 1, N};
        const auto r = roots_mod_p(t.a, t.k, N, 2, p);
        if (r.empty()) continue;
        Integer m = iroot_floor(N, 2) + mod(r[0] - iroot_floor(N, 2), p);
        const GeomProgression g = montgomery_gp(N, p, m);
        const Integer s = 1 + rng() % 1000;
        const CandidatePair out = generate_from_gps({g}, 2, s);
        EXPECT_GE(out.scores.sin_sq_theta, Rational(3, 4));
        EXPECT_TRUE(has_common_root(out.f1, out.root));
        EXPECT_TRUE(has_common_root(out.f2, out.root));
        ++done;
    }
}

TEST(GenerateFromGps, Errors)
{
    const GeomProgression g = build_gp_d1(GpParams{3, 1, 1, 22, 1, 10403});
    EXPECT_THROW(generate_from_gps({g, g}, 3, Integer(1)), RankError);
    EXPECT_THROW(generate_from_gps({}, 3, Integer(1)), DimensionError);
    EXPECT_THROW(generate_from_gps({g}, 4, Integer(1)), DimensionError);
    GeomProgression bad = g;
    bad.terms[3] += 1;
    EXPECT_THROW(generate_from_gps({bad}, 3, Integer(1)), ConstructionError);
    const GeomProgression zero_first{{0, 0, 0, 10403}, 10403, 22, 1};
    EXPECT_THROW(generate_from_gps({zero_first}, 3, Integer(1)), ConstructionError);
}

TEST(FixupDegree, Cases)
{
    const GpParams pr{3, 1, 1, kC91M, 1, oracle::c91()};
    const CandidatePair ok = generate_pair(pr, Integer(23271635));
    const CandidatePair same = fixup_degree(ok, 3);
    EXPECT_EQ(same.f2, ok.f2);
    EXPECT_FALSE(same.degree_fixed_up);

    // Huge skew: the linear px - m row is shortest.
    try {
        (void)fixup_degree(generate_pair(GpParams{3, 1, 1, 22, 1, 10403}, Integer(1000000)), 3);
        FAIL() << "expected ShortVectorError";
    } catch (const ShortVectorError& e) {
        EXPECT_EQ(e.poly.checked_degree(), 1u);
    }

    // Search small N for deg f1 = d and deg f2 < d, then fix it up.
    std::mt19937_64 rng(35);
    bool found = false;
    for (int it = 0; it < 4000 && !found; ++it) {
        const Integer N = (random_u64(rng) >> 30) | 1;
        const Integer m = iroot_ceil(N, 3);
        const Integer s = Integer(1) << (rng() % 12);
        const GpParams q{3, 1, 1, m, 1, N};
        CandidatePair c;
        try {
            c = generate_pair(q, s);
        } catch (const ConstructionError&) {
            continue;
        }
        if (c.f1.checked_degree() != 3 || c.f2.checked_degree() == 3) continue;
        found = true;
        const CandidatePair fixed = fixup_degree(c, 3);
        EXPECT_TRUE(fixed.degree_fixed_up);
        EXPECT_TRUE(fixed.sin_guarantee_forfeited);
        EXPECT_EQ(fixed.f2.checked_degree(), 3u);
        EXPECT_EQ(fixed.f2, c.f1 + c.f2);
        EXPECT_TRUE(has_common_root(fixed.f2, fixed.root));
        EXPECT_NE(fixed.scores.norm2_sq, c.scores.norm2_sq);
    }
    EXPECT_TRUE(found);
}
