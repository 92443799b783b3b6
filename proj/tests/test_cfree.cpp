#include <monoconv/cfree.hpp>
#include <monoconv/convolution.hpp>

#include <boost/multiprecision/gmp.hpp>
#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"

using namespace monoconv;
using namespace monoconv::cfree;
using Rational = boost::multiprecision::mpq_rational;

namespace {

MomentFunctional<Rational> random_rational_moments(std::mt19937_64& rng, std::size_t n)
{
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 7);
    std::vector<Rational> m(n);
    for (auto& x : m)
        x = Rational(num(rng), den(rng));
    return MomentFunctional<Rational>(std::move(m));
}

Word word(std::initializer_list<std::pair<int, int>> letters)
{
    std::vector<Letter> out;
    for (const auto& [a, p] : letters)
        out.push_back({a, p});
    return Word(out);
}

// Moments of the circle measure shifted to the generator A = U - 1:
// phi(A^c) = sum_i binom(c, i) (-1)^{c-i} m_i.
MomentFunctional<cplx> shifted_by_one(const std::vector<cplx>& m)
{
    std::vector<cplx> out(m.size());
    for (std::size_t c = 1; c <= m.size(); ++c) {
        cplx acc(0.0);
        double binom = 1.0;
        for (std::size_t i = 0; i <= c; ++i) {
            const cplx mi = i == 0 ? cplx(1.0) : m[i - 1];
            acc += binom * ((c - i) % 2 ? -1.0 : 1.0) * mi;
            binom = binom * double(c - i) / double(i + 1);
        }
        out[c - 1] = acc;
    }
    return MomentFunctional<cplx>(std::move(out));
}

// Phi((U V)^k) with U = 1 + A: expand every factor (1 + A) V into V or A V.
template <typename Eval>
cplx expand_uv_power(std::size_t k, Eval eval)
{
    cplx total(0.0);
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
        std::vector<Letter> letters;
        for (std::size_t i = 0; i < k; ++i) {
            if (mask & (std::size_t{1} << i))
                letters.push_back({1, 1});
            letters.push_back({2, 1});
        }
        total += eval(Word(letters));
    }
    return total;
}

} // namespace

TEST(CFree, WordCanonicalization)
{
    const auto w = word({{1, 2}, {1, 1}, {2, 0}, {1, 3}, {2, 2}});
    ASSERT_EQ(w.size(), 2u);
    EXPECT_EQ(w.letters()[0], (Letter{1, 6}));
    EXPECT_EQ(w.letters()[1], (Letter{2, 2}));
    EXPECT_TRUE(word({{1, 0}, {2, 0}}).empty());
    EXPECT_EQ(w.mirrored().letters()[0], (Letter{2, 6}));
    EXPECT_THROW(word({{3, 1}}), Error);
    EXPECT_THROW(word({{1, -1}}), Error);
}

TEST(CFree, MonotoneExamples)
{
    const MomentFunctional<double> phi1({0.3, 0.7, -0.2});
    const MomentFunctional<double> phi2({0.5, 0.1, 0.9});
    EXPECT_EQ(monotone_eval(word({{2, 3}}), phi1, phi2), 0.9);
    EXPECT_EQ(monotone_eval(word({{2, 1}, {1, 1}, {2, 1}}), phi1, phi2), 0.3 * 0.5 * 0.5);
    EXPECT_EQ(monotone_eval(word({{1, 1}, {2, 1}, {1, 1}}), phi1, phi2), 0.7 * 0.5);
    EXPECT_EQ(monotone_eval(Word(), phi1, phi2), 1.0);
    EXPECT_THROW(monotone_eval(word({{1, 2}, {2, 1}, {1, 2}}), phi1, phi2), Error);
}

TEST(CFree, SingleLetterAndBoolean)
{
    const MomentFunctional<double> phi1({0.3, 0.7, -0.2});
    const MomentFunctional<double> phi2({0.5, 0.1, 0.9});
    const auto delta = MomentFunctional<double>::delta(3);
    const MomentFunctional<double> psi({0.25, 0.5, 0.125});
    EXPECT_EQ(cfree_eval(word({{1, 2}}), phi1, psi, phi2, psi), 0.7);
    EXPECT_EQ(cfree_eval(word({{2, 3}}), phi1, psi, phi2, psi), 0.9);
    // Boolean: every letter is already delta-centered.
    EXPECT_EQ(cfree_eval(word({{1, 1}, {2, 1}, {1, 1}}), phi1, delta, phi2, delta), 0.3 * 0.5 * 0.3);
}

TEST(CFree, TwoLetterWordsFactorize)
{
    // For any c-free product, phi(a b) = phi1(a) phi2(b): expanding the centered product
    // leaves phi1(a) phi2(b) after the psi terms cancel.
    std::mt19937_64 rng(91);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p1 = random_rational_moments(rng, 4);
        const auto s1 = random_rational_moments(rng, 4);
        const auto p2 = random_rational_moments(rng, 4);
        const auto s2 = random_rational_moments(rng, 4);
        for (int i = 1; i <= 4; ++i)
            for (int j = 1; j <= 4; ++j)
                EXPECT_EQ(cfree_eval(word({{1, i}, {2, j}}), p1, s1, p2, s2), p1(i) * p2(j));
    }
}

TEST(CFree, ThreeLetterHandComputation)
{
    // Worked out by hand: phi(a1 b a2) = phi1(a1 a2) psi2(b) + phi1(a1) phi1(a2) (phi2(b) - psi2(b)).
    std::mt19937_64 rng(92);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p1 = random_rational_moments(rng, 4);
        const auto s1 = random_rational_moments(rng, 4);
        const auto p2 = random_rational_moments(rng, 4);
        const auto s2 = random_rational_moments(rng, 4);
        const Rational expected = p1(2) * s2(1) + p1(1) * p1(1) * (p2(1) - s2(1));
        EXPECT_EQ(cfree_eval(word({{1, 1}, {2, 1}, {1, 1}}), p1, s1, p2, s2), expected);
    }
}

TEST(CFree, LengthLimit)
{
    std::vector<Letter> letters;
    for (int i = 0; i < 17; ++i)
        letters.push_back({1 + i % 2, 1});
    const auto phi = MomentFunctional<double>::delta(4);
    try {
        cfree_eval(Word(letters), phi, phi, phi, phi);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::recursion_limit);
    }
}

TEST(CFreeProperty, MonotoneSpecializationExact)
{
    std::mt19937_64 rng(93);
    for (int trial = 0; trial < 3; ++trial) {
        const auto phi1 = random_rational_moments(rng, 24);
        const auto phi2 = random_rational_moments(rng, 24);
        const auto rep = check_monotone_specialization(phi1, phi2, 6, 4, [](const Rational& d) {
            return d == 0 ? 0.0 : std::abs(d.convert_to<double>()) + 1e-300;
        });
        EXPECT_EQ(rep.words, 2u * (4 + 16 + 64 + 256 + 1024 + 4096));
        EXPECT_EQ(rep.mismatches, 0u);
    }
}

TEST(CFreeProperty, MonotoneSpecializationFloat)
{
    std::mt19937_64 rng(94);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> m1(20), m2(20);
    for (auto& x : m1)
        x = unit(rng);
    for (auto& x : m2)
        x = unit(rng);
    const auto rep = check_monotone_specialization(MomentFunctional<double>(m1), MomentFunctional<double>(m2), 5, 3,
                                                   [](double d) { return std::abs(d); });
    EXPECT_LE(rep.max_defect, 1e-12);
}

TEST(CFreeProperty, FreeProductIsSymmetric)
{
    std::mt19937_64 rng(95);
    const auto phi1 = random_rational_moments(rng, 12);
    const auto phi2 = random_rational_moments(rng, 12);
    CFreeEvaluator<Rational> forward(phi1, phi1, phi2, phi2);
    CFreeEvaluator<Rational> swapped(phi2, phi2, phi1, phi1);
    for (const auto& w : canonical_words(5, 2))
        EXPECT_EQ(forward(w), swapped(w.mirrored()));
}

TEST(CFreeProperty, UnitLettersAreTransparent)
{
    std::mt19937_64 rng(96);
    const auto p1 = random_rational_moments(rng, 8);
    const auto s1 = random_rational_moments(rng, 8);
    const auto p2 = random_rational_moments(rng, 8);
    const auto s2 = random_rational_moments(rng, 8);
    std::uniform_int_distribution<int> coin(0, 1);
    for (const auto& w : canonical_words(4, 2)) {
        std::vector<Letter> padded;
        for (const auto& l : w.letters()) {
            if (coin(rng))
                padded.push_back({3 - l.algebra, 0});
            padded.push_back(l);
            if (coin(rng))
                padded.push_back({l.algebra, 0});
        }
        EXPECT_EQ(cfree_eval(Word(padded), p1, s1, p2, s2), cfree_eval(w, p1, s1, p2, s2));
    }
}

TEST(CFreeProperty, BridgeToConvolution)
{
    std::mt19937_64 rng(97);
    for (int trial = 0; trial < 5; ++trial) {
        const auto mu = test::random_atomic(rng, 4);
        const auto nu = test::random_atomic(rng, 4);
        const auto phi_a = shifted_by_one(moments(mu, 6));
        const MomentFunctional<cplx> phi_v(moments(nu, 6));
        const auto delta = MomentFunctional<cplx>::delta(6);
        const auto conv = moments(monotone_convolve(mu, nu, 6), 6);
        for (std::size_t k = 1; k <= 6; ++k) {
            const cplx mono = expand_uv_power(k, [&](const Word& w) { return monotone_eval(w, phi_a, phi_v); });
            const cplx cf =
                expand_uv_power(k, [&](const Word& w) { return cfree_eval(w, phi_a, delta, phi_v, phi_v); });
            EXPECT_NEAR(std::abs(mono - conv[k - 1]), 0.0, 1e-12) << k;
            EXPECT_NEAR(std::abs(cf - conv[k - 1]), 0.0, 1e-12) << k;
        }
    }
}
