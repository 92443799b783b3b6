#include <monoconv/measure.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>
#include <random>

#include "test_util.hpp"

using namespace monoconv;

namespace {

constexpr double pi = std::numbers::pi;

CircleMeasure two_point()
{
    return CircleMeasure::atomic({{0.0, 0.5}, {pi, 0.5}});
}

} // namespace

TEST(Measure, AtomicValidation)
{
    EXPECT_THROW(CircleMeasure::atomic({{0.0, 0.5}, {1.0, 0.4}}), Error);
    EXPECT_THROW(CircleMeasure::atomic({{0.0, 1.5}, {1.0, -0.5}}), Error);
    EXPECT_THROW(CircleMeasure::atomic({}), Error);
    const auto mu = CircleMeasure::atomic({{-pi / 2, 1.0}});
    EXPECT_NEAR(mu.atoms()[0].angle, 1.5 * pi, 1e-15);
}

TEST(Measure, MomentRepresentationValidation)
{
    EXPECT_THROW(CircleMeasure::from_moments({cplx(1.2, 0.0)}), Error);
    // |m_1| <= 1 each, yet m_1 = 1, m_2 = -1 is not a moment sequence.
    EXPECT_THROW(CircleMeasure::from_moments({cplx(1.0), cplx(-1.0), cplx(0.0), cplx(0.0)}), Error);
    EXPECT_NO_THROW(CircleMeasure::from_moments({cplx(0.0), cplx(1.0), cplx(0.0), cplx(1.0)}));
}

TEST(Measure, DiracMoments)
{
    for (const auto& m : moments(CircleMeasure::dirac(0.0), 10))
        EXPECT_EQ(m, cplx(1.0));
}

TEST(Measure, SymmetricTwoPointMoments)
{
    const auto m = moments(two_point(), 8);
    for (std::size_t k = 1; k <= 8; ++k)
        EXPECT_NEAR(std::abs(m[k - 1] - cplx(k % 2 == 0 ? 1.0 : 0.0)), 0.0, 1e-15) << k;
}

TEST(Measure, HaarQuadratureMoments)
{
    const auto m = moments(CircleMeasure::uniform_atoms(64), 64);
    for (std::size_t k = 1; k < 64; ++k)
        EXPECT_LE(std::abs(m[k - 1]), 1e-14) << k;
    EXPECT_NEAR(std::abs(m[63] - 1.0), 0.0, 1e-13);  // aliasing at the quadrature order
}

TEST(Measure, MomentRequestBeyondStoredThrows)
{
    const auto haar = CircleMeasure::haar(8);
    EXPECT_THROW(moments(haar, 9), Error);
    EXPECT_THROW(moments(haar, 0), Error);
}

TEST(Measure, KTransformOfDirac)
{
    const double phi = 0.7;
    const auto k = k_transform(CircleMeasure::dirac(phi), 16);
    EXPECT_EQ(k.closed_form, ClosedForm::dirac);
    const cplx z(0.3, -0.2);
    EXPECT_NEAR(std::abs(k.eval(z) - std::polar(1.0, phi) * z), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(eval(k.series, z) - std::polar(1.0, phi) * z), 0.0, 1e-15);
}

TEST(Measure, KTransformOfHaarVanishes)
{
    const auto k = k_transform(CircleMeasure::haar(), 32);
    EXPECT_EQ(k.closed_form, ClosedForm::haar);
    for (const auto& c : k.series.coeffs())
        EXPECT_EQ(c, cplx(0.0));
}

TEST(Measure, KTransformOfTwoPointIsZSquared)
{
    const auto k = k_transform(two_point(), 16);
    for (std::size_t j = 0; j <= 16; ++j)
        EXPECT_NEAR(std::abs(k.series[j] - cplx(j == 2 ? 1.0 : 0.0)), 0.0, 1e-14) << j;
}

TEST(Measure, MomentsFromK)
{
    const auto z2 = KTransform::from_series(TruncatedSeries::monomial(2, 12));
    const auto m = measure_moments_from_k(z2, 12);
    for (std::size_t k = 1; k <= 12; ++k)
        EXPECT_EQ(m[k - 1], cplx(k % 2 == 0 ? 1.0 : 0.0));

    const double phi = 1.1;
    const auto rot = KTransform::from_series(TruncatedSeries::monomial(1, 10, std::polar(1.0, phi)));
    const auto mr = measure_moments_from_k(rot, 10);
    for (std::size_t k = 1; k <= 10; ++k)
        EXPECT_NEAR(std::abs(mr[k - 1] - std::polar(1.0, k * phi)), 0.0, 1e-14);

    for (const auto& x : measure_moments_from_k(KTransform::from_series(TruncatedSeries(8)), 8))
        EXPECT_EQ(x, cplx(0.0));
}

TEST(Measure, ValidateK)
{
    const auto ok = validate_k(KTransform::from_series(TruncatedSeries::monomial(2, 16)));
    EXPECT_TRUE(ok.k_at_zero_ok);
    EXPECT_TRUE(ok.schur_bound_ok);
    EXPECT_TRUE(ok.toeplitz_psd_ok);

    const auto big = validate_k(KTransform::from_series(TruncatedSeries::monomial(1, 16, 2.0)));
    EXPECT_FALSE(big.schur_bound_ok);

    const TruncatedSeries shifted(std::vector<cplx>{0.5, 1.0, 0.0, 0.0, 0.0});
    EXPECT_FALSE(validate_k(KTransform::from_series(shifted)).k_at_zero_ok);
}

TEST(Measure, PoissonDensityHaarIsFlat)
{
    for (double p : poisson_density(CircleMeasure::haar(), 0.5, 64))
        EXPECT_NEAR(p, 1.0, 1e-15);
}

TEST(Measure, PoissonDensityDiracPeaksAtAtom)
{
    const auto p = poisson_density(CircleMeasure::dirac(0.0), 0.9, 128);
    EXPECT_EQ(std::max_element(p.begin(), p.end()) - p.begin(), 0);
    // Closed-form Poisson kernel (1 - r^2)/(1 - 2 r cos t + r^2).
    for (std::size_t j = 0; j < p.size(); ++j) {
        const double t = two_pi * j / 128.0;
        EXPECT_NEAR(p[j], (1 - 0.81) / (1 - 1.8 * std::cos(t) + 0.81), 1e-12);
    }
}

TEST(Measure, PoissonDensityTwoPeaksAndNormalization)
{
    const auto p = poisson_density(two_point(), 0.8, 128);
    EXPECT_NEAR(p[0], p[64], 1e-12);
    EXPECT_GT(p[0], p[32]);
    double mean = 0.0;
    for (double x : p) {
        EXPECT_GE(x, -1e-12);
        mean += x / 128.0;
    }
    EXPECT_NEAR(mean, 1.0, 1e-6);
    EXPECT_THROW(poisson_density(two_point(), 1.0, 8), Error);
    EXPECT_THROW(poisson_density(two_point(), 0.0, 8), Error);
}

TEST(MeasureProperty, RoundTripThroughK)
{
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const auto mu = test::random_atomic(rng, 8);
        const auto m = moments(mu, 32);
        const auto back = measure_moments_from_k(k_transform(mu, 32), 32);
        EXPECT_LE(test::max_abs_diff(m, back), 1e-12);
    }
}

TEST(MeasureProperty, KTransformOfRandomMeasurePassesValidation)
{
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 100; ++trial) {
        const auto mu = test::random_atomic(rng, 8);
        const auto v = validate_k(k_transform(mu, 32));
        EXPECT_TRUE(v.k_at_zero_ok);
        EXPECT_TRUE(v.schur_bound_ok) << v.max_modulus;
        EXPECT_TRUE(v.toeplitz_psd_ok) << v.min_toeplitz_eigenvalue;
    }
}

TEST(MeasureProperty, DiracAtOneIsIdentity)
{
    const auto k = k_transform(CircleMeasure::dirac(0.0), 20);
    EXPECT_EQ(k.series, TruncatedSeries::identity(20));
}
