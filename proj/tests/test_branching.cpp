#include <monoconv/branching.hpp>
#include <monoconv/semigroup.hpp>

#include <gtest/gtest.h>

#include <numbers>

#include "test_util.hpp"

using namespace monoconv;

TEST(Branching, OffspringLawValidation)
{
    EXPECT_THROW(OffspringLaw({0.5, 0.4}), Error);
    EXPECT_THROW(OffspringLaw({-0.1, 1.1}), Error);
    EXPECT_THROW(OffspringLaw({}), Error);
    EXPECT_THROW(OffspringLaw(std::vector<double>(66, 1.0 / 66)), Error);
    const OffspringLaw law({0.2, 0.3, 0.5});
    for (double x : {0.0, 0.25, 0.5, 1.0}) {
        const double y = law.pgf(x).real();
        EXPECT_GE(y, 0.0);
        EXPECT_LE(y, 1.0);
    }
}

TEST(Branching, VectorFieldExamples)
{
    const auto yule = gw_vector_field(BranchingGenerator::yule(1.5, 2), 6);
    EXPECT_EQ(yule, TruncatedSeries(std::vector<cplx>{0.0, -1.5, 1.5, 0.0, 0.0, 0.0, 0.0}));

    EXPECT_EQ(gw_vector_field(BranchingGenerator(std::map<std::size_t, double>{}), 5), TruncatedSeries(5));

    const BranchingGenerator g({{2, 1.0}, {3, 1.0}});
    EXPECT_EQ(gw_vector_field(g, 4), TruncatedSeries(std::vector<cplx>{0.0, -2.0, 1.0, 1.0, 0.0}));
    EXPECT_EQ(g.alpha(), 2.0);
    const cplx z(0.3, 0.2);
    EXPECT_NEAR(std::abs(g.v(z) - (z * z + z * z * z - 2.0 * z)), 0.0, 1e-15);

    EXPECT_THROW(BranchingGenerator({{1, 1.0}}), Error);
    EXPECT_THROW(BranchingGenerator({{2, -1.0}}), Error);
}

TEST(Branching, GeneratorRealPartChecked)
{
    const BranchingGenerator g({{2, 0.5}, {4, 2.0}, {7, 1.0}});
    for (int i = 1; i <= 16; ++i)
        for (int j = 0; j < 16; ++j)
            EXPECT_GE(g.u(std::polar(0.99 * i / 16.0, two_pi * j / 16.0)).real(), 0.0);
}

TEST(Branching, YuleClosedFormExamples)
{
    EXPECT_EQ(yule_closed_form(1.0, 2, 0.0, cplx(0.4, 0.3)), cplx(0.4, 0.3));
    // e^{-t} = 1/2: 0.5 * 0.5 / (1 - 0.5 * 0.5) = 1/3.
    EXPECT_NEAR(std::abs(yule_closed_form(1.0, 2, std::log(2.0), cplx(0.5)) - 1.0 / 3.0), 0.0, 1e-15);
    EXPECT_LT(std::abs(yule_closed_form(1.0, 2, 30.0, cplx(0.9))), 1e-11);
    EXPECT_LT(std::abs(yule_closed_form(1.0, 3, 30.0, cplx(0.9))), 1e-11);
    EXPECT_THROW(yule_closed_form(0.0, 2, 1.0, cplx(0.5)), Error);
    EXPECT_THROW(yule_closed_form(1.0, 1, 1.0, cplx(0.5)), Error);
}

TEST(Branching, YuleFlowProperty)
{
    for (std::size_t k : {2u, 3u, 5u})
        for (const cplx z : {cplx(0.5), cplx(-0.3, 0.6), cplx(0.1, -0.8)})
            EXPECT_NEAR(std::abs(yule_closed_form(0.7, k, 0.9, z) -
                                 yule_closed_form(0.7, k, 0.4, yule_closed_form(0.7, k, 0.5, z))),
                        0.0, 1e-14);
}

TEST(Branching, GwDeterministicLaws)
{
    const std::vector<cplx> zs{0.3, cplx(0.5, 0.5), 0.9};
    for (const auto& e : gw_simulate(OffspringLaw({0.0, 1.0}), 7, 50, zs, 1)) {
        EXPECT_EQ(e.empirical, e.z);  // every sample equals z, and so does their running mean
        EXPECT_EQ(e.std_error, 0.0);
        EXPECT_TRUE(gw_within_sigma(e));
    }
    for (const auto& e : gw_simulate(OffspringLaw({0.0, 0.0, 1.0}), 5, 20, zs, 1)) {
        EXPECT_NEAR(std::abs(e.empirical - std::pow(e.z, 32)), 0.0, 1e-15);
        EXPECT_TRUE(gw_within_sigma(e));
    }
}

TEST(Branching, GwBinaryLaw)
{
    const OffspringLaw law({0.0, 0.5, 0.5});
    const auto est = gw_simulate(law, 5, 100'000, {0.5}, 20240601);
    // phi^5(0.5) with phi(z) = (z + z^2)/2, iterated by hand.
    double x = 0.5;
    for (int i = 0; i < 5; ++i)
        x = 0.5 * (x + x * x);
    EXPECT_NEAR(std::abs(est[0].theory - x), 0.0, 1e-16);
    EXPECT_TRUE(gw_within_sigma(est[0])) << est[0].empirical << " " << x << " " << est[0].std_error;
    EXPECT_GT(est[0].std_error, 0.0);
}

TEST(Branching, GwSeedDeterminesOutput)
{
    const OffspringLaw law({0.1, 0.3, 0.4, 0.2});
    const std::vector<cplx> zs{0.3, cplx(0.2, -0.7)};
    const auto a = gw_simulate(law, 4, 2000, zs, 99);
    const auto b = gw_simulate(law, 4, 2000, zs, 99);
    const auto c = gw_simulate(law, 4, 2000, zs, 100);
    for (std::size_t i = 0; i < zs.size(); ++i) {
        EXPECT_EQ(a[i].empirical, b[i].empirical);
        EXPECT_EQ(a[i].std_error, b[i].std_error);
        EXPECT_NE(a[i].empirical, c[i].empirical);
    }
    EXPECT_EQ(gw_population(law, 4, 99, 17), gw_population(law, 4, 99, 17));
}

TEST(Branching, GwOverflow)
{
    try {
        gw_population(OffspringLaw({0.0, 0.0, 1.0}), 24, 1, 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::population_overflow);
    }
}

TEST(Branching, GwKLink)
{
    EXPECT_EQ(gw_k_link(OffspringLaw({0.0, 1.0}), 8).series, TruncatedSeries::identity(8));

    const auto z2 = gw_k_link(OffspringLaw({0.0, 0.0, 1.0}), 16);
    const auto two_point = k_transform(CircleMeasure::atomic({{0.0, 0.5}, {std::numbers::pi, 0.5}}), 16);
    for (std::size_t j = 0; j <= 16; ++j)
        EXPECT_NEAR(std::abs(z2.series[j] - two_point.series[j]), 0.0, 1e-14);

    const auto binary = gw_k_link(OffspringLaw({0.0, 0.5, 0.5}), 32);
    const auto v = validate_k(binary);
    EXPECT_TRUE(v.ok()) << v.min_toeplitz_eigenvalue;

    try {
        gw_k_link(OffspringLaw({0.1, 0.9}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::not_a_k_transform);
    }
}

TEST(BranchingProperty, YuleSatisfiesOde)
{
    const double h = 1e-4;
    for (std::size_t k : {2u, 3u, 4u}) {
        const auto g = BranchingGenerator::yule(1.3, k);
        for (double t : {0.2, 0.8, 1.7})
            for (const cplx z : {cplx(0.5), cplx(-0.2, 0.7), cplx(0.6, -0.6)}) {
                const cplx phi = yule_closed_form(1.3, k, t, z);
                const cplx dt = (yule_closed_form(1.3, k, t + h, z) - yule_closed_form(1.3, k, t - h, z)) / (2 * h);
                EXPECT_NEAR(std::abs(dt - g.v(phi)), 0.0, 1e-6);
            }
    }
}

TEST(BranchingProperty, YuleMatchesOdeFlow)
{
    for (std::size_t k : {2u, 3u})
        for (double t : {0.3, 1.0, 2.0})
            for (const cplx z : {cplx(0.25), cplx(-0.4, 0.5), cplx(0.1, -0.85)})
                EXPECT_NEAR(std::abs(yule_closed_form(1.0, k, t, z) -
                                     evolve_pointwise(BranchingGenerator::yule(1.0, k), t, z)),
                            0.0, 1e-8);
}

TEST(BranchingProperty, GwMatchesComposedKTransform)
{
    const std::vector<OffspringLaw> laws{OffspringLaw({0.0, 0.5, 0.5}), OffspringLaw({0.0, 0.6, 0.3, 0.1}),
                                         OffspringLaw({0.0, 0.2, 0.0, 0.0, 0.8})};
    const std::vector<cplx> zs{0.3, cplx(0.2, 0.4), cplx(-0.5, 0.1)};
    std::uint64_t seed = 7;
    for (const auto& law : laws) {
        const auto k = gw_k_link(law, 64).series;
        auto kn = TruncatedSeries::identity(64);
        for (std::size_t n = 1; n <= 6; ++n) {
            kn = compose(k, kn);
            for (const auto& e : gw_simulate(law, n, 4000, zs, seed++)) {
                const cplx via_series = eval(kn, e.z);
                EXPECT_NEAR(std::abs(via_series - e.theory), 0.0, 1e-12);
                EXPECT_LE(std::abs(e.empirical - via_series), 4.0 * e.std_error + 1e-12) << n << " " << e.z;
            }
        }
    }
}
