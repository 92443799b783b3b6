#include <monoconv/generator.hpp>

#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"

using namespace monoconv;

namespace {

HerglotzGenerator random_generator(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> angle(0.0, two_pi);
    std::uniform_real_distribution<double> weight(0.0, 1.0);
    std::uniform_real_distribution<double> bdist(-2.0, 2.0);
    std::vector<Atom> rho(1 + rng() % 5);
    for (auto& a : rho)
        a = {angle(rng), weight(rng)};
    return {bdist(rng), rho};
}

// 16 radii in (0, 0.95] times 16 angles.
std::vector<cplx> disk_grid_256()
{
    std::vector<cplx> g;
    for (int i = 1; i <= 16; ++i)
        for (int j = 0; j < 16; ++j)
            g.push_back(std::polar(0.95 * i / 16.0, two_pi * (j + 0.5 * (i % 2)) / 16.0));
    return g;
}

} // namespace

TEST(Generator, ZeroGenerator)
{
    const HerglotzGenerator g(0.0, {});
    EXPECT_EQ(g.u(cplx(0.3, 0.4)), cplx(0.0));
    EXPECT_EQ(g.beta(), cplx(0.0));
}

TEST(Generator, SingleAtom)
{
    const HerglotzGenerator g(0.0, {{0.0, 1.0}});
    EXPECT_EQ(g.u(cplx(0.0)), cplx(1.0));
    const cplx z(0.2, -0.5);
    EXPECT_NEAR(std::abs(g.u(z) - (1.0 + z) / (1.0 - z)), 0.0, 1e-15);
}

TEST(Generator, SixtyFourEqualAtoms)
{
    // sum over 64th roots w of (w + z)/(w - z) / 64 = (1 + z^64)/(1 - z^64).
    std::vector<Atom> rho;
    for (int j = 0; j < 64; ++j)
        rho.push_back({two_pi * j / 64.0, 1.0 / 64.0});
    const HerglotzGenerator g(0.0, rho);
    for (const auto& z : disk_grid_256()) {
        const cplx zn = std::pow(z, 64);
        EXPECT_NEAR(std::abs(g.u(z) - (1.0 + zn) / (1.0 - zn)), 0.0, 1e-12) << z;
        if (std::abs(z) <= 0.6)
            EXPECT_NEAR(std::abs(g.u(z) - 1.0), 0.0, 1e-12) << z;
    }
    const auto us = g.u_series(70);
    for (std::size_t k = 1; k < 64; ++k)
        EXPECT_NEAR(std::abs(us[k]), 0.0, 1e-13) << k;
    EXPECT_NEAR(std::abs(us[64] - 2.0), 0.0, 1e-13);
}

TEST(Generator, ConstantGeneratorIsExact)
{
    const auto g = HerglotzGenerator::constant(1.0);
    for (const auto& z : disk_grid_256())
        EXPECT_EQ(g.u(z), cplx(1.0));
    EXPECT_EQ(g.v_series(6), TruncatedSeries::monomial(1, 6, -1.0));
}

TEST(Generator, SingleAtomVSeries)
{
    const HerglotzGenerator g(0.0, {{0.0, 1.0}});
    const auto v = g.v_series(8);
    EXPECT_EQ(v[0], cplx(0.0));
    EXPECT_EQ(v[1], cplx(-1.0));
    for (std::size_t k = 2; k <= 8; ++k)
        EXPECT_NEAR(std::abs(v[k] + 2.0), 0.0, 1e-15);
}

TEST(Generator, Validation)
{
    EXPECT_THROW(HerglotzGenerator(0.0, {{0.0, -0.1}}), Error);
    EXPECT_THROW(HerglotzGenerator(std::nan(""), {}), Error);
    EXPECT_THROW(HerglotzGenerator::constant(-1.0), Error);
    const HerglotzGenerator g(0.0, {{0.0, 1.0}});
    EXPECT_THROW(g.u(cplx(1.0, 0.0)), Error);
    EXPECT_THROW(g.u(cplx(0.0, -1.5)), Error);
}

TEST(GeneratorProperty, RealPartNonNegative)
{
    std::mt19937_64 rng(41);
    const auto grid = disk_grid_256();
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = random_generator(rng);
        for (const auto& z : grid)
            EXPECT_GE(g.u(z).real(), -1e-12);
    }
}

TEST(GeneratorProperty, BetaIsExact)
{
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = random_generator(rng);
        double mass = 0.0;
        for (const auto& a : g.rho())
            mass += a.weight;
        EXPECT_EQ(g.beta(), cplx(mass, g.b()));
        EXPECT_EQ(g.u_series(4)[0], g.beta());
        EXPECT_EQ(g.v_series(4)[1], -g.beta());
    }
}

TEST(GeneratorProperty, SeriesMatchesPointwise)
{
    std::mt19937_64 rng(43);
    const std::size_t n = 60;
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = random_generator(rng);
        const auto v = g.v_series(n);
        // Coefficients of v are bounded by 2 * mass (+|beta|), so the tail beyond n is
        // at most 2 (mass + |b|) |z|^{n+1} / (1 - |z|).
        const double c = 2.0 * (g.total_mass() + std::abs(g.b()));
        for (double r : {0.1, 0.3, 0.5}) {
            for (int j = 0; j < 12; ++j) {
                const cplx z = std::polar(r, two_pi * j / 12.0);
                EXPECT_NEAR(std::abs(g.v(z) + z * g.u(z)), 0.0, 1e-15);
                const double tail = c * std::pow(r, double(n + 1)) / (1.0 - r);
                EXPECT_LE(std::abs(eval(v, z) - g.v(z)), 1e-13 + tail);
            }
        }
    }
}
