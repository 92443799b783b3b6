// Galton-Watson processes and continuous-time branching as composition semigroups.
//
// The generating function phi(z) = E z^X of the offspring law iterates under
// composition: E z^{Y_n} = phi^n(z). With p_0 = 0, phi(0) = 0 and phi is the K-transform
// of a probability measure on the circle.

#ifndef MONOCONV_BRANCHING_HPP
#define MONOCONV_BRANCHING_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <monoconv/error.hpp>
#include <monoconv/generator.hpp>
#include <monoconv/measure.hpp>
#include <monoconv/series.hpp>

namespace monoconv {

inline constexpr std::size_t max_offspring = 64;
inline constexpr std::uint64_t population_cap = 10'000'000;

class OffspringLaw {
public:
    explicit OffspringLaw(std::vector<double> p) : p_(std::move(p))
    {
        if (p_.empty() || p_.size() > max_offspring + 1)
            detail::fail(Errc::invalid_measure,
                         "offspring law needs between 1 and " + std::to_string(max_offspring + 1) + " entries");
        double total = 0.0;
        for (double x : p_) {
            if (!(x >= 0.0) || !std::isfinite(x))
                detail::fail(Errc::invalid_measure, "offspring probabilities must be non-negative");
            total += x;
        }
        if (std::abs(total - 1.0) > weight_sum_tolerance)
            detail::fail(Errc::invalid_measure, "offspring probabilities sum to " + std::to_string(total));
    }

    const std::vector<double>& p() const noexcept { return p_; }

    cplx pgf(cplx z) const
    {
        cplx acc(0.0);
        for (std::size_t m = p_.size(); m-- > 0;)
            acc = acc * z + p_[m];
        return acc;
    }

    // phi^n(z).
    cplx iterate(cplx z, std::size_t n) const
    {
        for (std::size_t i = 0; i < n; ++i)
            z = pgf(z);
        return z;
    }

    TruncatedSeries series(std::size_t order) const
    {
        std::vector<cplx> c(order + 1, cplx(0.0));
        for (std::size_t m = 0; m < p_.size() && m <= order; ++m)
            c[m] = p_[m];
        return TruncatedSeries(std::move(c));
    }

private:
    std::vector<double> p_;
};

// Infinitesimal offspring rates lambda_j >= 0 (j >= 2) of a continuous-time branching
// process with extinction probability 0:
//   v(z) = sum_j lambda_j z^j - alpha z,   u(z) = alpha - sum_j lambda_j z^{j-1},
// alpha = sum_j lambda_j. Re u >= 0 on the disk holds here since |z^{j-1}| < 1.
class BranchingGenerator {
public:
    BranchingGenerator() = default;

    explicit BranchingGenerator(std::map<std::size_t, double> rates) : rates_(std::move(rates))
    {
        for (const auto& [j, lambda] : rates_) {
            if (j < 2 || j > max_offspring)
                detail::fail(Errc::invalid_generator, "offspring rate index must lie in [2, 64]");
            if (!(lambda >= 0.0) || !std::isfinite(lambda))
                detail::fail(Errc::invalid_generator, "offspring rates must be finite and non-negative");
            alpha_ += lambda;
        }
    }

    // Yule process: each individual is replaced by k after an Exp(alpha) time.
    static BranchingGenerator yule(double alpha, std::size_t k) { return BranchingGenerator({{k, alpha}}); }

    const std::map<std::size_t, double>& rates() const noexcept { return rates_; }
    double alpha() const noexcept { return alpha_; }
    cplx beta() const noexcept { return alpha_; }

    cplx u(cplx z) const
    {
        cplx acc(alpha_);
        for (const auto& [j, lambda] : rates_)
            acc -= lambda * std::pow(z, static_cast<int>(j) - 1);
        return acc;
    }

    cplx v(cplx z) const { return -z * u(z); }

    TruncatedSeries v_series(std::size_t n) const
    {
        std::vector<cplx> c(n + 1, cplx(0.0));
        if (n >= 1)
            c[1] = -alpha_;
        for (const auto& [j, lambda] : rates_)
            if (j <= n)
                c[j] += lambda;
        return TruncatedSeries(std::move(c));
    }

private:
    std::map<std::size_t, double> rates_;
    double alpha_ = 0.0;
};

static_assert(VectorField<BranchingGenerator>);

inline TruncatedSeries gw_vector_field(const BranchingGenerator& gen, std::size_t n = default_order)
{
    return gen.v_series(n);
}

// phi_t(z) = z e^{-alpha t} / (1 - (1 - e^{-alpha (k-1) t}) z^{k-1})^{1/(k-1)}, principal root.
// For |z| < 1 the radicand has positive real part, so the branch is continuous in t.
inline cplx yule_closed_form(double alpha, std::size_t k, double t, cplx z)
{
    if (!(alpha > 0.0))
        detail::fail(Errc::domain_error, "Yule rate must be positive");
    if (k < 2)
        detail::fail(Errc::domain_error, "Yule offspring count must be at least 2");
    const double km1 = static_cast<double>(k - 1);
    const double s = -std::expm1(-alpha * km1 * t);
    const cplx radicand = 1.0 - s * std::pow(z, static_cast<int>(k - 1));
    return z * std::exp(-alpha * t) / std::pow(radicand, 1.0 / km1);
}

struct GwEstimate {
    cplx z;
    cplx empirical;  // mean of z^{Y_n}
    double std_error;  // sqrt(Var Re + Var Im) / sqrt(trials)
    cplx theory;     // phi^n(z)
};

namespace detail {

inline cplx ipow(cplx z, std::uint64_t e)
{
    cplx result(1.0);
    while (e > 0) {
        if (e & 1U)
            result *= z;
        z *= z;
        e >>= 1U;
    }
    return result;
}

inline std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t trial)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
    return std::mt19937_64(seq);
}

} // namespace detail

// Population Y_n of one trajectory started from Y_0 = 1. The engine is derived from
// (seed, trial) alone, so trials can run in any order with identical results.
inline std::uint64_t gw_population(const OffspringLaw& law, std::size_t n_steps, std::uint64_t seed,
                                   std::uint64_t trial)
{
    auto engine = detail::trial_engine(seed, trial);
    std::discrete_distribution<std::size_t> offspring(law.p().begin(), law.p().end());
    std::uint64_t y = 1;
    for (std::size_t step = 0; step < n_steps && y > 0; ++step) {
        std::uint64_t next = 0;
        for (std::uint64_t i = 0; i < y; ++i) {
            next += offspring(engine);
            if (next > population_cap)
                detail::fail(Errc::population_overflow, "population exceeded " + std::to_string(population_cap) +
                                                    " in trial " + std::to_string(trial));
        }
        y = next;
    }
    return y;
}

// Monte-Carlo estimate of E z^{Y_n} for each sample point. Under the CLT the statistic
// |empirical - phi^n(z)| / stderr is approximately |N(0,1)| for real z, so the 4-sigma
// check gw_within_sigma fails spuriously with probability about 6e-5 per real point
// (about 3.4e-4 per complex point with isotropic fluctuations).
inline std::vector<GwEstimate> gw_simulate(const OffspringLaw& law, std::size_t n_steps, std::size_t trials,
                                           const std::vector<cplx>& z_samples, std::uint64_t seed)
{
    if (trials < 1)
        detail::fail(Errc::domain_error, "need at least one trial");
    for (const auto& z : z_samples)
        if (!(std::abs(z) <= 1.0))
            detail::fail(Errc::domain_error, "sample points must lie in the closed unit disk");

    // Welford updates; for complex samples M2 accumulates Re((x - mean_old) conj(x - mean_new)).
    const std::size_t nz = z_samples.size();
    std::vector<cplx> mean(nz, cplx(0.0));
    std::vector<double> m2(nz, 0.0);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const auto y = gw_population(law, n_steps, seed, trial);
        const double count = static_cast<double>(trial + 1);
        for (std::size_t i = 0; i < nz; ++i) {
            const cplx w = detail::ipow(z_samples[i], y);
            const cplx delta = w - mean[i];
            mean[i] += delta / count;
            m2[i] += (delta * std::conj(w - mean[i])).real();
        }
    }

    std::vector<GwEstimate> out;
    out.reserve(nz);
    const double count = static_cast<double>(trials);
    for (std::size_t i = 0; i < nz; ++i) {
        const double var = trials > 1 ? std::max(0.0, m2[i] / (count - 1.0)) : 0.0;
        out.push_back({z_samples[i], mean[i], std::sqrt(var / count), law.iterate(z_samples[i], n_steps)});
    }
    return out;
}

// |empirical - theory| <= sigmas * stderr, with a 1e-12 floor for deterministic laws.
inline bool gw_within_sigma(const GwEstimate& e, double sigmas = 4.0)
{
    return std::abs(e.empirical - e.theory) <= sigmas * e.std_error + 1e-12;
}

// phi as a K-transform; requires p_0 = 0.
inline KTransform gw_k_link(const OffspringLaw& law, std::size_t order = default_order)
{
    if (law.p()[0] != 0.0)
        detail::fail(Errc::not_a_k_transform, "p_0 > 0 gives phi(0) != 0");
    return KTransform::from_series(law.series(order));
}

} // namespace monoconv

#endif // MONOCONV_BRANCHING_HPP
