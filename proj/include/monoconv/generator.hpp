// Generators of continuous monotone convolution semigroups.
//
// A generator is a holomorphic u on the disk with Re u >= 0; the semigroup K_t solves
// dK_t/dt = v(K_t) with v(z) = -z u(z) and K_0(z) = z. Every such u has the Herglotz form
//
//   u(z) = i b + integral (w + z)/(w - z) drho(w),
//
// with b real and rho a finite positive measure on the circle. HerglotzGenerator keeps
// rho atomic, plus an optional multiple of Haar measure whose contribution is the constant
// `uniform_mass` (all its higher Fourier coefficients vanish).

#ifndef MONOCONV_GENERATOR_HPP
#define MONOCONV_GENERATOR_HPP

#include <complex>
#include <concepts>
#include <cstddef>
#include <vector>

#include <monoconv/error.hpp>
#include <monoconv/measure.hpp>
#include <monoconv/series.hpp>

namespace monoconv {

// Anything that can drive the semigroup machinery.
template <typename G>
concept VectorField = requires(const G& g, cplx z, std::size_t n) {
    { g.u(z) } -> std::convertible_to<cplx>;
    { g.v(z) } -> std::convertible_to<cplx>;
    { g.beta() } -> std::convertible_to<cplx>;
    { g.v_series(n) } -> std::convertible_to<TruncatedSeries>;
};

class HerglotzGenerator {
public:
    HerglotzGenerator() = default;

    HerglotzGenerator(double b, std::vector<Atom> rho, double uniform_mass = 0.0)
        : b_(b), rho_(std::move(rho)), uniform_mass_(uniform_mass)
    {
        if (!std::isfinite(b_))
            detail::fail(Errc::invalid_generator, "b must be finite");
        if (!(uniform_mass_ >= 0.0) || !std::isfinite(uniform_mass_))
            detail::fail(Errc::invalid_generator, "uniform mass must be finite and non-negative");
        for (auto& a : rho_) {
            if (!(a.weight >= 0.0) || !std::isfinite(a.weight) || !std::isfinite(a.angle))
                detail::fail(Errc::invalid_generator, "rho weights must be finite and non-negative");
            a.angle = canonical_angle(a.angle);
        }
    }

    // u == c for real c >= 0.
    static HerglotzGenerator constant(double c) { return {0.0, {}, c}; }

    double b() const noexcept { return b_; }
    const std::vector<Atom>& rho() const noexcept { return rho_; }
    double uniform_mass() const noexcept { return uniform_mass_; }

    double total_mass() const noexcept
    {
        double m = uniform_mass_;
        for (const auto& a : rho_)
            m += a.weight;
        return m;
    }

    // u(0) = i b + rho(S^1).
    cplx beta() const noexcept { return {total_mass(), b_}; }

    cplx u(cplx z) const
    {
        if (!(std::abs(z) < 1.0))
            detail::fail(Errc::domain_error, "generator is defined on the open unit disk only");
        cplx acc(uniform_mass_, b_);
        for (const auto& a : rho_) {
            const cplx w = a.point();
            acc += a.weight * (w + z) / (w - z);
        }
        return acc;
    }

    cplx v(cplx z) const { return -z * u(z); }

    // u(z) = beta + sum_{k>=1} (2 sum_j w_j conj(omega_j)^k) z^k.
    BasicSeries<cplx> u_series(std::size_t n) const
    {
        std::vector<cplx> c(n + 1, cplx(0.0));
        c[0] = beta();
        for (const auto& a : rho_)
            for (std::size_t k = 1; k <= n; ++k)
                c[k] += 2.0 * a.weight * std::polar(1.0, -static_cast<double>(k) * a.angle);
        return BasicSeries<cplx>(std::move(c));
    }

    // v = -z u through order n.
    TruncatedSeries v_series(std::size_t n) const
    {
        const auto us = u_series(n == 0 ? 0 : n - 1);
        std::vector<cplx> c(n + 1, cplx(0.0));
        for (std::size_t k = 1; k <= n; ++k)
            c[k] = -us[k - 1];
        return TruncatedSeries(std::move(c));
    }

private:
    double b_ = 0.0;
    std::vector<Atom> rho_;
    double uniform_mass_ = 0.0;
};

static_assert(VectorField<HerglotzGenerator>);

inline cplx u_eval(const HerglotzGenerator& gen, cplx z) { return gen.u(z); }
inline cplx v_eval(const HerglotzGenerator& gen, cplx z) { return gen.v(z); }
inline TruncatedSeries v_field(const HerglotzGenerator& gen, std::size_t n) { return gen.v_series(n); }

} // namespace monoconv

#endif // MONOCONV_GENERATOR_HPP
