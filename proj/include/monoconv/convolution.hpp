// Multiplicative monotone convolution: K_{mu |> nu} = K_mu o K_nu.

#ifndef MONOCONV_CONVOLUTION_HPP
#define MONOCONV_CONVOLUTION_HPP

#include <cstddef>
#include <vector>

#include <monoconv/measure.hpp>
#include <monoconv/series.hpp>

namespace monoconv {

// Moments of mu |> nu through order n, returned as a moment-represented measure.
inline CircleMeasure monotone_convolve(const CircleMeasure& mu, const CircleMeasure& nu,
                                       std::size_t n = default_order)
{
    const auto k_mu = k_transform(mu, n);
    const auto k_nu = k_transform(nu, n);
    const auto composed = KTransform::from_series(compose(k_mu.series, k_nu.series));
    return CircleMeasure::from_moments(measure_moments_from_k(composed, n));
}

// mu |> nu = integral dmu(x) (delta_x |> nu), for atomic mu. K_{delta_x |> nu} = x K_nu,
// so each term is a rotation of K_nu pushed back to moments.
inline CircleMeasure affine_mixture_convolve(const CircleMeasure& mu, const CircleMeasure& nu,
                                             std::size_t n = default_order)
{
    if (!mu.is_atomic())
        detail::fail(Errc::domain_error, "affine mixture needs an atomic first argument");
    const auto k_nu = k_transform(nu, n).series;
    std::vector<cplx> out(n, cplx(0.0));
    for (const auto& atom : mu.atoms()) {
        const auto rotated = KTransform::from_series(scale(k_nu, atom.point()));
        const auto m = measure_moments_from_k(rotated, n);
        for (std::size_t k = 0; k < n; ++k)
            out[k] += atom.weight * m[k];
    }
    return CircleMeasure::from_moments(std::move(out));
}

} // namespace monoconv

#endif // MONOCONV_CONVOLUTION_HPP
