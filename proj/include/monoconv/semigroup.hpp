// Continuous monotone convolution semigroups K_t, t >= 0.
//
// Two independent routes to K_t:
//   * evolve_pointwise integrates dK_t/dt = -K_t u(K_t), K_0(z) = z, at a single point;
//   * k_t_coefficients solves v(f(z)) = v(z) f'(z), f'(0) = e^{-t u(0)}, coefficient by
//     coefficient (this is the unique solution, and it equals K_t).

#ifndef MONOCONV_SEMIGROUP_HPP
#define MONOCONV_SEMIGROUP_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include <monoconv/error.hpp>
#include <monoconv/generator.hpp>
#include <monoconv/measure.hpp>
#include <monoconv/ode.hpp>
#include <monoconv/series.hpp>

namespace monoconv {

inline constexpr double default_ode_tol = 1e-10;

namespace detail {

template <VectorField G>
cplx flow_signed(const G& gen, double t, cplx z, double tol, std::size_t max_steps)
{
    ode::Options opt;
    opt.tol = tol;
    opt.max_steps = max_steps;
    return ode::integrate([&gen](cplx y) { return gen.v(y); }, z, t, opt);
}

} // namespace detail

template <VectorField G>
cplx evolve_pointwise(const G& gen, double t, cplx z, double tol = default_ode_tol,
                      std::size_t max_steps = 1'000'000)
{
    if (!(std::abs(z) < 1.0))
        detail::fail(Errc::domain_error, "evolution starts inside the open unit disk");
    if (!(t >= 0.0))
        detail::fail(Errc::domain_error, "semigroup time must be non-negative");
    const cplx k = detail::flow_signed(gen, t, z, tol, max_steps);
    if (!(std::abs(k) < 1.0))
        detail::fail(Errc::domain_error, "trajectory left the unit disk");
    return k;
}

// Grid values of K_t at caller-provided times (no interpolation between them).
struct SemigroupTrajectory {
    std::vector<double> times;
    std::vector<cplx> grid;
    std::vector<std::vector<cplx>> values;  // values[i][j] = K_{times[i]}(grid[j])
};

template <VectorField G>
SemigroupTrajectory evolve_trajectory(const G& gen, std::vector<double> times, std::vector<cplx> grid,
                                      double tol = default_ode_tol)
{
    if (!std::is_sorted(times.begin(), times.end()))
        detail::fail(Errc::domain_error, "trajectory times must be increasing");
    if (!times.empty() && !(times.front() >= 0.0))
        detail::fail(Errc::domain_error, "semigroup time must be non-negative");
    SemigroupTrajectory out{std::move(times), std::move(grid), {}};
    std::vector<cplx> current = out.grid;
    double t_prev = 0.0;
    for (double t : out.times) {
        for (auto& k : current)
            k = evolve_pointwise(gen, t - t_prev, k, tol);
        out.values.push_back(current);
        t_prev = t;
    }
    return out;
}

// Taylor coefficients f_1..f_n of K_t from the functional equation v(f) = v f'.
// Matching z^m gives v_1 (m-1) f_m = [z^m] sum_{j>=2} v_j f^j - sum_{j=2}^m v_j (m-j+1) f_{m-j+1},
// whose right side involves only f_1..f_{m-1}.
template <VectorField G>
TruncatedSeries k_t_coefficients(const G& gen, double t, std::size_t n = default_order)
{
    if (!(t >= 0.0))
        detail::fail(Errc::domain_error, "semigroup time must be non-negative");
    if (n < 1)
        detail::fail(Errc::domain_error, "coefficient order must be at least 1");
    const cplx beta = gen.beta();
    if (beta == cplx(0.0))
        detail::fail(Errc::unsupported_generator,
                     "coefficient recursion needs u(0) != 0; use evolve_pointwise instead");

    const auto v = gen.v_series(n);
    const cplx v1 = v[1];
    std::vector<cplx> higher(v.coeffs().begin(), v.coeffs().end());
    higher[1] = 0.0;  // v - v_1 z
    const TruncatedSeries v_high(std::move(higher));

    std::vector<cplx> f(n + 1, cplx(0.0));
    f[1] = std::exp(-t * beta);
    for (std::size_t m = 2; m <= n; ++m) {
        const TruncatedSeries partial(std::vector<cplx>(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(m) + 1));
        const cplx lhs = compose(v_high.truncated(m), partial)[m];
        cplx rhs(0.0);
        for (std::size_t j = 2; j <= m; ++j)
            rhs += v[j] * static_cast<double>(m - j + 1) * f[m - j + 1];
        f[m] = (lhs - rhs) / (v1 * static_cast<double>(m - 1));
    }
    return TruncatedSeries(std::move(f));
}

// max over the grid of |K_{s+t}(z) - K_s(K_t(z))|.
template <VectorField G>
double semigroup_defect(const G& gen, double s, double t, const std::vector<cplx>& grid,
                        double tol = default_ode_tol)
{
    if (!(s >= 0.0 && t >= 0.0))
        detail::fail(Errc::domain_error, "semigroup times must be non-negative");
    double worst = 0.0;
    for (const auto& z : grid) {
        const cplx direct = evolve_pointwise(gen, s + t, z, tol);
        const cplx composed = evolve_pointwise(gen, s, evolve_pointwise(gen, t, z, tol), tol);
        worst = std::max(worst, std::abs(direct - composed));
    }
    return worst;
}

using Flow = std::function<cplx(double, cplx)>;

// Flow (t, z) -> K_t(z) backed by the ODE; accepts small negative t for differencing.
template <VectorField G>
Flow ode_flow(const G& gen, double tol = default_ode_tol)
{
    return [gen, tol](double t, cplx z) { return detail::flow_signed(gen, t, z, tol, 1'000'000); };
}

// u(z) = -(1/z) d/dt K_t(z) at t = 0, by a central difference with step h.
inline cplx generator_from_flow(const Flow& flow, cplx z, double h)
{
    if (z == cplx(0.0))
        detail::fail(Errc::domain_error, "generator recovery needs z != 0");
    if (!(h > 0.0))
        detail::fail(Errc::domain_error, "difference step must be positive");
    const cplx dkdt = (flow(h, z) - flow(-h, z)) / (2.0 * h);
    return -dkdt / z;
}

struct FirstMoment {
    cplx computed;
    cplx predicted;  // e^{-t u(0)}
};

// The first moment of mu_t is K_t'(0) = e^{-t u(0)}. The computed value is fitted from ODE
// values on a small circle, so it does not share a code path with the prediction (the
// coefficient recursion starts from f_1 = e^{-t u(0)} by construction).
template <VectorField G>
FirstMoment first_moment_law(const G& gen, double t, double tol = 1e-12)
{
    if (!(t >= 0.0))
        detail::fail(Errc::domain_error, "semigroup time must be non-negative");
    const cplx predicted = std::exp(-t * gen.beta());

    // f_1 = (1/M) sum_j K_t(r w_j) / (r w_j); aliasing error is O(r^M).
    constexpr int points = 16;
    constexpr double radius = 0.1;
    cplx acc(0.0);
    for (int j = 0; j < points; ++j) {
        const cplx z = std::polar(radius, two_pi * j / points);
        acc += evolve_pointwise(gen, t, z, tol) / z;
    }
    return {acc / static_cast<double>(points), predicted};
}

} // namespace monoconv

#endif // MONOCONV_SEMIGROUP_HPP
