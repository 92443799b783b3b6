// Adaptive Dormand-Prince 5(4) integrator for a scalar complex ODE y' = f(y).
//
// The fields integrated here are autonomous (the semigroup vector field v), so the
// right-hand side takes only the state.

#ifndef MONOCONV_ODE_HPP
#define MONOCONV_ODE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>

#include <monoconv/error.hpp>

namespace monoconv::ode {

using cplx = std::complex<double>;

struct Options {
    double tol = 1e-10;               // absolute and relative local error tolerance
    std::size_t max_steps = 1'000'000;
    double initial_step = 1e-3;
};

struct Stats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

namespace detail {

// Dormand-Prince tableau.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b*, the embedded 4th-order error weights.
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;

} // namespace detail

// Integrates y' = rhs(y) from t = 0 to t = t_end (either sign) starting at y0.
template <typename Rhs>
cplx integrate(Rhs&& rhs, cplx y0, double t_end, const Options& opt = {}, Stats* stats = nullptr)
{
    using namespace detail;
    if (!(opt.tol > 0.0))
        monoconv::detail::fail(Errc::domain_error, "ODE tolerance must be positive");
    if (t_end == 0.0)
        return y0;

    const double dir = t_end > 0.0 ? 1.0 : -1.0;
    const double span = std::abs(t_end);
    const double h_min = 1e-14 * std::max(1.0, span);
    double t = 0.0;
    double h = std::min(opt.initial_step, span);
    cplx y = y0;
    cplx k1 = rhs(y);
    Stats local;

    while (t < span) {
        if (local.accepted + local.rejected >= opt.max_steps)
            monoconv::detail::fail(Errc::max_steps_exceeded,
                                   "ODE exceeded " + std::to_string(opt.max_steps) + " steps");
        if (t + h > span)
            h = span - t;
        const double hs = dir * h;

        const cplx k2 = rhs(y + hs * (a21 * k1));
        const cplx k3 = rhs(y + hs * (a31 * k1 + a32 * k2));
        const cplx k4 = rhs(y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
        const cplx k5 = rhs(y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const cplx k6 = rhs(y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const cplx y_new = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const cplx k7 = rhs(y_new);
        const cplx err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const double scale = opt.tol * (1.0 + std::max(std::abs(y), std::abs(y_new)));
        const double ratio = std::abs(err) / scale;

        if (ratio <= 1.0 && std::isfinite(ratio)) {
            t += h;
            y = y_new;
            k1 = k7;
            ++local.accepted;
            const double grow = ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
            h *= grow;
        } else {
            ++local.rejected;
            const double shrink = std::isfinite(ratio) ? std::clamp(0.9 * std::pow(ratio, -0.2), 0.1, 0.9) : 0.1;
            h *= shrink;
            if (h < h_min)
                monoconv::detail::fail(Errc::step_underflow,
                                       "ODE step size fell below " + std::to_string(h_min) + " at t = " +
                                           std::to_string(dir * t));
        }
    }
    if (stats)
        *stats = local;
    return y;
}

} // namespace monoconv::ode

#endif // MONOCONV_ODE_HPP
