// Probability measures on the unit circle, their moment sequences and K-transforms.
//
//   psi_mu(z) = sum_{k>=1} m_k z^k,      m_k = integral of x^k dmu(x),
//   K_mu(z)   = psi_mu(z) / (1 + psi_mu(z)),
//   psi       = K / (1 - K).
//
// A holomorphic K: D -> D is the K-transform of some measure iff K(0) = 0.

#ifndef MONOCONV_MEASURE_HPP
#define MONOCONV_MEASURE_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include <monoconv/error.hpp>
#include <monoconv/series.hpp>

namespace monoconv {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Canonical angle in [0, 2pi).
inline double canonical_angle(double angle)
{
    double a = std::fmod(angle, two_pi);
    if (a < 0.0)
        a += two_pi;
    if (a >= two_pi)
        a = 0.0;
    return a;
}

struct Atom {
    double angle = 0.0;  // radians
    double weight = 0.0;

    cplx point() const { return std::polar(1.0, angle); }
};

inline constexpr double weight_sum_tolerance = 1e-12;
inline constexpr double toeplitz_eigen_tolerance = -1e-9;

// Smallest eigenvalue of the Hermitian Toeplitz matrix T_{jk} = m_{j-k}, m_0 = 1,
// m_{-k} = conj(m_k), of size (size x size). Needs moments m_1..m_{size-1}.
inline double toeplitz_min_eigenvalue(std::span<const cplx> moments, std::size_t size)
{
    if (size == 0)
        return 1.0;
    if (moments.size() + 1 < size)
        detail::fail(Errc::order_exceeded, "Toeplitz matrix needs more moments");
    Eigen::MatrixXcd t(size, size);
    for (std::size_t j = 0; j < size; ++j) {
        for (std::size_t k = 0; k < size; ++k) {
            if (j == k)
                t(j, k) = 1.0;
            else if (j > k)
                t(j, k) = moments[j - k - 1];
            else
                t(j, k) = std::conj(moments[k - j - 1]);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(t, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

// PSD check of the Toeplitz matrix of the largest size the moments allow (K + 1 with K = N/2).
inline bool toeplitz_psd(std::span<const cplx> moments)
{
    const std::size_t k = moments.size() / 2;
    return toeplitz_min_eigenvalue(moments, k + 1) >= toeplitz_eigen_tolerance;
}

class CircleMeasure {
public:
    // Atomic measure. Weights must be non-negative and sum to 1 within 1e-12.
    static CircleMeasure atomic(std::vector<Atom> atoms)
    {
        if (atoms.empty())
            detail::fail(Errc::invalid_measure, "atomic measure needs at least one atom");
        double total = 0.0;
        for (auto& a : atoms) {
            if (!(a.weight >= 0.0) || !std::isfinite(a.angle))
                detail::fail(Errc::invalid_measure, "atom weights must be finite and non-negative");
            a.angle = canonical_angle(a.angle);
            total += a.weight;
        }
        if (std::abs(total - 1.0) > weight_sum_tolerance)
            detail::fail(Errc::invalid_measure, "weights sum to " + std::to_string(total) + ", not 1");
        return CircleMeasure(std::move(atoms));
    }

    // Moment-represented measure m_1..m_N. Checks |m_k| <= 1 and Toeplitz positivity.
    static CircleMeasure from_moments(std::vector<cplx> moments)
    {
        for (const auto& m : moments) {
            if (!std::isfinite(m.real()) || !std::isfinite(m.imag()) || std::abs(m) > 1.0 + 1e-12)
                detail::fail(Errc::invalid_measure, "moment outside the closed unit disk");
        }
        if (!toeplitz_psd(moments))
            detail::fail(Errc::invalid_measure, "moment sequence fails the Toeplitz positivity test");
        return CircleMeasure(std::move(moments));
    }

    static CircleMeasure dirac(double angle) { return atomic({{angle, 1.0}}); }

    // Haar measure, exactly: all moments vanish.
    static CircleMeasure haar(std::size_t order = default_order)
    {
        return CircleMeasure(std::vector<cplx>(order, cplx(0.0)));
    }

    // Equal atoms at the count-th roots of unity; reproduces Haar moments below order count.
    static CircleMeasure uniform_atoms(std::size_t count)
    {
        if (count == 0)
            detail::fail(Errc::invalid_measure, "need at least one atom");
        std::vector<Atom> atoms;
        atoms.reserve(count);
        for (std::size_t j = 0; j < count; ++j)
            atoms.push_back({two_pi * static_cast<double>(j) / static_cast<double>(count),
                             1.0 / static_cast<double>(count)});
        return CircleMeasure(std::move(atoms));
    }

    bool is_atomic() const noexcept { return std::holds_alternative<std::vector<Atom>>(repr_); }

    const std::vector<Atom>& atoms() const
    {
        if (!is_atomic())
            detail::fail(Errc::domain_error, "measure is moment-represented");
        return std::get<std::vector<Atom>>(repr_);
    }

    // Stored moments m_1..m_N of a moment-represented measure.
    const std::vector<cplx>& stored_moments() const
    {
        if (is_atomic())
            detail::fail(Errc::domain_error, "measure is atomic");
        return std::get<std::vector<cplx>>(repr_);
    }

    // Available moment order: unbounded (SIZE_MAX) for atomic measures.
    std::size_t moment_order() const noexcept
    {
        return is_atomic() ? static_cast<std::size_t>(-1) : std::get<std::vector<cplx>>(repr_).size();
    }

private:
    explicit CircleMeasure(std::vector<Atom> atoms) : repr_(std::move(atoms)) {}
    explicit CircleMeasure(std::vector<cplx> moments) : repr_(std::move(moments)) {}

    std::variant<std::vector<Atom>, std::vector<cplx>> repr_;
};

// m_1..m_n.
inline std::vector<cplx> moments(const CircleMeasure& mu, std::size_t n)
{
    if (n < 1)
        detail::fail(Errc::domain_error, "moment count must be at least 1");
    if (!mu.is_atomic()) {
        const auto& m = mu.stored_moments();
        if (n > m.size())
            detail::fail(Errc::order_exceeded, "requested " + std::to_string(n) + " moments, measure stores " +
                                                   std::to_string(m.size()));
        return {m.begin(), m.begin() + static_cast<std::ptrdiff_t>(n)};
    }
    std::vector<cplx> out(n, cplx(0.0));
    for (const auto& a : mu.atoms()) {
        for (std::size_t k = 1; k <= n; ++k)
            out[k - 1] += a.weight * std::polar(1.0, static_cast<double>(k) * a.angle);
    }
    return out;
}

// psi-series 0 + m_1 z + ... + m_n z^n.
inline TruncatedSeries psi_series(std::span<const cplx> moments)
{
    std::vector<cplx> c(moments.size() + 1, cplx(0.0));
    std::copy(moments.begin(), moments.end(), c.begin() + 1);
    return TruncatedSeries(std::move(c));
}

// K = psi / (1 + psi).
inline TruncatedSeries k_from_psi(const TruncatedSeries& psi)
{
    const auto one = TruncatedSeries::constant(1.0, psi.order());
    return divide(psi, one + psi);
}

// psi = K / (1 - K).
inline TruncatedSeries psi_from_k(const TruncatedSeries& k)
{
    const auto one = TruncatedSeries::constant(1.0, k.order());
    return divide(k, one - k);
}

enum class ClosedForm { none, dirac, haar, monomial };

// A holomorphic self-map of the disk with K(0) = 0, as a truncated series. When a
// closed form is known, eval() uses it instead of the truncated polynomial.
struct KTransform {
    TruncatedSeries series;
    ClosedForm closed_form = ClosedForm::none;
    double angle = 0.0;     // dirac: K(z) = e^{i angle} z
    std::size_t power = 0;  // monomial: K(z) = z^power

    static KTransform from_series(TruncatedSeries s) { return {std::move(s)}; }

    std::size_t order() const noexcept { return series.order(); }

    cplx eval(cplx z) const
    {
        switch (closed_form) {
        case ClosedForm::dirac: return std::polar(1.0, angle) * z;
        case ClosedForm::haar: return cplx(0.0);
        case ClosedForm::monomial: return std::pow(z, static_cast<int>(power));
        case ClosedForm::none: break;
        }
        return monoconv::eval(series, z);
    }

    cplx derivative_at(cplx z) const
    {
        switch (closed_form) {
        case ClosedForm::dirac: return std::polar(1.0, angle);
        case ClosedForm::haar: return cplx(0.0);
        case ClosedForm::monomial:
            return power == 0 ? cplx(0.0) : static_cast<double>(power) * std::pow(z, static_cast<int>(power) - 1);
        case ClosedForm::none: break;
        }
        return monoconv::eval(monoconv::derivative(series), z);
    }
};

inline KTransform k_transform(const CircleMeasure& mu, std::size_t n = default_order)
{
    if (mu.is_atomic() && mu.atoms().size() == 1) {
        const double angle = mu.atoms().front().angle;
        return {TruncatedSeries::monomial(1, n, std::polar(1.0, angle)), ClosedForm::dirac, angle};
    }
    const auto m = moments(mu, n);
    if (!mu.is_atomic() && std::all_of(m.begin(), m.end(), [](cplx x) { return x == cplx(0.0); }))
        return {TruncatedSeries(n), ClosedForm::haar};
    return KTransform::from_series(k_from_psi(psi_series(m)));
}

// Coefficients 1..n of K / (1 - K).
inline std::vector<cplx> measure_moments_from_k(const KTransform& k, std::size_t n)
{
    if (k.series[0] != cplx(0.0))
        detail::fail(Errc::not_a_k_transform, "K(0) must vanish");
    if (n < 1)
        detail::fail(Errc::domain_error, "moment count must be at least 1");
    const auto psi = psi_from_k(k.series.truncated(std::min(n, k.order())));
    if (psi.order() < n)
        detail::fail(Errc::order_exceeded, "K-transform truncated below the requested moment order");
    return {psi.coeffs().begin() + 1, psi.coeffs().begin() + 1 + static_cast<std::ptrdiff_t>(n)};
}

struct KValidation {
    bool k_at_zero_ok = false;
    bool schur_bound_ok = false;
    bool toeplitz_psd_ok = false;
    double k_at_zero = 0.0;         // |K(0)|
    double max_modulus = 0.0;       // max |K| on the validation grid
    double min_toeplitz_eigenvalue = 0.0;

    bool ok() const noexcept { return k_at_zero_ok && schur_bound_ok && toeplitz_psd_ok; }
};

// Validation grid r e^{i theta}, r in {0.3, 0.6, 0.9}, theta = 2 pi j / 64.
inline std::vector<cplx> schur_validation_grid()
{
    std::vector<cplx> grid;
    for (double r : {0.3, 0.6, 0.9})
        for (int j = 0; j < 64; ++j)
            grid.push_back(std::polar(r, two_pi * j / 64.0));
    return grid;
}

inline KValidation validate_k(const KTransform& k)
{
    KValidation v;
    v.k_at_zero = std::abs(k.eval(cplx(0.0)));
    v.k_at_zero_ok = v.k_at_zero <= 1e-12;

    for (const auto& z : schur_validation_grid())
        v.max_modulus = std::max(v.max_modulus, std::abs(k.eval(z)));
    v.schur_bound_ok = v.max_modulus < 1.0 + 1e-9;

    // Moments of K/(1-K); the constant term of 1 - K must not vanish.
    const auto one = TruncatedSeries::constant(1.0, k.order());
    const auto denom = one - k.series;
    if (std::abs(denom[0]) < 1e-300 || k.order() < 1) {
        v.toeplitz_psd_ok = false;
        v.min_toeplitz_eigenvalue = -std::numeric_limits<double>::infinity();
        return v;
    }
    const auto psi = divide(k.series, denom);
    std::vector<cplx> m(psi.coeffs().begin() + 1, psi.coeffs().end());
    const auto all_finite =
        std::all_of(m.begin(), m.end(), [](cplx x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); });
    if (!all_finite) {
        v.min_toeplitz_eigenvalue = -std::numeric_limits<double>::infinity();
        return v;
    }
    v.min_toeplitz_eigenvalue = toeplitz_min_eigenvalue(m, m.size() / 2 + 1);
    v.toeplitz_psd_ok = v.min_toeplitz_eigenvalue >= toeplitz_eigen_tolerance;
    return v;
}

// Poisson-kernel smoothing p(theta_j) = 1 + 2 sum_k Re(m_k r^k e^{-ik theta_j}),
// theta_j = 2 pi j / grid_size, as a density w.r.t. d theta / (2 pi).
inline std::vector<double> poisson_density(const CircleMeasure& mu, double r, std::size_t grid_size)
{
    if (!(r > 0.0 && r < 1.0))
        detail::fail(Errc::domain_error, "Poisson radius must lie in (0, 1)");
    if (grid_size == 0)
        detail::fail(Errc::domain_error, "grid must be non-empty");
    // Terms below r^k < 1e-17 do not change the result.
    auto n = static_cast<std::size_t>(std::ceil(std::log(1e-17) / std::log(r)));
    n = std::max<std::size_t>(n, 1);
    if (!mu.is_atomic())
        n = std::min(n, mu.moment_order());
    const auto m = n == 0 ? std::vector<cplx>{} : moments(mu, n);

    std::vector<double> p(grid_size);
    for (std::size_t j = 0; j < grid_size; ++j) {
        const double theta = two_pi * static_cast<double>(j) / static_cast<double>(grid_size);
        double acc = 1.0;
        double rk = 1.0;
        for (std::size_t k = 1; k <= m.size(); ++k) {
            rk *= r;
            acc += 2.0 * rk * (m[k - 1] * std::polar(1.0, -static_cast<double>(k) * theta)).real();
        }
        p[j] = acc;
    }
    return p;
}

} // namespace monoconv

#endif // MONOCONV_MEASURE_HPP
