// Embeddability of a K-transform into a continuous monotone convolution semigroup.
//
// A measure mu that is not a point mass embeds iff K_mu' does not vanish on the disk and
//
//   r_n(z) = -K^n(z) / (K^n)'(z)
//
// converges locally uniformly to a limit of the form alpha z u(z), with Re u >= 0 and
// K_mu'(0) = e^{-t0 u(0)} for some t0 >= 0. For an embedded K = K_{t0} the limit is
// -z u(z)/u(0), so u~(z) = -r_inf(z)/z is the generator normalized to u~(0) = 1.
//
// Numerically, "locally uniform" becomes a Cauchy criterion on a finite grid, and the
// disk-wide conditions are checked on that grid only.

#ifndef MONOCONV_EMBEDDING_HPP
#define MONOCONV_EMBEDDING_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include <monoconv/error.hpp>
#include <monoconv/generator.hpp>
#include <monoconv/measure.hpp>
#include <monoconv/series.hpp>

namespace monoconv {

enum class EmbeddingReason { ok, derivative_vanishes, limit_diverges, positivity_fails, dirac_special_case };

constexpr std::string_view to_string(EmbeddingReason r) noexcept
{
    switch (r) {
    case EmbeddingReason::ok: return "ok";
    case EmbeddingReason::derivative_vanishes: return "derivative_vanishes";
    case EmbeddingReason::limit_diverges: return "limit_diverges";
    case EmbeddingReason::positivity_fails: return "positivity_fails";
    case EmbeddingReason::dirac_special_case: return "dirac_special_case";
    }
    return "unknown";
}

// One solution of beta * t0 = -log K'(0) + 2 pi i index, normalized to |beta| = 1.
struct BranchCandidate {
    int index = 0;
    cplx beta;
    double t0 = 0.0;
    double min_re = 0.0;  // min over the grid of Re(beta * u~)
};

struct EmbeddingVerdict {
    bool embeddable = false;
    EmbeddingReason reason = EmbeddingReason::limit_diverges;
    std::vector<cplx> grid;
    std::vector<cplx> u_tilde;       // normalized generator on the grid, u~(0) = 1
    cplx u_origin_estimate{0.0};     // extrapolated -r_inf(z)/z at z = 0, before normalization
    std::optional<double> t0;
    std::optional<cplx> beta;
    int branch_index = 0;
    std::size_t iterations = 0;
    double cauchy_residual = 0.0;
    std::vector<BranchCandidate> branches;  // every branch that passed the positivity check
};

struct EmbeddingOptions {
    std::size_t max_iter = 1000;
    double conv_tol = 1e-12;
    double derivative_threshold = 1e-9;
    double positivity_tol = 1e-6;
    int max_branch = 8;
};

// 24 points: radii {0.2, 0.4, 0.6} times the 8th roots of unity.
inline std::vector<cplx> default_embedding_grid()
{
    std::vector<cplx> grid;
    for (double r : {0.2, 0.4, 0.6})
        for (int j = 0; j < 8; ++j)
            grid.push_back(std::polar(r, two_pi * j / 8.0));
    return grid;
}

// Point masses delta_{e^{i phi}} embed into the countable family
// mu_t^{(k)} = delta_{e^{i t (phi + 2 pi k)}}, k in Z.
struct DiracFamily {
    double angle = 0.0;

    double rate(int k) const noexcept { return angle + two_pi * k; }
    cplx k_t(int k, double t, cplx z) const { return std::polar(1.0, t * rate(k)) * z; }
    // u == -i rate, i.e. b = -rate and rho = 0.
    HerglotzGenerator generator(int k) const { return {-rate(k), {}}; }
};

inline DiracFamily dirac_embedding(double angle) { return {canonical_angle(angle)}; }

namespace detail {

// Mean of g over each ring of equal radius, extrapolated to radius 0. The ring mean of a
// holomorphic function over m equally spaced points is g(0) + O(r^m), so the extrapolation
// runs in the variable s = r^m, with m the smallest ring size.
inline cplx extrapolate_to_origin(const std::vector<cplx>& grid, const std::vector<cplx>& values)
{
    std::map<double, std::pair<cplx, std::size_t>> rings;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = std::abs(grid[i]);
        auto it = std::find_if(rings.begin(), rings.end(),
                               [r](const auto& kv) { return std::abs(kv.first - r) <= 1e-12 * std::max(1.0, r); });
        if (it == rings.end())
            it = rings.emplace(r, std::pair<cplx, std::size_t>{cplx(0.0), 0}).first;
        it->second.first += values[i];
        ++it->second.second;
    }
    std::size_t m = static_cast<std::size_t>(-1);
    for (const auto& [r, acc] : rings)
        m = std::min(m, acc.second);

    std::vector<double> s;
    std::vector<cplx> mean;
    for (const auto& [r, acc] : rings) {
        if (s.size() == 3)
            break;
        s.push_back(std::pow(r, static_cast<double>(m)));
        mean.push_back(acc.first / static_cast<double>(acc.second));
    }
    // Lagrange interpolation evaluated at s = 0.
    cplx result(0.0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        double weight = 1.0;
        for (std::size_t j = 0; j < s.size(); ++j)
            if (j != i)
                weight *= s[j] / (s[j] - s[i]);
        result += weight * mean[i];
    }
    return result;
}

} // namespace detail

inline EmbeddingVerdict embedding_test(const KTransform& k, const std::vector<cplx>& grid,
                                       const EmbeddingOptions& opt = {})
{
    if (grid.empty())
        detail::fail(Errc::domain_error, "embedding grid must be non-empty");
    for (const auto& z : grid)
        if (!(std::abs(z) > 0.0 && std::abs(z) < 1.0))
            detail::fail(Errc::domain_error, "embedding grid points must satisfy 0 < |z| < 1");
    if (std::abs(k.series[0]) > 1e-12)
        detail::fail(Errc::not_a_k_transform, "K(0) must vanish");

    EmbeddingVerdict verdict;
    verdict.grid = grid;
    const cplx slope = k.derivative_at(cplx(0.0));

    // Point mass: K(z) = e^{i phi} z (|K'(0)| = 1 forces a rotation).
    if (k.closed_form == ClosedForm::dirac || std::abs(std::abs(slope) - 1.0) <= 1e-12) {
        const auto family = dirac_embedding(std::arg(slope));
        verdict.embeddable = true;
        verdict.reason = EmbeddingReason::dirac_special_case;
        verdict.u_tilde.assign(grid.size(), cplx(1.0));
        verdict.u_origin_estimate = 1.0;
        verdict.t0 = 1.0;
        verdict.beta = cplx(0.0, -family.rate(0));
        return verdict;
    }

    const auto& kc = k.series.coeffs();
    const auto dk = derivative(k.series);
    // K(w)/w from the shifted coefficients, so the ratio stays well defined as w -> 0.
    const TruncatedSeries k_over_z(std::vector<cplx>(kc.begin() + 1, kc.end()));

    if (std::abs(slope) <= opt.derivative_threshold) {
        verdict.reason = EmbeddingReason::derivative_vanishes;
        return verdict;
    }
    for (const auto& z : grid) {
        if (std::abs(eval(dk, z)) <= opt.derivative_threshold) {
            verdict.reason = EmbeddingReason::derivative_vanishes;
            return verdict;
        }
    }

    // r_{n+1}(z) = r_n(z) * K(w_n) / (w_n K'(w_n)),  w_n = K^n(z),  r_0(z) = -z.
    std::vector<cplx> w = grid;
    std::vector<cplx> r(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        r[i] = -grid[i];

    bool converged = false;
    for (std::size_t n = 1; n <= opt.max_iter; ++n) {
        double residual = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const cplx d = eval(dk, w[i]);
            if (std::abs(d) <= opt.derivative_threshold) {
                verdict.reason = EmbeddingReason::derivative_vanishes;
                verdict.iterations = n;
                return verdict;
            }
            const cplx next = r[i] * eval(k_over_z, w[i]) / d;
            const cplx w_next = eval(k.series, w[i]);
            // An orbit that leaves the disk (or overflows) has no limit to offer.
            if (!std::isfinite(std::abs(next)) || !(std::abs(w_next) < 1.0)) {
                residual = std::numeric_limits<double>::infinity();
                break;
            }
            residual = std::max(residual, std::abs(next - r[i]));
            r[i] = next;
            w[i] = w_next;
        }
        verdict.iterations = n;
        verdict.cauchy_residual = residual;
        if (!std::isfinite(residual))
            break;
        if (residual < opt.conv_tol) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        verdict.reason = EmbeddingReason::limit_diverges;
        return verdict;
    }

    std::vector<cplx> g(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        g[i] = -r[i] / grid[i];
    verdict.u_origin_estimate = detail::extrapolate_to_origin(grid, g);
    if (!std::isfinite(std::abs(verdict.u_origin_estimate)) || std::abs(verdict.u_origin_estimate) == 0.0) {
        verdict.reason = EmbeddingReason::limit_diverges;
        return verdict;
    }
    verdict.u_tilde.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        verdict.u_tilde[i] = g[i] / verdict.u_origin_estimate;

    // beta t0 = -log K'(0) + 2 pi i j; the scale between beta and t0 is fixed by |beta| = 1.
    const cplx principal = -std::log(slope);
    std::vector<int> order{0};
    for (int j = 1; j <= opt.max_branch; ++j) {
        order.push_back(j);
        order.push_back(-j);
    }
    for (int j : order) {
        const cplx log_value = principal + cplx(0.0, two_pi * j);
        const double t0 = std::abs(log_value);
        const cplx beta = log_value / t0;
        double min_re = std::numeric_limits<double>::infinity();
        for (const auto& ut : verdict.u_tilde) {
            const double re = (beta * ut).real();
            min_re = std::isfinite(re) ? std::min(min_re, re) : -std::numeric_limits<double>::infinity();
        }
        if (min_re >= -opt.positivity_tol)
            verdict.branches.push_back({j, beta, t0, min_re});
    }
    if (verdict.branches.empty()) {
        verdict.reason = EmbeddingReason::positivity_fails;
        return verdict;
    }
    const auto& chosen = verdict.branches.front();
    verdict.embeddable = true;
    verdict.reason = EmbeddingReason::ok;
    verdict.t0 = chosen.t0;
    verdict.beta = chosen.beta;
    verdict.branch_index = chosen.index;
    return verdict;
}

inline EmbeddingVerdict embedding_test(const KTransform& k, std::size_t max_iter = 1000,
                                       const std::vector<cplx>& grid = default_embedding_grid(),
                                       double conv_tol = 1e-12)
{
    EmbeddingOptions opt;
    opt.max_iter = max_iter;
    opt.conv_tol = conv_tol;
    return embedding_test(k, grid, opt);
}

} // namespace monoconv

#endif // MONOCONV_EMBEDDING_HPP
