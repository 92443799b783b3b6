// Truncated power series c_0 + c_1 z + ... + c_N z^N.
//
// Every transform in the library (psi, K, v, u and the coefficient solutions f)
// is carried as one of these. The truncation order is part of the value: binary
// operations return a series of order min(N_f, N_g), and reading a coefficient
// beyond N throws instead of returning zero.

#ifndef MONOCONV_SERIES_HPP
#define MONOCONV_SERIES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <monoconv/error.hpp>

namespace monoconv {

using cplx = std::complex<double>;

inline constexpr std::size_t default_order = 32;

template <typename Scalar>
class BasicSeries {
public:
    using value_type = Scalar;

    // Zero series of the given order.
    explicit BasicSeries(std::size_t order = default_order) : coeffs_(order + 1, Scalar(0)) {}

    explicit BasicSeries(std::vector<Scalar> coeffs) : coeffs_(std::move(coeffs))
    {
        if (coeffs_.empty())
            detail::fail(Errc::domain_error, "series needs at least the constant coefficient");
    }

    static BasicSeries identity(std::size_t order) { return monomial(1, order); }

    static BasicSeries constant(Scalar c, std::size_t order)
    {
        BasicSeries s(order);
        s.coeffs_[0] = c;
        return s;
    }

    // coeff * z^power, truncated (so power > order yields zero).
    static BasicSeries monomial(std::size_t power, std::size_t order, Scalar coeff = Scalar(1))
    {
        BasicSeries s(order);
        if (power <= order)
            s.coeffs_[power] = coeff;
        return s;
    }

    std::size_t order() const noexcept { return coeffs_.size() - 1; }

    const Scalar& operator[](std::size_t k) const
    {
        if (k > order())
            detail::fail(Errc::order_exceeded,
                         "coefficient " + std::to_string(k) + " beyond order " + std::to_string(order()));
        return coeffs_[k];
    }

    std::span<const Scalar> coeffs() const noexcept { return coeffs_; }

    BasicSeries truncated(std::size_t order) const
    {
        if (order > this->order())
            detail::fail(Errc::order_exceeded, "cannot extend a truncated series");
        return BasicSeries(std::vector<Scalar>(coeffs_.begin(), coeffs_.begin() + order + 1));
    }

    friend bool operator==(const BasicSeries&, const BasicSeries&) = default;

private:
    std::vector<Scalar> coeffs_;
};

using TruncatedSeries = BasicSeries<cplx>;

namespace detail {

template <typename Scalar>
std::size_t common_order(const BasicSeries<Scalar>& f, const BasicSeries<Scalar>& g)
{
    return std::min(f.order(), g.order());
}

} // namespace detail

template <typename Scalar>
BasicSeries<Scalar> add(const BasicSeries<Scalar>& f, const BasicSeries<Scalar>& g)
{
    const auto n = detail::common_order(f, g);
    std::vector<Scalar> c(n + 1);
    for (std::size_t k = 0; k <= n; ++k)
        c[k] = f[k] + g[k];
    return BasicSeries<Scalar>(std::move(c));
}

template <typename Scalar>
BasicSeries<Scalar> sub(const BasicSeries<Scalar>& f, const BasicSeries<Scalar>& g)
{
    const auto n = detail::common_order(f, g);
    std::vector<Scalar> c(n + 1);
    for (std::size_t k = 0; k <= n; ++k)
        c[k] = f[k] - g[k];
    return BasicSeries<Scalar>(std::move(c));
}

template <typename Scalar>
BasicSeries<Scalar> scale(const BasicSeries<Scalar>& f, const Scalar& a)
{
    std::vector<Scalar> c(f.coeffs().begin(), f.coeffs().end());
    for (auto& x : c)
        x *= a;
    return BasicSeries<Scalar>(std::move(c));
}

// Cauchy product through the common order.
template <typename Scalar>
BasicSeries<Scalar> mul(const BasicSeries<Scalar>& f, const BasicSeries<Scalar>& g)
{
    const auto n = detail::common_order(f, g);
    const auto fc = f.coeffs();
    const auto gc = g.coeffs();
    std::vector<Scalar> c(n + 1, Scalar(0));
    for (std::size_t i = 0; i <= n; ++i) {
        if (fc[i] == Scalar(0))
            continue;
        for (std::size_t j = 0; i + j <= n; ++j)
            c[i + j] += fc[i] * gc[j];
    }
    return BasicSeries<Scalar>(std::move(c));
}

// 1/f through order N; requires f(0) != 0.
template <typename Scalar>
BasicSeries<Scalar> reciprocal(const BasicSeries<Scalar>& f)
{
    const auto fc = f.coeffs();
    if (fc[0] == Scalar(0))
        detail::fail(Errc::domain_error, "reciprocal of a series with zero constant term");
    const auto n = f.order();
    std::vector<Scalar> r(n + 1, Scalar(0));
    r[0] = Scalar(1) / fc[0];
    for (std::size_t k = 1; k <= n; ++k) {
        Scalar acc(0);
        for (std::size_t j = 1; j <= k; ++j)
            acc += fc[j] * r[k - j];
        r[k] = -acc * r[0];
    }
    return BasicSeries<Scalar>(std::move(r));
}

// f/g through the common order; requires g(0) != 0.
template <typename Scalar>
BasicSeries<Scalar> divide(const BasicSeries<Scalar>& f, const BasicSeries<Scalar>& g)
{
    return mul(f, reciprocal(g));
}

// Formal derivative. The result has order N-1 because c_{N+1} is unknown.
template <typename Scalar>
BasicSeries<Scalar> derivative(const BasicSeries<Scalar>& f)
{
    const auto n = f.order();
    if (n == 0)
        return BasicSeries<Scalar>(std::vector<Scalar>{Scalar(0)});
    std::vector<Scalar> c(n);
    for (std::size_t k = 1; k <= n; ++k)
        c[k - 1] = f[k] * Scalar(static_cast<int>(k));
    return BasicSeries<Scalar>(std::move(c));
}

// f o g through the common order, by Horner's scheme on series. g(0) must vanish,
// otherwise the coefficients of f o g depend on the discarded tail of f.
template <typename Scalar>
BasicSeries<Scalar> compose(const BasicSeries<Scalar>& f, const BasicSeries<Scalar>& g)
{
    if (g[0] != Scalar(0))
        detail::fail(Errc::domain_error, "inner series of a composition must have zero constant term");
    const auto n = detail::common_order(f, g);
    const auto fc = f.coeffs();
    const auto gc = g.coeffs();

    std::vector<Scalar> acc(n + 1, Scalar(0));
    std::vector<Scalar> next(n + 1);
    for (std::size_t i = n + 1; i-- > 0;) {
        // acc <- acc * g + f_i
        std::fill(next.begin(), next.end(), Scalar(0));
        for (std::size_t a = 0; a <= n; ++a) {
            if (acc[a] == Scalar(0))
                continue;
            for (std::size_t b = 1; a + b <= n; ++b)
                next[a + b] += acc[a] * gc[b];
        }
        next[0] += fc[i];
        acc.swap(next);
    }
    return BasicSeries<Scalar>(std::move(acc));
}

// Horner evaluation of the truncated polynomial. If |c_k| <= 1 for all k (true for
// the coefficients of K-transforms and of moment sequences), the discarded tail is
// bounded by |z|^{N+1} / (1 - |z|); see tail_bound().
template <typename Scalar, typename Point>
auto eval(const BasicSeries<Scalar>& f, const Point& z)
{
    using R = decltype(Scalar() * z);
    const auto c = f.coeffs();
    R acc(0);
    for (std::size_t i = c.size(); i-- > 0;)
        acc = acc * z + c[i];
    return acc;
}

// Geometric tail bound for series with coefficients bounded by 1 in modulus.
inline double tail_bound(double abs_z, std::size_t order)
{
    if (abs_z >= 1.0)
        return std::numeric_limits<double>::infinity();
    return std::pow(abs_z, static_cast<double>(order + 1)) / (1.0 - abs_z);
}

template <typename Scalar>
BasicSeries<Scalar> operator+(const BasicSeries<Scalar>& f, const BasicSeries<Scalar>& g) { return add(f, g); }
template <typename Scalar>
BasicSeries<Scalar> operator-(const BasicSeries<Scalar>& f, const BasicSeries<Scalar>& g) { return sub(f, g); }
template <typename Scalar>
BasicSeries<Scalar> operator*(const BasicSeries<Scalar>& f, const BasicSeries<Scalar>& g) { return mul(f, g); }

} // namespace monoconv

#endif // MONOCONV_SERIES_HPP
