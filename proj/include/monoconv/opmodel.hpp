// Finite-dimensional matrix models of monotone independence.
//
// A MatrixModel is a quantum probability space (H, Omega) with H = C^dim and named
// operators; Phi(X) = <Omega, X Omega>. The monotone product of two models lives on
// H1 (x) H2 with Omega = Omega1 (x) Omega2, J1(X) = X (x) P2 and J2(Y) = 1 (x) Y, where
// P2 projects onto C Omega2.

#ifndef MONOCONV_OPMODEL_HPP
#define MONOCONV_OPMODEL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include <monoconv/error.hpp>
#include <monoconv/measure.hpp>

namespace monoconv {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline Matrix kron(const Matrix& a, const Matrix& b)
{
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline Vector kron(const Vector& a, const Vector& b)
{
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

// Largest singular value by power iteration on X^* X, to relative tolerance tol.
inline double spectral_norm_estimate(const Matrix& x, double tol = 1e-6, int max_iter = 10'000)
{
    if (x.size() == 0)
        return 0.0;
    const Matrix gram = x.adjoint() * x;
    Vector v = Vector::Ones(x.cols()) / std::sqrt(static_cast<double>(x.cols()));
    // A fixed non-symmetric start avoids being orthogonal to the top singular vector.
    for (Eigen::Index i = 0; i < v.size(); ++i)
        v(i) += cplx(0.01 * static_cast<double>(i + 1), 0.003 * static_cast<double>(i));
    v.normalize();
    double lambda = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Vector w = gram * v;
        const double next = w.norm();
        if (next == 0.0)
            return 0.0;
        v = w / next;
        if (std::abs(next - lambda) <= tol * next) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    return std::sqrt(lambda);
}

inline bool is_unitary(const Matrix& x, double tol = 1e-10)
{
    return x.rows() == x.cols() &&
           (x.adjoint() * x - Matrix::Identity(x.rows(), x.cols())).cwiseAbs().maxCoeff() <= tol;
}

// Principal square root of a Hermitian positive semidefinite matrix via its eigendecomposition.
inline Matrix sqrtm_psd(const Matrix& x)
{
    Eigen::SelfAdjointEigenSolver<Matrix> solver(x);
    if (solver.info() != Eigen::Success)
        detail::fail(Errc::singular_system, "eigendecomposition failed");
    const auto& ev = solver.eigenvalues();
    if (ev.minCoeff() < -1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff()))
        detail::fail(Errc::domain_error, "matrix square root needs a positive semidefinite matrix");
    const Eigen::VectorXd root = ev.cwiseMax(0.0).cwiseSqrt();
    return solver.eigenvectors() * root.cast<cplx>().asDiagonal() * solver.eigenvectors().adjoint();
}

// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases of R removed.
template <typename Rng>
Matrix random_unitary(Eigen::Index dim, Rng& rng)
{
    std::normal_distribution<double> gauss;
    Matrix g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j)
            g(i, j) = cplx(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < dim; ++j) {
        const cplx d = r(j, j);
        if (std::abs(d) > 0.0)
            q.col(j) *= d / std::abs(d);
    }
    return q;
}

template <typename Rng>
Matrix random_gaussian_matrix(Eigen::Index dim, Rng& rng)
{
    std::normal_distribution<double> gauss;
    Matrix g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j)
            g(i, j) = cplx(gauss(rng), gauss(rng));
    return g;
}

template <typename Rng>
Vector random_unit_vector(Eigen::Index dim, Rng& rng)
{
    std::normal_distribution<double> gauss;
    Vector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        v(i) = cplx(gauss(rng), gauss(rng));
    return v.normalized();
}

class MatrixModel {
public:
    explicit MatrixModel(Vector state) : state_(std::move(state))
    {
        if (state_.size() == 0 || std::abs(state_.norm() - 1.0) > 1e-12)
            detail::fail(Errc::domain_error, "state vector must have unit norm");
    }

    Eigen::Index dim() const noexcept { return state_.size(); }
    const Vector& state() const noexcept { return state_; }

    MatrixModel& add(const std::string& name, Matrix op)
    {
        if (op.rows() != dim() || op.cols() != dim())
            detail::fail(Errc::domain_error, "operator '" + name + "' has the wrong dimension");
        ops_[name] = std::move(op);
        return *this;
    }

    bool has(const std::string& name) const { return ops_.count(name) != 0; }

    const Matrix& op(const std::string& name) const
    {
        const auto it = ops_.find(name);
        if (it == ops_.end())
            detail::fail(Errc::domain_error, "unknown operator '" + name + "'");
        return it->second;
    }

    const std::map<std::string, Matrix>& ops() const noexcept { return ops_; }

    // Phi(X) = <Omega, X Omega>.
    cplx phi(const Matrix& x) const { return state_.dot(x * state_); }

private:
    Vector state_;
    std::map<std::string, Matrix> ops_;
};

// Monotone product model, with the factor data needed to test membership in J1/J2 images.
struct MonotoneProduct {
    MatrixModel model;
    Eigen::Index left_dim = 0;
    Eigen::Index right_dim = 0;
    Vector right_state;
    std::vector<std::string> left_names;
    std::vector<std::string> right_names;

    Matrix right_projection() const { return right_state * right_state.adjoint(); }

    // X (x) P2.
    Matrix lift_left(const Matrix& x) const { return kron(x, right_projection()); }
    // 1 (x) Y.
    Matrix lift_right(const Matrix& y) const { return kron(Matrix::Identity(left_dim, left_dim), y); }

    Matrix identity() const { return Matrix::Identity(model.dim(), model.dim()); }

    // M = X (x) P2 for some X, i.e. M = (1 (x) P2) M (1 (x) P2).
    bool in_left_image(const Matrix& m, double tol = 1e-10) const
    {
        const Matrix q = lift_right(right_projection());
        return (q * m * q - m).cwiseAbs().maxCoeff() <= tol * std::max(1.0, m.cwiseAbs().maxCoeff());
    }

    // M = c 1 + X (x) P2.
    bool in_unit_plus_left_image(const Matrix& m, double tol = 1e-10) const
    {
        const Matrix q = lift_right(right_projection());
        const Matrix complement = identity() - q;
        // c is read off the complement block, where X (x) P2 vanishes. With a
        // one-dimensional right factor the complement is empty and c = 0 will do.
        const double complement_dim = complement.trace().real();
        const cplx c = complement_dim > 0.5 ? (complement * m * complement).trace() / complement_dim : cplx(0.0);
        return in_left_image(m - c * identity(), tol);
    }

    // M = 1 (x) Y: every diagonal block equal, off-diagonal blocks zero.
    bool in_right_image(const Matrix& m, double tol = 1e-10) const
    {
        const Matrix y = m.block(0, 0, right_dim, right_dim);
        return (m - lift_right(y)).cwiseAbs().maxCoeff() <= tol * std::max(1.0, m.cwiseAbs().maxCoeff());
    }
};

inline MonotoneProduct monotone_product(const MatrixModel& m1, const MatrixModel& m2)
{
    MonotoneProduct out{MatrixModel(kron(m1.state(), m2.state())), m1.dim(), m2.dim(), m2.state(), {}, {}};
    for (const auto& [name, x] : m1.ops()) {
        if (m2.has(name))
            detail::fail(Errc::domain_error, "operator name '" + name + "' occurs in both factors");
        out.model.add(name, out.lift_left(x));
        out.left_names.push_back(name);
    }
    for (const auto& [name, y] : m2.ops()) {
        out.model.add(name, out.lift_right(y));
        out.right_names.push_back(name);
    }
    return out;
}

namespace detail {

// Random element of the (non-unital) algebra generated by the named operators: a random
// combination of random words of length 1..max_len.
template <typename Rng>
Matrix random_algebra_element(const MatrixModel& model, const std::vector<std::string>& names, std::size_t max_len,
                              Rng& rng)
{
    Matrix out = Matrix::Zero(model.dim(), model.dim());
    std::uniform_int_distribution<std::size_t> pick(0, names.size() - 1);
    std::uniform_int_distribution<std::size_t> len(1, std::max<std::size_t>(1, max_len));
    std::normal_distribution<double> gauss;
    for (int term = 0; term < 3; ++term) {
        Matrix word = model.op(names[pick(rng)]);
        const auto l = len(rng);
        for (std::size_t i = 1; i < l; ++i)
            word = word * model.op(names[pick(rng)]);
        out += cplx(gauss(rng), gauss(rng)) * word;
    }
    return out;
}

inline double operator_norm(const Matrix& m)
{
    if (m.size() == 0)
        return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

} // namespace detail

// Max defect of the two monotone independence conditions over random algebra elements:
//   (a) ||X Y Z - Phi(Y) X Z||         X, Z in alg(left), Y in alg(right)
//   (b) |Phi(X Y Z) - Phi(X)Phi(Y)Phi(Z)|   Y in alg(left), X, Z in alg(right)
inline double check_monotone_independence(const MatrixModel& model, const std::vector<std::string>& left_ops,
                                          const std::vector<std::string>& right_ops, std::size_t word_len,
                                          std::uint64_t seed = 1, std::size_t samples = 64)
{
    for (const auto& n : left_ops)
        (void)model.op(n);
    for (const auto& n : right_ops)
        (void)model.op(n);
    if (left_ops.empty() || right_ops.empty())
        return 0.0;
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        const Matrix x = detail::random_algebra_element(model, left_ops, word_len, rng);
        const Matrix y = detail::random_algebra_element(model, right_ops, word_len, rng);
        const Matrix z = detail::random_algebra_element(model, left_ops, word_len, rng);
        const double scale_a = std::max(1.0, detail::operator_norm(x) * detail::operator_norm(y) *
                                                 detail::operator_norm(z));
        worst = std::max(worst, detail::operator_norm(x * y * z - model.phi(y) * x * z) / scale_a);

        const Matrix yl = detail::random_algebra_element(model, left_ops, word_len, rng);
        const Matrix xr = detail::random_algebra_element(model, right_ops, word_len, rng);
        const Matrix zr = detail::random_algebra_element(model, right_ops, word_len, rng);
        const double scale_b = std::max(1.0, detail::operator_norm(xr) * detail::operator_norm(yl) *
                                                 detail::operator_norm(zr));
        worst = std::max(worst,
                         std::abs(model.phi(xr * yl * zr) - model.phi(xr) * model.phi(yl) * model.phi(zr)) / scale_b);
    }
    return worst;
}

// K_X(z) = psi/(1 + psi), psi = <Omega, z X (1 - zX)^{-1} Omega>, by a linear solve and
// without a domain check; this is the rational continuation used inside compositions.
inline cplx k_operator_unchecked(const Matrix& x, const Vector& omega, cplx z)
{
    const Eigen::Index n = x.rows();
    const Matrix a = Matrix::Identity(n, n) - z * x;
    Eigen::FullPivLU<Matrix> lu(a);
    if (!lu.isInvertible())
        detail::fail(Errc::singular_system, "1 - zX is singular");
    const Vector w = lu.solve(omega);
    const cplx psi = z * omega.dot(x * w);
    if (std::abs(1.0 + psi) == 0.0)
        detail::fail(Errc::singular_system, "1 + psi vanishes");
    return psi / (1.0 + psi);
}

// K_X(z) for |z| < 1/||X||, or |z| < 1 when X is unitary.
inline cplx k_operator(const Matrix& x, const Vector& omega, cplx z)
{
    const bool unitary_ok = is_unitary(x) && std::abs(z) < 1.0;
    if (!unitary_ok) {
        const double norm = spectral_norm_estimate(x);
        if (!(std::abs(z) * norm < 1.0))
            detail::fail(Errc::domain_error, "|z| must be below 1/||X||");
    }
    return k_operator_unchecked(x, omega, z);
}

// max over the grid of |K_{V1 W V2}(z) - K_{V1 V2}(K_W(z))| for V1, V2 in C1 + A1 with
// V2 V1 - 1 in A1, and W in A2.
inline double verify_theorem_operators(const MonotoneProduct& prod, const Matrix& v1, const Matrix& v2,
                                       const Matrix& w, const std::vector<cplx>& z_grid)
{
    if (!prod.in_unit_plus_left_image(v1) || !prod.in_unit_plus_left_image(v2))
        detail::fail(Errc::precondition_failed, "V1 and V2 must lie in C1 + A1");
    if (!prod.in_left_image(v2 * v1 - prod.identity()))
        detail::fail(Errc::precondition_failed, "V2 V1 - 1 has a component outside A1");
    if (!prod.in_right_image(w))
        detail::fail(Errc::precondition_failed, "W must lie in A2");

    const Vector& omega = prod.model.state();
    const Matrix vwv = v1 * w * v2;
    const Matrix vv = v1 * v2;
    const double bound = 1.0 / std::max(spectral_norm_estimate(vwv), spectral_norm_estimate(w));
    double worst = 0.0;
    for (const auto& z : z_grid) {
        if (!(std::abs(z) < bound))
            detail::fail(Errc::precondition_failed, "grid point outside min(1/||V1WV2||, 1/||W||)");
        const cplx lhs = k_operator_unchecked(vwv, omega, z);
        const cplx rhs = k_operator_unchecked(vv, omega, k_operator_unchecked(w, omega, z));
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

inline double verify_theorem_operators(const MonotoneProduct& prod, const std::string& v1, const std::string& v2,
                                       const std::string& w, const std::vector<cplx>& z_grid)
{
    return verify_theorem_operators(prod, prod.model.op(v1), prod.model.op(v2), prod.model.op(w), z_grid);
}

// A random instance of the hypotheses above: V1 = c 1 + J1(A), V2 = c^{-1} 1 + J1(B),
// W = J2(Y) with random states, so V2 V1 - 1 = J1(c^{-1} A + c B + B A) lies in A1.
// Norms are kept small enough that |z| <= 0.2 stays inside the convergence disks.
struct IdentityCase {
    MonotoneProduct prod;
    Matrix v1, v2, w;
};

template <typename Rng>
IdentityCase random_identity_case(Eigen::Index left_dim, Eigen::Index right_dim, Rng& rng)
{
    auto scaled = [&rng](Eigen::Index dim, double norm) {
        const Matrix g = random_gaussian_matrix(dim, rng);
        return Matrix(g * (norm / detail::operator_norm(g)));
    };
    MatrixModel m1(random_unit_vector(left_dim, rng));
    MatrixModel m2(random_unit_vector(right_dim, rng));
    m1.add("A", scaled(left_dim, 0.3));
    m1.add("B", scaled(left_dim, 0.3));
    m2.add("Y", scaled(right_dim, 1.5));
    auto prod = monotone_product(m1, m2);
    std::uniform_real_distribution<double> cdist(0.8, 1.25);
    const double c = cdist(rng);
    const Matrix one = prod.identity();
    Matrix v1 = c * one + prod.model.op("A");
    Matrix v2 = (1.0 / c) * one + prod.model.op("B");
    Matrix w = prod.model.op("Y");
    return {std::move(prod), std::move(v1), std::move(v2), std::move(w)};
}

// 20 points in 0 < |z| <= 0.2: four radii times five angles.
inline std::vector<cplx> identity_z_grid()
{
    std::vector<cplx> grid;
    for (double r : {0.05, 0.1, 0.15, 0.2})
        for (int j = 0; j < 5; ++j)
            grid.push_back(std::polar(r, two_pi * (j + 0.25) / 5.0));
    return grid;
}

struct IdentitySuiteReport {
    std::size_t cases = 0;
    double max_defect = 0.0;
    std::vector<double> defects;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> dims;
};

// `cases` random instances cycling through every factor pair with left * right <= 6,
// each checked on identity_z_grid(). One engine seeded by `seed` drives all of them.
inline IdentitySuiteReport identity_suite(std::uint64_t seed, std::size_t cases)
{
    std::vector<std::pair<Eigen::Index, Eigen::Index>> shapes;
    for (Eigen::Index l = 1; l <= 6; ++l)
        for (Eigen::Index r = 1; l * r <= 6; ++r)
            shapes.emplace_back(l, r);
    std::mt19937_64 rng(seed);
    const auto grid = identity_z_grid();
    IdentitySuiteReport rep;
    for (std::size_t i = 0; i < cases; ++i) {
        const auto [l, r] = shapes[i % shapes.size()];
        const auto c = random_identity_case(l, r, rng);
        const double d = verify_theorem_operators(c.prod, c.v1, c.v2, c.w, grid);
        rep.defects.push_back(d);
        rep.dims.emplace_back(l, r);
        rep.max_defect = std::max(rep.max_defect, d);
    }
    rep.cases = cases;
    return rep;
}

// Phi(X^k), k = 1..n.
inline std::vector<cplx> operator_moments(const MatrixModel& model, const Matrix& x, std::size_t n)
{
    std::vector<cplx> out;
    out.reserve(n);
    Vector v = model.state();
    for (std::size_t k = 0; k < n; ++k) {
        v = x * v;
        out.push_back(model.state().dot(v));
    }
    return out;
}

// Diagonal unitary with Omega weights realizing an atomic circle measure.
inline MatrixModel atomic_measure_model(const CircleMeasure& mu, const std::string& name)
{
    const auto& atoms = mu.atoms();
    const auto n = static_cast<Eigen::Index>(atoms.size());
    Vector omega(n);
    Matrix u = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        omega(i) = std::sqrt(atoms[static_cast<std::size_t>(i)].weight);
        u(i, i) = atoms[static_cast<std::size_t>(i)].point();
    }
    omega.normalize();
    MatrixModel model(omega);
    model.add(name, u);
    return model;
}

// M(a) = [[1, a], [a, 1]].
inline Matrix m_matrix(double a)
{
    Matrix m(2, 2);
    m << 1.0, a, a, 1.0;
    return m;
}

// sqrt(M(a)) = (1/2) [[s+ + s-, s+ - s-], [s+ - s-, s+ + s-]], s(+/-) = sqrt(1 +/- a).
inline Matrix m_matrix_sqrt_closed_form(double a)
{
    const double sp = std::sqrt(1.0 + a);
    const double sm = std::sqrt(1.0 - a);
    Matrix m(2, 2);
    m << 0.5 * (sp + sm), 0.5 * (sp - sm), 0.5 * (sp - sm), 0.5 * (sp + sm);
    return m;
}

struct CounterexampleReport {
    double a = 0.0;
    double b = 0.0;
    Matrix x, y, sqrt_x, sqrt_y;
    double sqrt_closed_form_defect = 0.0;    // |sqrtm(M(a)) - closed form|, max entry
    std::vector<double> eigen_sxys;          // sorted eigenvalues of sqrt(X) Y sqrt(X)
    std::vector<double> eigen_syxs;          // sorted eigenvalues of sqrt(Y) X sqrt(Y)
    std::vector<double> eigen_closed_form;   // 1 +/- a/2 +/- sqrt(a^2 + 4 (1 +/- a) b^2)/2, sorted
    double second_moment_sxys = 0.0;         // <omega, (sqrt(X) Y sqrt(X))^2 omega>
    double second_moment_syxs = 0.0;
    double second_moment_sxys_closed_form = 0.0;  // 1 + b^2 + a^2
    double second_moment_syxs_closed_form = 0.0;  // 1 + b^2 + (a^2/2)(1 + sqrt(1 - b^2))
};

namespace detail {

inline std::vector<double> sorted_hermitian_eigenvalues(const Matrix& m)
{
    const Matrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
    std::vector<double> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
    std::sort(ev.begin(), ev.end());
    return ev;
}

} // namespace detail

// X = 1 (x) 1 + (M(a) - 1) (x) P_omega and Y = 1 (x) M(b) on C^2 (x) C^2, in the basis
// ordering where the state omega (x) omega is the 4th basis vector and X acts on the
// last two coordinates. X - 1 and Y - 1 are monotonically independent, yet the two
// products sqrt(X) Y sqrt(X) and sqrt(Y) X sqrt(Y) have different distributions.
inline CounterexampleReport appendix_counterexample(double a, double b)
{
    if (!(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0))
        detail::fail(Errc::domain_error, "parameters must lie in the open square (0,1)^2");

    CounterexampleReport rep;
    rep.a = a;
    rep.b = b;
    rep.x = Matrix::Identity(4, 4);
    rep.x(2, 3) = a;
    rep.x(3, 2) = a;
    rep.y = Matrix::Identity(4, 4);
    rep.y(0, 2) = rep.y(2, 0) = b;
    rep.y(1, 3) = rep.y(3, 1) = b;

    rep.sqrt_closed_form_defect =
        (sqrtm_psd(m_matrix(a)) - m_matrix_sqrt_closed_form(a)).cwiseAbs().maxCoeff();
    rep.sqrt_x = sqrtm_psd(rep.x);
    rep.sqrt_y = sqrtm_psd(rep.y);

    const Matrix sxys = rep.sqrt_x * rep.y * rep.sqrt_x;
    const Matrix syxs = rep.sqrt_y * rep.x * rep.sqrt_y;
    rep.eigen_sxys = detail::sorted_hermitian_eigenvalues(sxys);
    rep.eigen_syxs = detail::sorted_hermitian_eigenvalues(syxs);

    for (double sign : {1.0, -1.0}) {
        const double root = 0.5 * std::sqrt(a * a + 4.0 * (1.0 + sign * a) * b * b);
        rep.eigen_closed_form.push_back(1.0 + sign * a / 2.0 + root);
        rep.eigen_closed_form.push_back(1.0 + sign * a / 2.0 - root);
    }
    std::sort(rep.eigen_closed_form.begin(), rep.eigen_closed_form.end());

    Vector omega = Vector::Zero(4);
    omega(3) = 1.0;
    rep.second_moment_sxys = omega.dot(sxys * sxys * omega).real();
    rep.second_moment_syxs = omega.dot(syxs * syxs * omega).real();
    rep.second_moment_sxys_closed_form = 1.0 + b * b + a * a;
    rep.second_moment_syxs_closed_form = 1.0 + b * b + 0.5 * a * a * (1.0 + std::sqrt(1.0 - b * b));
    return rep;
}

} // namespace monoconv

#endif // MONOCONV_OPMODEL_HPP
