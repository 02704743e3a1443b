#include "npt/kdv.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/IterativeSolvers>

#include <cmath>
#include <stdexcept>

namespace npt {

KdvProfile KdvProfile::build(const Grid& g, const DimerParams& p)
{
    KdvProfile k;
    k.params = p;
    k.sigma.values.resize(g.N);
    for (int j = 0; j < g.N; ++j) {
        const double s = 1.0 / std::cosh(p.q0 * g.X[j]);
        k.sigma.values[j] = p.sigma0 * s * s;
    }
    k.sigma.parity = Parity::even;
    k.sigma.decay_rate = 2.0 * p.q0;
    return k;
}

double kdv_residual(const std::vector<double>& sigma, const Grid& g, const DimerParams& p)
{
    const auto d2 = derivative(sigma, 2, g);
    double r = 0.0;
    for (int j = 0; j < g.N; ++j)
        r = std::max(r, std::abs(p.alpha_w * d2[j] - sigma[j] + 4.0 * p.w * sigma[j] * sigma[j]));
    return r;
}

Pair B0(const Pair& t, const Pair& u, const DimerParams& p)
{
    const std::size_t n = t[0].size();
    if (t[1].size() != n || u[0].size() != n || u[1].size() != n)
        throw std::invalid_argument("B0: grid mismatch");
    const double s = 2.0 * (1.0 + p.w);
    Pair out{std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t j = 0; j < n; ++j) {
        out[0][j] = s * (t[0][j] * u[0][j] + t[1][j] * u[1][j]);
        out[1][j] = s * (t[0][j] * u[1][j] + t[1][j] * u[0][j]);
    }
    return out;
}

double sigma_identity_residual(const KdvProfile& prof, const Grid& g)
{
    const auto& s = prof.sigma.values;
    const Pair sig{s, std::vector<double>(s.size(), 0.0)};
    const Pair b = B0(sig, sig, prof.params);
    const DimerParams p = prof.params;
    const auto v = apply_sampled(sample_symbol([&](double K) { return cplx(varpi0(K, p)); }, g),
                                 b[0], g);
    double r = 0.0;
    for (int j = 0; j < g.N; ++j) r = std::max(r, std::abs(s[j] + v[j]));
    return r;
}

AOperator::AOperator(const Grid& g, const DimerParams& p, std::vector<double> sigma)
    : grid_(g), p_(p), sigma_(std::move(sigma))
{
    const double s = 4.0 * (1.0 + p.w);
    symbol_ = sample_symbol([&](double K) { return cplx(s * varpi0(K, p)); }, g);
}

std::vector<double> AOperator::apply_raw(const std::vector<double>& f) const
{
    std::vector<double> sf(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) sf[j] = sigma_[j] * f[j];
    auto out = apply_sampled(symbol_, sf, grid_);
    for (std::size_t j = 0; j < f.size(); ++j) out[j] += f[j];
    return out;
}

std::vector<double> AOperator::apply(const std::vector<double>& f) const
{
    if (parity_defect(f, Parity::even, grid_) > 1e-10 * std::max(sup_norm(f), 1e-300))
        throw std::invalid_argument("A acts on even functions only");
    return apply_raw(f);
}

}  // namespace npt

namespace npt::detail {
class AMatrix;
}

namespace Eigen::internal {
template <>
struct traits<npt::detail::AMatrix> : public traits<Eigen::SparseMatrix<double>> {};
}  // namespace Eigen::internal

namespace npt::detail {

class AMatrix : public Eigen::EigenBase<AMatrix> {
public:
    using Scalar = double;
    using RealScalar = double;
    using StorageIndex = int;
    enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic, IsRowMajor = false };

    explicit AMatrix(const AOperator& op, int n) : op_(&op), n_(n) {}
    Eigen::Index rows() const { return n_; }
    Eigen::Index cols() const { return n_; }

    template <typename Rhs>
    Eigen::Product<AMatrix, Rhs, Eigen::AliasFreeProduct> operator*(const Eigen::MatrixBase<Rhs>& x) const
    {
        return Eigen::Product<AMatrix, Rhs, Eigen::AliasFreeProduct>(*this, x.derived());
    }

    const AOperator* op_;
    int n_;
};

}  // namespace npt::detail

namespace Eigen::internal {
template <typename Rhs>
struct generic_product_impl<npt::detail::AMatrix, Rhs, SparseShape, DenseShape, GemvProduct>
    : generic_product_impl_base<npt::detail::AMatrix, Rhs,
                                generic_product_impl<npt::detail::AMatrix, Rhs>> {
    using Scalar = typename Product<npt::detail::AMatrix, Rhs>::Scalar;

    template <typename Dest>
    static void scaleAndAddTo(Dest& dst, const npt::detail::AMatrix& lhs, const Rhs& rhs,
                              const Scalar& alpha)
    {
        std::vector<double> x(static_cast<std::size_t>(lhs.n_));
        for (int i = 0; i < lhs.n_; ++i) x[i] = rhs(i);
        const auto y = lhs.op_->apply_raw(x);
        for (int i = 0; i < lhs.n_; ++i) dst(i) += alpha * y[i];
    }
};
}  // namespace Eigen::internal

namespace npt {

namespace {

// Circulant kernel of the multiplier: (C f)_i = sum_j c[(i-j) mod N] f_j.
std::vector<double> circulant_kernel(const Spectrum& symbol, const Grid& g)
{
    return inverse_real(g, symbol);
}

Eigen::MatrixXd subspace_matrix(const Grid& g, const std::vector<double>& sigma,
                                const Spectrum& symbol, Parity p, std::vector<int>& idx)
{
    const int N = g.N;
    idx.clear();
    for (int h = 0; h <= N / 2; ++h) {
        if (p == Parity::odd && g.reflect(h) == h) continue;
        idx.push_back(h);
    }
    const auto c = circulant_kernel(symbol, g);
    auto cc = [&](int i, int j) { return c[static_cast<std::size_t>(((i - j) % N + N) % N)]; };
    const double s = p == Parity::odd ? -1.0 : 1.0;
    const int n = static_cast<int>(idx.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
    for (int a = 0; a < n; ++a) {
        const int i = idx[a];
        for (int b = 0; b < n; ++b) {
            const int h = idx[b];
            const int rh = g.reflect(h);
            double k = cc(i, h);
            if (rh != h) k += s * cc(i, rh);
            A(a, b) += k * sigma[h];
        }
    }
    return A;
}

}  // namespace

AOperator::Solution AOperator::solve_dense(const std::vector<double>& gv) const
{
    std::vector<int> idx;
    const Eigen::MatrixXd A = subspace_matrix(grid_, sigma_, symbol_, Parity::even, idx);
    Eigen::VectorXd b(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t a = 0; a < idx.size(); ++a) b(a) = gv[idx[a]];
    const Eigen::VectorXd x = A.partialPivLu().solve(b);
    Solution s;
    s.u.assign(grid_.N, 0.0);
    for (std::size_t a = 0; a < idx.size(); ++a) {
        s.u[idx[a]] = x(a);
        s.u[grid_.reflect(idx[a])] = x(a);
    }
    s.method = "dense-even";
    s.iterations = 1;
    return s;
}

AOperator::Solution AOperator::inverse(const std::vector<double>& gin) const
{
    if (parity_defect(gin, Parity::even, grid_) > 1e-10 * std::max(sup_norm(gin), 1e-300))
        throw std::invalid_argument("A inverse needs an even right side");
    const auto gv = symmetrize(gin, Parity::even, grid_);
    const double gn = sup_norm(gv);
    Solution s;
    if (gn == 0.0) {
        s.u.assign(grid_.N, 0.0);
        s.method = "trivial";
        return s;
    }

    auto check = [&](Solution& sol) {
        const auto Au = apply_raw(sol.u);
        double r = 0.0;
        for (int j = 0; j < grid_.N; ++j) r = std::max(r, std::abs(Au[j] - gv[j]));
        sol.residual = r / gn;
        return sol.residual < 1e-9;
    };

    detail::AMatrix A(*this, grid_.N);
    Eigen::GMRES<detail::AMatrix, Eigen::IdentityPreconditioner> gmres;
    gmres.compute(A);
    gmres.setTolerance(1e-14);
    gmres.setMaxIterations(400);
    gmres.set_restart(100);
    Eigen::VectorXd b(grid_.N);
    for (int j = 0; j < grid_.N; ++j) b(j) = gv[j];
    const Eigen::VectorXd x = gmres.solve(b);
    s.u.resize(grid_.N);
    for (int j = 0; j < grid_.N; ++j) s.u[j] = x(j);
    s.u = symmetrize(s.u, Parity::even, grid_);
    s.iterations = static_cast<int>(gmres.iterations());
    s.method = "gmres";
    if (check(s)) return s;

    if (grid_.N <= dense_limit) {
        Solution d = solve_dense(gv);
        if (check(d)) return d;
        s = d;
    }
    throw std::runtime_error("A inverse failed: relative residual " + std::to_string(s.residual) +
                             " via " + s.method + ", smallest even singular value " +
                             (grid_.N <= dense_limit
                                  ? std::to_string(smallest_singular_value(Parity::even))
                                  : std::string("n/a")));
}

double AOperator::smallest_singular_value(Parity p) const
{
    if (grid_.N > dense_limit) throw std::invalid_argument("dense diagnostics need N <= 2048");
    std::vector<int> idx;
    Eigen::MatrixXd A = subspace_matrix(grid_, sigma_, symbol_, p, idx);
    // Rescale to the orthonormal basis (delta_h +- delta_{-h})/sqrt(2).
    const auto n = static_cast<Eigen::Index>(idx.size());
    Eigen::VectorXd wt(n);
    for (Eigen::Index a = 0; a < n; ++a)
        wt(a) = grid_.reflect(idx[a]) == idx[a] ? 1.0 : std::sqrt(2.0);
    A = wt.asDiagonal() * A * wt.cwiseInverse().asDiagonal();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(A);
    return svd.singularValues().minCoeff();
}

}  // namespace npt
