#include "admmtune/quadratic.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

namespace admmtune {

namespace {

// Smallest/largest singular values, for rank checks and conditioning.
std::pair<double, double> singular_range(const MatrixXd& mat) {
    Eigen::JacobiSVD<MatrixXd> svd(mat);
    const auto& sv = svd.singularValues();
    return {sv(sv.size() - 1), sv(0)};
}

// Haar-ish random orthogonal matrix: QR of a Gaussian matrix with the sign
// of R's diagonal folded in so the factor is unique.
MatrixXd random_orthogonal(Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    MatrixXd g(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) g(i, j) = gauss(rng);
    Eigen::HouseholderQR<MatrixXd> qr(g);
    MatrixXd q = qr.householderQ();
    const MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j)
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    return q;
}

VectorXd interior_values(Index count, double lo, double hi, std::mt19937_64& rng) {
    VectorXd vals(count);
    std::uniform_real_distribution<double> unif(lo, hi);
    for (Index i = 0; i < count; ++i) vals(i) = (hi > lo) ? unif(rng) : lo;
    return vals;
}

}  // namespace

QuadraticInstance::QuadraticInstance(MatrixXd Q, MatrixXd A, MatrixXd B, VectorXd c)
    : q_(std::move(Q)), a_(std::move(A)), b_(std::move(B)), c_(std::move(c)) {
    const Index p = q_.rows();
    if (q_.cols() != p) throw std::invalid_argument("QuadraticInstance: Q must be square");
    const Index r = a_.rows();
    if (a_.cols() != p)
        throw std::invalid_argument("QuadraticInstance: A must have as many columns as Q");
    if (b_.rows() != r)
        throw std::invalid_argument("QuadraticInstance: A and B must have equal row counts");
    if (c_.size() != r)
        throw std::invalid_argument("QuadraticInstance: c length must match constraint rows");
    if ((q_ - q_.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + q_.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("QuadraticInstance: Q must be symmetric");

    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(q_);
    cond_.m = eig.eigenvalues().minCoeff();
    cond_.L = eig.eigenvalues().maxCoeff();
    if (!(cond_.m > 0.0))
        throw std::invalid_argument("QuadraticInstance: Q must be positive definite");

    auto [a_min, a_max] = singular_range(a_);
    cond_.sigma_min = a_min;
    cond_.sigma_max = a_max;
    if (!(a_min > 1e-12 * std::max(1.0, a_max)))
        throw std::invalid_argument("QuadraticInstance: A must have full column rank");
    auto [b_min, b_max] = singular_range(b_);
    if (!(b_min > 1e-12 * std::max(1.0, b_max)))
        throw std::invalid_argument("QuadraticInstance: B must have full column rank");
}

ProblemDims QuadraticInstance::dims() const {
    return {q_.rows(), b_.cols(), a_.rows()};
}

VectorXd QuadraticInstance::x_update(const VectorXd& z, const VectorXd& u,
                                     double rho) const {
    // (Q + rho A'A) x = rho A'(c - Bz - u); SPD by construction.
    const MatrixXd lhs = q_ + rho * a_.transpose() * a_;
    const VectorXd rhs = rho * a_.transpose() * (c_ - b_ * z - u);
    return lhs.llt().solve(rhs);
}

VectorXd QuadraticInstance::z_update(const VectorXd& x, const VectorXd& z_prev,
                                     const VectorXd& u, double rho, double alpha) const {
    // g = 0: plain least squares min_z ||B z + (v + u)||^2 with
    // v = alpha(Ax - c) - (1-alpha) B z_prev. rho drops out.
    (void)rho;
    const VectorXd v = alpha * (a_ * x - c_) - (1.0 - alpha) * (b_ * z_prev);
    return (b_.transpose() * b_).llt().solve(-b_.transpose() * (v + u));
}

std::optional<FixedPoint> QuadraticInstance::known_fixed_point(double rho) const {
    // Stationarity of min 1/2 x'Qx s.t. Ax + Bz = c with multiplier y:
    //   Q x + A'y = 0,  B'y = 0,  A x + B z = c.
    const Index p = q_.rows(), q = b_.cols(), r = a_.rows();
    MatrixXd kkt = MatrixXd::Zero(p + q + r, p + q + r);
    kkt.topLeftCorner(p, p) = q_;
    kkt.topRightCorner(p, r) = a_.transpose();
    kkt.block(p, p + q, q, r) = b_.transpose();
    kkt.bottomLeftCorner(r, p) = a_;
    kkt.block(p + q, p, r, q) = b_;
    VectorXd rhs = VectorXd::Zero(p + q + r);
    rhs.tail(r) = c_;

    Eigen::FullPivLU<MatrixXd> lu(kkt);
    if (!lu.isInvertible()) return std::nullopt;
    const VectorXd sol = lu.solve(rhs);
    return FixedPoint{sol.segment(p, q), sol.tail(r) / rho};
}

QuadraticInstance make_attainability_instance(double m, double L) {
    if (!(m > 0.0) || L < m)
        throw std::invalid_argument("make_attainability_instance: need 0 < m <= L");
    MatrixXd q(2, 2);
    q << m, 0.0, 0.0, L;
    return QuadraticInstance(q, MatrixXd::Identity(2, 2), -MatrixXd::Identity(2, 2),
                             VectorXd::Zero(2));
}

QuadraticInstance make_random_quadratic(Index p, std::uint64_t seed, double m, double L,
                                        double kappa_A) {
    if (p < 2) throw std::invalid_argument("make_random_quadratic: need p >= 2");
    if (!(m > 0.0) || L < m)
        throw std::invalid_argument("make_random_quadratic: need 0 < m <= L");
    if (kappa_A < 1.0)
        throw std::invalid_argument("make_random_quadratic: need kappa_A >= 1");

    std::mt19937_64 rng(seed);

    VectorXd eigs(p);
    eigs(0) = m;
    eigs(1) = L;
    eigs.tail(p - 2) = interior_values(p - 2, m, L, rng);
    const MatrixXd rot = random_orthogonal(p, rng);
    MatrixXd q = rot * eigs.asDiagonal() * rot.transpose();
    q = 0.5 * (q + q.transpose());  // squash rounding asymmetry

    // sigma_min = 1 convention; only the ratio kappa_A is prescribed.
    VectorXd svals(p);
    svals(0) = kappa_A;
    svals(1) = 1.0;
    svals.tail(p - 2) = interior_values(p - 2, 1.0, kappa_A, rng);
    const MatrixXd left = random_orthogonal(p, rng);
    const MatrixXd right = random_orthogonal(p, rng);
    const MatrixXd a = left * svals.asDiagonal() * right.transpose();

    std::normal_distribution<double> gauss(0.0, 1.0);
    VectorXd c(p);
    for (Index i = 0; i < p; ++i) c(i) = gauss(rng);

    return QuadraticInstance(std::move(q), a, -MatrixXd::Identity(p, p), std::move(c));
}

}  // namespace admmtune
