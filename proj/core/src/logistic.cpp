#include "admmtune/logistic.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "admmtune/prox.hpp"

namespace admmtune {

namespace {

// log(1 + exp(-s)) without overflow on either tail.
double log1pexp_neg(double s) {
    if (s >= 0.0) return std::log1p(std::exp(-s));
    return -s + std::log1p(std::exp(s));
}

// 1/(1 + exp(s)), i.e. the sigmoid of -s, stable on both tails.
double sigmoid_neg(double s) {
    if (s >= 0.0) {
        const double e = std::exp(-s);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(s));
}

}  // namespace

ClassificationDataset generate_classification_data(Index n, Index d, double sigma,
                                                   std::uint64_t seed) {
    if (n <= 0 || n % 2 != 0)
        throw std::invalid_argument("generate_classification_data: N must be even and positive");
    if (d <= 0 || d % 2 != 0)
        throw std::invalid_argument("generate_classification_data: d must be even and positive");
    if (!(sigma > 0.0))
        throw std::invalid_argument("generate_classification_data: sigma must be positive");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    ClassificationDataset ds;
    ds.features.resize(n, d);
    ds.labels.resize(n);
    const Index half = n / 2;
    const Index shifted = d / 2;
    for (Index i = 0; i < n; ++i) {
        const double label = i < half ? 1.0 : -1.0;
        ds.labels(i) = label;
        for (Index j = 0; j < d; ++j) {
            const double shift = j < shifted ? 0.5 * label : 0.0;
            ds.features(i, j) = sigma * gauss(rng) + shift;
        }
    }
    ds.meta = GenerationMeta{n, d, sigma, seed};
    return ds;
}

void save_dataset_csv(const ClassificationDataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_dataset_csv: cannot open " + path);
    out << std::setprecision(17);
    for (Index i = 0; i < dataset.n(); ++i) {
        out << static_cast<int>(dataset.labels(i));
        for (Index j = 0; j < dataset.d(); ++j) out << ',' << dataset.features(i, j);
        out << '\n';
    }
    if (!out) throw std::runtime_error("save_dataset_csv: write failed for " + path);
}

ClassificationDataset load_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_dataset_csv: cannot open " + path);

    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream fields(line);
        std::string field;
        while (std::getline(fields, field, ',')) {
            std::size_t used = 0;
            row.push_back(std::stod(field, &used));
            if (used != field.size())
                throw std::runtime_error("load_dataset_csv: bad number '" + field + "' in " + path);
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error("load_dataset_csv: ragged rows in " + path);
        rows.push_back(std::move(row));
    }
    if (rows.empty() || rows.front().size() < 2)
        throw std::runtime_error("load_dataset_csv: no samples in " + path);

    ClassificationDataset ds;
    const Index n = static_cast<Index>(rows.size());
    const Index d = static_cast<Index>(rows.front().size()) - 1;
    ds.features.resize(n, d);
    ds.labels.resize(n);
    for (Index i = 0; i < n; ++i) {
        const double label = rows[i][0];
        if (label != 1.0 && label != -1.0)
            throw std::runtime_error("load_dataset_csv: label must be +-1, got " +
                                     std::to_string(label));
        ds.labels(i) = label;
        for (Index j = 0; j < d; ++j) ds.features(i, j) = rows[i][j + 1];
    }
    return ds;
}

CurvatureEstimate estimate_kappa_f(const ClassificationDataset& dataset, double lambda) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("estimate_kappa_f: lambda must be positive");
    const Index n = dataset.n(), d = dataset.d();
    if (n < d)
        throw EstimationError("estimate_kappa_f: need at least as many samples as features");

    // Exact loss curvature at the origin: 1/4 * Gram matrix.
    const MatrixXd gram =
        0.25 / static_cast<double>(n) * dataset.features.transpose() * dataset.features;
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(gram);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 1e-12 * std::max(1.0, hi)))
        throw EstimationError("estimate_kappa_f: Gram matrix is singular (rank < d)");

    CurvatureEstimate est;
    est.m_est = lo;
    est.L_est = hi;
    est.kappa_f_est = hi / lo;
    est.m_est_loose = 4.0 * lo;
    est.L_est_loose = 4.0 * hi;
    return est;
}

LogisticL1Instance::LogisticL1Instance(ClassificationDataset dataset, double lambda,
                                       double newton_tol, int newton_max_iters)
    : dataset_(std::move(dataset)),
      lambda_(lambda),
      newton_tol_(newton_tol),
      newton_max_iters_(newton_max_iters) {
    const Index n = dataset_.n(), d = dataset_.d();
    if (n <= 0 || d <= 0)
        throw std::invalid_argument("LogisticL1Instance: empty dataset");
    if (n < d)
        throw std::invalid_argument("LogisticL1Instance: need N >= d");
    if (dataset_.labels.size() != n)
        throw std::invalid_argument("LogisticL1Instance: labels/features size mismatch");
    for (Index i = 0; i < n; ++i)
        if (dataset_.labels(i) != 1.0 && dataset_.labels(i) != -1.0)
            throw std::invalid_argument("LogisticL1Instance: labels must be exactly +-1");
    if (!(lambda_ > 0.0))
        throw std::invalid_argument("LogisticL1Instance: lambda must be positive");
    if (!(newton_tol_ > 0.0) || newton_max_iters_ < 1)
        throw std::invalid_argument("LogisticL1Instance: bad inner-solver controls");
    identity_ = MatrixXd::Identity(d, d);
    neg_identity_ = -MatrixXd::Identity(d, d);
    zero_ = VectorXd::Zero(d);
}

ProblemDims LogisticL1Instance::dims() const {
    const Index d = dataset_.d();
    return {d, d, d};
}

double LogisticL1Instance::smooth_objective(const VectorXd& theta) const {
    const VectorXd margins = dataset_.labels.cwiseProduct(dataset_.features * theta);
    double total = 0.0;
    for (Index i = 0; i < margins.size(); ++i) total += log1pexp_neg(margins(i));
    return total / static_cast<double>(dataset_.n());
}

VectorXd LogisticL1Instance::smooth_gradient(const VectorXd& theta) const {
    const VectorXd margins = dataset_.labels.cwiseProduct(dataset_.features * theta);
    VectorXd weights(margins.size());
    for (Index i = 0; i < margins.size(); ++i)
        weights(i) = -dataset_.labels(i) * sigmoid_neg(margins(i));
    return dataset_.features.transpose() * weights / static_cast<double>(dataset_.n());
}

VectorXd LogisticL1Instance::x_update(const VectorXd& z, const VectorXd& u,
                                      double rho) const {
    if (!(rho > 0.0)) throw std::invalid_argument("x_update: rho must be positive");
    const Index n = dataset_.n(), d = dataset_.d();
    const VectorXd target = z - u;

    const auto objective = [&](const VectorXd& theta) {
        return smooth_objective(theta) + 0.5 * rho * (theta - target).squaredNorm();
    };

    VectorXd theta = target;
    double grad_norm = 0.0;
    for (int iter = 0; iter < newton_max_iters_; ++iter) {
        const VectorXd margins = dataset_.labels.cwiseProduct(dataset_.features * theta);
        VectorXd grad_weights(n), hess_weights(n);
        for (Index i = 0; i < n; ++i) {
            const double s = sigmoid_neg(margins(i));
            grad_weights(i) = -dataset_.labels(i) * s;
            hess_weights(i) = s * (1.0 - s);
        }
        const VectorXd grad = dataset_.features.transpose() * grad_weights / static_cast<double>(n) +
                              rho * (theta - target);
        grad_norm = grad.norm();
        if (grad_norm <= newton_tol_) return theta;

        MatrixXd hess = dataset_.features.transpose() * hess_weights.asDiagonal() *
                        dataset_.features / static_cast<double>(n);
        hess.diagonal().array() += rho;
        const VectorXd direction = hess.llt().solve(-grad);

        // Backtracking with the usual sufficient-decrease test; the
        // direction is a descent direction since hess is SPD. Once the
        // predicted decrease falls below what the objective resolves in
        // floating point the test is pure noise, so take the full Newton
        // step — at that point the iterate is deep in the quadratic basin.
        const double slope = grad.dot(direction);
        const double base = objective(theta);
        double step = 1.0;
        if (std::abs(slope) > 1e-14 * (1.0 + std::abs(base))) {
            for (int halving = 0; halving < 60; ++halving) {
                if (objective(theta + step * direction) <= base + 1e-4 * step * slope)
                    break;
                step *= 0.5;
            }
        }
        theta += step * direction;
    }
    char note[160];
    std::snprintf(note, sizeof note,
                  "x_update: Newton did not reach tolerance %.3g within %d "
                  "iterations; last gradient norm %.3g",
                  newton_tol_, newton_max_iters_, grad_norm);
    throw SolverError(note);
}

VectorXd LogisticL1Instance::z_update(const VectorXd& x, const VectorXd& z_prev,
                                      const VectorXd& u, double rho, double alpha) const {
    // B = -I, c = 0: the minimizer over the ball of ||v - z|| with
    // v = alpha x + (1-alpha) z_prev + u. rho scales the objective only.
    (void)rho;
    return project_l1_ball(alpha * x + (1.0 - alpha) * z_prev + u, lambda_);
}

}  // namespace admmtune
