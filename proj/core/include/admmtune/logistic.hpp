#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "admmtune/engine.hpp"

// Sparse logistic-regression classifier: minimize the average logistic loss
// over an l1 ball. Splitting form x = z with f the smooth loss and g the
// ball indicator, so A = I, B = -I, c = 0; the x-subproblem is solved by a
// damped Newton iteration and the z-subproblem is an exact l1 projection.

namespace admmtune {

struct GenerationMeta {
    Index n = 0;
    Index d = 0;
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

/// Binary classification sample: features row-per-sample, labels in {-1,+1}.
struct ClassificationDataset {
    MatrixXd features;  // N x d
    VectorXd labels;    // entries exactly -1 or +1
    std::optional<GenerationMeta> meta;  // present for generated data

    Index n() const { return features.rows(); }
    Index d() const { return features.cols(); }
};

/// Two isotropic Gaussian clouds (scale sigma), N/2 samples per class,
/// class centers at +-1/2 along the first d/2 coordinates and 0 elsewhere.
/// N and d must be even and positive. Deterministic in seed.
ClassificationDataset generate_classification_data(Index n, Index d, double sigma,
                                                   std::uint64_t seed);

/// Headerless CSV, one row per sample: label, then the d feature values.
/// Values round-trip exactly.
void save_dataset_csv(const ClassificationDataset& dataset, const std::string& path);
ClassificationDataset load_dataset_csv(const std::string& path);

/// Extreme eigenvalues of the loss curvature at the origin and their ratio.
struct CurvatureEstimate {
    double m_est = 0.0;
    double L_est = 0.0;
    double kappa_f_est = 0.0;
    // Same spectrum under the looser sech(s/2) curvature convention (4x the
    // exact factor); the ratio is identical, only the scale differs.
    double m_est_loose = 0.0;
    double L_est_loose = 0.0;
};

/// Curvature bounds from the Gram matrix (1/N) sum x_i x_i' scaled by the
/// exact logistic curvature 1/4 at the origin. Requires N >= d and a
/// nonsingular Gram matrix (EstimationError otherwise). The ball radius
/// does not enter the smooth term's curvature; it is accepted for interface
/// uniformity and validated only.
CurvatureEstimate estimate_kappa_f(const ClassificationDataset& dataset, double lambda);

class LogisticL1Instance final : public ProblemInstance {
  public:
    /// Throws std::invalid_argument on labels outside {-1,+1}, lambda <= 0,
    /// or empty data.
    LogisticL1Instance(ClassificationDataset dataset, double lambda,
                       double newton_tol = 1e-10, int newton_max_iters = 100);

    ProblemDims dims() const override;
    const MatrixXd& A() const override { return identity_; }
    const MatrixXd& B() const override { return neg_identity_; }
    const VectorXd& c() const override { return zero_; }

    /// Damped Newton (backtracking line search) for
    /// argmin f(theta) + (rho/2)||theta - z + u||^2, run to gradient norm
    /// <= newton_tol. Throws SolverError with the last gradient norm if
    /// newton_max_iters is exhausted.
    VectorXd x_update(const VectorXd& z, const VectorXd& u, double rho) const override;

    /// Exact projection of alpha*x + (1-alpha)*z_prev + u onto the ball.
    VectorXd z_update(const VectorXd& x, const VectorXd& z_prev, const VectorXd& u,
                      double rho, double alpha) const override;

    const ClassificationDataset& dataset() const { return dataset_; }
    double lambda() const { return lambda_; }

    /// Average logistic loss f and its gradient (diagnostics and tests).
    double smooth_objective(const VectorXd& theta) const;
    VectorXd smooth_gradient(const VectorXd& theta) const;

  private:
    ClassificationDataset dataset_;
    double lambda_;
    double newton_tol_;
    int newton_max_iters_;
    MatrixXd identity_, neg_identity_;
    VectorXd zero_;
};

}  // namespace admmtune
