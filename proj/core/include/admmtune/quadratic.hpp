#pragma once

#include <cstdint>

#include "admmtune/engine.hpp"

// Strongly convex quadratic test problems: f(x) = 1/2 x'Qx with Q SPD,
// g = 0, constraint A x + B z = c with full-column-rank A and invertible B.
// These have analytic fixed points and exactly known conditioning, which
// makes them the reference family for validating rate certificates.

namespace admmtune {

class QuadraticInstance final : public ProblemInstance {
  public:
    /// Throws std::invalid_argument on inconsistent dimensions, an
    /// asymmetric or non-SPD Q, or rank-deficient A or B.
    QuadraticInstance(MatrixXd Q, MatrixXd A, MatrixXd B, VectorXd c);

    ProblemDims dims() const override;
    const MatrixXd& A() const override { return a_; }
    const MatrixXd& B() const override { return b_; }
    const VectorXd& c() const override { return c_; }
    const MatrixXd& hessian() const { return q_; }

    VectorXd x_update(const VectorXd& z, const VectorXd& u, double rho) const override;
    VectorXd z_update(const VectorXd& x, const VectorXd& z_prev, const VectorXd& u,
                      double rho, double alpha) const override;

    /// Solves the stationarity system directly; u* = y*/rho.
    std::optional<FixedPoint> known_fixed_point(double rho) const override;

    /// Exact curvature and singular-value bounds, computed once at
    /// construction from Q and A.
    std::optional<ConditioningInfo> conditioning() const override { return cond_; }

  private:
    MatrixXd q_, a_, b_;
    VectorXd c_;
    ConditioningInfo cond_;
};

/// Two-dimensional instance Q = diag(m, L), A = I, B = -I, c = 0 whose
/// iteration is an explicit linear map; the canonical worst-case family
/// for the certified rates. Requires 0 < m <= L.
QuadraticInstance make_attainability_instance(double m, double L);

/// Random p-dimensional instance (p >= 2) with prescribed extreme
/// curvatures m <= L and constraint condition number kappa_A >= 1
/// (convention sigma_min(A) = 1). Q and A get independent random
/// orthogonal factors, B = -I, c standard normal. Deterministic in seed.
QuadraticInstance make_random_quadratic(Index p, std::uint64_t seed, double m, double L,
                                        double kappa_A);

}  // namespace admmtune
