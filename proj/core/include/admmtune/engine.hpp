#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <vector>

#include "admmtune/rate_theory.hpp"

// Generic driver for the over-relaxed splitting iteration
//
//   x+ = argmin_x f(x) + (rho/2) ||A x + B z - c + u||^2
//   z+ = argmin_z g(z) + (rho/2) ||alpha A x+ - (1-alpha) B z + B z+ - alpha c + u||^2
//   u+ = u + alpha A x+ - (1-alpha) B z - alpha c + B z+
//
// Problems plug in their two proximal updates; the driver owns the dual
// update, stopping logic, trace recording, and rate fitting.

namespace admmtune {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// A subproblem solver failed to reach its tolerance.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A trace (or fixed-point search) does not support the requested estimate.
struct EstimationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fixed point of the iteration in the (z, u) coordinates that the
/// convergence theory measures.
struct FixedPoint {
    VectorXd z;
    VectorXd u;
};

struct ProblemDims {
    Index p = 0;  ///< x dimension
    Index q = 0;  ///< z dimension
    Index r = 0;  ///< constraint rows
};

class ProblemInstance {
  public:
    virtual ~ProblemInstance() = default;

    virtual ProblemDims dims() const = 0;
    virtual const MatrixXd& A() const = 0;
    virtual const MatrixXd& B() const = 0;
    virtual const VectorXd& c() const = 0;

    /// x+ = argmin_x f(x) + (rho/2) ||A x + B z - c + u||^2
    virtual VectorXd x_update(const VectorXd& z, const VectorXd& u, double rho) const = 0;

    /// z+ = argmin_z g(z) + (rho/2) ||w + B z||^2 where
    /// w = alpha A x - (1-alpha) B z_prev - alpha c + u.
    virtual VectorXd z_update(const VectorXd& x, const VectorXd& z_prev,
                              const VectorXd& u, double rho, double alpha) const = 0;

    /// Exact fixed point when one is analytically available. Depends on rho
    /// because u is the rho-scaled dual variable.
    virtual std::optional<FixedPoint> known_fixed_point(double /*rho*/) const {
        return std::nullopt;
    }

    /// Curvature/constraint conditioning when the problem knows it exactly.
    virtual std::optional<ConditioningInfo> conditioning() const { return std::nullopt; }
};

struct IterateState {
    VectorXd x;
    VectorXd z;
    VectorXd u;
    int t = 0;  ///< number of completed iterations
};

/// First-of-these-wins stopping test, checked after each iteration.
/// A tolerance of zero disables that test.
struct StoppingRule {
    int max_iters = 1000;
    double residual_tol = 0.0;  ///< on ||A x + B z - c||
    double distance_tol = 0.0;  ///< on the distance to the fixed point, if known

    void validate() const;
};

enum class TerminationReason { MaxIterations, ResidualTolerance, DistanceTolerance };

struct TraceRecord {
    int t = 0;
    std::optional<double> distance;  ///< ||(z,u) - (z*,u*)||, absent without a fixed point
    double residual = 0.0;           ///< ||A x + B z - c||
};

struct RunTrace {
    AdmmParams params;
    std::optional<double> initial_distance;
    std::vector<TraceRecord> records;  // one per iteration, t = 1..T
    TerminationReason reason = TerminationReason::MaxIterations;
    IterateState final_state;
    std::vector<IterateState> snapshots;  // filled only when requested
};

/// Deterministic default start: z0 = ones/sqrt(q) (unit length), u0 = 0.
IterateState initial_state(const ProblemInstance& problem);

/// One iteration of the family. Validates dimensions and alpha > 0, rho > 0
/// (std::invalid_argument); the rate theory restricts alpha to (0,2) but the
/// driver itself runs any positive relaxation.
IterateState step(const ProblemInstance& problem, const IterateState& state,
                  const AdmmParams& params);

/// Run until the stopping rule fires. When fixed_point is absent the
/// problem's own known_fixed_point(rho) is used if available; distances are
/// recorded only when one exists. max_iters = 1 yields exactly one record.
RunTrace run(const ProblemInstance& problem, const AdmmParams& params,
             const IterateState& init, const StoppingRule& stop,
             std::optional<FixedPoint> fixed_point = std::nullopt,
             bool record_iterates = false);

/// Least-squares slope of log(distance) over the records after the first
/// burn_in iterations, reported as exp(slope). Records with distance below
/// 100 * machine epsilon are excluded; fewer than 10 usable records is an
/// EstimationError. A constant positive trace gives exactly 1.0.
double estimate_rate(const RunTrace& trace, int burn_in);

/// The problem's analytic fixed point when it has one, otherwise a long
/// classical run (alpha = 1) until successive iterates move less than
/// successive_tol. Failure to settle within max_iters is an EstimationError.
FixedPoint fixed_point_of(const ProblemInstance& problem, const AdmmParams& params,
                          double successive_tol = 1e-12, int max_iters = 100000);

}  // namespace admmtune
