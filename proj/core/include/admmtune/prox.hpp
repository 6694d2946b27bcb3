#pragma once

#include <Eigen/Dense>

namespace admmtune {

/// Euclidean projection of v onto the l1 ball { z : ||z||_1 <= radius },
/// radius > 0. Sort-based exact algorithm, O(d log d). Inputs already in
/// the ball are returned unchanged.
Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& v, double radius);

}  // namespace admmtune
