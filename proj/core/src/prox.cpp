#include "admmtune/prox.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace admmtune {

Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& v, double radius) {
    if (!(radius > 0.0))
        throw std::domain_error("project_l1_ball: radius must be positive");
    if (v.lpNorm<1>() <= radius) return v;

    // Find the soft-threshold level theta so that sum max(|v_i|-theta, 0)
    // equals the radius: sort magnitudes, scan the running sum.
    std::vector<double> mags(v.data(), v.data() + v.size());
    for (auto& m : mags) m = std::abs(m);
    std::sort(mags.begin(), mags.end(), std::greater<>());

    double running = 0.0, theta = 0.0;
    for (std::size_t j = 0; j < mags.size(); ++j) {
        running += mags[j];
        const double candidate = (running - radius) / static_cast<double>(j + 1);
        if (mags[j] - candidate > 0.0)
            theta = candidate;
        else
            break;
    }

    Eigen::VectorXd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double shrunk = std::abs(v(i)) - theta;
        out(i) = shrunk > 0.0 ? (v(i) > 0.0 ? shrunk : -shrunk) : 0.0;
    }
    return out;
}

}  // namespace admmtune
