#include "admmtune/engine.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace admmtune {

namespace {

double distance_to(const IterateState& state, const FixedPoint& fp) {
    return std::sqrt((state.z - fp.z).squaredNorm() + (state.u - fp.u).squaredNorm());
}

}  // namespace

void StoppingRule::validate() const {
    if (max_iters < 1)
        throw std::invalid_argument("StoppingRule: max_iters must be >= 1");
    if (residual_tol < 0.0 || distance_tol < 0.0)
        throw std::invalid_argument("StoppingRule: tolerances must be >= 0");
}

IterateState initial_state(const ProblemInstance& problem) {
    const auto d = problem.dims();
    IterateState s;
    s.x = VectorXd::Zero(d.p);
    s.z = VectorXd::Constant(d.q, 1.0 / std::sqrt(static_cast<double>(d.q)));
    s.u = VectorXd::Zero(d.r);
    s.t = 0;
    return s;
}

IterateState step(const ProblemInstance& problem, const IterateState& state,
                  const AdmmParams& params) {
    if (!(params.alpha > 0.0))
        throw std::invalid_argument("step: alpha must be positive");
    if (!(params.rho > 0.0))
        throw std::invalid_argument("step: rho must be positive");
    const auto d = problem.dims();
    if (state.z.size() != d.q || state.u.size() != d.r)
        throw std::invalid_argument(
            "step: iterate dimensions (" + std::to_string(state.z.size()) + ", " +
            std::to_string(state.u.size()) + ") do not match problem (" +
            std::to_string(d.q) + ", " + std::to_string(d.r) + ")");

    IterateState next;
    next.x = problem.x_update(state.z, state.u, params.rho);
    next.z = problem.z_update(next.x, state.z, state.u, params.rho, params.alpha);
    // Relaxed residual alpha*A x+ - (1-alpha)*B z - alpha*c shared by the
    // z- and u-updates.
    const VectorXd v = params.alpha * (problem.A() * next.x - problem.c()) -
                       (1.0 - params.alpha) * (problem.B() * state.z);
    next.u = state.u + v + problem.B() * next.z;
    next.t = state.t + 1;
    return next;
}

RunTrace run(const ProblemInstance& problem, const AdmmParams& params,
             const IterateState& init, const StoppingRule& stop,
             std::optional<FixedPoint> fixed_point, bool record_iterates) {
    stop.validate();
    std::optional<FixedPoint> fp =
        fixed_point ? std::move(fixed_point) : problem.known_fixed_point(params.rho);
    const auto d = problem.dims();
    if (fp && (fp->z.size() != d.q || fp->u.size() != d.r))
        throw std::invalid_argument("run: fixed point dimensions do not match problem");

    RunTrace trace;
    trace.params = params;
    if (fp) trace.initial_distance = distance_to(init, *fp);

    IterateState state = init;
    trace.reason = TerminationReason::MaxIterations;
    for (int k = 0; k < stop.max_iters; ++k) {
        state = step(problem, state, params);
        TraceRecord rec;
        rec.t = state.t;
        rec.residual = (problem.A() * state.x + problem.B() * state.z - problem.c()).norm();
        if (fp) rec.distance = distance_to(state, *fp);
        trace.records.push_back(rec);
        if (record_iterates) trace.snapshots.push_back(state);
        if (k + 1 >= stop.max_iters) {
            trace.reason = TerminationReason::MaxIterations;
            break;
        }
        if (stop.residual_tol > 0.0 && rec.residual < stop.residual_tol) {
            trace.reason = TerminationReason::ResidualTolerance;
            break;
        }
        if (fp && stop.distance_tol > 0.0 && *rec.distance < stop.distance_tol) {
            trace.reason = TerminationReason::DistanceTolerance;
            break;
        }
    }
    trace.final_state = std::move(state);
    return trace;
}

double estimate_rate(const RunTrace& trace, int burn_in) {
    if (burn_in < 0) throw std::invalid_argument("estimate_rate: burn_in must be >= 0");
    // Distances at or below the noise floor would flatten the fit; drop them.
    const double floor = 100.0 * std::numeric_limits<double>::epsilon();
    double sum_t = 0.0, sum_y = 0.0;
    int n = 0;
    for (const auto& rec : trace.records) {
        if (rec.t <= burn_in || !rec.distance) continue;
        if (!(*rec.distance >= floor)) continue;
        sum_t += rec.t;
        sum_y += std::log(*rec.distance);
        ++n;
    }
    if (n < 10)
        throw EstimationError("estimate_rate: only " + std::to_string(n) +
                              " usable records after burn-in " + std::to_string(burn_in) +
                              "; need at least 10");
    const double mean_t = sum_t / n, mean_y = sum_y / n;
    double sxy = 0.0, sxx = 0.0;
    for (const auto& rec : trace.records) {
        if (rec.t <= burn_in || !rec.distance) continue;
        if (!(*rec.distance >= floor)) continue;
        const double dt = rec.t - mean_t;
        sxy += dt * (std::log(*rec.distance) - mean_y);
        sxx += dt * dt;
    }
    return std::exp(sxy / sxx);
}

FixedPoint fixed_point_of(const ProblemInstance& problem, const AdmmParams& params,
                          double successive_tol, int max_iters) {
    if (!(successive_tol > 0.0))
        throw std::invalid_argument("fixed_point_of: successive_tol must be positive");
    if (max_iters < 1)
        throw std::invalid_argument("fixed_point_of: max_iters must be >= 1");
    if (auto known = problem.known_fixed_point(params.rho)) return *known;

    // No analytic answer: settle a classical run (alpha = 1 is the safe,
    // always-contracting member) at the same rho until iterates stop moving.
    const AdmmParams classical{1.0, params.rho};
    IterateState state = initial_state(problem);
    for (int k = 0; k < max_iters; ++k) {
        IterateState next = step(problem, state, classical);
        const double moved = std::sqrt((next.z - state.z).squaredNorm() +
                                       (next.u - state.u).squaredNorm());
        state = std::move(next);
        if (moved < successive_tol) return {state.z, state.u};
    }
    throw EstimationError("fixed_point_of: no settle within " + std::to_string(max_iters) +
                          " iterations (tol " + std::to_string(successive_tol) + ")");
}

}  // namespace admmtune
