#pragma once

#include <optional>

// Closed-form convergence-rate theory for the over-relaxed ADMM family on
// strongly convex problems. Everything in this header is scalar arithmetic:
// given the curvature bounds of the smooth term and the extreme singular
// values of the constraint matrix, it produces certified linear rates,
// envelope constants, and tuned (alpha, rho) choices. No solver required.

namespace admmtune {

/// Curvature bounds of the smooth objective term f and extreme singular
/// values of the constraint matrix A. This is the only information the
/// rate formulas consume.
struct ConditioningInfo {
    double m = 0.0;          ///< strong-convexity modulus of f
    double L = 0.0;          ///< Lipschitz constant of grad f
    double sigma_max = 0.0;  ///< largest singular value of A
    double sigma_min = 0.0;  ///< smallest (p-th) singular value of A

    double kappa_f() const { return L / m; }
    double kappa_A() const { return sigma_max / sigma_min; }
    /// Combined condition number kappa_f * kappa_A^2 that drives every rate.
    double kappa() const { return kappa_f() * kappa_A() * kappa_A(); }

    /// Throws std::domain_error unless 0 < m <= L and 0 < sigma_min <= sigma_max.
    void validate() const;
};

/// Step-size parameter and condition number after absorbing the constraint
/// matrix scaling into the curvature bounds: rho0 = rho / sqrt(m^ L^) with
/// m^ = m / sigma_max^2, L^ = L / sigma_min^2, and kappa = L^ / m^.
struct NormalizedConstants {
    double rho0 = 0.0;
    double kappa = 0.0;
};

/// One member of the algorithm family: relaxation alpha in (0,2) and
/// penalty rho > 0. alpha = 1 is the classical method.
struct AdmmParams {
    double alpha = 1.0;
    double rho = 1.0;
};

/// Linear convergence certificate: the distance to the fixed point after t
/// steps is at most constant * rate^t times the initial distance. A missing
/// constant (skew == 0) means no finite envelope is available from this
/// analysis, only the rate itself.
struct RateCertificate {
    double rate = 1.0;
    double skew = 0.0;
    std::optional<double> constant;  // nullopt <=> unbounded

    bool constant_is_unbounded() const { return !constant.has_value(); }
};

/// Tuned parameter choice together with its certificate.
struct TunedParams {
    AdmmParams params;
    NormalizedConstants normalized;
    RateCertificate cert;
};

/// Rates of related methods, for side-by-side reporting.
struct ComparisonRates {
    double dr_rate = 0.0;            ///< Douglas-Rachford-style rate 1 - alpha/(1+sqrt(kappa_f))
    double wei_rate = 0.0;           ///< 1 - 1/sqrt(kappa); see wei_rate_scope
    double first_order_lower = 0.0;  ///< best rate any first-order method can achieve

    /// wei_rate comes from an analysis that only covers the classical
    /// method at the balanced step size; treat it as a reference point.
    static constexpr const char* wei_rate_scope =
        "approximate; valid only for alpha = 1, rho0 = 1";
};

/// max(x, 1/x): multiplicative distance of x > 0 from 1. Throws
/// std::domain_error for x <= 0.
double reciprocal_max(double x);

/// Absorb the constraint scaling into the curvature bounds (see
/// NormalizedConstants). Throws std::domain_error on invalid conditioning
/// or rho <= 0.
NormalizedConstants normalize(const ConditioningInfo& cond, double rho);

/// Certified linear rate tau = 1 - alpha / (1 + chi(rho0) * sqrt(kappa)),
/// where chi is reciprocal_max. Lies in [0,1) on the admissible domain.
/// Throws std::domain_error unless alpha in (0,2), rho0 > 0, kappa >= 1.
double linear_rate(double alpha, double rho0, double kappa);

/// Skew factor eta = alpha/(2-alpha) * (C-1)/(C+1) with C = chi(rho0)*sqrt(kappa).
/// Zero exactly when C = 1; the certificate constant is unbounded there.
double envelope_skew(double alpha, double rho0, double kappa);

/// Full certificate at the given normalized parameters. kappa_b is the
/// condition number of the second constraint block B (1 when B is a signed
/// identity); it scales the constant, never the rate.
RateCertificate certificate(double alpha, double rho0, double kappa, double kappa_b = 1.0);

/// Envelope value constant * rate^t, or nullopt when the constant is
/// unbounded. t >= 0.
std::optional<double> bound_at(const RateCertificate& cert, int t);

/// Infimum of the certified rate over the whole parameter family:
/// 1 - 2/(1 + sqrt(kappa)), approached as alpha -> 2 at the balanced
/// penalty (rho0 = 1). Not attained for any admissible alpha.
double rate_infimum(double kappa);

/// Relaxation value in (1,2] minimizing the envelope bound_at(t) for a
/// finite horizon t >= 1 (real-valued so the branch boundary can be probed;
/// normal use passes whole iterations). Piecewise closed form, continuous
/// and nondecreasing in t, -> 2 as t -> infinity.
double best_alpha(double rho0, double kappa, double t);

/// Tuned asymptotic choice: rho = sqrt(mL)/(sigma_max*sigma_min) (so that
/// rho0 = 1) and alpha = 2 - alpha_margin, with the matching certificate.
/// alpha_margin must lie in (0,1); the rate tends to rate_infimum(kappa)
/// as the margin shrinks.
TunedParams optimal_params(const ConditioningInfo& cond, double alpha_margin = 1e-2,
                           double kappa_b = 1.0);

/// Reference rates of related methods at the same conditioning. kappa is
/// the combined condition number (>= kappa_f >= 1).
ComparisonRates comparison_rates(double alpha, double kappa_f, double kappa);

}  // namespace admmtune
