#include "admmtune/rate_theory.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace admmtune {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::domain_error(what);
}

void check_family_domain(double alpha, double rho0, double kappa) {
    require(alpha > 0.0 && alpha < 2.0,
            "alpha must lie in (0,2), got " + std::to_string(alpha));
    require(rho0 > 0.0, "rho0 must be positive, got " + std::to_string(rho0));
    require(kappa >= 1.0, "kappa must be >= 1, got " + std::to_string(kappa));
}

}  // namespace

void ConditioningInfo::validate() const {
    require(m > 0.0, "strong-convexity modulus m must be positive");
    require(L >= m, "Lipschitz constant L must be >= m");
    require(sigma_min > 0.0, "sigma_min must be positive (full column rank)");
    require(sigma_max >= sigma_min, "sigma_max must be >= sigma_min");
}

double reciprocal_max(double x) {
    require(x > 0.0, "reciprocal_max requires x > 0, got " + std::to_string(x));
    return std::max(x, 1.0 / x);
}

NormalizedConstants normalize(const ConditioningInfo& cond, double rho) {
    cond.validate();
    require(rho > 0.0, "rho must be positive, got " + std::to_string(rho));
    const double m_hat = cond.m / (cond.sigma_max * cond.sigma_max);
    const double L_hat = cond.L / (cond.sigma_min * cond.sigma_min);
    return {rho / std::sqrt(m_hat * L_hat), L_hat / m_hat};
}

double linear_rate(double alpha, double rho0, double kappa) {
    check_family_domain(alpha, rho0, kappa);
    return 1.0 - alpha / (1.0 + reciprocal_max(rho0) * std::sqrt(kappa));
}

double envelope_skew(double alpha, double rho0, double kappa) {
    check_family_domain(alpha, rho0, kappa);
    const double c = reciprocal_max(rho0) * std::sqrt(kappa);
    return alpha / (2.0 - alpha) * (c - 1.0) / (c + 1.0);
}

RateCertificate certificate(double alpha, double rho0, double kappa, double kappa_b) {
    require(kappa_b >= 1.0, "kappa_b must be >= 1, got " + std::to_string(kappa_b));
    RateCertificate cert;
    cert.rate = linear_rate(alpha, rho0, kappa);
    cert.skew = envelope_skew(alpha, rho0, kappa);
    if (cert.skew > 0.0)
        cert.constant = kappa_b * std::sqrt(reciprocal_max(cert.skew));
    return cert;
}

std::optional<double> bound_at(const RateCertificate& cert, int t) {
    if (t < 0) throw std::domain_error("bound_at requires t >= 0");
    if (!cert.constant) return std::nullopt;
    return *cert.constant * std::pow(cert.rate, t);
}

double rate_infimum(double kappa) {
    require(kappa >= 1.0, "kappa must be >= 1, got " + std::to_string(kappa));
    return 1.0 - 2.0 / (1.0 + std::sqrt(kappa));
}

double best_alpha(double rho0, double kappa, double t) {
    require(rho0 > 0.0, "rho0 must be positive");
    require(kappa >= 1.0, "kappa must be >= 1");
    require(t >= 1.0, "best_alpha requires t >= 1");
    const double c = reciprocal_max(rho0) * std::sqrt(kappa);
    // Short horizons: the envelope is minimized at the skew kink 1 + 1/c.
    // Long horizons: interior optimum of the alpha/(2-alpha) tradeoff.
    if (t <= c) return 1.0 + 1.0 / c;
    return 1.0 + (1.0 + std::sqrt(1.0 + 4.0 * t * t - 4.0 * t * c)) / (2.0 * t);
}

TunedParams optimal_params(const ConditioningInfo& cond, double alpha_margin,
                           double kappa_b) {
    cond.validate();
    require(alpha_margin > 0.0 && alpha_margin < 1.0,
            "alpha_margin must lie in (0,1), got " + std::to_string(alpha_margin));
    TunedParams tuned;
    tuned.params.rho = std::sqrt(cond.m * cond.L) / (cond.sigma_max * cond.sigma_min);
    tuned.params.alpha = 2.0 - alpha_margin;
    tuned.normalized = normalize(cond, tuned.params.rho);
    tuned.cert = certificate(tuned.params.alpha, tuned.normalized.rho0,
                             tuned.normalized.kappa, kappa_b);
    return tuned;
}

ComparisonRates comparison_rates(double alpha, double kappa_f, double kappa) {
    require(alpha > 0.0 && alpha < 2.0, "alpha must lie in (0,2)");
    require(kappa_f >= 1.0, "kappa_f must be >= 1");
    require(kappa >= 1.0, "kappa must be >= 1");
    ComparisonRates rates;
    rates.dr_rate = 1.0 - alpha / (1.0 + std::sqrt(kappa_f));
    rates.wei_rate = 1.0 - 1.0 / std::sqrt(kappa);
    rates.first_order_lower = rate_infimum(kappa);
    return rates;
}

}  // namespace admmtune
