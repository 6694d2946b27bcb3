#include "sweeps.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <stdexcept>
#include <string>

#include "admmtune/logistic.hpp"
#include "admmtune/quadratic.hpp"

namespace admmtune::bench {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t begin = 0;
    while (true) {
        const std::size_t end = text.find(sep, begin);
        parts.push_back(text.substr(begin, end - begin));
        if (end == std::string::npos) break;
        begin = end + 1;
    }
    return parts;
}

double parse_double_token(const std::string& token, const std::string& context) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &used);
    } catch (const std::exception&) {
        used = std::string::npos;
    }
    if (used != token.size())
        throw std::invalid_argument("could not parse '" + token + "' as a number in '" +
                                    context + "'");
    return value;
}

long parse_count_token(const std::string& token, const std::string& context) {
    std::size_t used = 0;
    long value = 0;
    try {
        value = std::stol(token, &used);
    } catch (const std::exception&) {
        used = std::string::npos;
    }
    if (used != token.size() || value < 2 || value > 1000000)
        throw std::invalid_argument("range count must be an integer in [2, 10^6] — got '" +
                                    token + "' in '" + context + "'");
    return value;
}

// Same tail policy the fitting tests use: keep the second half of the
// trace but never fewer than 12 records.
int tail_burn(std::size_t records) {
    const auto n = static_cast<long>(records);
    return static_cast<int>(std::max<long>(0, std::min(n / 2, n - 12)));
}

struct FitOutcome {
    std::optional<double> rate;
    std::string note;
};

// Runs to a deep distance tolerance and fits the geometric decay. The
// tolerance stop matters: past ~1e-14 the distances sit on the rounding
// floor and would poison the fit.
FitOutcome fit_instance_rate(const ProblemInstance& instance, const AdmmParams& params,
                             int iters) {
    StoppingRule stop;
    stop.max_iters = iters;
    stop.distance_tol = 1e-12;
    const FixedPoint fp = fixed_point_of(instance, params);
    const RunTrace trace = run(instance, params, initial_state(instance), stop, fp);
    try {
        return {estimate_rate(trace, tail_burn(trace.records.size())), {}};
    } catch (const EstimationError& err) {
        return {std::nullopt, err.what()};
    }
}

nlohmann::json optional_number(const std::optional<double>& value) {
    if (value) return *value;
    return nullptr;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty grid expression");
    const bool linspace = text.rfind("linspace:", 0) == 0;
    const bool logspace = text.rfind("logspace:", 0) == 0;
    if (linspace || logspace) {
        const auto parts = split(text, ':');
        if (parts.size() != 4)
            throw std::invalid_argument("range expression must look like " +
                                        parts[0] + ":lo:hi:count — got '" + text + "'");
        const double lo = parse_double_token(parts[1], text);
        const double hi = parse_double_token(parts[2], text);
        const long count = parse_count_token(parts[3], text);
        std::vector<double> grid(static_cast<std::size_t>(count));
        for (long i = 0; i < count; ++i) {
            const double s = lo + (hi - lo) * static_cast<double>(i) /
                                      static_cast<double>(count - 1);
            grid[static_cast<std::size_t>(i)] = logspace ? std::pow(10.0, s) : s;
        }
        return grid;
    }
    std::vector<double> grid;
    for (const auto& token : split(text, ','))
        grid.push_back(parse_double_token(token, text));
    return grid;
}

ProblemKind parse_problem(const std::string& name) {
    if (name == "attainability") return ProblemKind::Attainability;
    if (name == "random-quadratic") return ProblemKind::RandomQuadratic;
    if (name == "logistic") return ProblemKind::Logistic;
    throw std::invalid_argument(
        "unknown problem '" + name +
        "' (expected attainability, random-quadratic, or logistic)");
}

OutputFormat parse_format(const std::string& name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    throw std::invalid_argument("unknown format '" + name + "' (expected csv or json)");
}

std::string format_double(double value) {
    char buffer[48];
    std::snprintf(buffer, sizeof buffer, "%.12g", value);
    return buffer;
}

void RateSweepConfig::validate() const {
    if (problem == ProblemKind::Logistic)
        throw std::invalid_argument(
            "rate sweeps cover quadratic instances only; use classify-sweep for "
            "logistic problems");
    if (alphas.empty()) throw std::invalid_argument("alpha grid is empty");
    if (rho0s.empty()) throw std::invalid_argument("rho0 grid is empty");
    if (kappas.empty()) throw std::invalid_argument("kappa grid is empty");
    for (const double alpha : alphas)
        if (!(alpha > 0.0) || alpha >= 2.0)
            throw std::invalid_argument(
                "alpha = " + format_double(alpha) +
                " is outside (0, 2); the guaranteed linear-rate family only exists on "
                "that interval");
    for (const double rho0 : rho0s)
        if (!(rho0 > 0.0))
            throw std::invalid_argument("rho0 must be positive — got " +
                                        format_double(rho0));
    for (const double kappa : kappas)
        if (!(kappa >= 1.0))
            throw std::invalid_argument("kappa must be at least 1 — got " +
                                        format_double(kappa));
    if (iters < 1) throw std::invalid_argument("iteration budget must be positive");
    if (simulate && iters < 12)
        throw std::invalid_argument(
            "simulated sweeps need at least 12 iterations to fit a rate");
}

std::vector<SweepRecord> run_rate_sweep(const RateSweepConfig& config,
                                        std::vector<std::string>* warnings) {
    config.validate();
    auto alphas = config.alphas;
    auto rho0s = config.rho0s;
    auto kappas = config.kappas;
    std::sort(alphas.begin(), alphas.end());
    std::sort(rho0s.begin(), rho0s.end());
    std::sort(kappas.begin(), kappas.end());
    const char* problem_name =
        config.problem == ProblemKind::Attainability ? "attainability" : "random-quadratic";

    std::vector<SweepRecord> rows;
    rows.reserve(alphas.size() * rho0s.size() * kappas.size());
    std::uint64_t instance_counter = 0;
    for (const double alpha : alphas) {
        for (const double rho0 : rho0s) {
            for (const double kappa : kappas) {
                const auto started = std::chrono::steady_clock::now();
                SweepRecord row;
                row.problem = problem_name;
                row.alpha = alpha;
                row.rho0 = rho0;
                row.kappa = kappa;
                row.tau_theory = linear_rate(alpha, rho0, kappa);
                row.bound_constant = certificate(alpha, rho0, kappa).constant;
                if (config.simulate) {
                    // Normalized curvatures are (1, kappa) for both families
                    // (unit singular values), so rho0 maps back to this rho.
                    const double rho = rho0 * std::sqrt(kappa);
                    const QuadraticInstance instance =
                        config.problem == ProblemKind::Attainability
                            ? make_attainability_instance(1.0, kappa)
                            : make_random_quadratic(6, config.seed + instance_counter,
                                                    1.0, kappa, 1.0);
                    const FitOutcome fit =
                        fit_instance_rate(instance, {alpha, rho}, config.iters);
                    row.rate_empirical = fit.rate;
                    if (!fit.rate && warnings)
                        warnings->push_back("no empirical rate at (alpha=" +
                                            format_double(alpha) + ", rho0=" +
                                            format_double(rho0) + ", kappa=" +
                                            format_double(kappa) + "): " + fit.note);
                }
                ++instance_counter;
                row.wall_s = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - started)
                                 .count();
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

void ClassifySweepConfig::validate() const {
    if (n <= 0 || d <= 0)
        throw std::invalid_argument("dataset dimensions must be positive");
    if (n % 2 != 0 || d % 2 != 0)
        throw std::invalid_argument(
            "sample and feature counts must be even (balanced classes, half the "
            "coordinates shifted)");
    if (n < d)
        throw std::invalid_argument("need at least as many samples as features");
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    if (rho < 0.0)
        throw std::invalid_argument(
            "rho must be positive, or 0 to pick it from the measured curvature");
    if (alphas.empty()) throw std::invalid_argument("alpha grid is empty");
    for (const double alpha : alphas)
        if (!(alpha > 0.0) || alpha >= 2.0)
            throw std::invalid_argument(
                "alpha = " + format_double(alpha) +
                " is outside (0, 2); the guaranteed linear-rate family only exists on "
                "that interval");
    if (iters < 12)
        throw std::invalid_argument("need at least 12 iterations to fit a rate");
}

ClassifySweepResult run_classify_sweep(const ClassifySweepConfig& config) {
    config.validate();
    const ClassificationDataset dataset =
        generate_classification_data(config.n, config.d, config.sigma, config.seed);
    const CurvatureEstimate curvature = estimate_kappa_f(dataset, config.lambda);

    ClassifySweepResult result;
    result.kappa_f_est = curvature.kappa_f_est;
    result.m_est = curvature.m_est;
    result.L_est = curvature.L_est;
    result.rho_loose = std::sqrt(curvature.m_est_loose * curvature.L_est_loose);
    result.rho_used =
        config.rho > 0.0 ? config.rho : std::sqrt(curvature.m_est * curvature.L_est);

    const LogisticL1Instance instance(dataset, config.lambda);
    const AdmmParams reference_params{1.0, result.rho_used};
    const FixedPoint fp = fixed_point_of(instance, reference_params, 1e-13, 50000);

    // Reference quality: how far one sweep of the iteration moves it.
    IterateState at_reference;
    at_reference.x = fp.z;
    at_reference.z = fp.z;
    at_reference.u = fp.u;
    at_reference.t = 0;
    const IterateState moved = step(instance, at_reference, reference_params);
    result.reference_gap = std::sqrt((moved.z - fp.z).squaredNorm() +
                                     (moved.u - fp.u).squaredNorm());

    const double rho0_est =
        result.rho_used / std::sqrt(curvature.m_est * curvature.L_est);
    result.recommended_alpha = best_alpha(rho0_est, curvature.kappa_f_est,
                                          static_cast<double>(config.iters));

    auto alphas = config.alphas;
    std::sort(alphas.begin(), alphas.end());
    for (const double alpha : alphas) {
        StoppingRule stop;
        stop.max_iters = config.iters;
        // Stop well above the reference solution's own accuracy so the
        // tail of the fit is still clean geometric decay.
        stop.distance_tol = 1e-10;
        const RunTrace trace =
            run(instance, {alpha, result.rho_used}, initial_state(instance), stop, fp);
        const double rate = estimate_rate(trace, tail_burn(trace.records.size()));
        result.rows.push_back({alpha, rate, std::log10(rate)});
    }
    return result;
}

TuneReport run_tune(const ConditioningInfo& cond, std::optional<double> horizon,
                    double alpha_margin) {
    cond.validate();
    TuneReport report;
    report.cond = cond;
    report.tuned = optimal_params(cond, alpha_margin);
    report.inf_rate = rate_infimum(cond.kappa());
    if (horizon) {
        const double t = *horizon;
        report.horizon = t;
        const double alpha_t = best_alpha(1.0, cond.kappa(), t);
        report.horizon_alpha = alpha_t;
        // At kappa = 1 the formula lands on the open boundary alpha = 2,
        // where no certificate exists; leave the bound empty there.
        if (alpha_t < 2.0) {
            const RateCertificate cert = certificate(alpha_t, 1.0, cond.kappa());
            report.horizon_bound = bound_at(cert, static_cast<int>(std::lround(t)));
        }
    }
    return report;
}

CertifyReport run_certify(double m, double L, double alpha, double rho0, int iters) {
    if (!(m > 0.0)) throw std::invalid_argument("m must be positive");
    if (!(L >= m)) throw std::invalid_argument("L must be at least m");
    if (!(alpha > 0.0) || alpha >= 2.0)
        throw std::invalid_argument(
            "alpha = " + format_double(alpha) +
            " is outside (0, 2); the guaranteed linear-rate family only exists on that "
            "interval");
    if (!(rho0 > 0.0)) throw std::invalid_argument("rho0 must be positive");
    if (iters < 1) throw std::invalid_argument("iteration budget must be positive");

    CertifyReport report;
    report.m = m;
    report.L = L;
    report.alpha = alpha;
    report.rho0 = rho0;
    report.iters = iters;
    report.tau_theory = linear_rate(alpha, rho0, L / m);

    const QuadraticInstance instance = make_attainability_instance(m, L);
    const double rho = rho0 * std::sqrt(m * L);
    const FitOutcome fit = fit_instance_rate(instance, {alpha, rho}, iters);
    if (fit.rate) {
        report.rate_empirical = fit.rate;
        report.conclusive = true;
        report.pass = std::abs(*fit.rate - report.tau_theory) <= 1e-3;
    }
    return report;
}

void write_rate_sweep(std::ostream& out, const std::vector<SweepRecord>& rows,
                      OutputFormat format) {
    if (format == OutputFormat::Csv) {
        out << "problem,alpha,rho0,kappa,tau_theory,rate_empirical,bound_constant,"
               "wall_s\n";
        for (const auto& row : rows) {
            out << row.problem << ',' << format_double(row.alpha) << ','
                << format_double(row.rho0) << ',' << format_double(row.kappa) << ','
                << format_double(row.tau_theory) << ','
                << (row.rate_empirical ? format_double(*row.rate_empirical)
                                       : std::string{})
                << ','
                << (row.bound_constant ? format_double(*row.bound_constant)
                                       : std::string{"inf"})
                << ',' << format_double(row.wall_s) << '\n';
        }
        return;
    }
    nlohmann::json records = nlohmann::json::array();
    for (const auto& row : rows) {
        records.push_back({{"problem", row.problem},
                           {"alpha", row.alpha},
                           {"rho0", row.rho0},
                           {"kappa", row.kappa},
                           {"tau_theory", row.tau_theory},
                           {"rate_empirical", optional_number(row.rate_empirical)},
                           {"bound_constant", optional_number(row.bound_constant)},
                           {"wall_s", row.wall_s}});
    }
    out << records.dump(2) << '\n';
}

void write_classify_sweep(std::ostream& out, const ClassifySweepResult& result,
                          OutputFormat format) {
    if (format == OutputFormat::Csv) {
        out << "alpha,rate,log10_rate\n";
        for (const auto& row : result.rows)
            out << format_double(row.alpha) << ',' << format_double(row.rate) << ','
                << format_double(row.log10_rate) << '\n';
        return;
    }
    nlohmann::json records = nlohmann::json::array();
    for (const auto& row : result.rows)
        records.push_back({{"alpha", row.alpha},
                           {"rate", row.rate},
                           {"log10_rate", row.log10_rate}});
    out << records.dump(2) << '\n';
}

void write_tune(std::ostream& out, const TuneReport& report, OutputFormat format) {
    const auto& cond = report.cond;
    const auto& tuned = report.tuned;
    if (format == OutputFormat::Csv) {
        out << "m,L,sigma_max,sigma_min,kappa,rho_star,alpha,tau,rate_infimum,"
               "horizon,horizon_alpha,horizon_bound\n";
        out << format_double(cond.m) << ',' << format_double(cond.L) << ','
            << format_double(cond.sigma_max) << ',' << format_double(cond.sigma_min)
            << ',' << format_double(cond.kappa()) << ','
            << format_double(tuned.params.rho) << ',' << format_double(tuned.params.alpha)
            << ',' << format_double(tuned.cert.rate) << ','
            << format_double(report.inf_rate) << ','
            << (report.horizon ? format_double(*report.horizon) : std::string{}) << ','
            << (report.horizon_alpha ? format_double(*report.horizon_alpha)
                                     : std::string{})
            << ','
            << (report.horizon_bound ? format_double(*report.horizon_bound)
                                     : std::string{})
            << '\n';
        return;
    }
    nlohmann::json records = nlohmann::json::array();
    records.push_back({{"m", cond.m},
                       {"L", cond.L},
                       {"sigma_max", cond.sigma_max},
                       {"sigma_min", cond.sigma_min},
                       {"kappa", cond.kappa()},
                       {"rho_star", tuned.params.rho},
                       {"alpha", tuned.params.alpha},
                       {"tau", tuned.cert.rate},
                       {"rate_infimum", report.inf_rate},
                       {"horizon", optional_number(report.horizon)},
                       {"horizon_alpha", optional_number(report.horizon_alpha)},
                       {"horizon_bound", optional_number(report.horizon_bound)}});
    out << records.dump(2) << '\n';
}

}  // namespace admmtune::bench
