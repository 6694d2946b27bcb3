#pragma once

// Reusable logic behind the admmtune command-line tool: grid parsing,
// sweep configuration, experiment drivers, and CSV/JSON writers. Kept
// separate from main() so the pieces can be unit tested.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "admmtune/engine.hpp"
#include "admmtune/rate_theory.hpp"

namespace admmtune::bench {

enum class ProblemKind { Attainability, RandomQuadratic, Logistic };
enum class OutputFormat { Csv, Json };

// Accepts either a comma list ("0.5,1,1.9") or a range expression
// ("linspace:0.1:1.9:10", "logspace:-2:2:9" with log10 endpoints).
// Throws std::invalid_argument on anything it cannot parse.
std::vector<double> parse_grid(const std::string& text);

ProblemKind parse_problem(const std::string& name);
OutputFormat parse_format(const std::string& name);

// One double, 12 significant digits — the CSV number format.
std::string format_double(double value);

struct RateSweepConfig {
    ProblemKind problem = ProblemKind::Attainability;
    std::vector<double> alphas;
    std::vector<double> rho0s;
    std::vector<double> kappas;
    int iters = 400;
    std::uint64_t seed = 0;
    bool simulate = false;

    // Throws std::invalid_argument when a grid is empty or a value is
    // outside its domain; logistic problems are not sweepable here.
    void validate() const;
};

struct SweepRecord {
    std::string problem;
    double alpha = 0.0;
    double rho0 = 0.0;
    double kappa = 1.0;
    double tau_theory = 0.0;
    std::optional<double> rate_empirical;  // only for simulated rows
    std::optional<double> bound_constant;  // nullopt = unbounded
    double wall_s = 0.0;
};

// Rows come back sorted by (alpha, rho0, kappa). With simulate set, each
// row also carries a fitted empirical rate from a seeded instance run;
// rows whose fit degenerates keep an empty empirical column and a note
// goes to `warnings`.
std::vector<SweepRecord> run_rate_sweep(const RateSweepConfig& config,
                                        std::vector<std::string>* warnings = nullptr);

struct ClassifySweepConfig {
    Index n = 400;
    Index d = 20;
    double sigma = 1.0;
    double lambda = 1.0;
    double rho = 0.0;  // 0 = pick sqrt(m_est * L_est) from the data
    std::vector<double> alphas = {1.0, 1.2, 1.4, 1.6, 1.8};
    int iters = 2000;
    std::uint64_t seed = 0;

    void validate() const;
};

struct ClassifyRow {
    double alpha = 0.0;
    double rate = 0.0;
    double log10_rate = 0.0;
};

struct ClassifySweepResult {
    double rho_used = 0.0;
    double kappa_f_est = 0.0;
    double m_est = 0.0;
    double L_est = 0.0;
    double rho_loose = 0.0;           // penalty the loose curvature bound would pick
    double reference_gap = 0.0;       // iterate movement at the reference point
    double recommended_alpha = 0.0;   // finite-horizon pick at t = iters
    std::vector<ClassifyRow> rows;
};

ClassifySweepResult run_classify_sweep(const ClassifySweepConfig& config);

struct TuneReport {
    ConditioningInfo cond;
    TunedParams tuned;
    double inf_rate = 0.0;
    std::optional<double> horizon;           // t, when requested
    std::optional<double> horizon_alpha;     // best alpha for that t
    std::optional<double> horizon_bound;     // envelope value at t for it
};

TuneReport run_tune(const ConditioningInfo& cond, std::optional<double> horizon,
                    double alpha_margin);

struct CertifyReport {
    double m = 0.0;
    double L = 0.0;
    double alpha = 0.0;
    double rho0 = 0.0;
    int iters = 0;
    double tau_theory = 0.0;
    std::optional<double> rate_empirical;  // nullopt = degenerate fit
    bool pass = false;
    bool conclusive = false;
};

// Builds the two-dimensional diagonal instance whose rate is known in
// closed form, runs it, fits the decay, and compares against theory.
CertifyReport run_certify(double m, double L, double alpha, double rho0, int iters);

void write_rate_sweep(std::ostream& out, const std::vector<SweepRecord>& rows,
                      OutputFormat format);
void write_classify_sweep(std::ostream& out, const ClassifySweepResult& result,
                          OutputFormat format);
void write_tune(std::ostream& out, const TuneReport& report, OutputFormat format);

}  // namespace admmtune::bench
