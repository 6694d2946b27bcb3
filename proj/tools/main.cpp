#include <CLI11.hpp>
#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "admmtune/engine.hpp"
#include "admmtune/rate_theory.hpp"
#include "sweeps.hpp"

namespace bench = admmtune::bench;
using bench::format_double;

namespace {

std::string trim(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

std::string unquote(const std::string& text) {
    if (text.size() >= 2 && ((text.front() == '"' && text.back() == '"') ||
                             (text.front() == '\'' && text.back() == '\'')))
        return text.substr(1, text.size() - 2);
    return text;
}

// Expands a flat key=value config file into argument tokens placed ahead
// of the explicit flags; with last-value-wins parsing the explicit flags
// take precedence over the file.
void expand_config_file(const CLI::App* sub, std::vector<std::string>& args) {
    std::string path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            path = args[i].substr(9);
    }
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read config file '" + path + "'");

    std::vector<std::string> tokens;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
        const auto at = path + ":" + std::to_string(line_no) + ": ";
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(at + "expected key=value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = unquote(trim(stripped.substr(eq + 1)));
        if (key == "config") continue;  // no nested expansion
        const CLI::Option* option = sub->get_option_no_throw("--" + key);
        if (option == nullptr)
            throw std::invalid_argument(at + "unknown key '" + key + "'");
        if (option->get_expected_min() == 0) {  // flag-style option
            if (value == "true" || value == "1" || value == "yes")
                tokens.push_back("--" + key);
            else if (!(value == "false" || value == "0" || value == "no"))
                throw std::invalid_argument(at + "flag '" + key +
                                            "' takes true or false");
        } else {
            tokens.push_back("--" + key);
            tokens.push_back(value);
        }
    }
    args.insert(args.begin() + 1, tokens.begin(), tokens.end());
}

// Writes through the callback to --out when given, stdout otherwise.
int emit(const std::string& out_path, const std::function<void(std::ostream&)>& writer) {
    if (out_path.empty()) {
        writer(std::cout);
        return 0;
    }
    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "error: cannot open '" << out_path << "' for writing\n";
        return 1;
    }
    writer(out);
    out.flush();
    if (!out) {
        std::cerr << "error: failed while writing '" << out_path << "'\n";
        return 1;
    }
    return 0;
}

int cmd_tune(const admmtune::ConditioningInfo& cond, std::optional<double> horizon,
             double margin, const std::string& out_path, bench::OutputFormat format) {
    const bench::TuneReport report = bench::run_tune(cond, horizon, margin);
    const auto& tuned = report.tuned;
    std::cout << "conditioning: m=" << format_double(cond.m)
              << ", L=" << format_double(cond.L)
              << ", sigma_max=" << format_double(cond.sigma_max)
              << ", sigma_min=" << format_double(cond.sigma_min)
              << " (kappa_f=" << format_double(cond.kappa_f())
              << ", kappa_A=" << format_double(cond.kappa_A())
              << ", kappa=" << format_double(cond.kappa()) << ")\n";
    std::cout << "optimal penalty rho* = " << format_double(tuned.params.rho)
              << " (normalized rho0 = " << format_double(tuned.normalized.rho0) << ")\n";
    std::cout << "relaxation alpha = " << format_double(tuned.params.alpha)
              << " with linear rate tau = " << format_double(tuned.cert.rate) << "\n";
    std::cout << "rate infimum as alpha -> 2: " << format_double(report.inf_rate)
              << "\n";
    if (report.horizon) {
        std::cout << "finite-horizon pick at t=" << format_double(*report.horizon)
                  << ": alpha = " << format_double(*report.horizon_alpha);
        if (report.horizon_bound)
            std::cout << ", envelope bound = " << format_double(*report.horizon_bound);
        else
            std::cout << ", envelope bound degenerate at this conditioning";
        std::cout << "\n";
    }
    return emit(out_path, [&](std::ostream& out) {
        bench::write_tune(out, report, format);
    });
}

int cmd_rate_sweep(const bench::RateSweepConfig& config, const std::string& out_path,
                   bench::OutputFormat format) {
    std::vector<std::string> warnings;
    const auto rows = bench::run_rate_sweep(config, &warnings);
    for (const auto& warning : warnings) std::cerr << "warning: " << warning << "\n";
    return emit(out_path, [&](std::ostream& out) {
        bench::write_rate_sweep(out, rows, format);
    });
}

int cmd_classify_sweep(const bench::ClassifySweepConfig& config,
                       const std::string& out_path, bench::OutputFormat format) {
    const bench::ClassifySweepResult result = bench::run_classify_sweep(config);
    std::cerr << "curvature estimate: m=" << format_double(result.m_est)
              << ", L=" << format_double(result.L_est)
              << ", kappa_f=" << format_double(result.kappa_f_est) << "\n";
    std::cerr << "penalty rho = " << format_double(result.rho_used)
              << " (loose curvature bound would pick "
              << format_double(result.rho_loose) << ")\n";
    std::cerr << "reference solution movement under one iteration: "
              << format_double(result.reference_gap) << "\n";
    std::cerr << "recommended alpha for this budget: "
              << format_double(result.recommended_alpha)
              << " (tends to 1 as conditioning worsens)\n";
    return emit(out_path, [&](std::ostream& out) {
        bench::write_classify_sweep(out, result, format);
    });
}

int cmd_certify(double m, double L, double alpha, double rho0, int iters) {
    const bench::CertifyReport report = bench::run_certify(m, L, alpha, rho0, iters);
    std::cout << "instance: diagonal (m=" << format_double(m)
              << ", L=" << format_double(L) << "), alpha=" << format_double(alpha)
              << ", rho0=" << format_double(rho0) << ", budget " << iters
              << " iterations\n";
    std::cout << "theoretical rate tau = " << format_double(report.tau_theory) << "\n";
    if (!report.conclusive) {
        std::cout << "INCONCLUSIVE: distances hit the numerical floor before enough "
                     "points were collected; raise the budget or the curvature gap\n";
        return 2;
    }
    std::cout << "empirical rate       = " << format_double(*report.rate_empirical)
              << "\n";
    std::cout << "gap |empirical - theoretical| = "
              << format_double(std::abs(*report.rate_empirical - report.tau_theory))
              << " (tolerance 0.001)\n";
    std::cout << (report.pass ? "PASS" : "FAIL") << "\n";
    return report.pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parameter tuning and sweep experiments for the over-relaxed "
                 "splitting solver"};
    app.require_subcommand(1);

    // tune -------------------------------------------------------------
    std::string config_path;  // shared storage; only one subcommand parses

    auto* tune = app.add_subcommand(
        "tune", "Closed-form optimal penalty and relaxation from conditioning data");
    tune->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    tune->add_option("--config", config_path,
                     "Flat key=value file mirroring the flags; explicit flags win");
    double tune_m = 0.0, tune_l = 0.0;
    double tune_sigma_max = 1.0, tune_sigma_min = 1.0;
    double tune_margin = 1e-2;
    int tune_t = 0;
    std::string tune_out, tune_format = "csv";
    tune->add_option("--m", tune_m, "Strong-convexity modulus")->required();
    tune->add_option("--L", tune_l, "Gradient Lipschitz constant")->required();
    tune->add_option("--sigma-max", tune_sigma_max,
                     "Largest singular value of the x-side constraint map");
    tune->add_option("--sigma-min", tune_sigma_min,
                     "Smallest singular value of the x-side constraint map");
    tune->add_option("--t", tune_t, "Iteration horizon for the finite-budget pick");
    tune->add_option("--alpha-margin", tune_margin,
                     "Distance below 2 for the asymptotic relaxation");
    tune->add_option("--out", tune_out, "Write the machine-readable record here");
    tune->add_option("--format", tune_format, "Record format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    // rate-sweep ---------------------------------------------------------
    auto* rate = app.add_subcommand(
        "rate-sweep", "Theoretical (and optionally empirical) rates over a grid");
    rate->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    rate->add_option("--config", config_path,
                     "Flat key=value file mirroring the flags; explicit flags win");
    std::string rate_alpha, rate_rho0, rate_kappa;
    std::string rate_problem = "attainability";
    std::string rate_out, rate_format = "csv";
    int rate_iters = 400;
    std::uint64_t rate_seed = 0;
    bool rate_simulate = false;
    rate->add_option("--alpha", rate_alpha,
                     "Relaxation grid: comma list or linspace:lo:hi:n")
        ->required();
    rate->add_option("--rho0", rate_rho0,
                     "Normalized penalty grid: comma list or logspace:lo:hi:n "
                     "(log10 endpoints)")
        ->required();
    rate->add_option("--kappa", rate_kappa, "Condition-number grid")->required();
    rate->add_option("--problem", rate_problem,
                     "Instance family for --simulate: attainability or "
                     "random-quadratic");
    rate->add_option("--iters", rate_iters, "Iteration budget per simulated row");
    rate->add_option("--seed", rate_seed, "Base seed for random instances");
    rate->add_flag("--simulate", rate_simulate,
                   "Run each grid point and fit the empirical rate");
    rate->add_option("--out", rate_out, "Write rows here instead of stdout");
    rate->add_option("--format", rate_format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    // classify-sweep -----------------------------------------------------
    auto* classify = app.add_subcommand(
        "classify-sweep",
        "Fitted empirical rates of the sparse classifier across relaxations");
    classify->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    classify->add_option("--config", config_path,
                         "Flat key=value file mirroring the flags; explicit flags win");
    std::int64_t cls_n = 400, cls_d = 20;
    double cls_sigma = 1.0, cls_lambda = 1.0, cls_rho = 0.0;
    std::string cls_alpha = "1.0,1.2,1.4,1.6,1.8";
    int cls_iters = 2000;
    std::uint64_t cls_seed = 0;
    std::string cls_out, cls_format = "csv";
    classify->add_option("--n", cls_n, "Sample count (even)");
    classify->add_option("--d", cls_d, "Feature count (even)");
    classify->add_option("--sigma", cls_sigma, "Feature noise scale");
    classify->add_option("--lambda", cls_lambda, "L1 ball radius");
    classify->add_option("--rho", cls_rho,
                         "Penalty; 0 picks sqrt(m_est * L_est) from the data");
    classify->add_option("--alpha", cls_alpha, "Relaxation grid");
    classify->add_option("--iters", cls_iters, "Iteration budget per relaxation");
    classify->add_option("--seed", cls_seed, "Dataset seed");
    classify->add_option("--out", cls_out, "Write rows here instead of stdout");
    classify->add_option("--format", cls_format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    // certify --------------------------------------------------------------
    auto* certify = app.add_subcommand(
        "certify", "Check the closed-form rate against a measured decay");
    certify->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    certify->add_option("--config", config_path,
                        "Flat key=value file mirroring the flags; explicit flags win");
    double cert_m = 0.0, cert_l = 0.0, cert_alpha = 0.0, cert_rho0 = 0.0;
    int cert_iters = 300;
    certify->add_option("--m", cert_m, "Strong-convexity modulus")->required();
    certify->add_option("--L", cert_l, "Gradient Lipschitz constant")->required();
    certify->add_option("--alpha", cert_alpha, "Relaxation parameter")->required();
    certify->add_option("--rho0", cert_rho0, "Normalized penalty")->required();
    certify->add_option("--iters", cert_iters, "Iteration budget");

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        if (!args.empty()) {
            for (const CLI::App* sub : {tune, rate, classify, certify}) {
                if (sub->get_name() == args.front()) {
                    expand_config_file(sub, args);
                    break;
                }
            }
        }
        std::reverse(args.begin(), args.end());  // the vector overload wants that
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (tune->parsed()) {
            const admmtune::ConditioningInfo cond{tune_m, tune_l, tune_sigma_max,
                                                  tune_sigma_min};
            std::optional<double> horizon;
            if (tune->count("--t") > 0) {
                if (tune_t < 1) throw std::invalid_argument("--t must be at least 1");
                horizon = static_cast<double>(tune_t);
            }
            return cmd_tune(cond, horizon, tune_margin, tune_out,
                            bench::parse_format(tune_format));
        }
        if (rate->parsed()) {
            bench::RateSweepConfig config;
            config.problem = bench::parse_problem(rate_problem);
            config.alphas = bench::parse_grid(rate_alpha);
            config.rho0s = bench::parse_grid(rate_rho0);
            config.kappas = bench::parse_grid(rate_kappa);
            config.iters = rate_iters;
            config.seed = rate_seed;
            config.simulate = rate_simulate;
            return cmd_rate_sweep(config, rate_out, bench::parse_format(rate_format));
        }
        if (classify->parsed()) {
            bench::ClassifySweepConfig config;
            config.n = static_cast<admmtune::Index>(cls_n);
            config.d = static_cast<admmtune::Index>(cls_d);
            config.sigma = cls_sigma;
            config.lambda = cls_lambda;
            config.rho = cls_rho;
            config.alphas = bench::parse_grid(cls_alpha);
            config.iters = cls_iters;
            config.seed = cls_seed;
            return cmd_classify_sweep(config, cls_out,
                                      bench::parse_format(cls_format));
        }
        if (certify->parsed())
            return cmd_certify(cert_m, cert_l, cert_alpha, cert_rho0, cert_iters);
    } catch (const admmtune::EstimationError& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return 2;
    } catch (const admmtune::SolverError& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
