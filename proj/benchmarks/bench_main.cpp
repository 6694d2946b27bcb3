#include <benchmark/benchmark.h>

#include <random>

#include "admmtune/engine.hpp"
#include "admmtune/logistic.hpp"
#include "admmtune/prox.hpp"
#include "admmtune/quadratic.hpp"
#include "admmtune/rate_theory.hpp"

namespace {

void BM_LinearRate(benchmark::State& state) {
    double kappa = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(admmtune::linear_rate(1.5, 1.3, kappa));
        kappa += 1.0;  // defeat value caching
    }
}
BENCHMARK(BM_LinearRate);

void BM_Certificate(benchmark::State& state) {
    double kappa = 2.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(admmtune::certificate(1.5, 0.7, kappa));
        kappa += 1.0;
    }
}
BENCHMARK(BM_Certificate);

void BM_BestAlpha(benchmark::State& state) {
    double t = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(admmtune::best_alpha(1.3, 25.0, t));
        t += 1.0;
    }
}
BENCHMARK(BM_BestAlpha);

void BM_OptimalParams(benchmark::State& state) {
    const admmtune::ConditioningInfo cond{1.0, 50.0, 3.0, 1.0};
    for (auto _ : state) benchmark::DoNotOptimize(admmtune::optimal_params(cond));
}
BENCHMARK(BM_OptimalParams);

void BM_QuadraticStep(benchmark::State& state) {
    const auto p = static_cast<admmtune::Index>(state.range(0));
    const admmtune::QuadraticInstance instance =
        admmtune::make_random_quadratic(p, 7, 1.0, 10.0, 2.0);
    const admmtune::AdmmParams params{1.5, 3.0};
    admmtune::IterateState iterate = admmtune::initial_state(instance);
    for (auto _ : state) {
        iterate = admmtune::step(instance, iterate, params);
        benchmark::DoNotOptimize(iterate.z.data());
    }
}
BENCHMARK(BM_QuadraticStep)->Arg(8)->Arg(64)->Arg(256);

void BM_ProjectL1Ball(benchmark::State& state) {
    const auto d = static_cast<admmtune::Index>(state.range(0));
    std::mt19937_64 rng(99);
    std::normal_distribution<double> normal;
    admmtune::VectorXd v(d);
    for (admmtune::Index i = 0; i < d; ++i) v(i) = normal(rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(admmtune::project_l1_ball(v, 1.0));
}
BENCHMARK(BM_ProjectL1Ball)->Arg(64)->Arg(1024)->Arg(16384);

void BM_LogisticXUpdate(benchmark::State& state) {
    const auto dataset = admmtune::generate_classification_data(400, 20, 1.0, 0);
    const admmtune::LogisticL1Instance instance(dataset, 1.0);
    const admmtune::VectorXd z = admmtune::VectorXd::Zero(20);
    admmtune::VectorXd u = admmtune::VectorXd::Zero(20);
    u(3) = 0.2;
    for (auto _ : state)
        benchmark::DoNotOptimize(instance.x_update(z, u, 1.0));
}
BENCHMARK(BM_LogisticXUpdate);

}  // namespace

BENCHMARK_MAIN();
