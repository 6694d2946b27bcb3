#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "admmtune/logistic.hpp"
#include "admmtune/prox.hpp"

using namespace admmtune;

namespace {

std::string temp_csv(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

// Independent first-order oracle for the proximal subproblem
// min (1/N) sum log(1+exp(-y_i x_i.theta)) + rho/2 ||theta - target||^2,
// written with its own gradient code (plain sigmoid; margins stay small
// on these instances).
VectorXd gradient_descent_oracle(const MatrixXd& X, const VectorXd& y,
                                 const VectorXd& target, double rho) {
    const Index n = X.rows(), d = X.cols();
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(X.transpose() * X /
                                                static_cast<double>(n));
    const double lipschitz = 0.25 * eig.eigenvalues().maxCoeff() + rho;
    VectorXd theta = VectorXd::Zero(d);
    for (int it = 0; it < 200000; ++it) {
        VectorXd w(n);
        for (Index i = 0; i < n; ++i) {
            const double margin = y(i) * X.row(i).dot(theta);
            w(i) = -y(i) / (1.0 + std::exp(margin));
        }
        const VectorXd grad =
            X.transpose() * w / static_cast<double>(n) + rho * (theta - target);
        if (grad.norm() < 1e-12) break;
        theta -= grad / lipschitz;
    }
    return theta;
}

}  // namespace

TEST_SUITE("logistic") {

TEST_CASE("generated data is balanced, shifted, and reproducible") {
    const auto ds = generate_classification_data(10, 4, 1.0, 5);
    CHECK(ds.n() == 10);
    CHECK(ds.d() == 4);
    CHECK((ds.labels.array() == 1.0).count() == 5);
    CHECK((ds.labels.array() == -1.0).count() == 5);
    REQUIRE(ds.meta.has_value());
    CHECK(ds.meta->sigma == 1.0);
    CHECK(ds.meta->seed == 5);

    const auto again = generate_classification_data(10, 4, 1.0, 5);
    CHECK((ds.features - again.features).norm() == 0.0);
    const auto other = generate_classification_data(10, 4, 1.0, 6);
    CHECK((ds.features - other.features).norm() > 0.0);

    CHECK_THROWS_AS(generate_classification_data(9, 4, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(generate_classification_data(10, 3, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(generate_classification_data(10, 4, 0.0, 0), std::invalid_argument);
}

TEST_CASE("class means settle on the designed centers at large N") {
    const Index n = 10000, d = 4;
    const auto ds = generate_classification_data(n, d, 1.0, 7);
    const double band = 3.0 / std::sqrt(static_cast<double>(n) / 2.0);  // 3 sigma

    VectorXd mean_pos = VectorXd::Zero(d), mean_neg = VectorXd::Zero(d);
    for (Index i = 0; i < n; ++i) {
        if (ds.labels(i) > 0)
            mean_pos += ds.features.row(i).transpose();
        else
            mean_neg += ds.features.row(i).transpose();
    }
    mean_pos /= static_cast<double>(n) / 2.0;
    mean_neg /= static_cast<double>(n) / 2.0;

    for (Index j = 0; j < d; ++j) {
        const double center = j < d / 2 ? 0.5 : 0.0;
        CHECK(std::abs(mean_pos(j) - center) <= band);
        CHECK(std::abs(mean_neg(j) + center) <= band);
    }
    // The class means differ by 1 along the shifted half, 0 elsewhere.
    for (Index j = 0; j < d; ++j) {
        const double gap = j < d / 2 ? 1.0 : 0.0;
        CHECK(std::abs(mean_pos(j) - mean_neg(j) - gap) <= 2.0 * band);
    }
}

TEST_CASE("datasets round-trip through CSV exactly") {
    const auto ds = generate_classification_data(12, 4, 0.7, 11);
    const std::string path = temp_csv("admmtune_roundtrip.csv");
    save_dataset_csv(ds, path);
    const auto loaded = load_dataset_csv(path);
    CHECK(loaded.n() == ds.n());
    CHECK(loaded.d() == ds.d());
    CHECK((loaded.features - ds.features).norm() == 0.0);
    CHECK((loaded.labels - ds.labels).norm() == 0.0);
    CHECK(!loaded.meta.has_value());  // provenance is not stored in the file
    std::remove(path.c_str());
}

TEST_CASE("CSV loading rejects malformed files") {
    CHECK_THROWS_AS(load_dataset_csv(temp_csv("admmtune_missing_file.csv")),
                    std::runtime_error);

    const std::string bad_label = temp_csv("admmtune_bad_label.csv");
    {
        std::ofstream out(bad_label);
        out << "2,0.5,0.5\n";
    }
    CHECK_THROWS_AS(load_dataset_csv(bad_label), std::runtime_error);
    std::remove(bad_label.c_str());

    const std::string ragged = temp_csv("admmtune_ragged.csv");
    {
        std::ofstream out(ragged);
        out << "1,0.5,0.5\n-1,0.25\n";
    }
    CHECK_THROWS_AS(load_dataset_csv(ragged), std::runtime_error);
    std::remove(ragged.c_str());
}

TEST_CASE("curvature estimation is exact on an isotropic design") {
    ClassificationDataset ds;
    ds.features = MatrixXd::Identity(4, 4);
    ds.labels = VectorXd::Ones(4);
    ds.labels(2) = -1.0;
    ds.labels(3) = -1.0;
    const auto est = estimate_kappa_f(ds, 1.0);
    CHECK(std::abs(est.kappa_f_est - 1.0) <= 1e-12);
    CHECK(std::abs(est.m_est - 0.25 / 4.0) <= 1e-14);
    CHECK(std::abs(est.L_est - 0.25 / 4.0) <= 1e-14);
    CHECK(std::abs(est.m_est_loose - 4.0 * est.m_est) <= 1e-14);
    CHECK(std::abs(est.L_est_loose - 4.0 * est.L_est) <= 1e-14);
}

TEST_CASE("curvature estimation flags rank-deficient designs") {
    ClassificationDataset ds;
    ds.features = MatrixXd::Zero(6, 3);
    ds.features.col(0) = VectorXd::LinSpaced(6, 1.0, 2.0);
    ds.features.col(1) = ds.features.col(0);  // duplicated feature
    ds.features.col(2) = VectorXd::LinSpaced(6, -1.0, 1.5);
    ds.labels = VectorXd::Ones(6);
    CHECK_THROWS_AS(estimate_kappa_f(ds, 1.0), EstimationError);

    ClassificationDataset wide;
    wide.features = MatrixXd::Identity(3, 4).topRows(3);
    wide.labels = VectorXd::Ones(3);
    CHECK_THROWS_AS(estimate_kappa_f(wide, 1.0), EstimationError);  // N < d

    const auto ok = generate_classification_data(40, 4, 1.0, 1);
    CHECK_THROWS_AS(estimate_kappa_f(ok, 0.0), std::invalid_argument);
}

TEST_CASE("the benchmark-size dataset is measurably ill-conditioned") {
    // Monte-Carlo calibrated band for N=400, d=20, sigma=1: the Gram
    // spectrum spans roughly [0.6, 3.5] once the class-shift spike is
    // included, i.e. a condition number near 5, far from 1.
    const auto ds = generate_classification_data(400, 20, 1.0, 0);
    const auto est = estimate_kappa_f(ds, 1.0);
    CHECK(est.kappa_f_est > 3.0);
    CHECK(est.kappa_f_est < 12.0);
    CHECK(est.m_est > 0.0);
    CHECK(est.L_est > est.m_est);
}

TEST_CASE("instance construction validates its inputs") {
    auto ds = generate_classification_data(10, 4, 1.0, 2);
    CHECK_THROWS_AS(LogisticL1Instance(ds, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(LogisticL1Instance(ds, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(LogisticL1Instance(ds, 1.0, 1e-10, 0), std::invalid_argument);

    auto bad = ds;
    bad.labels(3) = 0.5;
    CHECK_THROWS_AS(LogisticL1Instance(bad, 1.0), std::invalid_argument);

    auto wide = ds;
    wide.features = MatrixXd::Ones(2, 4);
    wide.labels = VectorXd::Ones(2);
    CHECK_THROWS_AS(LogisticL1Instance(wide, 1.0), std::invalid_argument);

    const LogisticL1Instance ok(ds, 1.0);
    CHECK(ok.dims().p == 4);
    CHECK(ok.dims().q == 4);
    CHECK(ok.dims().r == 4);
}

TEST_CASE("with no informative features the x-update is the proximal target") {
    ClassificationDataset ds;
    ds.features = MatrixXd::Zero(6, 3);
    ds.labels = VectorXd::Ones(6);
    ds.labels.tail(3) = -VectorXd::Ones(3);
    const LogisticL1Instance instance(ds, 1.0);
    VectorXd z(3), u(3);
    z << 0.4, -0.2, 0.9;
    u << 0.1, 0.3, -0.5;
    const VectorXd x = instance.x_update(z, u, 2.0);
    CHECK((x - (z - u)).norm() <= 1e-14);
}

TEST_CASE("the x-update meets its own optimality tolerance") {
    const auto ds = generate_classification_data(40, 6, 1.0, 3);
    const LogisticL1Instance instance(ds, 1.0);
    VectorXd z = VectorXd::LinSpaced(6, -0.8, 1.1);
    VectorXd u = VectorXd::LinSpaced(6, 0.4, -0.3);
    const double rho = 0.7;
    const VectorXd x = instance.x_update(z, u, rho);
    const VectorXd stationarity = instance.smooth_gradient(x) + rho * (x - z + u);
    CHECK(stationarity.norm() <= 1e-10);
}

TEST_CASE("the x-update agrees with an independent gradient-descent oracle") {
    const auto ds = generate_classification_data(40, 6, 1.0, 4);
    const LogisticL1Instance instance(ds, 1.0);
    VectorXd z(6), u(6);
    z << 0.2, -0.4, 0.6, 0.0, -0.1, 0.3;
    u << -0.3, 0.1, 0.2, 0.5, 0.0, -0.2;
    const double rho = 1.0;
    const VectorXd fast = instance.x_update(z, u, rho);
    const VectorXd slow = gradient_descent_oracle(ds.features, ds.labels, z - u, rho);
    CHECK((fast - slow).norm() <= 1e-8);
}

TEST_CASE("an exhausted inner solver reports the leftover gradient") {
    auto ds = generate_classification_data(40, 6, 1.0, 3);
    ds.features *= 20.0;  // large margins force several Newton steps
    const LogisticL1Instance strict(ds, 1.0, 1e-12, 1);
    const VectorXd z = VectorXd::Ones(6), u = VectorXd::Zero(6);
    CHECK_THROWS_AS(strict.x_update(z, u, 0.5), SolverError);
}

TEST_CASE("the z-update is the ball projection of the relaxed point") {
    const auto ds = generate_classification_data(20, 4, 1.0, 8);
    const LogisticL1Instance instance(ds, 0.8);
    VectorXd x(4), z(4), u(4);
    x << 1.0, -2.0, 0.3, 0.7;
    z << 0.2, 0.1, -0.4, 0.0;
    u << 0.5, -0.1, 0.2, -0.6;
    const double alpha = 1.6;
    const VectorXd got = instance.z_update(x, z, u, 3.0, alpha);
    const VectorXd expected = project_l1_ball(alpha * x + (1.0 - alpha) * z + u, 0.8);
    CHECK((got - expected).norm() == 0.0);
}

TEST_CASE("the solver drives the primal residual below tolerance") {
    const auto ds = generate_classification_data(80, 8, 1.0, 9);
    const LogisticL1Instance instance(ds, 1.0);
    StoppingRule stop;
    stop.max_iters = 500;
    stop.residual_tol = 1e-6;
    const auto trace = run(instance, {1.0, 1.0}, initial_state(instance), stop);
    CHECK(trace.reason == TerminationReason::ResidualTolerance);
    CHECK(trace.records.back().residual < 1e-6);
}

TEST_CASE("the reference solution behaves like a fixed point") {
    const auto ds = generate_classification_data(30, 4, 1.0, 10);
    const LogisticL1Instance instance(ds, 1.0);
    const AdmmParams params{1.0, 1.0};
    const auto fp = fixed_point_of(instance, params, 1e-12, 50000);

    IterateState state;
    state.x = fp.z;
    state.z = fp.z;
    state.u = fp.u;
    state.t = 0;
    const auto next = step(instance, state, params);
    CHECK((next.z - fp.z).norm() <= 1e-9);
    CHECK((next.u - fp.u).norm() <= 1e-9);

    CHECK_THROWS_AS(fixed_point_of(instance, params, 1e-12, 2), EstimationError);
}

}  // TEST_SUITE
