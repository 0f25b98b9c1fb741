#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pinnosc/csv.hpp"
#include "pinnosc/data.hpp"
#include "pinnosc/training.hpp"

using namespace pinnosc;
using problems::OscillatorProblem;
using training::TrainConfig;

namespace {

double rel_err(double got, double want, double floor = 1e-3) {
    return std::abs(got - want) / std::max({std::abs(got), std::abs(want), floor});
}

// small configuration that exercises every loss term
TrainConfig tiny_duffing_config() {
    TrainConfig cfg;
    cfg.problem = OscillatorProblem::duffing();
    cfg.network = {1, 4};
    cfg.reference = problems::reference_trajectory(cfg.problem, 2000);
    cfg.training = data::generate_training_data(cfg.reference, 0.0, 1.5, 3, 0.0, 1);
    cfg.collocation = data::generate_collocation(0.0, 1.5, 3, data::Strategy::Uniform, 1);
    cfg.weights = {1.0, 0.05, 1.0, 0.0, 1e-6};
    cfg.epochs = 5;
    return cfg;
}

TrainConfig small_primer_config(int epochs) {
    TrainConfig cfg;
    cfg.problem = OscillatorProblem::primer();
    cfg.network = {2, 16};
    cfg.reference = problems::reference_trajectory(cfg.problem, 3000);
    cfg.training = data::generate_training_data(cfg.reference, 0.0, 30.0, 26, 0.0, 1);
    cfg.collocation = data::generate_collocation(0.0, 30.0, 50, data::Strategy::Uniform, 1);
    cfg.weights.data = 1.0;
    cfg.weights.governing = 6e-2;
    cfg.epochs = epochs;
    return cfg;
}

}  // namespace

TEST_CASE("one Adam step with a known gradient") {
    training::AdamState st = training::make_adam_state(1, {3e-3, 0.9, 0.999, 1e-8});
    std::vector<double> p = {1.0};
    const std::vector<double> g = {0.5};
    training::adam_step(p, g, st);
    // bias correction makes the first step lr * g / (|g| + eps')
    CHECK(p[0] == doctest::Approx(1.0 - 3e-3).epsilon(1e-9));
    CHECK(st.step_count == 1);
    CHECK(st.m[0] == doctest::Approx(0.05).epsilon(1e-15));
    CHECK(st.v[0] == doctest::Approx(2.5e-4).epsilon(1e-15));
}

TEST_CASE("Adam drives a quadratic to its minimum") {
    training::AdamState st = training::make_adam_state(1, {1e-2, 0.9, 0.999, 1e-8});
    std::vector<double> w = {3.0};
    for (int i = 0; i < 5000; ++i) {
        const std::vector<double> g = {2.0 * w[0]};
        training::adam_step(w, g, st);
    }
    CHECK(std::abs(w[0]) < 1e-3);  // measured ~1e-80; anything near zero is fine
}

TEST_CASE("Adam rejects non-finite gradients and size mismatches") {
    training::AdamState st = training::make_adam_state(2, {});
    std::vector<double> p = {1.0, 2.0};
    const std::vector<double> bad = {0.1, std::nan("")};
    CHECK_THROWS_AS(training::adam_step(p, bad, st), std::runtime_error);
    const std::vector<double> short_g = {0.1};
    CHECK_THROWS_AS(training::adam_step(p, short_g, st), std::invalid_argument);
    CHECK_THROWS_AS((void)training::make_adam_state(2, {-1.0, 0.9, 0.999, 1e-8}),
                    std::invalid_argument);
}

TEST_CASE("loss breakdown: term sum matches the optimized total") {
    auto cfg = tiny_duffing_config();
    const network::Mlp mlp(cfg.network);
    const auto params = mlp.init(2);
    ad::Tape tape(params);
    const auto loss = training::compute_loss(cfg, mlp, tape);
    const auto& b = loss.breakdown;
    CHECK(b.boundary == 0.0);
    CHECK(std::abs((b.data + b.governing + b.initial + b.boundary + b.regularization) - b.total) <=
          1e-12 * std::max(1.0, std::abs(b.total)));
    CHECK(b.total == loss.total.value());
    CHECK(b.data > 0.0);
    CHECK(b.governing > 0.0);
    CHECK(b.initial > 0.0);
    CHECK(b.regularization > 0.0);
}

TEST_CASE("a zero weight removes its term") {
    auto cfg = tiny_duffing_config();
    cfg.weights = {1.0, 0.0, 0.0, 0.0, 0.0};
    cfg.collocation.times.clear();  // allowed: no active term needs them
    const network::Mlp mlp(cfg.network);
    const auto params = mlp.init(2);
    ad::Tape tape(params);
    const auto loss = training::compute_loss(cfg, mlp, tape);
    CHECK(loss.breakdown.governing == 0.0);
    CHECK(loss.breakdown.initial == 0.0);
    CHECK(loss.breakdown.regularization == 0.0);
    CHECK(loss.breakdown.total == loss.breakdown.data);
}

TEST_CASE("data term equals its definition computed independently") {
    auto cfg = tiny_duffing_config();
    cfg.weights = {0.7, 0.0, 0.0, 0.0, 0.0};
    cfg.collocation.times.clear();
    const network::Mlp mlp(cfg.network);
    const auto params = mlp.init(4);
    ad::Tape tape(params);
    const auto loss = training::compute_loss(cfg, mlp, tape);
    double expect = 0.0;
    for (const auto& pt : cfg.training.points) {
        const double d = mlp.value(params, pt.t) - pt.u;
        expect += d * d;
    }
    expect *= 0.7 / cfg.training.points.size();
    CHECK(loss.breakdown.data == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("worked loss values: squared error and a single residual point") {
    // constant network u = 1.5 (all weights zero, output bias 1.5) vs target 1
    training::TrainConfig cfg;
    cfg.problem = problems::OscillatorProblem::primer();
    cfg.network = {1, 1};
    cfg.reference = problems::reference_trajectory(cfg.problem, 100);
    cfg.training.points = {{2.0, 1.0}};
    cfg.weights = {1.0, 0.0, 0.0, 0.0, 0.0};
    const network::Mlp mlp(cfg.network);
    network::ParameterVector p(mlp.parameter_count(), 0.0);
    p.back() = 1.5;
    {
        ad::Tape tape(p);
        const auto loss = training::compute_loss(cfg, mlp, tape);
        CHECK(loss.breakdown.total == doctest::Approx(0.25).epsilon(1e-15));
        CHECK(loss.breakdown.data == loss.breakdown.total);
    }

    // zero network, one collocation point at t=1: residual is -sin(pi/2) = -1,
    // so the governing term is exactly the weight
    cfg.training.points.clear();
    cfg.weights = {0.0, 6e-2, 0.0, 0.0, 0.0};
    cfg.collocation.times = {1.0};
    std::fill(p.begin(), p.end(), 0.0);
    {
        ad::Tape tape(p);
        const auto loss = training::compute_loss(cfg, mlp, tape);
        CHECK(loss.breakdown.governing == doctest::Approx(0.06).epsilon(1e-15));
        CHECK(loss.breakdown.total == loss.breakdown.governing);
    }
}

TEST_CASE("zero gradient leaves parameters unchanged") {
    training::AdamState st = training::make_adam_state(3, {});
    std::vector<double> p = {1.0, -2.0, 0.5};
    const auto before = p;
    const std::vector<double> g = {0.0, 0.0, 0.0};
    training::adam_step(p, g, st);
    CHECK(p == before);
}

TEST_CASE("a single epoch yields a single history row") {
    auto cfg = tiny_duffing_config();
    cfg.epochs = 1;
    const auto result = training::train(cfg);
    CHECK(result.history.size() == 1);
    CHECK(result.metrics.epochs_run == 1);
}

TEST_CASE("annealed rate with equal endpoints reproduces the constant-rate run") {
    auto cfg = tiny_duffing_config();
    cfg.epochs = 40;
    const auto constant = training::train(cfg);
    cfg.optimizer.lr_final = cfg.optimizer.learning_rate;
    const auto annealed = training::train(cfg);
    REQUIRE(constant.history.size() == annealed.history.size());
    for (std::size_t i = 0; i < constant.history.size(); ++i)
        CHECK(constant.history[i].total == annealed.history[i].total);
}

TEST_CASE("annealing toward a smaller rate changes the trajectory") {
    auto cfg = tiny_duffing_config();
    cfg.epochs = 40;
    const auto constant = training::train(cfg);
    cfg.optimizer.lr_final = 1e-5;
    const auto annealed = training::train(cfg);
    CHECK(std::isfinite(annealed.history.back().total));
    CHECK(annealed.history.back().total != constant.history.back().total);
}

TEST_CASE("the final rate must lie between zero and the starting rate") {
    CHECK_THROWS_AS((void)training::make_adam_state(1, {3e-3, 0.9, 0.999, 1e-8, -1e-4}),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)training::make_adam_state(1, {3e-3, 0.9, 0.999, 1e-8, 4e-3}),
                    std::invalid_argument);
}

TEST_CASE("scaling every weight scales the loss and its gradient by the same factor") {
    auto cfg = tiny_duffing_config();
    const network::Mlp mlp(cfg.network);
    const auto params = mlp.init(6);
    ad::Tape tape(params);
    const auto base = training::compute_loss(cfg, mlp, tape);
    const auto gbase = tape.gradient(base.total);

    auto scaled = cfg;
    const double c = 3.0;
    scaled.weights.data *= c;
    scaled.weights.governing *= c;
    scaled.weights.initial *= c;
    scaled.weights.regularization *= c;
    ad::Tape tape2(params);
    const auto up = training::compute_loss(scaled, mlp, tape2);
    const auto gup = tape2.gradient(up.total);

    CHECK(up.breakdown.total == doctest::Approx(c * base.breakdown.total).epsilon(1e-12));
    for (std::size_t i = 0; i < gbase.size(); ++i)
        CHECK(gup[i] == doctest::Approx(c * gbase[i]).epsilon(1e-10));
}

TEST_CASE("gradient of the full multi-term loss matches finite differences") {
    auto cfg = tiny_duffing_config();
    const network::Mlp mlp(cfg.network);
    auto params = mlp.init(3);

    ad::Tape tape(params);
    const auto loss = training::compute_loss(cfg, mlp, tape);
    const auto grad = tape.gradient(loss.total);
    REQUIRE(grad.size() == params.size());

    auto loss_at = [&](const network::ParameterVector& q) {
        ad::Tape t2(q);
        return training::compute_loss(cfg, mlp, t2).breakdown.total;
    };
    const double h = 1e-6;
    double worst = 0.0;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double keep = params[i];
        params[i] = keep + h;
        const double up = loss_at(params);
        params[i] = keep - h;
        const double dn = loss_at(params);
        params[i] = keep;
        worst = std::max(worst, rel_err(grad[i], (up - dn) / (2 * h), 1e-2));
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("a short training run lowers the loss and fills the history") {
    auto cfg = small_primer_config(300);
    const auto result = training::train(cfg);
    REQUIRE(result.history.size() == 300);
    CHECK(result.metrics.epochs_run == 300);
    CHECK(result.history.back().total < result.history.front().total);
    CHECK(result.history.back().total > 0.0);
    CHECK(result.metrics.wall_seconds > 0.0);
    CHECK(std::isfinite(result.metrics.mse));
    CHECK(result.params.size() == network::Mlp(cfg.network).parameter_count());
}

TEST_CASE("training is bitwise deterministic for a fixed configuration") {
    auto cfg = small_primer_config(50);
    const auto a = training::train(cfg);
    const auto b = training::train(cfg);
    REQUIRE(a.params.size() == b.params.size());
    CHECK(std::memcmp(a.params.data(), b.params.data(), a.params.size() * sizeof(double)) == 0);
    REQUIRE(a.history.size() == b.history.size());
    for (std::size_t i = 0; i < a.history.size(); ++i)
        CHECK(a.history[i].total == b.history[i].total);
    CHECK(a.metrics.mse == b.metrics.mse);
}

TEST_CASE("different init seeds give different parameters") {
    auto cfg = small_primer_config(50);
    const auto a = training::train(cfg);
    cfg.init_seed = 1;
    const auto b = training::train(cfg);
    CHECK(a.params != b.params);
}

TEST_CASE("an absurd learning rate raises the divergence error with history attached") {
    auto cfg = small_primer_config(2000);
    cfg.optimizer.learning_rate = 1e6;
    try {
        (void)training::train(cfg);
        FAIL("expected training_diverged");
    } catch (const training::training_diverged& e) {
        CHECK(e.epoch >= 1);
        CHECK(e.history.size() == static_cast<std::size_t>(e.epoch) + 1);
        CHECK(std::string(e.what()).find("epoch") != std::string::npos);
    }
}

TEST_CASE("configuration validation catches inconsistent setups") {
    auto cfg = tiny_duffing_config();
    cfg.epochs = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = tiny_duffing_config();
    cfg.weights.governing = -0.1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = tiny_duffing_config();
    cfg.problem = OscillatorProblem::van_der_pol(5.0);
    CHECK(cfg.weights.regularization > 0.0);
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);  // energy pin on a dissipative system

    cfg = tiny_duffing_config();
    cfg.training.points.clear();
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = tiny_duffing_config();
    cfg.collocation.times.clear();
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = tiny_duffing_config();
    cfg.reference = reference::Trajectory{};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("all-zero parameters give the mean-square of the reference itself") {
    const auto problem = OscillatorProblem::duffing();
    const auto ref = problems::reference_trajectory(problem, 2000);
    const network::Mlp mlp({1, 4});
    const network::ParameterVector zeros(mlp.parameter_count(), 0.0);
    const auto grid = data::linspace(0.0, 1.5, 40);
    double expect = 0.0;
    for (double t : grid) {
        const double u = reference::sample(ref, t)[0];
        expect += u * u;
    }
    expect /= grid.size();
    CHECK(training::evaluate_mse(mlp, zeros, grid, ref) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("loss history file carries the fixed column layout") {
    std::vector<training::LossBreakdown> hist(2);
    hist[0] = {1.5, 1.0, 0.25, 0.25, 0.0, 0.0};
    hist[1] = {0.75, 0.5, 0.125, 0.125, 0.0, 0.0};
    const auto path = std::filesystem::temp_directory_path() / "pinnosc_loss_test.csv";
    training::write_loss_csv(hist, path);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::filesystem::remove(path);
    CHECK(ss.str() ==
          "epoch,total,data,governing,initial,boundary,regularization\n"
          "0,1.5,1,0.25,0.25,0,0\n"
          "1,0.75,0.5,0.125,0.125,0,0\n");
}
