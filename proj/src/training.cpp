#include "pinnosc/training.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pinnosc/csv.hpp"
#include "pinnosc/kernels.hpp"

namespace pinnosc::training {

AdamState make_adam_state(std::size_t n, const AdamConfig& config) {
    if (config.learning_rate <= 0.0) throw std::invalid_argument("learning rate must be positive");
    if (config.beta1 < 0.0 || config.beta1 >= 1.0 || config.beta2 < 0.0 || config.beta2 >= 1.0)
        throw std::invalid_argument("beta coefficients must lie in [0,1)");
    if (config.lr_final < 0.0 || config.lr_final > config.learning_rate)
        throw std::invalid_argument("final learning rate must lie in [0, learning_rate]");
    AdamState s;
    s.m.assign(n, 0.0);
    s.v.assign(n, 0.0);
    s.config = config;
    return s;
}

void adam_step(std::span<double> params, std::span<const double> grad, AdamState& state) {
    if (params.size() != grad.size() || params.size() != state.m.size())
        throw std::invalid_argument("parameter, gradient and state sizes disagree");
    for (double g : grad) {
        if (!std::isfinite(g))
            throw std::runtime_error("non-finite gradient at step " +
                                     std::to_string(state.step_count + 1));
    }
    state.step_count += 1;
    const AdamConfig& c = state.config;
    const double mhat = 1.0 / (1.0 - std::pow(c.beta1, static_cast<double>(state.step_count)));
    const double vhat = 1.0 / (1.0 - std::pow(c.beta2, static_cast<double>(state.step_count)));
    kernels::active_ops().adam_update(params.data(), state.m.data(), state.v.data(), grad.data(),
                                      static_cast<int>(params.size()), c.learning_rate, c.beta1,
                                      c.beta2, c.epsilon, mhat, vhat);
}

void TrainConfig::validate() const {
    problem.validate();
    if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (test_grid < 2) throw std::invalid_argument("test grid needs at least two points");
    if (weights.data < 0 || weights.governing < 0 || weights.initial < 0 || weights.boundary < 0 ||
        weights.regularization < 0)
        throw std::invalid_argument("loss weights must be non-negative");
    if (weights.data > 0 && training.points.empty())
        throw std::invalid_argument("data term is active but the training set is empty");
    if ((weights.governing > 0 || weights.regularization > 0) && collocation.times.empty())
        throw std::invalid_argument("residual terms are active but there are no collocation points");
    if (weights.regularization > 0 && !problems::has_energy(problem))
        throw std::invalid_argument("energy regularization needs a conservative problem");
    if (reference.times.size() < 2) throw std::invalid_argument("reference trajectory is missing");
}

LossResult compute_loss(const TrainConfig& cfg, const network::Mlp& mlp, ad::Tape& tape) {
    LossResult out;
    ad::Var total = tape.constant(0.0);

    if (cfg.weights.data > 0.0) {
        if (cfg.training.points.empty())
            throw std::invalid_argument("data term is active but the training set is empty");
        ad::Var sum = tape.constant(0.0);
        for (const auto& pt : cfg.training.points) {
            const auto u = mlp.forward_jet(tape, pt.t);
            const ad::Var d = u.v0 - pt.u;
            sum = sum + d * d;
        }
        const ad::Var term = sum * (cfg.weights.data / cfg.training.points.size());
        out.breakdown.data = term.value();
        total = total + term;
    }

    if (cfg.weights.governing > 0.0 || cfg.weights.regularization > 0.0) {
        if (cfg.collocation.times.empty())
            throw std::invalid_argument("residual terms are active but there are no collocation points");
        const std::size_t n = cfg.collocation.times.size();
        ad::Var gov_sum = tape.constant(0.0);
        ad::Var reg_sum = tape.constant(0.0);
        const bool want_reg = cfg.weights.regularization > 0.0;
        const double e0 = want_reg ? problems::energy(cfg.problem, cfg.problem.u0, cfg.problem.du0)
                                   : 0.0;
        for (double t : cfg.collocation.times) {
            const auto u = mlp.forward_jet(tape, t);
            if (cfg.weights.governing > 0.0) {
                const ad::Var r = problems::residual(cfg.problem, u, ad::seed_jet(tape, t));
                gov_sum = gov_sum + r * r;
            }
            if (want_reg) {
                const ad::Var e = problems::energy(cfg.problem, u.v0, u.v1) - e0;
                reg_sum = reg_sum + e * e;
            }
        }
        if (cfg.weights.governing > 0.0) {
            const ad::Var term = gov_sum * (cfg.weights.governing / n);
            out.breakdown.governing = term.value();
            total = total + term;
        }
        if (want_reg) {
            const ad::Var term = reg_sum * (cfg.weights.regularization / n);
            out.breakdown.regularization = term.value();
            total = total + term;
        }
    }

    if (cfg.weights.initial > 0.0) {
        const auto u = mlp.forward_jet(tape, cfg.problem.t_start);
        const auto res = problems::initial_condition_residuals(cfg.problem, u);
        ad::Var sum = tape.constant(0.0);
        for (const ad::Var& r : res) sum = sum + r * r;
        const ad::Var term = sum * (cfg.weights.initial / res.size());
        out.breakdown.initial = term.value();
        total = total + term;
    }

    // no boundary conditions arise for these initial-value problems; the term
    // is kept in the breakdown so loss records share one schema
    out.breakdown.boundary = 0.0;

    out.breakdown.total = total.value();
    out.total = total;
    return out;
}

TrainResult train(const TrainConfig& cfg) {
    cfg.validate();
    const network::Mlp mlp(cfg.network);
    network::ParameterVector params = mlp.init(cfg.init_seed);
    AdamState state = make_adam_state(params.size(), cfg.optimizer);
    ad::Tape tape(params);

    TrainResult result;
    result.history.reserve(cfg.epochs);

    const double lr0 = cfg.optimizer.learning_rate;
    const double lrf = cfg.optimizer.lr_final;

    const auto start = std::chrono::steady_clock::now();
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        if (lrf > 0.0 && cfg.epochs > 1) {
            const double frac = static_cast<double>(epoch) / (cfg.epochs - 1);
            state.config.learning_rate =
                lrf + (lr0 - lrf) * 0.5 * (1.0 + std::cos(std::numbers::pi * frac));
        }
        tape.reset(params);
        LossResult loss = compute_loss(cfg, mlp, tape);
        result.history.push_back(loss.breakdown);
        if (!std::isfinite(loss.breakdown.total) || loss.breakdown.total > 1e12) {
            throw training_diverged(epoch, std::move(result.history),
                                    "loss diverged at epoch " + std::to_string(epoch) +
                                        " (total = " + std::to_string(loss.breakdown.total) + ")");
        }
        const auto grad = tape.gradient(loss.total);
        adam_step(params, grad, state);
    }
    const auto stop = std::chrono::steady_clock::now();

    result.params = std::move(params);
    result.metrics.wall_seconds = std::chrono::duration<double>(stop - start).count();
    result.metrics.epochs_run = cfg.epochs;

    const auto grid = data::linspace(cfg.problem.t_start, cfg.problem.t_end, cfg.test_grid);
    result.metrics.mse = evaluate_mse(mlp, result.params, grid, cfg.reference);
    const double mid = 0.5 * (cfg.problem.t_start + cfg.problem.t_end);
    std::vector<double> left, right;
    for (double t : grid) {
        if (t <= mid) left.push_back(t);
        if (t >= mid) right.push_back(t);
    }
    result.metrics.mse_left = evaluate_mse(mlp, result.params, left, cfg.reference);
    result.metrics.mse_right = evaluate_mse(mlp, result.params, right, cfg.reference);
    return result;
}

double evaluate_mse(const network::Mlp& mlp, std::span<const double> params,
                    std::span<const double> grid, const reference::Trajectory& ref) {
    if (grid.empty()) throw std::invalid_argument("evaluation grid is empty");
    double sum = 0.0;
    for (double t : grid) {
        const double d = mlp.value(params, t) - reference::sample(ref, t)[0];
        sum += d * d;
    }
    return sum / grid.size();
}

void write_loss_csv(const std::vector<LossBreakdown>& history, const std::filesystem::path& path) {
    std::vector<std::vector<double>> rows;
    rows.reserve(history.size());
    for (std::size_t i = 0; i < history.size(); ++i) {
        const LossBreakdown& b = history[i];
        rows.push_back({static_cast<double>(i), b.total, b.data, b.governing, b.initial, b.boundary,
                        b.regularization});
    }
    csv::write_table(path, "epoch,total,data,governing,initial,boundary,regularization", rows);
}

training_diverged::training_diverged(int epoch_, std::vector<LossBreakdown> history_,
                                     const std::string& what_)
    : std::runtime_error(what_), epoch(epoch_), history(std::move(history_)) {}

}  // namespace pinnosc::training
