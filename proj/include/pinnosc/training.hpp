#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pinnosc/autodiff.hpp"
#include "pinnosc/data.hpp"
#include "pinnosc/network.hpp"
#include "pinnosc/problems.hpp"
#include "pinnosc/reference.hpp"

namespace pinnosc::training {

// Per-term multipliers. A weight of exactly zero removes its term from the
// loss graph entirely; the term is reported as 0.
struct LossWeights {
    double data = 1.0;
    double governing = 0.0;
    double initial = 0.0;
    double boundary = 0.0;
    double regularization = 0.0;  // energy pinning, conservative problems only
};

struct LossBreakdown {
    double total = 0.0;
    double data = 0.0;
    double governing = 0.0;
    double initial = 0.0;
    double boundary = 0.0;
    double regularization = 0.0;
};

struct AdamConfig {
    double learning_rate = 3e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    // 0 keeps the rate constant; a positive value cosine-anneals the rate from
    // learning_rate down to lr_final across the epoch budget.
    double lr_final = 0.0;
};

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    long step_count = 0;
    AdamConfig config;
};

AdamState make_adam_state(std::size_t n, const AdamConfig& config);

// One bias-corrected update in place. Rejects non-finite gradients.
void adam_step(std::span<double> params, std::span<const double> grad, AdamState& state);

struct TrainConfig {
    problems::OscillatorProblem problem;
    network::MlpConfig network;
    data::TrainingSet training;
    data::CollocationSet collocation;
    LossWeights weights;
    AdamConfig optimizer;
    int epochs = 24000;
    std::uint64_t init_seed = 0;
    reference::Trajectory reference;  // for evaluation metrics
    int test_grid = 300;

    void validate() const;
};

struct RunMetrics {
    double mse = 0.0;        // against the reference on the test grid
    double mse_left = 0.0;   // t <= domain midpoint
    double mse_right = 0.0;  // t >= domain midpoint
    double wall_seconds = 0.0;
    int epochs_run = 0;
};

struct TrainResult {
    network::ParameterVector params;
    std::vector<LossBreakdown> history;  // one entry per epoch
    RunMetrics metrics;
};

// Loss evaluation history plus the epoch that broke, thrown when the total
// loss leaves the finite range during training.
class training_diverged : public std::runtime_error {
public:
    training_diverged(int epoch_, std::vector<LossBreakdown> history_, const std::string& what_);
    int epoch;
    std::vector<LossBreakdown> history;
};

// Weighted mean-square loss over one tape pass. Every network evaluation,
// supervised or collocation, goes through the same jet forward pass.
struct LossResult {
    LossBreakdown breakdown;
    ad::Var total;
};
LossResult compute_loss(const TrainConfig& cfg, const network::Mlp& mlp, ad::Tape& tape);

// Full-batch Adam for cfg.epochs epochs. Deterministic for a fixed config.
TrainResult train(const TrainConfig& cfg);

// Mean squared error of the network against the reference on a time grid.
double evaluate_mse(const network::Mlp& mlp, std::span<const double> params,
                    std::span<const double> grid, const reference::Trajectory& ref);

// Header: epoch,total,data,governing,initial,boundary,regularization
void write_loss_csv(const std::vector<LossBreakdown>& history, const std::filesystem::path& path);

}  // namespace pinnosc::training
