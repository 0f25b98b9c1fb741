#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "pinnosc/autodiff.hpp"

namespace pinnosc::network {

struct MlpConfig {
    int hidden_layers = 3;
    int hidden_width = 32;
    // The network computes u(t) = output_scale * N(input_scale * t). Both
    // default to 1. Choosing them near the problem's amplitude and inverse
    // domain length lets a Glorot init start at the right magnitudes instead
    // of spending epochs growing its weights there (nondimensionalization).
    double input_scale = 1.0;
    double output_scale = 1.0;
};

// Flat parameter storage: per layer, its weight matrix (row-major, one row per
// output neuron) followed by its bias vector. Layers run input to output.
using ParameterVector = std::vector<double>;

// Scalar-to-scalar fully connected network, tanh hidden activations, linear
// output. Evaluation always produces the degree-2 Taylor jet of the output in
// t, so value, first and second derivative come out of one pass.
class Mlp {
public:
    explicit Mlp(const MlpConfig& config);

    const MlpConfig& config() const { return cfg_; }
    std::size_t parameter_count() const { return count_; }

    // Glorot-uniform weights (bound sqrt(6/(fan_in+fan_out))), zero biases.
    // Same seed, same vector, on any platform.
    ParameterVector init(std::uint64_t seed) const;

    // Tracked evaluation for gradient computation. The tape must have been
    // bound to exactly parameter_count() values in this network's layout.
    ad::Jet2<ad::Var> forward_jet(ad::Tape& tape, double t) const;

    // Untracked evaluation against a plain parameter vector.
    ad::Jet2d forward_jet(std::span<const double> params, double t) const;

    double value(std::span<const double> params, double t) const;

private:
    struct Layer {
        int in, out;
        int w_off, b_off;
    };

    MlpConfig cfg_;
    std::vector<Layer> layers_;
    std::size_t count_ = 0;
};

// One value per line, round-trip formatted.
void save_params(const ParameterVector& params, const std::filesystem::path& path);
ParameterVector load_params(const std::filesystem::path& path);

}  // namespace pinnosc::network
