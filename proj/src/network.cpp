#include "pinnosc/network.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>

#include "pinnosc/csv.hpp"
#include "pinnosc/kernels.hpp"

namespace pinnosc::network {

Mlp::Mlp(const MlpConfig& config) : cfg_(config) {
    if (config.hidden_layers < 1) throw std::invalid_argument("hidden_layers must be >= 1");
    if (config.hidden_width < 1) throw std::invalid_argument("hidden_width must be >= 1");
    if (!(config.input_scale > 0.0) || !(config.output_scale > 0.0))
        throw std::invalid_argument("network scales must be positive");
    int prev = 1;
    int off = 0;
    for (int l = 0; l <= config.hidden_layers; ++l) {
        const int out = (l == config.hidden_layers) ? 1 : config.hidden_width;
        Layer layer{prev, out, off, off + prev * out};
        off = layer.b_off + out;
        layers_.push_back(layer);
        prev = out;
    }
    count_ = static_cast<std::size_t>(off);
}

ParameterVector Mlp::init(std::uint64_t seed) const {
    ParameterVector p(count_, 0.0);
    std::mt19937_64 rng(seed);
    for (const Layer& l : layers_) {
        const double bound = std::sqrt(6.0 / (l.in + l.out));
        std::uniform_real_distribution<double> dist(-bound, bound);
        for (int i = 0; i < l.in * l.out; ++i) p[l.w_off + i] = dist(rng);
        // biases stay zero
    }
    return p;
}

ad::Jet2<ad::Var> Mlp::forward_jet(ad::Tape& tape, double t) const {
    if (tape.parameter_count() != static_cast<int>(count_))
        throw std::invalid_argument("tape binds " + std::to_string(tape.parameter_count()) +
                                    " values but the network has " + std::to_string(count_) +
                                    " parameters");
    const double k = cfg_.input_scale;
    const double s = cfg_.output_scale;
    int slot = tape.seed3(k * t);
    int width = 1;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        slot = tape.dense_jet(slot, width, layers_[l].out, layers_[l].w_off, layers_[l].b_off);
        width = layers_[l].out;
        if (l + 1 < layers_.size()) slot = tape.tanh_jet(slot, width);
    }
    // the pass differentiates in x = k*t; chain back to t and apply the scale
    return {tape.at(slot) * s, tape.at(slot + width) * (s * k),
            tape.at(slot + 2 * width) * (s * k * k)};
}

ad::Jet2d Mlp::forward_jet(std::span<const double> params, double t) const {
    if (params.size() != count_)
        throw std::invalid_argument("parameter vector has wrong length");
    const auto& ops = kernels::active_ops();
    const double k = cfg_.input_scale;
    const double s = cfg_.output_scale;
    const int w = cfg_.hidden_width;
    std::vector<double> x(3 * static_cast<std::size_t>(w), 0.0);
    std::vector<double> z(3 * static_cast<std::size_t>(w), 0.0);
    x[0] = k * t;
    x[1] = 1.0;
    x[2] = 0.0;
    int width = 1;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const Layer& ly = layers_[l];
        const double* W = params.data() + ly.w_off;
        const double* b = params.data() + ly.b_off;
        ops.dense_forward(W, b, x.data(), z.data(), ly.out, width);
        ops.dense_forward(W, nullptr, x.data() + width, z.data() + ly.out, ly.out, width);
        ops.dense_forward(W, nullptr, x.data() + 2 * width, z.data() + 2 * ly.out, ly.out, width);
        width = ly.out;
        if (l + 1 < layers_.size()) {
            ops.tanh_jet_forward(z.data(), z.data() + width, z.data() + 2 * width, x.data(),
                                 x.data() + width, x.data() + 2 * width, width);
        } else {
            std::swap(x, z);
        }
    }
    return {x[0] * s, x[width] * (s * k), x[2 * width] * (s * k * k)};
}

double Mlp::value(std::span<const double> params, double t) const {
    return forward_jet(params, t).v0;
}

void save_params(const ParameterVector& params, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    for (double v : params) out << csv::format_double(v) << '\n';
    if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

ParameterVector load_params(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    ParameterVector p;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        p.push_back(csv::parse_double(line));
    }
    return p;
}

}  // namespace pinnosc::network
