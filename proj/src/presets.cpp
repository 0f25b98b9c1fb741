#include <iomanip>

#include "pinnosc/csv.hpp"
#include "pinnosc/harness.hpp"

namespace pinnosc::harness {

// Every preset is a complete config document: copy one into a file, edit it,
// and run it with `run --config`. Weights for the cubic-oscillator pair were
// fixed by the lambda_g / lambda_reg grid searches recorded in the repo docs.
const std::vector<PresetDef>& presets() {
    static const std::vector<PresetDef> defs = {
        {"primer-nn-26",
         "plain supervised fit, 26 points over [0,30]; too sparse to track the waveform",
         R"({
  "problem": {"kind": "primer"},
  "data": {"n": 26},
  "collocation": {"n": 0},
  "loss_weights": {"data": 1.0},
  "epochs": 24000,
  "output_dir": "runs/primer-nn-26"
})"},
        {"primer-pinn-26",
         "the same 26 points plus 50 residual points spanning the domain",
         R"({
  "problem": {"kind": "primer"},
  "data": {"n": 26},
  "collocation": {"n": 50},
  "loss_weights": {"data": 1.0, "governing": 6e-2},
  "epochs": 24000,
  "output_dir": "runs/primer-pinn-26"
})"},
        {"primer-lefthalf-nn",
         "60 points confined to [0,15], no physics: the right half goes unconstrained",
         R"({
  "problem": {"kind": "primer"},
  "data": {"n": 60, "window": [0.0, 15.0]},
  "collocation": {"n": 0},
  "loss_weights": {"data": 1.0},
  "epochs": 24000,
  "output_dir": "runs/primer-lefthalf-nn"
})"},
        {"primer-lefthalf-pinn",
         "data on [0,15] with residual points across [0,30]: extrapolates past the data",
         R"({
  "problem": {"kind": "primer"},
  "data": {"n": 60, "window": [0.0, 15.0]},
  "collocation": {"n": 50},
  "loss_weights": {"data": 1.0, "governing": 6e-2},
  "epochs": 24000,
  "output_dir": "runs/primer-lefthalf-pinn"
})"},
        {"primer-min",
         "minimal data: the initial value plus 48 residual points",
         R"({
  "problem": {"kind": "primer"},
  "data": {"n": 1},
  "collocation": {"n": 48},
  "loss_weights": {"data": 1.0, "governing": 6e-2},
  "epochs": 24000,
  "output_dir": "runs/primer-min"
})"},
        {"primer-nn-50",
         "densely supervised baseline; timing partner of primer-pinn-1+50",
         R"({
  "problem": {"kind": "primer"},
  "data": {"n": 50},
  "collocation": {"n": 0},
  "loss_weights": {"data": 1.0},
  "epochs": 24000,
  "output_dir": "runs/primer-nn-50"
})"},
        {"primer-pinn-1+50",
         "1 data point plus 50 residual points; epoch cost close to the 50-point baseline",
         R"({
  "problem": {"kind": "primer"},
  "data": {"n": 1},
  "collocation": {"n": 50},
  "loss_weights": {"data": 1.0, "governing": 6e-2},
  "epochs": 24000,
  "output_dir": "runs/primer-pinn-1+50"
})"},
        {"vdp-eps1",
         "relaxation oscillator at epsilon=1, minimal budget n_data=28, n_c=15",
         R"({
  "problem": {"kind": "van_der_pol", "epsilon": 1.0},
  "data": {"n": 28},
  "collocation": {"n": 15},
  "loss_weights": {"data": 1.0, "governing": 1e-4, "initial": 1.0},
  "optimizer": {"learning_rate": 1.5e-3, "lr_final": 1e-4},
  "epochs": 48000,
  "output_dir": "runs/vdp-eps1"
})"},
        {"vdp-eps3",
         "relaxation oscillator at epsilon=3, minimal budget n_data=32, n_c=25",
         R"({
  "problem": {"kind": "van_der_pol", "epsilon": 3.0},
  "data": {"n": 32},
  "collocation": {"n": 25},
  "loss_weights": {"data": 1.0, "governing": 1e-5, "initial": 1.0},
  "optimizer": {"learning_rate": 1.5e-3, "lr_final": 1e-4},
  "epochs": 96000,
  "output_dir": "runs/vdp-eps3"
})"},
        {"vdp-eps5",
         "relaxation oscillator at epsilon=5, minimal budget n_data=38, n_c=40",
         R"({
  "problem": {"kind": "van_der_pol", "epsilon": 5.0},
  "data": {"n": 38},
  "collocation": {"n": 40},
  "loss_weights": {"data": 1.0, "governing": 4e-6, "initial": 1.0},
  "optimizer": {"learning_rate": 5e-4},
  "epochs": 96000,
  "output_dir": "runs/vdp-eps5"
})"},
        {"vdp-eps1-noise",
         "epsilon=1 with sigma=0.1 measurement noise on the 28 samples",
         R"({
  "problem": {"kind": "van_der_pol", "epsilon": 1.0},
  "data": {"n": 28, "sigma": 0.1},
  "collocation": {"n": 15},
  "loss_weights": {"data": 1.0, "governing": 1e-4, "initial": 1.0},
  "epochs": 24000,
  "output_dir": "runs/vdp-eps1-noise"
})"},
        {"vdp-eps3-noise",
         "epsilon=3 with sigma=0.08 measurement noise on the 32 samples",
         R"({
  "problem": {"kind": "van_der_pol", "epsilon": 3.0},
  "data": {"n": 32, "sigma": 0.08},
  "collocation": {"n": 25},
  "loss_weights": {"data": 1.0, "governing": 1e-5, "initial": 1.0},
  "optimizer": {"learning_rate": 1.5e-3, "lr_final": 1e-4},
  "epochs": 96000,
  "output_dir": "runs/vdp-eps3-noise"
})"},
        {"vdp-eps5-noise",
         "epsilon=5 with sigma=0.05 measurement noise on the 38 samples",
         R"({
  "problem": {"kind": "van_der_pol", "epsilon": 5.0},
  "data": {"n": 38, "sigma": 0.05},
  "collocation": {"n": 40},
  "loss_weights": {"data": 1.0, "governing": 4e-6, "initial": 1.0},
  "optimizer": {"learning_rate": 5e-4},
  "epochs": 96000,
  "output_dir": "runs/vdp-eps5-noise"
})"},
        {"duffing-noreg",
         "cubic oscillator, amplitude 15: initial-condition pair + 40 residual points, no energy pin",
         R"({
  "problem": {"kind": "duffing"},
  "data": {"n": 1},
  "collocation": {"n": 40},
  "loss_weights": {"data": 1.0, "governing": 1e-7, "initial": 1.0},
  "epochs": 72000,
  "output_dir": "runs/duffing-noreg"
})"},
        {"duffing-energyreg",
         "the same run with the conserved energy pinned at the residual points",
         R"({
  "problem": {"kind": "duffing"},
  "data": {"n": 1},
  "collocation": {"n": 40},
  "loss_weights": {"data": 1.0, "governing": 1e-7, "initial": 1.0, "regularization": 1e-9},
  "epochs": 72000,
  "output_dir": "runs/duffing-energyreg"
})"},
    };
    return defs;
}

ExperimentConfig get_preset(const std::string& name) {
    for (const PresetDef& def : presets()) {
        if (name == def.name) return parse_config(nlohmann::json::parse(def.config_json));
    }
    throw config_error("unknown preset '" + name + "' (see list-presets)");
}

void list_presets(std::ostream& out) {
    out << std::left << std::setw(22) << "name" << std::setw(8) << "n_data" << std::setw(6)
        << "n_c" << std::setw(7) << "sigma" << std::setw(8) << "epochs"
        << "what it shows\n";
    for (const PresetDef& def : presets()) {
        ExperimentConfig cfg = parse_config(nlohmann::json::parse(def.config_json));
        out << std::left << std::setw(22) << def.name << std::setw(8) << cfg.data.n << std::setw(6)
            << cfg.collocation.n << std::setw(7) << csv::format_double(cfg.data.sigma)
            << std::setw(8) << cfg.epochs << def.note << '\n';
    }
}

}  // namespace pinnosc::harness
