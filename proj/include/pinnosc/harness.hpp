#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pinnosc/data.hpp"
#include "pinnosc/network.hpp"
#include "pinnosc/problems.hpp"
#include "pinnosc/training.hpp"

namespace pinnosc::harness {

// Anything wrong with a configuration, reported with the JSON path of the
// offending field. Maps to exit code 2 at the CLI.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DataSpec {
    int n = 0;                        // 0 means no supervised data
    std::optional<double> window_start;  // default: the problem domain
    std::optional<double> window_end;
    double sigma = 0.0;
    std::optional<std::string> csv;  // external data; excludes n/window/sigma
};

struct CollocationSpec {
    int n = 0;  // 0 means no residual points
    data::Strategy strategy = data::Strategy::Uniform;
};

struct ExperimentConfig {
    problems::OscillatorProblem problem;
    network::MlpConfig network;
    DataSpec data;
    CollocationSpec collocation;
    training::LossWeights weights;
    training::AdamConfig optimizer;
    int epochs = 24000;
    std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
    int reference_steps = 3000;
    int test_grid = 300;
    std::string output_dir = "runs/experiment";

    // Cross-field checks plus normalization: a missing data window becomes
    // the domain, and zero collocation points force the residual weights to
    // zero so the supervised-only mode needs no collocation set.
    void normalize_and_validate();
};

ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& cfg);

struct SeedOutcome {
    std::uint64_t seed = 0;
    bool ok = false;
    std::string status;  // "ok" or a failure description
    training::RunMetrics metrics;
    training::LossBreakdown final_loss;
    std::string loss_csv;        // file names relative to the output dir,
    std::string prediction_csv;  // empty when not written
    std::string params_csv;
    std::string data_csv;
};

struct RunReport {
    nlohmann::json document;
    std::filesystem::path path;  // the report.json on disk
    std::vector<SeedOutcome> outcomes;
    double median_mse = 0.0;  // over succeeding seeds; NaN if none
    bool any_failure = false;
};

// Trains every seed (in parallel up to PINN_OSC_THREADS), writes per-seed
// loss/prediction/parameter/data files plus report.json into the output
// directory, and never throws for a training failure: those are recorded
// per seed. Configuration and I/O problems still throw.
RunReport run_experiment(const ExperimentConfig& cfg,
                         const std::optional<std::string>& out_override = std::nullopt);
RunReport run_experiment(const std::filesystem::path& config_path,
                         const std::optional<std::string>& out_override = std::nullopt);

// value,median_mse,min_mse,max_mse across one run per value
struct SweepResult {
    std::filesystem::path csv_path;
    bool any_failure = false;
};
SweepResult sweep(const ExperimentConfig& base, const std::string& parameter,
                  const std::vector<double>& values, const std::string& out_root);

// Embedded, user-copyable experiment configs.
struct PresetDef {
    const char* name;
    const char* note;
    const char* config_json;
};
const std::vector<PresetDef>& presets();
ExperimentConfig get_preset(const std::string& name);
void list_presets(std::ostream& out);

// Minimal JSON-schema subset checker (type/required/properties/items/enum/
// additionalProperties), enough to hold report.json to the shipped schema.
std::vector<std::string> validate_against_schema(const nlohmann::json& value,
                                                 const nlohmann::json& schema);

}  // namespace pinnosc::harness
