#include "pinnosc/cli.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pinnosc/csv.hpp"
#include "pinnosc/harness.hpp"
#include "pinnosc/kernels.hpp"

namespace pinnosc::cli {

namespace {

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = text.find(',', pos);
        parts.push_back(text.substr(pos, comma - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return parts;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    for (const std::string& part : split_commas(text)) {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(part, &used);
            if (used != part.size() || part.empty()) throw std::invalid_argument(part);
            seeds.push_back(v);
        } catch (const std::exception&) {
            throw harness::config_error("--seeds: '" + part + "' is not a non-negative integer");
        }
    }
    return seeds;
}

std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> values;
    for (const std::string& part : split_commas(text)) {
        try {
            values.push_back(csv::parse_double(part));
        } catch (const std::exception&) {
            throw harness::config_error("--values: '" + part + "' is not a number");
        }
    }
    return values;
}

int report_and_exit_code(const harness::RunReport& report) {
    std::cout << "kernels: " << kernels::active_ops().name << '\n';
    for (const auto& o : report.outcomes) {
        std::cout << "seed " << o.seed << ": " << o.status;
        if (o.ok) std::cout << "  mse " << csv::format_double(o.metrics.mse);
        std::cout << '\n';
    }
    if (report.document["median_mse"].is_number())
        std::cout << "median mse: " << csv::format_double(report.median_mse) << '\n';
    std::cout << "report: " << report.path.string() << '\n';
    return report.any_failure ? 1 : 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{
        "trains small dense networks to satisfy oscillator dynamics; bundles the "
        "paper-and-pencil study setups as presets and writes plot-ready CSV"};
    app.require_subcommand(1);

    std::string config_path, out_dir, seeds_csv, preset_name, param, values_csv, dump_path;

    CLI::App* run = app.add_subcommand("run", "run an experiment from a config file");
    run->add_option("--config", config_path, "config JSON path")->required();
    run->add_option("--out", out_dir, "override the output directory");
    run->add_option("--seeds", seeds_csv, "comma-separated seeds overriding the config");

    CLI::App* preset = app.add_subcommand("preset", "run a bundled preset");
    preset->add_option("--name", preset_name, "preset name (see list-presets)")->required();
    preset->add_option("--out", out_dir, "override the output directory");
    preset->add_option("--seeds", seeds_csv, "comma-separated seeds overriding the preset");
    preset->add_option("--dump-config", dump_path,
                       "write the preset's config JSON to this path and exit");

    app.add_subcommand("list-presets", "show the bundled experiment presets");

    CLI::App* sw = app.add_subcommand("sweep", "repeat an experiment over one parameter");
    sw->add_option("--config", config_path, "config JSON path")->required();
    sw->add_option("--param", param, "epsilon|sigma|n_data|n_collocation|lambda_g|lambda_reg")
        ->required();
    sw->add_option("--values", values_csv, "comma-separated values")->required();
    sw->add_option("--out", out_dir, "output root (default runs/sweep-<param>)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // --help is a success, bad usage is a config error
    }

    try {
        if (app.got_subcommand("list-presets")) {
            harness::list_presets(std::cout);
            return 0;
        }
        if (app.got_subcommand("preset")) {
            if (!dump_path.empty()) {
                for (const harness::PresetDef& def : harness::presets()) {
                    if (preset_name == def.name) {
                        std::ofstream out(dump_path);
                        if (!out) throw std::runtime_error("cannot write " + dump_path);
                        out << def.config_json << '\n';
                        std::cout << "wrote " << dump_path << '\n';
                        return 0;
                    }
                }
                throw harness::config_error("unknown preset '" + preset_name +
                                            "' (see list-presets)");
            }
            harness::ExperimentConfig cfg = harness::get_preset(preset_name);
            if (!seeds_csv.empty()) cfg.seeds = parse_seed_list(seeds_csv);
            const auto report = harness::run_experiment(
                cfg, out_dir.empty() ? std::nullopt : std::optional<std::string>(out_dir));
            return report_and_exit_code(report);
        }
        if (app.got_subcommand("run")) {
            harness::ExperimentConfig cfg = harness::load_config(config_path);
            if (!seeds_csv.empty()) cfg.seeds = parse_seed_list(seeds_csv);
            const auto report = harness::run_experiment(
                cfg, out_dir.empty() ? std::nullopt : std::optional<std::string>(out_dir));
            return report_and_exit_code(report);
        }
        if (app.got_subcommand("sweep")) {
            harness::ExperimentConfig cfg = harness::load_config(config_path);
            const auto values = parse_value_list(values_csv);
            const std::string root = out_dir.empty() ? ("runs/sweep-" + param) : out_dir;
            const auto result = harness::sweep(cfg, param, values, root);
            std::cout << "sweep table: " << result.csv_path.string() << '\n';
            return result.any_failure ? 1 : 0;
        }
    } catch (const harness::config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

}  // namespace pinnosc::cli
