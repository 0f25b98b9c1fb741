#include "pinnosc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <thread>

#include "pinnosc/csv.hpp"
#include "pinnosc/kernels.hpp"
#include "pinnosc/reference.hpp"

namespace pinnosc::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw config_error(path + ": " + msg);
}

const json* find(const json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) known = true;
        if (!known) fail(path + "." + it.key(), "unknown key");
    }
}

const json& require_object(const json& v, const std::string& path) {
    if (!v.is_object()) fail(path, "expected an object");
    return v;
}

double num_at(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
}

double get_num(const json& obj, const std::string& path, const char* key, double def) {
    const json* v = find(obj, key);
    return v ? num_at(*v, path + "." + key) : def;
}

int get_int(const json& obj, const std::string& path, const char* key, int def) {
    const json* v = find(obj, key);
    if (!v) return def;
    const double d = num_at(*v, path + "." + key);
    if (d != std::floor(d) || std::abs(d) > 2e9) fail(path + "." + key, "expected an integer");
    return static_cast<int>(d);
}

std::string get_str(const json& obj, const std::string& path, const char* key,
                    const std::string& def) {
    const json* v = find(obj, key);
    if (!v) return def;
    if (!v->is_string()) fail(path + "." + key, "expected a string");
    return v->get<std::string>();
}

problems::OscillatorProblem parse_problem(const json& doc) {
    const json& p = require_object(doc, "problem");
    const std::string kind = get_str(p, "problem", "kind", "");
    problems::OscillatorProblem out;
    if (kind == "primer") {
        check_keys(p, "problem", {"kind", "damping", "forcing_omega", "t_start", "t_end", "u0"});
        out = problems::OscillatorProblem::primer();
        problems::PrimerCoeffs c;
        c.damping = get_num(p, "problem", "damping", c.damping);
        c.forcing_omega = get_num(p, "problem", "forcing_omega", c.forcing_omega);
        out.coefficients = c;
    } else if (kind == "van_der_pol") {
        check_keys(p, "problem", {"kind", "omega0", "epsilon", "t_start", "t_end", "u0", "du0"});
        out = problems::OscillatorProblem::van_der_pol();
        problems::VanDerPolCoeffs c;
        c.omega0 = get_num(p, "problem", "omega0", c.omega0);
        c.epsilon = get_num(p, "problem", "epsilon", c.epsilon);
        out.coefficients = c;
        out.du0 = get_num(p, "problem", "du0", out.du0);
    } else if (kind == "duffing") {
        check_keys(p, "problem", {"kind", "alpha", "beta", "t_start", "t_end", "u0", "du0"});
        out = problems::OscillatorProblem::duffing();
        problems::DuffingCoeffs c;
        c.alpha = get_num(p, "problem", "alpha", c.alpha);
        c.beta = get_num(p, "problem", "beta", c.beta);
        out.coefficients = c;
        out.du0 = get_num(p, "problem", "du0", out.du0);
    } else {
        fail("problem.kind", "expected one of primer, van_der_pol, duffing");
    }
    out.t_start = get_num(p, "problem", "t_start", out.t_start);
    out.t_end = get_num(p, "problem", "t_end", out.t_end);
    out.u0 = get_num(p, "problem", "u0", out.u0);
    return out;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::size_t thread_budget(std::size_t n_seeds) {
    if (const char* env = std::getenv("PINN_OSC_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1)
            throw config_error("PINN_OSC_THREADS must be a positive integer, got '" +
                               std::string(env) + "'");
        return std::min<std::size_t>(static_cast<std::size_t>(v), n_seeds);
    }
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    return std::min<std::size_t>(hw, n_seeds);
}

SeedOutcome run_one_seed(const ExperimentConfig& cfg, const reference::Trajectory& ref,
                         const std::optional<data::TrainingSet>& external, std::uint64_t seed,
                         const fs::path& out_dir) {
    SeedOutcome out;
    out.seed = seed;
    const std::string tag = std::to_string(seed);
    try {
        training::TrainConfig tc;
        tc.problem = cfg.problem;
        tc.network = cfg.network;
        tc.reference = ref;
        tc.weights = cfg.weights;
        tc.optimizer = cfg.optimizer;
        tc.epochs = cfg.epochs;
        tc.test_grid = cfg.test_grid;
        tc.init_seed = mix_seed(seed, 0);
        if (external) {
            tc.training = *external;
        } else if (cfg.data.n > 0) {
            tc.training =
                data::generate_training_data(ref, *cfg.data.window_start, *cfg.data.window_end,
                                             cfg.data.n, cfg.data.sigma, mix_seed(seed, 1));
        }
        if (cfg.collocation.n > 0) {
            tc.collocation =
                data::generate_collocation(cfg.problem.t_start, cfg.problem.t_end,
                                           cfg.collocation.n, cfg.collocation.strategy,
                                           mix_seed(seed, 2));
        }

        if (!tc.training.points.empty()) {
            out.data_csv = "data_" + tag + ".csv";
            data::write_csv(tc.training, out_dir / out.data_csv);
        }

        const auto result = training::train(tc);

        out.loss_csv = "loss_" + tag + ".csv";
        training::write_loss_csv(result.history, out_dir / out.loss_csv);

        const network::Mlp mlp(cfg.network);
        const auto grid = data::linspace(cfg.problem.t_start, cfg.problem.t_end, cfg.test_grid);
        std::vector<std::vector<double>> rows;
        rows.reserve(grid.size());
        for (double t : grid)
            rows.push_back({t, mlp.value(result.params, t), reference::sample(ref, t)[0]});
        out.prediction_csv = "prediction_" + tag + ".csv";
        csv::write_table(out_dir / out.prediction_csv, "t,u_pred,u_ref", rows);

        out.params_csv = "params_" + tag + ".csv";
        network::save_params(result.params, out_dir / out.params_csv);

        out.metrics = result.metrics;
        out.final_loss = result.history.back();
        out.ok = true;
        out.status = "ok";
    } catch (const training::training_diverged& e) {
        out.loss_csv = "loss_" + tag + ".csv";
        training::write_loss_csv(e.history, out_dir / out.loss_csv);
        if (!e.history.empty()) out.final_loss = e.history.back();
        out.metrics.epochs_run = e.epoch;
        out.status = e.what();
    } catch (const std::exception& e) {
        out.status = std::string("error: ") + e.what();
    }
    return out;
}

json outcome_to_json(const SeedOutcome& o) {
    json s;
    s["seed"] = o.seed;
    s["status"] = o.status;
    if (o.ok) {
        s["mse"] = o.metrics.mse;
        s["mse_left"] = o.metrics.mse_left;
        s["mse_right"] = o.metrics.mse_right;
        s["wall_seconds"] = o.metrics.wall_seconds;
    } else {
        s["mse"] = nullptr;
        s["mse_left"] = nullptr;
        s["mse_right"] = nullptr;
        s["wall_seconds"] = nullptr;
    }
    s["epochs_run"] = o.metrics.epochs_run;
    if (!o.loss_csv.empty()) {
        s["final_loss"] = {{"total", o.final_loss.total},
                           {"data", o.final_loss.data},
                           {"governing", o.final_loss.governing},
                           {"initial", o.final_loss.initial},
                           {"boundary", o.final_loss.boundary},
                           {"regularization", o.final_loss.regularization}};
    } else {
        s["final_loss"] = nullptr;
    }
    auto name_or_null = [](const std::string& n) { return n.empty() ? json() : json(n); };
    s["loss_csv"] = name_or_null(o.loss_csv);
    s["prediction_csv"] = name_or_null(o.prediction_csv);
    s["params_csv"] = name_or_null(o.params_csv);
    s["data_csv"] = name_or_null(o.data_csv);
    return s;
}

void apply_sweep_value(ExperimentConfig& cfg, const std::string& parameter, double v) {
    auto integral = [&](const char* what) {
        if (v != std::floor(v) || v < 0) fail("sweep", std::string(what) + " must be a non-negative integer");
        return static_cast<int>(v);
    };
    if (parameter == "epsilon") {
        auto* c = std::get_if<problems::VanDerPolCoeffs>(&cfg.problem.coefficients);
        if (!c) fail("sweep", "epsilon only applies to a van_der_pol problem");
        c->epsilon = v;
    } else if (parameter == "sigma") {
        if (v < 0) fail("sweep", "sigma must be non-negative");
        if (cfg.data.csv) fail("sweep", "sigma sweeps need generated data, not data.csv");
        cfg.data.sigma = v;
    } else if (parameter == "n_data") {
        if (cfg.data.csv) fail("sweep", "n_data sweeps need generated data, not data.csv");
        cfg.data.n = integral("n_data");
    } else if (parameter == "n_collocation") {
        cfg.collocation.n = integral("n_collocation");
    } else if (parameter == "lambda_g") {
        if (v < 0) fail("sweep", "lambda_g must be non-negative");
        cfg.weights.governing = v;
    } else if (parameter == "lambda_reg") {
        if (v < 0) fail("sweep", "lambda_reg must be non-negative");
        cfg.weights.regularization = v;
    } else {
        fail("sweep", "unknown parameter '" + parameter +
                          "' (expected epsilon, sigma, n_data, n_collocation, lambda_g, "
                          "lambda_reg)");
    }
}

}  // namespace

void ExperimentConfig::normalize_and_validate() {
    try {
        problem.validate();
    } catch (const std::invalid_argument& e) {
        fail("problem", e.what());
    }
    if (network.hidden_layers < 1) fail("network.hidden_layers", "must be >= 1");
    if (network.hidden_width < 1) fail("network.hidden_width", "must be >= 1");
    if (!(network.input_scale > 0)) fail("network.input_scale", "must be positive");
    if (!(network.output_scale > 0)) fail("network.output_scale", "must be positive");
    if (epochs < 1) fail("epochs", "must be >= 1");
    if (reference_steps < 2) fail("reference_steps", "must be >= 2");
    if (test_grid < 2) fail("test_grid", "must be >= 2");
    if (seeds.empty()) fail("seeds", "must list at least one seed");
    {
        std::set<std::uint64_t> unique(seeds.begin(), seeds.end());
        if (unique.size() != seeds.size()) fail("seeds", "duplicate seeds would overwrite each other's files");
    }
    if (weights.data < 0 || weights.governing < 0 || weights.initial < 0 || weights.boundary < 0 ||
        weights.regularization < 0)
        fail("loss_weights", "weights must be non-negative");
    if (optimizer.learning_rate <= 0) fail("optimizer.learning_rate", "must be positive");
    if (optimizer.beta1 < 0 || optimizer.beta1 >= 1 || optimizer.beta2 < 0 || optimizer.beta2 >= 1)
        fail("optimizer", "beta coefficients must lie in [0,1)");
    if (optimizer.epsilon <= 0) fail("optimizer.epsilon", "must be positive");
    if (optimizer.lr_final < 0)
        fail("optimizer.lr_final", "must be >= 0 (0 keeps the rate constant)");
    if (optimizer.lr_final > optimizer.learning_rate)
        fail("optimizer.lr_final", "must not exceed optimizer.learning_rate");

    if (data.csv) {
        if (data.n > 0 || data.sigma > 0 || data.window_start || data.window_end)
            fail("data.csv", "an external data file excludes n, sigma and window");
    } else {
        if (data.n < 0) fail("data.n", "must be >= 0");
        if (data.sigma < 0) fail("data.sigma", "must be >= 0");
        if (!data.window_start) data.window_start = problem.t_start;
        if (!data.window_end) data.window_end = problem.t_end;
        if (*data.window_start > *data.window_end) fail("data.window", "window is reversed");
        if (*data.window_start < problem.t_start || *data.window_end > problem.t_end)
            fail("data.window", "window must lie inside the problem domain");
    }
    if (collocation.n < 0) fail("collocation.n", "must be >= 0");
    if (collocation.n == 0) {
        // supervised-only mode: the residual terms have nothing to act on
        weights.governing = 0.0;
        weights.regularization = 0.0;
    }
    if (weights.regularization > 0 && !problems::has_energy(problem))
        fail("loss_weights.regularization", "energy pinning needs a conservative problem (duffing)");
    if (weights.data > 0 && data.n == 0 && !data.csv)
        fail("loss_weights.data", "the data term is active but data.n is 0 and no data.csv is given");
    if (output_dir.empty()) fail("output_dir", "must not be empty");
}

ExperimentConfig parse_config(const json& doc) {
    require_object(doc, "config");
    check_keys(doc, "config",
               {"problem", "network", "data", "collocation", "loss_weights", "optimizer", "epochs",
                "seeds", "reference_steps", "test_grid", "output_dir"});
    ExperimentConfig cfg;
    if (!find(doc, "problem")) fail("problem", "required");
    cfg.problem = parse_problem(*find(doc, "problem"));

    if (const json* n = find(doc, "network")) {
        require_object(*n, "network");
        check_keys(*n, "network", {"hidden_layers", "hidden_width", "input_scale", "output_scale"});
        cfg.network.hidden_layers = get_int(*n, "network", "hidden_layers", cfg.network.hidden_layers);
        cfg.network.hidden_width = get_int(*n, "network", "hidden_width", cfg.network.hidden_width);
        cfg.network.input_scale = get_num(*n, "network", "input_scale", cfg.network.input_scale);
        cfg.network.output_scale = get_num(*n, "network", "output_scale", cfg.network.output_scale);
    }

    if (const json* d = find(doc, "data")) {
        require_object(*d, "data");
        check_keys(*d, "data", {"n", "window", "sigma", "strategy", "csv"});
        cfg.data.n = get_int(*d, "data", "n", 0);
        cfg.data.sigma = get_num(*d, "data", "sigma", 0.0);
        if (const json* w = find(*d, "window")) {
            if (!w->is_array() || w->size() != 2) fail("data.window", "expected [start, end]");
            cfg.data.window_start = num_at((*w)[0], "data.window[0]");
            cfg.data.window_end = num_at((*w)[1], "data.window[1]");
        }
        const std::string strat = get_str(*d, "data", "strategy", "uniform");
        if (strat != "uniform")
            fail("data.strategy", "supervised samples are uniformly spaced; only 'uniform' is supported");
        if (find(*d, "csv")) cfg.data.csv = get_str(*d, "data", "csv", "");
    }

    if (const json* c = find(doc, "collocation")) {
        require_object(*c, "collocation");
        check_keys(*c, "collocation", {"n", "strategy"});
        cfg.collocation.n = get_int(*c, "collocation", "n", 0);
        const std::string strat = get_str(*c, "collocation", "strategy", "uniform");
        if (strat == "uniform")
            cfg.collocation.strategy = data::Strategy::Uniform;
        else if (strat == "random")
            cfg.collocation.strategy = data::Strategy::Random;
        else
            fail("collocation.strategy", "expected 'uniform' or 'random'");
    }

    if (const json* w = find(doc, "loss_weights")) {
        require_object(*w, "loss_weights");
        check_keys(*w, "loss_weights", {"data", "governing", "initial", "boundary", "regularization"});
        cfg.weights.data = get_num(*w, "loss_weights", "data", cfg.weights.data);
        cfg.weights.governing = get_num(*w, "loss_weights", "governing", cfg.weights.governing);
        cfg.weights.initial = get_num(*w, "loss_weights", "initial", cfg.weights.initial);
        cfg.weights.boundary = get_num(*w, "loss_weights", "boundary", cfg.weights.boundary);
        cfg.weights.regularization =
            get_num(*w, "loss_weights", "regularization", cfg.weights.regularization);
    }

    if (const json* o = find(doc, "optimizer")) {
        require_object(*o, "optimizer");
        check_keys(*o, "optimizer", {"learning_rate", "beta1", "beta2", "epsilon", "lr_final"});
        cfg.optimizer.learning_rate =
            get_num(*o, "optimizer", "learning_rate", cfg.optimizer.learning_rate);
        cfg.optimizer.beta1 = get_num(*o, "optimizer", "beta1", cfg.optimizer.beta1);
        cfg.optimizer.beta2 = get_num(*o, "optimizer", "beta2", cfg.optimizer.beta2);
        cfg.optimizer.epsilon = get_num(*o, "optimizer", "epsilon", cfg.optimizer.epsilon);
        cfg.optimizer.lr_final = get_num(*o, "optimizer", "lr_final", cfg.optimizer.lr_final);
    }

    cfg.epochs = get_int(doc, "config", "epochs", cfg.epochs);
    cfg.reference_steps = get_int(doc, "config", "reference_steps", cfg.reference_steps);
    cfg.test_grid = get_int(doc, "config", "test_grid", cfg.test_grid);
    cfg.output_dir = get_str(doc, "config", "output_dir", cfg.output_dir);

    if (const json* s = find(doc, "seeds")) {
        if (!s->is_array() || s->empty()) fail("seeds", "expected a non-empty array of integers");
        cfg.seeds.clear();
        for (std::size_t i = 0; i < s->size(); ++i) {
            const json& e = (*s)[i];
            const std::string path = "seeds[" + std::to_string(i) + "]";
            if (!e.is_number_integer() || e.get<double>() < 0)
                fail(path, "expected a non-negative integer");
            cfg.seeds.push_back(e.get<std::uint64_t>());
        }
    }
    return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config file not found: " + path.string());
    json doc;
    try {
        doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw config_error(path.string() + ": " + e.what());
    }
    return parse_config(doc);
}

json to_json(const ExperimentConfig& cfg) {
    json p;
    p["kind"] = cfg.problem.kind_name();
    std::visit(problems::detail::overloaded{
                   [&](const problems::PrimerCoeffs& c) {
                       p["damping"] = c.damping;
                       p["forcing_omega"] = c.forcing_omega;
                   },
                   [&](const problems::VanDerPolCoeffs& c) {
                       p["omega0"] = c.omega0;
                       p["epsilon"] = c.epsilon;
                   },
                   [&](const problems::DuffingCoeffs& c) {
                       p["alpha"] = c.alpha;
                       p["beta"] = c.beta;
                   }},
               cfg.problem.coefficients);
    p["t_start"] = cfg.problem.t_start;
    p["t_end"] = cfg.problem.t_end;
    p["u0"] = cfg.problem.u0;
    if (cfg.problem.order() == 2) p["du0"] = cfg.problem.du0;

    json d;
    if (cfg.data.csv) {
        d["csv"] = *cfg.data.csv;
    } else {
        d["n"] = cfg.data.n;
        d["window"] = {cfg.data.window_start.value_or(cfg.problem.t_start),
                       cfg.data.window_end.value_or(cfg.problem.t_end)};
        d["sigma"] = cfg.data.sigma;
    }

    return json{
        {"problem", p},
        {"network",
         {{"hidden_layers", cfg.network.hidden_layers},
          {"hidden_width", cfg.network.hidden_width},
          {"input_scale", cfg.network.input_scale},
          {"output_scale", cfg.network.output_scale}}},
        {"data", d},
        {"collocation",
         {{"n", cfg.collocation.n},
          {"strategy", cfg.collocation.strategy == data::Strategy::Uniform ? "uniform" : "random"}}},
        {"loss_weights",
         {{"data", cfg.weights.data},
          {"governing", cfg.weights.governing},
          {"initial", cfg.weights.initial},
          {"boundary", cfg.weights.boundary},
          {"regularization", cfg.weights.regularization}}},
        {"optimizer",
         {{"learning_rate", cfg.optimizer.learning_rate},
          {"beta1", cfg.optimizer.beta1},
          {"beta2", cfg.optimizer.beta2},
          {"epsilon", cfg.optimizer.epsilon},
          {"lr_final", cfg.optimizer.lr_final}}},
        {"epochs", cfg.epochs},
        {"seeds", cfg.seeds},
        {"reference_steps", cfg.reference_steps},
        {"test_grid", cfg.test_grid},
        {"output_dir", cfg.output_dir},
    };
}

RunReport run_experiment(const ExperimentConfig& cfg_in,
                         const std::optional<std::string>& out_override) {
    ExperimentConfig cfg = cfg_in;
    if (out_override) cfg.output_dir = *out_override;
    cfg.normalize_and_validate();

    std::optional<data::TrainingSet> external;
    if (cfg.data.csv) {
        external = data::read_csv(*cfg.data.csv);
        for (const auto& pt : external->points) {
            if (pt.t < cfg.problem.t_start || pt.t > cfg.problem.t_end)
                fail("data.csv", "point t = " + csv::format_double(pt.t) +
                                     " lies outside the problem domain");
        }
    }

    const auto ref = problems::reference_trajectory(cfg.problem, cfg.reference_steps);
    const fs::path out_dir(cfg.output_dir);
    fs::create_directories(out_dir);
    reference::write_csv(ref, out_dir / "reference.csv");

    RunReport report;
    report.outcomes.resize(cfg.seeds.size());
    const std::size_t n_threads = thread_budget(cfg.seeds.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cfg.seeds.size()) return;
            report.outcomes[i] = run_one_seed(cfg, ref, external, cfg.seeds[i], out_dir);
        }
    };
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::vector<double> good;
    for (const auto& o : report.outcomes) {
        if (o.ok) good.push_back(o.metrics.mse);
        else report.any_failure = true;
    }
    std::sort(good.begin(), good.end());
    const auto median = [&]() -> double {
        const std::size_t n = good.size();
        return n % 2 ? good[n / 2] : 0.5 * (good[n / 2 - 1] + good[n / 2]);
    };

    json doc;
    doc["experiment"] = to_json(cfg);
    doc["kernels"] = kernels::active_ops().name;
    json seed_arr = json::array();
    for (const auto& o : report.outcomes) seed_arr.push_back(outcome_to_json(o));
    doc["seeds"] = std::move(seed_arr);
    doc["median_mse"] = good.empty() ? json() : json(median());
    doc["min_mse"] = good.empty() ? json() : json(good.front());
    doc["max_mse"] = good.empty() ? json() : json(good.back());
    report.median_mse = good.empty() ? std::nan("") : median();

    report.path = out_dir / "report.json";
    std::ofstream out(report.path);
    if (!out) throw std::runtime_error("cannot write " + report.path.string());
    out << doc.dump(2) << '\n';
    report.document = std::move(doc);
    return report;
}

RunReport run_experiment(const fs::path& config_path,
                         const std::optional<std::string>& out_override) {
    return run_experiment(load_config(config_path), out_override);
}

SweepResult sweep(const ExperimentConfig& base, const std::string& parameter,
                  const std::vector<double>& values, const std::string& out_root) {
    if (values.empty()) throw config_error("sweep: needs at least one value");
    {
        // reject unknown names before any run happens
        ExperimentConfig probe = base;
        apply_sweep_value(probe, parameter, values.front());
    }
    fs::create_directories(out_root);

    SweepResult result;
    std::vector<std::vector<double>> rows;
    for (double v : values) {
        ExperimentConfig cfg = base;
        apply_sweep_value(cfg, parameter, v);
        cfg.output_dir = out_root + "/" + parameter + "_" + csv::format_double(v);
        const RunReport rep = run_experiment(cfg);
        result.any_failure = result.any_failure || rep.any_failure;
        double lo = std::nan(""), hi = std::nan("");
        if (rep.document["min_mse"].is_number()) lo = rep.document["min_mse"].get<double>();
        if (rep.document["max_mse"].is_number()) hi = rep.document["max_mse"].get<double>();
        rows.push_back({v, rep.median_mse, lo, hi});
    }
    result.csv_path = fs::path(out_root) / "sweep.csv";
    csv::write_table(result.csv_path, "value,median_mse,min_mse,max_mse", rows);
    return result;
}

namespace {

bool type_matches(const json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "number") return v.is_number();
    if (t == "integer") return v.is_number_integer();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    return false;
}

void validate_node(const json& value, const json& schema, const std::string& path,
                   std::vector<std::string>& errors) {
    if (const json* t = find(schema, "type")) {
        bool ok = false;
        if (t->is_string()) {
            ok = type_matches(value, t->get<std::string>());
        } else if (t->is_array()) {
            for (const auto& alt : *t)
                if (type_matches(value, alt.get<std::string>())) ok = true;
        }
        if (!ok) {
            errors.push_back(path + ": type mismatch (want " + t->dump() + ")");
            return;
        }
    }
    if (const json* e = find(schema, "enum")) {
        bool ok = false;
        for (const auto& alt : *e)
            if (value == alt) ok = true;
        if (!ok) errors.push_back(path + ": not one of the allowed values");
    }
    if (value.is_object()) {
        if (const json* req = find(schema, "required")) {
            for (const auto& k : *req) {
                if (!value.contains(k.get<std::string>()))
                    errors.push_back(path + ": missing required key '" + k.get<std::string>() + "'");
            }
        }
        const json* props = find(schema, "properties");
        if (const json* ap = find(schema, "additionalProperties");
            ap && ap->is_boolean() && !ap->get<bool>()) {
            for (auto it = value.begin(); it != value.end(); ++it) {
                if (!props || !props->contains(it.key()))
                    errors.push_back(path + ": unexpected key '" + it.key() + "'");
            }
        }
        if (props) {
            for (auto it = props->begin(); it != props->end(); ++it) {
                if (value.contains(it.key()))
                    validate_node(value.at(it.key()), it.value(), path + "." + it.key(), errors);
            }
        }
    }
    if (value.is_array()) {
        if (const json* items = find(schema, "items")) {
            for (std::size_t i = 0; i < value.size(); ++i)
                validate_node(value[i], *items, path + "[" + std::to_string(i) + "]", errors);
        }
    }
}

}  // namespace

std::vector<std::string> validate_against_schema(const json& value, const json& schema) {
    std::vector<std::string> errors;
    validate_node(value, schema, "$", errors);
    return errors;
}

}  // namespace pinnosc::harness
