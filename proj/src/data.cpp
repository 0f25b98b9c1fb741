#include "pinnosc/data.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "pinnosc/csv.hpp"

namespace pinnosc::data {

std::vector<double> linspace(double a, double b, int n) {
    if (n < 1) throw std::invalid_argument("need at least one point");
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = a;
        return out;
    }
    for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
    out[n - 1] = b;
    return out;
}

TrainingSet generate_training_data(const reference::Trajectory& ref, double window_start,
                                   double window_end, int n, double sigma, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("need at least one training point");
    if (window_end < window_start) throw std::invalid_argument("window is reversed");
    if (window_start < ref.times.front() || window_end > ref.times.back())
        throw std::invalid_argument("window extends past the reference trajectory");
    if (sigma < 0.0) throw std::invalid_argument("noise level must be non-negative");

    TrainingSet set;
    set.noise_sigma = sigma;
    set.window_start = window_start;
    set.window_end = window_end;
    const auto times = linspace(window_start, window_end, n);
    set.points.reserve(times.size());
    for (double t : times) set.points.push_back({t, reference::sample(ref, t)[0]});

    if (sigma > 0.0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> noise(0.0, sigma);
        const bool pin_first = window_start == ref.times.front();
        for (std::size_t i = 0; i < set.points.size(); ++i) {
            if (i == 0 && pin_first) continue;  // keep the initial condition exact
            set.points[i].u += noise(rng);
        }
    }
    return set;
}

CollocationSet generate_collocation(double t_start, double t_end, int n, Strategy strategy,
                                    std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("need at least one collocation point");
    if (!(t_end > t_start)) throw std::invalid_argument("need t_end > t_start");
    CollocationSet set;
    set.strategy = strategy;
    if (strategy == Strategy::Uniform) {
        set.times = linspace(t_start, t_end, n);
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> dist(t_start, t_end);
        set.times.resize(n);
        for (double& t : set.times) t = dist(rng);
        std::sort(set.times.begin(), set.times.end());  // fixed summation order downstream
    }
    return set;
}

void write_csv(const TrainingSet& set, const std::filesystem::path& path) {
    std::vector<std::vector<double>> rows;
    rows.reserve(set.points.size());
    for (const auto& p : set.points) rows.push_back({p.t, p.u});
    csv::write_table(path, "t,u", rows);
}

TrainingSet read_csv(const std::filesystem::path& path) {
    const auto table = csv::read_table(path);
    if (table.header != "t,u")
        throw std::runtime_error(path.string() + ": expected header 't,u', got '" + table.header +
                                 "'");
    TrainingSet set;
    for (const auto& row : table.rows) {
        if (row.size() != 2) throw std::runtime_error(path.string() + ": rows must have 2 columns");
        set.points.push_back({row[0], row[1]});
    }
    if (set.points.empty()) throw std::runtime_error(path.string() + ": no data rows");
    std::sort(set.points.begin(), set.points.end(),
              [](const TrainPoint& a, const TrainPoint& b) { return a.t < b.t; });
    set.window_start = set.points.front().t;
    set.window_end = set.points.back().t;
    return set;
}

}  // namespace pinnosc::data
