#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "pinnosc/reference.hpp"

namespace pinnosc::data {

enum class Strategy { Uniform, Random };

struct TrainPoint {
    double t;
    double u;
};

// Supervised samples of the reference solution, sorted by t.
struct TrainingSet {
    std::vector<TrainPoint> points;
    double noise_sigma = 0.0;
    double window_start = 0.0;
    double window_end = 0.0;
};

struct CollocationSet {
    std::vector<double> times;  // sorted
    Strategy strategy = Strategy::Uniform;
};

// n points uniformly spaced across [window_start, window_end], values read
// off the trajectory, optional i.i.d. Gaussian noise of the given sigma.
// When the window starts at the trajectory start the first sample is left
// noise-free: it doubles as the initial condition.
TrainingSet generate_training_data(const reference::Trajectory& ref, double window_start,
                                   double window_end, int n, double sigma, std::uint64_t seed);

// Residual evaluation points across [t_start, t_end]: uniform spacing with
// both endpoints included, or i.i.d. uniform draws (then sorted).
CollocationSet generate_collocation(double t_start, double t_end, int n, Strategy strategy,
                                    std::uint64_t seed);

std::vector<double> linspace(double a, double b, int n);

void write_csv(const TrainingSet& set, const std::filesystem::path& path);
TrainingSet read_csv(const std::filesystem::path& path);

}  // namespace pinnosc::data
