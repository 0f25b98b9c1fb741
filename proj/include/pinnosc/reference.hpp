#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <vector>

namespace pinnosc::reference {

// Autonomizable first-order system dy/dt = f(t, y).
struct FirstOrderSystem {
    int dimension = 1;
    std::function<void(double t, std::span<const double> y, std::span<double> dydt)> field;
};

// Dense solution on a uniform grid, both endpoints included.
struct Trajectory {
    std::vector<double> times;
    std::vector<double> states;  // row-major, states[i*dimension + k]
    int dimension = 0;
    double step = 0.0;

    std::span<const double> state(std::size_t i) const {
        return {states.data() + i * static_cast<std::size_t>(dimension),
                static_cast<std::size_t>(dimension)};
    }
    std::size_t size() const { return times.size(); }
};

// Classical fixed-step fourth-order Runge-Kutta. Throws std::runtime_error
// with the offending time if the state stops being finite.
Trajectory rk4_integrate(const FirstOrderSystem& system, std::span<const double> y0, double t0,
                         double t1, int n_steps);

// Piecewise-linear interpolation of a stored trajectory; exact at grid
// points, throws std::out_of_range outside [t_first, t_last].
std::vector<double> sample(const Trajectory& traj, double t);

// Closed-form solution of u' + 0.1 u = sin(pi t / 2), u(0) = 1.
double primer_analytic(double t);

// Header "t,u" for one state dimension, "t,u,du" for two.
void write_csv(const Trajectory& traj, const std::filesystem::path& path);

}  // namespace pinnosc::reference
