#include "pinnosc/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pinnosc/csv.hpp"

namespace pinnosc::reference {

Trajectory rk4_integrate(const FirstOrderSystem& system, std::span<const double> y0, double t0,
                         double t1, int n_steps) {
    if (!system.field) throw std::invalid_argument("system has no field");
    if (system.dimension < 1 || static_cast<std::size_t>(system.dimension) != y0.size())
        throw std::invalid_argument("initial state does not match the system dimension");
    if (!(t1 > t0)) throw std::invalid_argument("need t1 > t0");
    if (n_steps < 1) throw std::invalid_argument("need at least one step");

    const int dim = system.dimension;
    const double h = (t1 - t0) / n_steps;

    Trajectory traj;
    traj.dimension = dim;
    traj.step = h;
    traj.times.resize(n_steps + 1);
    traj.states.resize(static_cast<std::size_t>(n_steps + 1) * dim);

    std::vector<double> y(y0.begin(), y0.end());
    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);

    traj.times[0] = t0;
    std::copy(y.begin(), y.end(), traj.states.begin());

    for (int i = 0; i < n_steps; ++i) {
        const double t = t0 + i * h;
        system.field(t, y, k1);
        for (int k = 0; k < dim; ++k) tmp[k] = y[k] + 0.5 * h * k1[k];
        system.field(t + 0.5 * h, tmp, k2);
        for (int k = 0; k < dim; ++k) tmp[k] = y[k] + 0.5 * h * k2[k];
        system.field(t + 0.5 * h, tmp, k3);
        for (int k = 0; k < dim; ++k) tmp[k] = y[k] + h * k3[k];
        system.field(t + h, tmp, k4);
        for (int k = 0; k < dim; ++k)
            y[k] += (h / 6.0) * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);

        for (double v : y) {
            if (!std::isfinite(v))
                throw std::runtime_error("integration blew up near t = " + std::to_string(t + h));
        }
        traj.times[i + 1] = t0 + (i + 1) * h;
        std::copy(y.begin(), y.end(), traj.states.begin() + static_cast<std::size_t>(i + 1) * dim);
    }
    traj.times[n_steps] = t1;
    return traj;
}

std::vector<double> sample(const Trajectory& traj, double t) {
    if (traj.times.size() < 2) throw std::invalid_argument("trajectory has fewer than two points");
    const double lo = traj.times.front();
    const double hi = traj.times.back();
    if (t < lo || t > hi)
        throw std::out_of_range("t = " + std::to_string(t) + " outside [" + std::to_string(lo) +
                                ", " + std::to_string(hi) + "]");
    std::size_t i = static_cast<std::size_t>((t - lo) / traj.step);
    i = std::min(i, traj.times.size() - 2);
    if (t < traj.times[i] && i > 0) --i;  // guard against rounding at cell edges
    const double span = traj.times[i + 1] - traj.times[i];
    const double a = (t - traj.times[i]) / span;
    const auto y0 = traj.state(i);
    const auto y1 = traj.state(i + 1);
    std::vector<double> out(traj.dimension);
    for (int k = 0; k < traj.dimension; ++k) out[k] = (1.0 - a) * y0[k] + a * y1[k];
    return out;
}

double primer_analytic(double t) {
    const double a = 0.1;
    const double w = std::numbers::pi / 2.0;
    const double denom = a * a + w * w;
    const double c = 1.0 + w / denom;
    return c * std::exp(-a * t) + (a * std::sin(w * t) - w * std::cos(w * t)) / denom;
}

void write_csv(const Trajectory& traj, const std::filesystem::path& path) {
    std::string header;
    if (traj.dimension == 1)
        header = "t,u";
    else if (traj.dimension == 2)
        header = "t,u,du";
    else
        throw std::invalid_argument("csv output supports one or two state dimensions");
    std::vector<std::vector<double>> rows;
    rows.reserve(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        std::vector<double> row{traj.times[i]};
        for (double v : traj.state(i)) row.push_back(v);
        rows.push_back(std::move(row));
    }
    csv::write_table(path, header, rows);
}

}  // namespace pinnosc::reference
