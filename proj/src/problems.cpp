#include "pinnosc/problems.hpp"

#include <cmath>

namespace pinnosc::problems {

const char* OscillatorProblem::kind_name() const {
    return std::visit(detail::overloaded{[](const PrimerCoeffs&) { return "primer"; },
                                         [](const VanDerPolCoeffs&) { return "van_der_pol"; },
                                         [](const DuffingCoeffs&) { return "duffing"; }},
                      coefficients);
}

void OscillatorProblem::validate() const {
    if (!(t_end > t_start)) throw std::invalid_argument("need t_end > t_start");
    if (const auto* v = std::get_if<VanDerPolCoeffs>(&coefficients)) {
        if (v->omega0 <= 0.0) throw std::invalid_argument("omega0 must be positive");
    }
}

OscillatorProblem OscillatorProblem::primer() {
    OscillatorProblem p;
    p.coefficients = PrimerCoeffs{};
    p.t_start = 0.0;
    p.t_end = 30.0;
    p.u0 = 1.0;
    return p;
}

OscillatorProblem OscillatorProblem::van_der_pol(double epsilon) {
    OscillatorProblem p;
    p.coefficients = VanDerPolCoeffs{15.0, epsilon};
    p.t_start = 0.0;
    p.t_end = 1.5;
    p.u0 = 1.0;
    p.du0 = 0.0;
    return p;
}

OscillatorProblem OscillatorProblem::duffing() {
    OscillatorProblem p;
    p.coefficients = DuffingCoeffs{1.0, 1.0};
    p.t_start = 0.0;
    p.t_end = 1.5;
    p.u0 = 15.0;
    p.du0 = 0.0;
    return p;
}

bool has_energy(const OscillatorProblem& p) {
    return std::holds_alternative<DuffingCoeffs>(p.coefficients);
}

reference::FirstOrderSystem to_first_order_system(const OscillatorProblem& p) {
    return std::visit(
        detail::overloaded{
            [](const PrimerCoeffs& c) -> reference::FirstOrderSystem {
                return {1, [c](double t, std::span<const double> y, std::span<double> d) {
                            d[0] = -c.damping * y[0] + std::sin(c.forcing_omega * t);
                        }};
            },
            [](const VanDerPolCoeffs& c) -> reference::FirstOrderSystem {
                return {2, [c](double, std::span<const double> y, std::span<double> d) {
                            d[0] = y[1];
                            d[1] = -c.omega0 * c.omega0 * y[0] +
                                   c.epsilon * c.omega0 * (1.0 - y[0] * y[0]) * y[1];
                        }};
            },
            [](const DuffingCoeffs& c) -> reference::FirstOrderSystem {
                return {2, [c](double, std::span<const double> y, std::span<double> d) {
                            d[0] = y[1];
                            d[1] = -c.alpha * y[0] - c.beta * y[0] * y[0] * y[0];
                        }};
            }},
        p.coefficients);
}

reference::Trajectory reference_trajectory(const OscillatorProblem& p, int n_steps) {
    p.validate();
    const auto system = to_first_order_system(p);
    std::vector<double> y0{p.u0};
    if (p.order() == 2) y0.push_back(p.du0);
    return reference::rk4_integrate(system, y0, p.t_start, p.t_end, n_steps);
}

}  // namespace pinnosc::problems
