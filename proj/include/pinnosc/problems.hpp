#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <variant>
#include <vector>

#include "pinnosc/autodiff.hpp"
#include "pinnosc/reference.hpp"

namespace pinnosc::problems {

// u' + damping * u = sin(forcing_omega * t), first order
struct PrimerCoeffs {
    double damping = 0.1;
    double forcing_omega = std::numbers::pi / 2.0;
};

// u'' + omega0^2 u - epsilon * omega0 * (1 - u^2) u' = 0, second order
struct VanDerPolCoeffs {
    double omega0 = 15.0;
    double epsilon = 5.0;
};

// u'' + alpha u + beta u^3 = 0, second order, conserves
// E = u'^2/2 + alpha u^2/2 + beta u^4/4
struct DuffingCoeffs {
    double alpha = 1.0;
    double beta = 1.0;
};

struct OscillatorProblem {
    std::variant<PrimerCoeffs, VanDerPolCoeffs, DuffingCoeffs> coefficients;
    double t_start = 0.0;
    double t_end = 1.0;
    double u0 = 1.0;
    double du0 = 0.0;  // ignored for first-order problems

    int order() const { return std::holds_alternative<PrimerCoeffs>(coefficients) ? 1 : 2; }
    const char* kind_name() const;
    void validate() const;

    static OscillatorProblem primer();
    static OscillatorProblem van_der_pol(double epsilon = 5.0);
    static OscillatorProblem duffing();
};

bool has_energy(const OscillatorProblem& p);

namespace detail {
template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace detail

// Equation residual at one point, from the jets of the network output and of
// time. Identically zero on exact solutions. T is double or ad::Var.
template <class T>
T residual(const OscillatorProblem& p, const ad::Jet2<T>& u, const ad::Jet2<T>& t) {
    using std::sin;
    return std::visit(
        detail::overloaded{
            [&](const PrimerCoeffs& c) -> T {
                return u.v1 + c.damping * u.v0 - sin(c.forcing_omega * t.v0);
            },
            [&](const VanDerPolCoeffs& c) -> T {
                return u.v2 + (c.omega0 * c.omega0) * u.v0 -
                       (c.epsilon * c.omega0) * ((1.0 - u.v0 * u.v0) * u.v1);
            },
            [&](const DuffingCoeffs& c) -> T {
                return u.v2 + c.alpha * u.v0 + c.beta * ((u.v0 * u.v0) * u.v0);
            }},
        p.coefficients);
}

// Initial-condition residuals at t_start: one entry per required condition.
template <class T>
std::vector<T> initial_condition_residuals(const OscillatorProblem& p, const ad::Jet2<T>& u) {
    std::vector<T> r;
    r.push_back(u.v0 - p.u0);
    if (p.order() == 2) r.push_back(u.v1 - p.du0);
    return r;
}

// Conserved energy; only defined where the dynamics conserve one.
template <class T>
T energy(const OscillatorProblem& p, const T& u, const T& du) {
    const auto* d = std::get_if<DuffingCoeffs>(&p.coefficients);
    if (!d)
        throw std::invalid_argument("energy is only defined for the conservative cubic oscillator");
    return 0.5 * (du * du) + (0.5 * d->alpha) * (u * u) + (0.25 * d->beta) * ((u * u) * (u * u));
}

// Same dynamics as a first-order system for the reference integrator.
reference::FirstOrderSystem to_first_order_system(const OscillatorProblem& p);

// Reference trajectory over the problem's own domain and initial state.
reference::Trajectory reference_trajectory(const OscillatorProblem& p, int n_steps);

}  // namespace pinnosc::problems
