#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace windml {

// Physical turbine parameters for the cubic power law
// P(W) = (1/2) rho S c_p W^3, with S the rotor-swept area.
struct TurbinePhysics {
    double rho = 1.225;          // air density, kg/m^3
    double rotor_diameter = 90.0; // m
    double cp = 0.45;            // power coefficient, (0, 16/27]
    double rated_power = 2050.0; // kW
    double cut_in = 3.5;         // m/s
    double cut_out = 25.0;       // m/s

    void validate() const {
        if (!(cp > 0.0 && cp <= 16.0 / 27.0))
            throw std::invalid_argument("TurbinePhysics: cp must be in (0, 16/27]");
        if (!(cut_in < cut_out))
            throw std::invalid_argument("TurbinePhysics: cut_in must be < cut_out");
        if (!(rated_power > 0.0))
            throw std::invalid_argument("TurbinePhysics: rated_power must be > 0");
    }

    double rotor_area() const {
        const double r = rotor_diameter / 2.0;
        return std::numbers::pi * r * r;
    }
};

// Theoretical power in kW: zero below cut-in and at/above cut-out, the
// cubic law clipped to rated power otherwise.
inline double theoretical_power(const TurbinePhysics& physics, double wind_speed) {
    if (wind_speed < 0.0) throw std::invalid_argument("theoretical_power: negative wind speed");
    if (wind_speed < physics.cut_in || wind_speed >= physics.cut_out) return 0.0;
    const double watts =
        0.5 * physics.rho * physics.rotor_area() * physics.cp * wind_speed * wind_speed * wind_speed;
    return std::min(watts / 1000.0, physics.rated_power);
}

} // namespace windml
