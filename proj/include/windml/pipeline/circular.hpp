#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>

namespace windml {

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

// Mean resultant vector (1/n) sum of e^{i theta} over the angles (degrees in).
inline std::complex<double> mean_resultant(std::span<const double> angles_deg) {
    if (angles_deg.empty()) throw std::invalid_argument("mean_resultant: empty input");
    std::complex<double> sum{0.0, 0.0};
    for (double a : angles_deg) {
        const double r = deg_to_rad(a);
        sum += std::complex<double>(std::cos(r), std::sin(r));
    }
    return sum / static_cast<double>(angles_deg.size());
}

// Argument of the mean resultant vector, in [0, 360). Throws when the
// resultant magnitude is below 1e-12 (uniformly opposed angles have no
// meaningful mean direction).
inline double circular_mean(std::span<const double> angles_deg) {
    const auto r = mean_resultant(angles_deg);
    if (std::abs(r) < 1e-12)
        throw std::domain_error("circular_mean: degenerate (near-zero resultant)");
    double deg = rad_to_deg(std::atan2(r.imag(), r.real()));
    if (deg < 0.0) deg += 360.0;
    if (deg >= 360.0) deg -= 360.0;
    return deg;
}

// Complex pseudo-variance of the unit vectors z_t = e^{i theta_t}:
// (1/(n-1)) sum (z_t - zbar)^2 with zbar the mean resultant. This is the
// second-moment quantity that is genuinely complex-valued; the conjugate
// form would be real.
inline std::complex<double> circular_pseudo_variance(std::span<const double> angles_deg) {
    if (angles_deg.size() < 2)
        throw std::invalid_argument("circular_pseudo_variance: need >= 2 angles");
    const auto zbar = mean_resultant(angles_deg);
    std::complex<double> acc{0.0, 0.0};
    for (double a : angles_deg) {
        const double r = deg_to_rad(a);
        const std::complex<double> d = std::complex<double>(std::cos(r), std::sin(r)) - zbar;
        acc += d * d;
    }
    return acc / static_cast<double>(angles_deg.size() - 1);
}

} // namespace windml
