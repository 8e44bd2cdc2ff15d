#pragma once

#include <algorithm>
#include <span>
#include <stdexcept>
#include <vector>

namespace windml {

// Persistence baseline: the prediction for each instant is the previous
// observation. The first instant has no prediction, so the output is one
// shorter than the input and covers instants 2..T.
inline std::vector<double> persistence_predict(std::span<const double> series) {
    if (series.size() < 2) throw std::invalid_argument("persistence_predict: need length >= 2");
    return std::vector<double>(series.begin(), series.end() - 1);
}

// Builder power curve: ordered (wind speed, power) knots with cut-in and
// cut-out speeds. Zero below cut-in and at/above cut-out, piecewise-linear
// between knots otherwise.
struct PowerCurve {
    std::vector<std::pair<double, double>> knots; // (m/s, kW), strictly increasing speeds
    double cut_in = 0.0;
    double cut_out = 0.0;

    void validate() const {
        if (knots.empty()) throw std::invalid_argument("PowerCurve: no knots");
        for (std::size_t i = 1; i < knots.size(); ++i)
            if (knots[i].first <= knots[i - 1].first)
                throw std::invalid_argument("PowerCurve: knot speeds must be strictly increasing");
        if (cut_in >= cut_out) throw std::invalid_argument("PowerCurve: cut_in must be < cut_out");
    }
};

inline double power_curve_predict(const PowerCurve& curve, double wind_speed) {
    if (wind_speed < 0.0) throw std::invalid_argument("power_curve_predict: negative wind speed");
    if (wind_speed < curve.cut_in || wind_speed >= curve.cut_out) return 0.0;
    const auto& k = curve.knots;
    if (wind_speed <= k.front().first) return k.front().second;
    if (wind_speed >= k.back().first) return k.back().second;
    const auto it = std::upper_bound(k.begin(), k.end(), wind_speed,
                                     [](double w, const auto& knot) { return w < knot.first; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double frac = (wind_speed - lo.first) / (hi.first - lo.first);
    return lo.second + frac * (hi.second - lo.second);
}

} // namespace windml
