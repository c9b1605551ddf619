#pragma once

#include <span>
#include <vector>

namespace lagerstrom {

/// Cubic Hermite interpolation through (x_i, y_i) with slopes dy_i.
/// x must be strictly increasing; xq is clamped to [x_0, x_last].
double hermite_eval(std::span<const double> x, std::span<const double> y, std::span<const double> dy,
                    double xq);

/// Fritsch-Carlson slopes for monotone cubic interpolation of (x, y).
std::vector<double> pchip_slopes(std::span<const double> x, std::span<const double> y);

/// Limits given slopes so that the Hermite interpolant is monotone on every
/// interval where the data are monotone (Fritsch-Carlson condition).
std::vector<double> limit_monotone(std::span<const double> x, std::span<const double> y,
                                   std::span<const double> dy);

}  // namespace lagerstrom
