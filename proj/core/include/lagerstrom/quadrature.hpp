#pragma once

#include <cstddef>
#include <functional>
#include <limits>

namespace lagerstrom::specfun {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  /// Maximum number of subintervals held by the adaptive driver.
  std::size_t max_intervals = 4000;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

using Integrand = std::function<double(double)>;

/// One 21-point Gauss-Kronrod panel on [a, b] (QUADPACK qk21 error model).
QuadratureResult gauss_kronrod21(const Integrand& f, double a, double b);

/// Globally adaptive Gauss-Kronrod quadrature of f over [a, b].
///
/// `b` may be +infinity; the half line is mapped to [0, 1) through
/// t = a + s / (1 - s). Integrable endpoint singularities at `a` (logarithmic
/// or power-law with exponent > -1) are handled by repeated bisection toward
/// the endpoint, which is never evaluated.
///
/// Terminates once the summed error estimate is below max(abs_tol, rel_tol*|I|).
/// Throws AccuracyFailure (carrying the best estimate) when the interval budget
/// is exhausted first.
QuadratureResult quad_adaptive(const Integrand& f, double a, double b, const QuadratureOptions& opts);

/// Convenience overload: `tol` is used both as absolute and relative tolerance.
QuadratureResult quad_adaptive(const Integrand& f, double a, double b, double tol);

}  // namespace lagerstrom::specfun
