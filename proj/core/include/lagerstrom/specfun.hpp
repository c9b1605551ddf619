#pragma once

// Exponential-integral family in the normalisation
//
//     E_q(rho) = \int_rho^\infty tau^{-q} e^{-tau} dtau      (= Gamma(1 - q, rho))
//
// together with the constants and closed-form reductions used by the solvers.

#include "lagerstrom/quadrature.hpp"

namespace lagerstrom::specfun {

/// Euler-Mascheroni constant.
inline constexpr double kEulerGamma = 0.577215664901532860606512090082402431;

constexpr double euler_gamma() noexcept { return kEulerGamma; }

/// Largest |rho^2 log rho| multiple separating small_rho_expansion from E_q.
inline constexpr double kSmallRhoRemainderK = 1.0;

/// E_q(rho) for q in [0, 10], rho > 0.
///
/// rho <= 1: convergent series (q = 1, or the Gamma(1+a)-1 form for a = 1-q in
/// (-1/2, 1]) followed by upward recurrence in q. rho > 1: continued fraction.
double exp_integral(double q, double rho);

/// e^{rho} E_q(rho); stays finite where E_q itself underflows.
double exp_integral_scaled(double q, double rho);

/// Truncated small-rho expansion of E_1 (q = 1) or E_2 (q = 2), 0 < rho <= 0.1.
double small_rho_expansion(int q, double rho);

/// Upper incomplete gamma Gamma(a, x) = \int_x^\infty t^{a-1} e^{-t} dt, |a| <= 10, x > 0.
double upper_incomplete_gamma(double a, double x);

/// \int_rho^\infty E_q(tau) dtau = E_{q-1}(rho) - rho E_q(rho), q >= 1.
double integral_of_E(double q, double rho);

}  // namespace lagerstrom::specfun
