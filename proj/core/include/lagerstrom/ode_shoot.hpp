#pragma once

#include <vector>

#include "lagerstrom/model.hpp"

namespace lagerstrom::shoot {

/// Solution of the initial value problem u(1) = 0, u'(1) = c, sampled at the
/// accepted integrator steps.
struct SolutionProfile {
  std::vector<double> r;
  std::vector<double> u;
  std::vector<double> du;  ///< u'(r), taken from the reduced right-hand side
  std::vector<double> w;   ///< \int_1^r u
  /// \int_1^r (1 - u), integrated alongside u to avoid cancellation in r - 1 - w.
  std::vector<double> deficit;
  double c = 0.0;
  double u_inf = 0.0;
  /// Certified bound on |u(inf) - u_inf| from the tail beyond r.back().
  double u_inf_bound = 0.0;

  /// Cubic Hermite value of u at r (clamped to the profile range).
  double u_at(double r) const;
  /// r^{n-1} u' e^{F(u) + eps w} at grid point i; equals c for an exact solution.
  double first_integral(const ModelParams& params, std::size_t i) const;
};

struct TailEstimate {
  double u_inf = 0.0;
  double bound = 0.0;
  /// The coarse bound that ignores the exponential decay of u'.
  double crude_bound = 0.0;
  /// \int_R^inf (u_inf - u) ds estimate, used for the constant C.
  double deficit_tail = 0.0;
};

/// Integrates u' = c r^{1-n} exp(-F(u) - eps w), w' = u from r = 1 to r_max
/// with a Dormand-Prince 5(4) pair at mixed tolerance `tol`.
SolutionProfile integrate_ivp(const ModelParams& params, double c, double r_max, double tol);

/// Tail of u beyond R = profile.r.back() (R >= 2). Since u is increasing the
/// integrand of u(inf) - u(R) is sandwiched between two exponentials with
/// rates eps u(R) and eps (u(R) + T); the midpoint and half-gap are returned.
TailEstimate tail_u_infinity(const SolutionProfile& profile, const ModelParams& params);

/// Coarse tail bound: c / ((n-2) R^{n-2}) for n > 2, and
/// c \int_R^inf exp(-eps (s-2) p(c)) ds with p(c) = c e^{-eps-F(1)} \int_1^2 s^{1-n} ds otherwise.
double crude_tail_bound(const ModelParams& params, double c, double R);

struct ShootingConfig {
  double delta = 1e-8;     ///< |u(inf; c*) - 1| target
  double ivp_tol = 1e-11;
  double expansion = 2.0;  ///< geometric bracket growth factor
  int max_expansions = 60;
  int max_iterations = 200;
  /// Keep integrating at least to this r even when the tail is already certified.
  double r_cover = 0.0;
  /// Initial guess for c; <= 0 selects the eps -> 0 limit.
  double c_seed = 0.0;
};

struct ShootResult {
  double c_star = 0.0;
  SolutionProfile profile;
  int ivp_solves = 0;
  double delta = 0.0;
};

/// u(inf; c) - 1 with the tail-certified r_max policy of `shoot`.
double shooting_residual(const ModelParams& params, double c, const ShootingConfig& cfg,
                         SolutionProfile* profile_out = nullptr);

/// Finds c* with |u(inf; c*) - 1| <= delta. Bracket by geometric expansion,
/// bisect to a relative width of 1e-3, then finish with a bracketed secant.
ShootResult shoot(const ModelParams& params, const ShootingConfig& cfg = {});

/// C = c exp(eps + eps \int_1^inf (1 - u) ds), the constant of the rescaled
/// integral equation, from a converged shooting solution.
double extract_C(const ShootResult& solution, const ModelParams& params);

}  // namespace lagerstrom::shoot
