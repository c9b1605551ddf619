#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lagerstrom/asymptotics.hpp"
#include "lagerstrom/integral_eq.hpp"
#include "lagerstrom/model.hpp"
#include "lagerstrom/ode_shoot.hpp"

namespace lagerstrom::verify {

/// How `measured` is judged against `reference`.
enum class Relation {
  kWithin,        ///< |measured - reference| <= tolerance
  kAtMost,        ///< measured <= reference + tolerance
  kAtLeast,       ///< measured >= reference - tolerance
  kStrictlyAbove  ///< measured > reference
};

struct Check {
  std::string name;
  double measured = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  Relation relation = Relation::kWithin;
  bool passed = false;
};

bool evaluate(Relation relation, double measured, double reference, double tolerance);

struct Metadata {
  std::map<std::string, std::string> params;
  std::map<std::string, std::string> config;
  std::optional<std::string> timestamp;
};

struct Report {
  std::vector<Check> checks;
  Metadata metadata;

  /// Appends a check with `passed` computed from the relation.
  const Check& add(std::string name, double measured, double reference, double tolerance,
                   Relation relation = Relation::kWithin);
  void append(const Report& other);
  bool all_passed() const;
  std::size_t failures() const;
};

struct ErrorMetrics {
  double sup_norm = 0.0;
  double l2_norm = 0.0;
  double location_of_max = 0.0;
};

/// A monotone profile y(x) with optional slopes, the common currency of
/// compare_profiles.
struct Profile {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> dy;  ///< empty: Fritsch-Carlson slopes are used
};

/// u(r) from a shooting solution.
Profile as_profile(const shoot::SolutionProfile& p);
/// u(r) from an integral-equation solution (r = rho / eps).
Profile as_profile(const ie::RescaledProfile& p);
/// u(sigma), sigma = eps r, from a shooting solution.
Profile as_sigma_profile(const shoot::SolutionProfile& p, double eps);
/// Samples `fn` at `count` points equally spaced in [lo, hi].
template <class Fn>
Profile sample(Fn&& fn, double lo, double hi, int count) {
  Profile p;
  for (int i = 0; i < count; ++i) {
    const double x = lo + (hi - lo) * i / (count - 1);
    p.x.push_back(x);
    p.y.push_back(fn(x));
  }
  return p;
}

/// Monotone cubic value of a profile at x (clamped to the profile range).
double interpolate(const Profile& p, double x);

/// Norms of a - b over [lo, hi], measured at the nodes of a in the interval
/// (and at the interval ends), with b interpolated monotonically.
ErrorMetrics compare_profiles(const Profile& a, const Profile& b, double lo, double hi);

/// Shooting against the integral equation on r in [1, 5/eps]: profile
/// sup-norm and C within `tol`, and the Picard contraction ratio against
/// Phi + 0.1. Requires n >= 2.
Report cross_solver_suite(const ModelParams& params, double tol);

/// Closed-form identities against adaptive quadrature.
Report identity_suite(double tol);

/// Least-squares slope of log err against log h.
double order_estimate(const std::vector<std::pair<double, double>>& samples);

struct MonotonicityConfig {
  shoot::ShootingConfig shooting;
  /// Multipliers of c* for the c-monotonicity grid.
  std::vector<double> c_factors{0.6, 0.8, 1.0, 1.2, 1.4};
  /// Lower end of the sigma range for the eps-comparison.
  double sigma_min = 0.1;
  /// Differences below this count as ties in the eps-comparison.
  double comparison_tol = 1e-9;
};

/// u increasing, u <= sqrt(2c/eps), first-integral conservation, u increasing
/// in c, and u_{eps1}(sigma) > u_{eps2}(sigma) for eps1 < eps2 with equal (n, f).
Report monotonicity_suite(const std::vector<ModelParams>& params_list, const MonotonicityConfig& cfg = {});

struct CoefficientFit {
  /// Coefficients of the expansion basis: (1/l, 1/l^2, 1/l^3) for n = 2 and
  /// (1, eps log eps, eps) for (3,0), followed by any remainder columns.
  std::vector<double> coefficients;
  double condition_number = 0.0;
  double residual_norm = 0.0;
};

/// Least-squares fit of numerically obtained C to the case's expansion basis.
/// `remainder_terms` appends that many further columns (1/l^4, 1/l^5 or
/// (eps log eps)^2, eps^2 log eps) to absorb the truncation error.
CoefficientFit coefficient_fit(asym::CaseId c, const std::vector<double>& eps_list,
                               const std::vector<double>& c_numeric, int remainder_terms = 0,
                               double max_condition = 1e8);

/// Least-squares fit of the 1/l coefficient inside the leading bracket of the
/// (2,1) outer expansion to numerical solutions.
struct BracketFit {
  double coefficient = 0.0;
  double standard_error = 0.0;
  /// Sup-norm misfit of each candidate over the sample set.
  double corrected_misfit = 0.0;
  double uncorrected_misfit = 0.0;
};

/// `solutions` pairs eps with u(rho) samples on [rho_lo, rho_hi].
BracketFit fit_outer_bracket(const std::vector<std::pair<double, Profile>>& solutions, double rho_lo,
                             double rho_hi, int samples = 201);

/// Largest contraction ratio over the second half of a Picard run.
double eventual_contraction(const ie::IterationDiagnostics& diag);

}  // namespace lagerstrom::verify
