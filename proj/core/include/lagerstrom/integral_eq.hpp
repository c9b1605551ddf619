#pragma once

#include <vector>

#include "lagerstrom/model.hpp"

namespace lagerstrom::ie {

/// Which quantity the profile iterates on.
enum class ProfileKind {
  kV,  ///< v = u - 1 (f = 0)
  kG,  ///< g = G(u) - G(1), G(u) = \int_0^u e^{F}
};

/// Solution of the rescaled integral equation on rho in [eps, P].
///
/// The grid is uniform in x = log(rho) + rho, which is logarithmic near
/// rho = eps and linear in the exponentially decaying far field.
struct RescaledProfile {
  ProfileKind kind = ProfileKind::kV;
  double eps = 0.0;
  double C = 0.0;
  double P = 0.0;
  double x_step = 0.0;
  std::vector<double> x;
  std::vector<double> rho;
  std::vector<double> g;   ///< v or g, see `kind`
  std::vector<double> dg;  ///< d g / d rho
  std::vector<double> u;
  std::vector<double> du;  ///< d u / d rho

  std::size_t size() const { return rho.size(); }
  /// u at r (rho = eps r) by cubic Hermite interpolation.
  double u_at_r(double r) const;
  double u_at_rho(double rho) const;
};

struct IterationDiagnostics {
  double phi = 0.0;
  int iterations = 0;
  double final_residual = 0.0;
  std::vector<double> residuals;
  std::vector<double> contraction_ratios;
};

struct PicardConfig {
  /// Spacing of the x = log(rho) + rho grid.
  double x_step = 0.01;
  /// Truncation point; <= 0 selects eps + 40.
  double P = 0.0;
  double tol = 1e-12;
  int max_iters = 500;
  /// Largest accepted step-doubling estimate of the discretization error of
  /// the converged profile; <= 0 skips the check.
  double accuracy_tol = 1e-7;
  /// Allow Phi >= 1, where convergence is not guaranteed.
  bool allow_large_phi = false;
};

struct CSolution {
  double C = 0.0;
  RescaledProfile profile;
  IterationDiagnostics diagnostics;
  int outer_iterations = 0;
};

/// A profile with g = 0 on the grid selected by `cfg` (n >= 2 required).
RescaledProfile zero_profile(const ModelParams& params, double C, const PicardConfig& cfg = {});

/// One application of the integral operator to `current`, on the same grid.
RescaledProfile picard_rhs(const ModelParams& params, double C, const RescaledProfile& current);

/// Fixed point of picard_rhs at fixed C, starting from zero.
std::pair<RescaledProfile, IterationDiagnostics> picard_solve(const ModelParams& params, double C,
                                                              const PicardConfig& cfg = {});

/// Same, starting from `initial` (whose grid is reused).
std::pair<RescaledProfile, IterationDiagnostics> picard_solve(const ModelParams& params, double C,
                                                              const RescaledProfile& initial,
                                                              const PicardConfig& cfg);

/// Determines C from the boundary condition u(rho = eps) = 0.
CSolution solve_C(const ModelParams& params, const PicardConfig& cfg = {});

/// Phi = C eps^{n-2} \int_eps^\infty E_{n-1}.
double phi_diagnostic(const ModelParams& params, double C);

/// The leading terms of the iterated series at rho, each evaluated by
/// (nested) adaptive quadrature. f = 0: up to 4 terms; otherwise up to 5
/// (the leading term, then F1..F4).
std::vector<double> series_terms(const ModelParams& params, double C, double rho, int order);

}  // namespace lagerstrom::ie
