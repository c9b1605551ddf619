#pragma once

#include <optional>
#include <string>

#include "lagerstrom/model.hpp"

namespace lagerstrom::asym {

/// One of the three closed-form cases (n, k) in {(2,0), (3,0), (2,1)}.
class CaseId {
 public:
  /// Throws DomainError for any other pair.
  static CaseId make(int n, int k);

  int n() const { return n_; }
  int k() const { return k_; }
  std::string label() const;

  bool operator==(const CaseId&) const = default;

 private:
  CaseId(int n, int k) : n_(n), k_(k) {}
  int n_;
  int k_;
};

/// The case covering `params`, if any (GeneralF never matches).
std::optional<CaseId> case_of(const ModelParams& params);

enum class LambdaKind {
  kLogInverseEps,   ///< C is a series in 1/lambda, lambda = log(1/eps)
  kEpsPowerSeries,  ///< C = 1 + a1 eps log eps + a2 eps
};

struct ExpansionCoefficients {
  double A = 0.0;
  double B = 0.0;
  LambdaKind lambda_kind = LambdaKind::kLogInverseEps;
  /// Leading 1/lambda coefficient (1 for (2,0), e-1 for (2,1)); 1 for (3,0).
  double leading = 1.0;
  /// (3,0) only: coefficients of eps log eps and eps.
  double eps_log_eps = 0.0;
  double eps_linear = 0.0;
};

ExpansionCoefficients coefficients(CaseId c);

/// Residual of the linear relation that defines B for (2,1); zero for the exact B.
double b21_relation_residual(double A, double B);

constexpr int kMaxCOrder = 3;
int max_inner_order(CaseId c);
int max_outer_order(CaseId c);

/// Truncated C(eps) series, eps in (0, 0.2), order 1..3.
double c_asym(CaseId c, double eps, int order);

/// Inner (fixed r) expansion of u.
double inner_u(CaseId c, double eps, double r, int order);

/// Coefficient of the 1/l correction inside the leading bracket of the (2,1)
/// outer expansion.
enum class OuterBracket {
  kCorrected,    ///< gamma + 1 - 1/e
  kUncorrected,  ///< gamma - 1 + 1/e
};

double outer_bracket_coefficient(OuterBracket b);

/// Outer (fixed rho = eps r) expansion of u.
double outer_u(CaseId c, double eps, double rho, int order, OuterBracket bracket = OuterBracket::kCorrected);

/// (2,1) outer expansion with an arbitrary bracket coefficient.
double outer_u_21(double eps, double rho, double bracket_coefficient);

/// \int_rho^\infty E_2(tau)^2 dtau by adaptive quadrature.
double integral_E2_squared(double rho);

}  // namespace lagerstrom::asym
