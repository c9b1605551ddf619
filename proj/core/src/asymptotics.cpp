#include "lagerstrom/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "lagerstrom/errors.hpp"
#include "lagerstrom/quadrature.hpp"
#include "lagerstrom/specfun.hpp"

namespace lagerstrom::asym {
namespace {

constexpr double kE = std::numbers::e;
constexpr double kGamma = specfun::kEulerGamma;
constexpr double kLn2 = std::numbers::ln2;

void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 0.2)) {
    std::ostringstream msg;
    msg << "asymptotics: eps=" << eps << " outside (0, 0.2)";
    throw DomainError(msg.str());
  }
}

void check_order(int order, int max_order, const char* who) {
  if (order < 1 || order > max_order) {
    std::ostringstream msg;
    msg << who << ": order " << order << " outside 1.." << max_order;
    throw DomainError(msg.str());
  }
}

double E(double q, double x) { return specfun::exp_integral(q, x); }

}  // namespace

CaseId CaseId::make(int n, int k) {
  if ((n == 2 && k == 0) || (n == 3 && k == 0) || (n == 2 && k == 1)) return CaseId(n, k);
  std::ostringstream msg;
  msg << "CaseId: (n, k) = (" << n << ", " << k << ") has no closed-form expansion";
  throw DomainError(msg.str());
}

std::string CaseId::label() const { return std::to_string(n_) + "," + std::to_string(k_); }

std::optional<CaseId> case_of(const ModelParams& params) {
  const auto* ck = std::get_if<ConstantK>(&params.nonlinearity);
  if (!ck) return std::nullopt;
  if (params.n == 2.0 && ck->k == 0.0) return CaseId::make(2, 0);
  if (params.n == 3.0 && ck->k == 0.0) return CaseId::make(3, 0);
  if (params.n == 2.0 && ck->k == 1.0) return CaseId::make(2, 1);
  return std::nullopt;
}

double b21_relation_residual(double A, double B) {
  const double em1 = kE - 1.0;
  return B - A * kGamma + (em1 * em1 / kE) * (kGamma + 2 * kLn2) - 2 * A * em1 / kE +
         em1 * em1 * em1 / (2 * kE * kE) * (3 - 4 * kLn2);
}

ExpansionCoefficients coefficients(CaseId c) {
  ExpansionCoefficients out;
  if (c.n() == 3) {
    out.lambda_kind = LambdaKind::kEpsPowerSeries;
    out.leading = 1.0;
    out.eps_log_eps = -2.0;
    out.eps_linear = -(2 * kGamma + 1);
    return out;
  }
  if (c.k() == 0) {
    out.leading = 1.0;
    out.A = kGamma + 1;
    out.B = kGamma * kGamma + 2 * kGamma + 0.5 - kLn2;
    return out;
  }
  const double em1 = kE - 1.0;
  out.leading = em1;
  out.A = em1 / kE * (kGamma * kE + kE - 1);
  // B solves the linear relation b21_relation_residual(A, B) = 0.
  out.B = out.A * kGamma - (em1 * em1 / kE) * (kGamma + 2 * kLn2) + 2 * out.A * em1 / kE -
          em1 * em1 * em1 / (2 * kE * kE) * (3 - 4 * kLn2);
  return out;
}

int max_inner_order(CaseId c) { return c.n() == 3 ? 3 : 2; }
int max_outer_order(CaseId) { return 2; }

double c_asym(CaseId c, double eps, int order) {
  check_eps(eps);
  check_order(order, kMaxCOrder, "c_asym");
  const auto co = coefficients(c);
  if (co.lambda_kind == LambdaKind::kEpsPowerSeries) {
    double v = co.leading;
    if (order >= 2) v += co.eps_log_eps * eps * std::log(eps);
    if (order >= 3) v += co.eps_linear * eps;
    return v;
  }
  const double il = 1.0 / std::log(1.0 / eps);
  double v = co.leading * il;
  if (order >= 2) v += co.A * il * il;
  if (order >= 3) v += co.B * il * il * il;
  return v;
}

double inner_u(CaseId c, double eps, double r, int order) {
  check_eps(eps);
  check_order(order, max_inner_order(c), "inner_u");
  if (!(r >= 1.0)) throw DomainError("inner_u: r must be >= 1");
  const double lr = std::log(r);
  if (c.n() == 3) {
    const double one_minus = 1.0 - 1.0 / r;
    double u = one_minus;
    if (order >= 2) u -= eps * std::log(eps) * one_minus;
    if (order >= 3) u += -eps * (lr + lr / r) + eps * (1 - kGamma) * one_minus;
    return u;
  }
  const double il = 1.0 / std::log(1.0 / eps);
  if (c.k() == 0) {
    double u = lr * il;
    if (order >= 2) u += kGamma * lr * il * il;
    return u;
  }
  const double em1 = kE - 1.0;
  double arg = 1.0 + em1 * lr * il;
  if (order >= 2) arg += kGamma * em1 * lr * il * il;
  return std::log(arg);
}

double outer_bracket_coefficient(OuterBracket b) {
  return b == OuterBracket::kCorrected ? kGamma + 1.0 - 1.0 / kE : kGamma - 1.0 + 1.0 / kE;
}

double outer_u_21(double eps, double rho, double bracket_coefficient) {
  check_eps(eps);
  if (!(rho > 0.0)) throw DomainError("outer_u: rho must be positive");
  const double il = 1.0 / std::log(1.0 / eps);
  const double em1 = kE - 1.0;
  const double e1 = E(1, rho);
  const double second = 2 * E(1, 2 * rho) - std::exp(-rho) * e1;
  return 1.0 - em1 / kE * (1 + bracket_coefficient * il) * e1 * il + em1 * em1 / (kE * kE) * second * il * il -
         em1 * em1 / (2 * kE * kE) * e1 * e1 * il * il;
}

double integral_E2_squared(double rho) {
  if (!(rho > 0.0)) throw DomainError("integral_E2_squared: rho must be positive");
  const auto r = specfun::quad_adaptive(
      [](double t) {
        const double e2 = E(2, t);
        return e2 * e2;
      },
      rho, specfun::kInfinity, 1e-12);
  return r.value;
}

double outer_u(CaseId c, double eps, double rho, int order, OuterBracket bracket) {
  check_eps(eps);
  check_order(order, max_outer_order(c), "outer_u");
  if (!(rho > 0.0)) throw DomainError("outer_u: rho must be positive");
  if (c.n() == 3) {
    const double e2 = E(2, rho);
    if (order == 1) return 1.0 - eps * e2;
    const double e1 = E(1, rho);
    const double C = c_asym(c, eps, 3);
    return 1.0 - eps * C * e2 + eps * eps * (e1 * e2 - rho * e2 * e2 - integral_E2_squared(rho));
  }
  const double il = 1.0 / std::log(1.0 / eps);
  if (c.k() == 0) {
    const double e1 = E(1, rho);
    if (order == 1) return 1.0 - e1 * il;
    return 1.0 - e1 * (il + (kGamma + 1) * il * il) + il * il * (2 * E(1, 2 * rho) - std::exp(-rho) * e1);
  }
  if (order == 1) return 1.0 - (kE - 1.0) / kE * E(1, rho) * il;
  return outer_u_21(eps, rho, outer_bracket_coefficient(bracket));
}

}  // namespace lagerstrom::asym
