#include "lagerstrom/specfun.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "lagerstrom/errors.hpp"

namespace lagerstrom::specfun {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kFpMin = std::numeric_limits<double>::min() / kEps;
constexpr double kSeriesSwitch = 1.0;
constexpr double kMaxQ = 10.0;

bool is_integer(double q) { return q == std::floor(q); }

void check_rho(double rho, const char* who) {
  if (!(rho > 0.0)) {
    std::ostringstream msg;
    msg << who << ": argument must be positive, got " << rho;
    throw DomainError(msg.str());
  }
}

// Modified Lentz evaluation of the continued fraction for Gamma(a, x), x > 0:
// returns F with Gamma(a, x) = e^{-x} x^a F.
double gamma_upper_cf(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kFpMin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = b + an / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 0.5 * kEps) return h;
  }
  throw AccuracyFailure("incomplete gamma continued fraction did not converge", h, std::abs(h) * 1e-8);
}

// E_1 by its convergent power series, rho <= 1.
double e1_series(double rho) {
  double sum = 0.0;
  double term = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= -rho / k;
    const double contrib = term / k;
    sum -= contrib;
    if (std::abs(contrib) < kEps * std::abs(sum)) break;
  }
  return -kEulerGamma - std::log(rho) + sum;
}

// Gamma(a, x) for non-integer a in (-1/2, 1], 0 < x <= 1:
//   Gamma(a, x) = [(Gamma(1+a) - 1) - (x^a - 1)] / a - sum_{k>=1} (-1)^k x^{a+k} / (k! (a+k)),
// written so that a -> 0 stays well conditioned.
double gamma_upper_small_x(double a, double x) {
  const double lx = std::log(x);
  const double head = (boost::math::tgamma1pm1(a) - std::expm1(a * lx)) / a;
  double sum = 0.0;
  double xk_over_fact = 1.0;  // x^k / k!
  const double xa = std::exp(a * lx);
  for (int k = 1; k < 200; ++k) {
    xk_over_fact *= -x / k;
    const double contrib = xa * xk_over_fact / (a + k);
    sum += contrib;
    if (std::abs(contrib) < kEps * std::abs(head - sum)) break;
  }
  return head - sum;
}

// E_q for rho <= 1 (no range checks; q >= 0).
double exp_integral_small(double q, double rho) {
  if (q == 0.0) return std::exp(-rho);
  double base_q;
  double value;
  if (is_integer(q)) {
    base_q = 1.0;
    value = e1_series(rho);
  } else if (q < 1.5) {
    base_q = q;
    value = gamma_upper_small_x(1.0 - q, rho);
  } else {
    base_q = q - std::floor(q - 0.5);
    value = gamma_upper_small_x(1.0 - base_q, rho);
  }
  // Upward recurrence E_{s+1} = (e^{-rho} rho^{-s} - E_s) / s, stable for rho <= 1.
  const double e_rho = std::exp(-rho);
  for (double s = base_q; s < q - 0.5; s += 1.0) {
    value = (e_rho * std::pow(rho, -s) - value) / s;
  }
  return value;
}

double exp_integral_unchecked(double q, double rho) {
  if (rho > kSeriesSwitch) {
    const double a = 1.0 - q;
    const double log_prefactor = -rho + a * std::log(rho);
    if (log_prefactor < -745.0) return 0.0;
    return std::exp(log_prefactor) * gamma_upper_cf(a, rho);
  }
  return exp_integral_small(q, rho);
}

void check_q(double q, const char* who) {
  if (!(q >= 0.0) || q > kMaxQ) {
    std::ostringstream msg;
    msg << who << ": order q=" << q << " outside supported range [0, " << kMaxQ << "]";
    throw UnsupportedParameter(msg.str());
  }
}

}  // namespace

double exp_integral(double q, double rho) {
  check_rho(rho, "exp_integral");
  check_q(q, "exp_integral");
  return exp_integral_unchecked(q, rho);
}

double exp_integral_scaled(double q, double rho) {
  check_rho(rho, "exp_integral_scaled");
  check_q(q, "exp_integral_scaled");
  if (rho > kSeriesSwitch) {
    return std::pow(rho, 1.0 - q) * gamma_upper_cf(1.0 - q, rho);
  }
  return std::exp(rho) * exp_integral_small(q, rho);
}

double small_rho_expansion(int q, double rho) {
  if (q != 1 && q != 2) {
    throw UnsupportedParameter("small_rho_expansion: only q = 1 and q = 2 are available");
  }
  if (!(rho > 0.0) || rho > 0.1) {
    throw DomainError("small_rho_expansion: rho must lie in (0, 0.1]");
  }
  const double lr = std::log(rho);
  if (q == 1) return -lr - kEulerGamma + rho;
  return 1.0 / rho + lr + (kEulerGamma - 1.0) - 0.5 * rho;
}

double upper_incomplete_gamma(double a, double x) {
  check_rho(x, "upper_incomplete_gamma");
  if (!(std::abs(a) <= kMaxQ)) {
    throw UnsupportedParameter("upper_incomplete_gamma: |a| must not exceed 10");
  }
  if (a <= 1.0) return exp_integral_unchecked(1.0 - a, x);
  if (x > std::max(kSeriesSwitch, a - 1.0)) {
    return std::exp(-x + a * std::log(x)) * gamma_upper_cf(a, x);
  }
  // Upward recurrence Gamma(s+1, x) = s Gamma(s, x) + x^s e^{-x} from s in (0, 1].
  double s = a - std::ceil(a - 1.0);
  double value = exp_integral_unchecked(1.0 - s, x);
  const double ex = std::exp(-x);
  for (; s < a - 0.5; s += 1.0) {
    value = s * value + std::pow(x, s) * ex;
  }
  return value;
}

double integral_of_E(double q, double rho) {
  check_rho(rho, "integral_of_E");
  if (!(q >= 1.0)) {
    throw UnsupportedParameter("integral_of_E: requires q >= 1");
  }
  check_q(q, "integral_of_E");
  return exp_integral_unchecked(q - 1.0, rho) - rho * exp_integral_unchecked(q, rho);
}

}  // namespace lagerstrom::specfun
