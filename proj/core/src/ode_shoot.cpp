#include "lagerstrom/ode_shoot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "lagerstrom/errors.hpp"
#include "lagerstrom/interpolation.hpp"
#include "lagerstrom/specfun.hpp"

namespace lagerstrom::shoot {
namespace {

using State = std::array<double, 2>;  // (u, deficit)

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kRCapFactor = 1e4;

class ReducedSystem {
 public:
  ReducedSystem(const ModelParams& p, double c) : n_(p.n), eps_(p.eps), c_(c), tr_(p.nonlinearity) {}

  // u' = c r^{1-n} exp(-F(u) - eps (r - 1 - deficit)), deficit' = 1 - u
  State operator()(double r, const State& y) const {
    const double expo = (1.0 - n_) * std::log(r) - tr_.F(y[0]) - eps_ * ((r - 1.0) - y[1]);
    return {c_ * std::exp(expo), 1.0 - y[0]};
  }

  const Transform& transform() const { return tr_; }

 private:
  double n_;
  double eps_;
  double c_;
  Transform tr_;
};

template <class Stop>
SolutionProfile run(const ModelParams& params, double c, double r_max, double tol, Stop&& stop) {
  params.validate();
  if (!(c > 0.0)) throw DomainError("integrate_ivp: c must be positive");
  if (!(r_max > 1.0)) throw DomainError("integrate_ivp: r_max must exceed 1");
  if (!(tol > 0.0)) throw DomainError("integrate_ivp: tol must be positive");

  const ReducedSystem sys(params, c);
  SolutionProfile prof;
  prof.c = c;
  double r = 1.0;
  State y{0.0, 0.0};
  State k1 = sys(r, y);
  auto push = [&](double rr, const State& yy, const State& dd) {
    prof.r.push_back(rr);
    prof.u.push_back(yy[0]);
    prof.du.push_back(dd[0]);
    prof.deficit.push_back(yy[1]);
    prof.w.push_back((rr - 1.0) - yy[1]);
  };
  push(r, y, k1);

  double h = std::min(1e-3, 0.1);
  int rejected_in_row = 0;
  while (r < r_max) {
    const double h_max = std::min(0.1 * r, 1.0 / params.eps);
    h = std::min({h, h_max, r_max - r});
    if (h < 1e-14 * r) throw IntegrationFailure("integrate_ivp: step size underflow");

    State y2, y3, y4, y5, y6, y7;
    for (int i = 0; i < 2; ++i) y2[i] = y[i] + h * a21 * k1[i];
    const State k2 = sys(r + c2 * h, y2);
    for (int i = 0; i < 2; ++i) y3[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    const State k3 = sys(r + c3 * h, y3);
    for (int i = 0; i < 2; ++i) y4[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    const State k4 = sys(r + c4 * h, y4);
    for (int i = 0; i < 2; ++i) y5[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    const State k5 = sys(r + c5 * h, y5);
    for (int i = 0; i < 2; ++i)
      y6[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const State k6 = sys(r + h, y6);
    for (int i = 0; i < 2; ++i)
      y7[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    const State k7 = sys(r + h, y7);

    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double scale = tol + tol * std::max(std::abs(y[i]), std::abs(y7[i]));
      err = std::max(err, std::abs(ei) / scale);
    }

    if (err <= 1.0) {
      r += h;
      y = y7;
      k1 = k7;
      push(r, y, k1);
      rejected_in_row = 0;
      const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      h *= factor;
      if (stop(prof)) break;
    } else {
      ++rejected_in_row;
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
      if (rejected_in_row > 100) throw IntegrationFailure("integrate_ivp: too many rejected steps");
    }
  }
  return prof;
}

double tail_integral(const Transform& tr, const ModelParams& p, double c, double u_level, double w_R,
                     double R) {
  // c e^{-F(u_level) - eps w_R} \int_R^inf s^{1-n} e^{-a (s - R)} ds,  a = eps u_level
  const double a = p.eps * u_level;
  const double scaled = specfun::exp_integral_scaled(p.n - 1.0, a * R);
  return c * std::exp(-tr.F(u_level) - p.eps * w_R + (p.n - 2.0) * std::log(a)) * scaled;
}

}  // namespace

double SolutionProfile::u_at(double rq) const { return hermite_eval(r, u, du, rq); }

double SolutionProfile::first_integral(const ModelParams& params, std::size_t i) const {
  const Transform tr(params.nonlinearity);
  return std::pow(r[i], params.n - 1.0) * du[i] * std::exp(tr.F(u[i]) + params.eps * w[i]);
}

SolutionProfile integrate_ivp(const ModelParams& params, double c, double r_max, double tol) {
  auto prof = run(params, c, r_max, tol, [](const SolutionProfile&) { return false; });
  if (prof.r.back() >= 2.0) {
    const auto tail = tail_u_infinity(prof, params);
    prof.u_inf = tail.u_inf;
    prof.u_inf_bound = tail.bound;
  } else {
    prof.u_inf = prof.u.back();
    prof.u_inf_bound = std::numeric_limits<double>::infinity();
  }
  return prof;
}

double crude_tail_bound(const ModelParams& params, double c, double R) {
  if (params.n > 2.0) {
    return c / ((params.n - 2.0) * std::pow(R, params.n - 2.0));
  }
  const Transform tr(params.nonlinearity);
  const double s_int = params.n == 2.0 ? std::log(2.0)
                                       : (std::pow(2.0, 2.0 - params.n) - 1.0) / (2.0 - params.n);
  const double p = c * std::exp(-params.eps - tr.F(1.0)) * s_int;
  return c * std::exp(-params.eps * (R - 2.0) * p) / (params.eps * p);
}

TailEstimate tail_u_infinity(const SolutionProfile& profile, const ModelParams& params) {
  if (profile.r.empty() || profile.r.back() < 2.0) {
    throw PreconditionError("tail_u_infinity: profile must extend to R >= 2");
  }
  const Transform tr(params.nonlinearity);
  const double R = profile.r.back();
  const double uR = profile.u.back();
  const double wR = profile.w.back();
  const double upper = tail_integral(tr, params, profile.c, uR, wR, R);
  const double lower = tail_integral(tr, params, profile.c, uR + upper, wR, R);
  TailEstimate t;
  const double mid = 0.5 * (upper + lower);
  t.u_inf = uR + mid;
  t.crude_bound = crude_tail_bound(params, profile.c, R);
  t.bound = std::min(0.5 * (upper - lower), t.crude_bound);
  t.deficit_tail = mid / (params.eps * uR);
  return t;
}

double shooting_residual(const ModelParams& params, double c, const ShootingConfig& cfg,
                         SolutionProfile* profile_out) {
  const double r_cap = kRCapFactor / params.eps;
  const double target = 0.1 * cfg.delta;
  bool certified = false;
  auto stop = [&](const SolutionProfile& p) {
    const double R = p.r.back();
    if (R < 2.0 || R < cfg.r_cover) return false;
    const auto t = tail_u_infinity(p, params);
    // The tail mass itself must be small too, so the exponential model is tight.
    if (t.bound <= target && t.u_inf - p.u.back() <= 1e3 * target) {
      certified = true;
      return true;
    }
    return false;
  };
  auto prof = run(params, c, std::max(r_cap, cfg.r_cover), cfg.ivp_tol, stop);
  if (!certified) {
    std::ostringstream msg;
    msg << "shoot: tail bound above " << target << " at r cap " << prof.r.back() << " (" << describe(params)
        << ", c=" << c << ")";
    throw ResolutionFailure(msg.str());
  }
  const auto t = tail_u_infinity(prof, params);
  prof.u_inf = t.u_inf;
  prof.u_inf_bound = t.bound;
  const double g = prof.u_inf - 1.0;
  if (profile_out) *profile_out = std::move(prof);
  return g;
}

ShootResult shoot(const ModelParams& params, const ShootingConfig& cfg) {
  params.validate();
  if (!(cfg.delta > 0.0)) throw DomainError("shoot: delta must be positive");

  double seed = cfg.c_seed;
  if (!(seed > 0.0)) {
    if (params.n > 2.0) {
      seed = params.n - 2.0;
    } else if (params.n == 2.0 && params.eps < 0.5) {
      seed = 1.0 / std::log(1.0 / params.eps);
    } else {
      seed = 0.5;
    }
  }

  ShootResult result;
  result.delta = cfg.delta;
  auto eval = [&](double c) {
    ++result.ivp_solves;
    return shooting_residual(params, c, cfg);
  };

  double lo = seed;
  double hi = seed;
  double g_lo = eval(seed);
  double g_hi = g_lo;
  if (g_lo == 0.0) {
    result.c_star = seed;
  } else {
    int expansions = 0;
    if (g_lo < 0.0) {
      while (g_hi < 0.0) {
        if (++expansions > cfg.max_expansions) throw BracketFailure("shoot: no c with u(inf) > 1 found");
        lo = hi;
        g_lo = g_hi;
        hi *= cfg.expansion;
        g_hi = eval(hi);
      }
    } else {
      while (g_lo > 0.0) {
        if (++expansions > cfg.max_expansions) throw BracketFailure("shoot: no c with u(inf) < 1 found");
        hi = lo;
        g_hi = g_lo;
        lo /= cfg.expansion;
        g_lo = eval(lo);
      }
    }

    // Bisection to a relative width of 1e-3, then Illinois-safeguarded secant.
    double c = 0.5 * (lo + hi);
    bool done = (g_lo == 0.0) || (g_hi == 0.0);
    if (g_lo == 0.0) c = lo;
    if (g_hi == 0.0) c = hi;
    int side = 0;
    for (int it = 0; !done && it < cfg.max_iterations; ++it) {
      if (hi - lo >= 1e-3 * hi) {
        c = 0.5 * (lo + hi);
      } else {
        c = (lo * g_hi - hi * g_lo) / (g_hi - g_lo);
        if (!(c > lo && c < hi)) c = 0.5 * (lo + hi);
      }
      const double g = eval(c);
      if (std::abs(g) <= cfg.delta) {
        done = true;
        break;
      }
      if (g < 0.0) {
        lo = c;
        g_lo = g;
        if (side == -1) g_hi *= 0.5;
        side = -1;
      } else {
        hi = c;
        g_hi = g;
        if (side == 1) g_lo *= 0.5;
        side = 1;
      }
      if (hi - lo <= 4 * std::numeric_limits<double>::epsilon() * hi) {
        done = true;
        break;
      }
    }
    if (!done) throw NonConvergence("shoot: root finder exceeded its iteration budget");
    result.c_star = c;
  }

  ++result.ivp_solves;
  shooting_residual(params, result.c_star, cfg, &result.profile);
  return result;
}

double extract_C(const ShootResult& solution, const ModelParams& params) {
  const auto& prof = solution.profile;
  if (prof.r.empty() || !(std::abs(prof.u_inf - 1.0) <= std::max(solution.delta, 1e-12) * (1 + 1e-9))) {
    throw PreconditionError("extract_C: profile does not satisfy u(inf) = 1 to the shooting tolerance");
  }
  const auto tail = tail_u_infinity(prof, params);
  const double deficit = prof.deficit.back() + tail.deficit_tail;
  return solution.c_star * std::exp(params.eps + params.eps * deficit);
}

}  // namespace lagerstrom::shoot
