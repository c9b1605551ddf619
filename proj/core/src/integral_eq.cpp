#include "lagerstrom/integral_eq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lagerstrom/asymptotics.hpp"
#include "lagerstrom/errors.hpp"
#include "lagerstrom/interpolation.hpp"
#include "lagerstrom/quadrature.hpp"
#include "lagerstrom/specfun.hpp"

namespace lagerstrom::ie {
namespace {

void require_n(const ModelParams& p, const char* who) {
  p.validate();
  if (!(p.n >= 2.0)) {
    std::ostringstream msg;
    msg << who << ": the rescaled integral equation requires n >= 2 (got " << p.n << ")";
    throw DomainError(msg.str());
  }
}

// Solves log(rho) + rho = x; Newton in t = log(rho) from the right of the root.
double rho_of_x(double x) {
  double t = x < 1.0 ? x : std::min(x, std::log(x));
  for (int i = 0; i < 100; ++i) {
    const double et = std::exp(t);
    const double step = (et + t - x) / (et + 1.0);
    t -= step;
    if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(t))) break;
  }
  return std::exp(t);
}

// Right-cumulative integral Q_i = \int_{x_i}^{x_N} f dx on a uniform grid,
// fourth order (local cubic interpolation, one-sided at the ends).
void cumulative_from_right(const std::vector<double>& f, double h, std::vector<double>& out) {
  const std::size_t n = f.size();
  out.assign(n, 0.0);
  const std::size_t last = n - 1;
  const double w = h / 24.0;
  for (std::size_t i = last; i-- > 0;) {
    double cell;
    if (i == 0) {
      cell = w * (9 * f[0] + 19 * f[1] - 5 * f[2] + f[3]);
    } else if (i + 1 == last) {
      cell = w * (f[last - 3] - 5 * f[last - 2] + 19 * f[last - 1] + 9 * f[last]);
    } else {
      cell = w * (-f[i - 1] + 13 * f[i] + 13 * f[i + 1] - f[i + 2]);
    }
    out[i] = out[i + 1] + cell;
  }
}

double weight_scale(const ModelParams& p) { return std::pow(p.eps, p.n - 2.0); }

void fill_u(const Transform& tr, double G1, RescaledProfile& prof) {
  const std::size_t n = prof.size();
  prof.u.resize(n);
  prof.du.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (prof.kind == ProfileKind::kV) {
      prof.u[i] = 1.0 + prof.g[i];
      prof.du[i] = prof.dg[i];
    } else {
      prof.u[i] = tr.G_inverse(prof.g[i] + G1);
      prof.du[i] = prof.dg[i] / tr.dG(prof.u[i]);
    }
  }
}

}  // namespace

double RescaledProfile::u_at_rho(double r) const { return hermite_eval(rho, u, du, r); }

double RescaledProfile::u_at_r(double r) const { return u_at_rho(eps * r); }

RescaledProfile zero_profile(const ModelParams& params, double C, const PicardConfig& cfg) {
  require_n(params, "zero_profile");
  if (!(cfg.x_step > 0.0)) throw DomainError("zero_profile: x_step must be positive");
  RescaledProfile prof;
  const Transform tr(params.nonlinearity);
  prof.kind = tr.is_linear() ? ProfileKind::kV : ProfileKind::kG;
  prof.eps = params.eps;
  prof.C = C;
  prof.P = cfg.P > 0.0 ? cfg.P : params.eps + 40.0;
  if (!(prof.P > params.eps)) throw DomainError("zero_profile: P must exceed eps");
  const double x0 = std::log(params.eps) + params.eps;
  const double x1 = std::log(prof.P) + prof.P;
  auto cells = static_cast<std::size_t>(std::max(8.0, std::ceil((x1 - x0) / cfg.x_step)));
  cells += cells % 2;
  prof.x_step = (x1 - x0) / static_cast<double>(cells);
  prof.x.resize(cells + 1);
  prof.rho.resize(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) {
    prof.x[i] = x0 + prof.x_step * static_cast<double>(i);
    prof.rho[i] = rho_of_x(prof.x[i]);
  }
  prof.rho.front() = params.eps;
  prof.rho.back() = prof.P;
  prof.g.assign(cells + 1, 0.0);
  prof.dg.assign(cells + 1, 0.0);
  fill_u(tr, tr.G(1.0), prof);
  return prof;
}

RescaledProfile picard_rhs(const ModelParams& params, double C, const RescaledProfile& current) {
  require_n(params, "picard_rhs");
  if (current.size() < 4) throw PreconditionError("picard_rhs: grid too small");
  if (!(C >= 0.0)) throw DomainError("picard_rhs: C must be non-negative");
  const Transform tr(params.nonlinearity);
  const double q = params.n - 1.0;
  const double lambda = C * weight_scale(params);
  const double F1 = tr.F(1.0);
  const double G1 = tr.G(1.0);
  const std::size_t n = current.size();
  const double P = current.P;

  // V(rho) = \int_rho^\infty (1 - u); beyond P the first-order model 1 - u = lambda e^{-F(1)} E_q.
  std::vector<double> integrand(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = current.rho[i];
    integrand[i] = (1.0 - current.u[i]) * r / (1.0 + r);
  }
  std::vector<double> V;
  cumulative_from_right(integrand, current.x_step, V);
  const double V_tail = lambda * std::exp(-F1) * specfun::integral_of_E(q, P);
  for (double& v : V) v += V_tail;

  std::vector<double> kernel(n);
  std::vector<double> kernel_rho(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = current.rho[i];
    kernel_rho[i] = std::exp((1.0 - params.n) * std::log(r) - r - V[i]);
    kernel[i] = kernel_rho[i] * r / (1.0 + r);
  }
  std::vector<double> Q;
  cumulative_from_right(kernel, current.x_step, Q);
  const double outer_tail = std::exp(-V_tail) * specfun::exp_integral(q, P);

  RescaledProfile next = current;
  next.C = C;
  for (std::size_t i = 0; i < n; ++i) {
    next.g[i] = -lambda * (Q[i] + outer_tail);
    next.dg[i] = lambda * kernel_rho[i];
  }
  fill_u(tr, G1, next);
  return next;
}

double phi_diagnostic(const ModelParams& params, double C) {
  require_n(params, "phi_diagnostic");
  if (!(C >= 0.0)) throw DomainError("phi_diagnostic: C must be non-negative");
  if (C == 0.0) return 0.0;
  return C * weight_scale(params) * specfun::integral_of_E(params.n - 1.0, params.eps);
}

namespace {

// One sweep on every other node of a converged profile, compared against it;
// the fourth-order rule makes the difference 15 times the fine-grid error.
double step_doubling_error(const ModelParams& params, double C, const RescaledProfile& fine) {
  const std::size_t last = (fine.size() - 1) & ~std::size_t{1};
  RescaledProfile coarse = fine;
  coarse.x_step = 2.0 * fine.x_step;
  coarse.P = fine.rho[last];
  for (auto* v : {&coarse.x, &coarse.rho, &coarse.g, &coarse.dg, &coarse.u, &coarse.du}) {
    v->clear();
  }
  for (std::size_t i = 0; i <= last; i += 2) {
    coarse.x.push_back(fine.x[i]);
    coarse.rho.push_back(fine.rho[i]);
    coarse.g.push_back(fine.g[i]);
    coarse.dg.push_back(fine.dg[i]);
    coarse.u.push_back(fine.u[i]);
    coarse.du.push_back(fine.du[i]);
  }
  if (coarse.size() < 4) return std::numeric_limits<double>::infinity();
  const RescaledProfile swept = picard_rhs(params, C, coarse);
  double err = 0.0;
  for (std::size_t j = 0; j < swept.size(); ++j) err = std::max(err, std::abs(swept.g[j] - fine.g[2 * j]));
  return err / 15.0;
}

}  // namespace

std::pair<RescaledProfile, IterationDiagnostics> picard_solve(const ModelParams& params, double C,
                                                              const RescaledProfile& initial,
                                                              const PicardConfig& cfg) {
  IterationDiagnostics diag;
  diag.phi = phi_diagnostic(params, C);
  if (diag.phi >= 1.0 && !cfg.allow_large_phi) {
    std::ostringstream msg;
    msg << "picard_solve: Phi = " << diag.phi << " >= 1, convergence not guaranteed";
    throw PreconditionError(msg.str());
  }
  RescaledProfile cur = initial;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    RescaledProfile next = picard_rhs(params, C, cur);
    double res = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) res = std::max(res, std::abs(next.g[i] - cur.g[i]));
    if (!std::isfinite(res)) throw NonConvergence("picard_solve: iteration produced non-finite values");
    if (!diag.residuals.empty() && diag.residuals.back() > 0.0) {
      diag.contraction_ratios.push_back(res / diag.residuals.back());
    }
    diag.residuals.push_back(res);
    diag.iterations = it;
    diag.final_residual = res;
    cur = std::move(next);
    if (res <= cfg.tol) {
      if (cfg.accuracy_tol > 0.0) {
        const double err = step_doubling_error(params, C, cur);
        if (err > cfg.accuracy_tol) {
          std::ostringstream msg;
          msg << "picard_solve: grid too coarse, discretization error " << err << " exceeds "
              << cfg.accuracy_tol;
          throw AccuracyFailure(msg.str(), cur.g.front(), err);
        }
      }
      return {std::move(cur), std::move(diag)};
    }
  }
  std::ostringstream msg;
  msg << "picard_solve: no convergence in " << cfg.max_iters << " sweeps (residual " << diag.final_residual
      << ", Phi " << diag.phi << ")";
  throw NonConvergence(msg.str());
}

std::pair<RescaledProfile, IterationDiagnostics> picard_solve(const ModelParams& params, double C,
                                                              const PicardConfig& cfg) {
  return picard_solve(params, C, zero_profile(params, C, cfg), cfg);
}

CSolution solve_C(const ModelParams& params, const PicardConfig& cfg) {
  require_n(params, "solve_C");
  const Transform tr(params.nonlinearity);
  const double G1 = tr.G(1.0);

  double seed;
  const auto cid = asym::case_of(params);
  if (cid && params.eps < 0.2) {
    seed = asym::c_asym(*cid, params.eps, asym::kMaxCOrder);
  } else if (params.n > 2.0) {
    seed = 1.0;
  } else {
    seed = params.eps < 0.5 ? 1.0 / std::log(1.0 / params.eps) : 1.0;
  }
  if (!(seed > 0.0)) seed = 0.5;

  PicardConfig inner = cfg;
  inner.allow_large_phi = true;
  // Trial profiles far from the root may be clamped and rough; only the
  // accepted one is held to the accuracy target.
  inner.accuracy_tol = 0.0;
  RescaledProfile warm = zero_profile(params, seed, cfg);

  CSolution out;
  IterationDiagnostics last_diag;
  RescaledProfile last_prof;
  // h(C) = g_C(eps) + G(1); h(0) = G(1) > 0 and the root is unique.
  auto h = [&](double C, bool& ok) {
    ++out.outer_iterations;
    try {
      auto [prof, diag] = picard_solve(params, C, warm, inner);
      ok = true;
      const double val = prof.g.front() + G1;
      warm = prof;
      last_prof = std::move(prof);
      last_diag = std::move(diag);
      return val;
    } catch (const NonConvergence&) {
      ok = false;
      return -std::numeric_limits<double>::infinity();
    }
  };

  double lo = 0.0, h_lo = G1;
  double hi = std::numeric_limits<double>::quiet_NaN(), h_hi = 0.0;
  bool ok = false;
  const double h0 = h(seed, ok);
  if (ok && h0 > 0.0) {
    lo = seed;
    h_lo = h0;
    double c = seed;
    double growth = 1.1;
    for (int k = 0; k < 60; ++k) {
      c *= growth;
      growth = std::min(4.0, growth * 1.25);
      const double hv = h(c, ok);
      if (!ok || hv <= 0.0) {
        hi = c;
        h_hi = hv;
        break;
      }
      lo = c;
      h_lo = hv;
    }
  } else {
    hi = seed;
    h_hi = h0;
    double c = seed;
    double growth = 1.1;
    for (int k = 0; k < 60; ++k) {
      c /= growth;
      growth = std::min(4.0, growth * 1.25);
      const double hv = h(c, ok);
      if (ok && hv > 0.0) {
        lo = c;
        h_lo = hv;
        break;
      }
      hi = c;
      h_hi = hv;
    }
  }
  if (std::isnan(hi)) throw BracketFailure("solve_C: could not bracket C");

  const double h_tol = 1e-13 * std::max(1.0, G1);
  double C = lo;
  int side = 0;
  bool converged = false;
  for (int it = 0; it < 200; ++it) {
    if (std::isfinite(h_hi) && h_lo != h_hi) {
      C = (lo * h_hi - hi * h_lo) / (h_hi - h_lo);
      if (!(C > lo && C < hi)) C = 0.5 * (lo + hi);
    } else {
      C = 0.5 * (lo + hi);
    }
    const double hv = h(C, ok);
    if (ok && std::abs(hv) <= h_tol) {
      converged = true;
      break;
    }
    if (ok && hv > 0.0) {
      lo = C;
      h_lo = hv;
      if (side == 1 && std::isfinite(h_hi)) h_hi *= 0.5;
      side = 1;
    } else {
      hi = C;
      h_hi = hv;
      if (side == -1) h_lo *= 0.5;
      side = -1;
    }
    if (hi - lo <= 4 * std::numeric_limits<double>::epsilon() * hi) {
      C = ok ? C : lo;
      if (!ok) h(C, ok);
      converged = ok;
      break;
    }
  }
  if (!converged) throw NonConvergence("solve_C: outer iteration on C did not converge");
  if (cfg.accuracy_tol > 0.0) {
    const double err = step_doubling_error(params, C, last_prof);
    if (err > cfg.accuracy_tol) {
      std::ostringstream msg;
      msg << "solve_C: grid too coarse, discretization error " << err << " exceeds " << cfg.accuracy_tol;
      throw AccuracyFailure(msg.str(), C, err);
    }
  }
  out.C = C;
  out.profile = std::move(last_prof);
  out.diagnostics = std::move(last_diag);
  out.diagnostics.phi = phi_diagnostic(params, C);
  return out;
}

namespace {

struct SeriesKernel {
  double q;
  double tol;

  double w(double t) const { return std::exp(-q * std::log(t) - t); }
  double E(double t) const { return specfun::exp_integral(q, t); }
  // \int_t^\infty E_q  (= -J(t) with J(t) = \int_\infty^t E_q)
  double IE(double t) const { return specfun::integral_of_E(q, t); }

  double quad(const specfun::Integrand& f, double a) const {
    return specfun::quad_adaptive(f, a, specfun::kInfinity, tol).value;
  }

  // S(s) = \int_\infty^s w J = \int_s^\infty w IE
  double S(double s) const {
    return quad([this](double t) { return w(t) * IE(t); }, s);
  }

  // K(t) = \int_\infty^t S = t S(t) - \int_t^\infty s w(s) IE(s) ds
  double K(double t) const {
    return t * S(t) - quad([this](double s) { return s * w(s) * IE(s); }, t);
  }
};

}  // namespace

std::vector<double> series_terms(const ModelParams& params, double C, double rho, int order) {
  require_n(params, "series_terms");
  if (!(rho >= params.eps)) throw DomainError("series_terms: rho must be >= eps");
  const Transform tr(params.nonlinearity);
  const int max_order = tr.is_linear() ? 4 : 5;
  if (order < 1 || order > max_order) throw DomainError("series_terms: order out of range");

  const double lambda = C * weight_scale(params);
  const SeriesKernel k{params.n - 1.0, 1e-11};
  // u - 1 = alpha g - beta g^2 + O(g^3)
  const double alpha = std::exp(-tr.F(1.0));
  const double beta = 0.5 * tr.f(1.0) * std::exp(-2.0 * tr.F(1.0));

  auto second = [&] { return lambda * lambda * k.quad([&k](double t) { return k.w(t) * k.IE(t); }, rho); };
  auto squared_J = [&] {
    return -0.5 * lambda * lambda * lambda *
           k.quad(
               [&k](double t) {
                 const double j = k.IE(t);
                 return k.w(t) * j * j;
               },
               rho);
  };
  auto nested = [&] { return lambda * lambda * lambda * k.quad([&k](double t) { return k.w(t) * k.K(t); }, rho); };
  auto e_squared = [&] {
    return beta * lambda * lambda * lambda *
           k.quad(
               [&k](double t) {
                 return k.w(t) * k.quad(
                                     [&k](double s) {
                                       const double e = k.E(s);
                                       return e * e;
                                     },
                                     t);
               },
               rho);
  };

  std::vector<double> terms;
  terms.push_back(-lambda * k.E(rho));
  if (tr.is_linear()) {
    if (order >= 2) terms.push_back(second());
    if (order >= 3) terms.push_back(squared_J());
    if (order >= 4) terms.push_back(nested());
  } else {
    if (order >= 2) terms.push_back(alpha * second());
    if (order >= 3) terms.push_back(e_squared());
    if (order >= 4) terms.push_back(alpha * alpha * squared_J());
    if (order >= 5) terms.push_back(alpha * alpha * nested());
  }
  return terms;
}

}  // namespace lagerstrom::ie
