#include "lagerstrom/verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <sstream>

#include "lagerstrom/errors.hpp"
#include "lagerstrom/interpolation.hpp"
#include "lagerstrom/quadrature.hpp"
#include "lagerstrom/specfun.hpp"

namespace lagerstrom::verify {
namespace {

using specfun::exp_integral;
using specfun::kInfinity;
using specfun::quad_adaptive;

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

bool same_problem(const ModelParams& a, const ModelParams& b) {
  if (a.n != b.n) return false;
  const auto* ka = std::get_if<ConstantK>(&a.nonlinearity);
  const auto* kb = std::get_if<ConstantK>(&b.nonlinearity);
  if (ka && kb) return ka->k == kb->k;
  const auto* ga = std::get_if<GeneralF>(&a.nonlinearity);
  const auto* gb = std::get_if<GeneralF>(&b.nonlinearity);
  if (!ga || !gb) return false;
  return std::ranges::equal(ga->u_nodes(), gb->u_nodes()) && std::ranges::equal(ga->f_nodes(), gb->f_nodes());
}

}  // namespace

bool evaluate(Relation relation, double measured, double reference, double tolerance) {
  if (!std::isfinite(measured)) return false;
  switch (relation) {
    case Relation::kWithin:
      return std::abs(measured - reference) <= tolerance;
    case Relation::kAtMost:
      return measured <= reference + tolerance;
    case Relation::kAtLeast:
      return measured >= reference - tolerance;
    case Relation::kStrictlyAbove:
      return measured > reference;
  }
  return false;
}

const Check& Report::add(std::string name, double measured, double reference, double tolerance,
                         Relation relation) {
  checks.push_back(Check{std::move(name), measured, reference, tolerance, relation,
                         evaluate(relation, measured, reference, tolerance)});
  return checks.back();
}

void Report::append(const Report& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

bool Report::all_passed() const {
  return std::ranges::all_of(checks, [](const Check& c) { return c.passed; });
}

std::size_t Report::failures() const {
  return static_cast<std::size_t>(std::ranges::count_if(checks, [](const Check& c) { return !c.passed; }));
}

Profile as_profile(const shoot::SolutionProfile& p) { return Profile{p.r, p.u, p.du}; }

Profile as_profile(const ie::RescaledProfile& p) {
  Profile out;
  out.x.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    out.x.push_back(p.rho[i] / p.eps);
    out.y.push_back(p.u[i]);
    out.dy.push_back(p.du[i] * p.eps);
  }
  return out;
}

Profile as_sigma_profile(const shoot::SolutionProfile& p, double eps) {
  Profile out;
  for (std::size_t i = 0; i < p.r.size(); ++i) {
    out.x.push_back(eps * p.r[i]);
    out.y.push_back(p.u[i]);
    out.dy.push_back(p.du[i] / eps);
  }
  return out;
}

double interpolate(const Profile& p, double x) {
  if (p.dy.size() == p.x.size()) return hermite_eval(p.x, p.y, p.dy, x);
  const auto slopes = pchip_slopes(p.x, p.y);
  return hermite_eval(p.x, p.y, slopes, x);
}

ErrorMetrics compare_profiles(const Profile& a, const Profile& b, double lo, double hi) {
  if (a.x.size() < 2 || b.x.size() < 2) throw DomainError("compare_profiles: profiles need two points");
  if (!(lo < hi)) throw DomainError("compare_profiles: empty interval");
  const double common_lo = std::max(a.x.front(), b.x.front());
  const double common_hi = std::min(a.x.back(), b.x.back());
  if (common_lo >= common_hi) throw DomainError("compare_profiles: profiles have disjoint domains");
  const double tol = 1e-12 * std::max(1.0, std::abs(hi));
  if (lo < common_lo - tol || hi > common_hi + tol) {
    throw DomainError("compare_profiles: profiles do not cover the interval");
  }
  const auto slopes_a = a.dy.size() == a.x.size() ? limit_monotone(a.x, a.y, a.dy) : pchip_slopes(a.x, a.y);
  const auto slopes_b = b.dy.size() == b.x.size() ? limit_monotone(b.x, b.y, b.dy) : pchip_slopes(b.x, b.y);

  std::vector<double> xs{lo};
  for (double x : a.x) {
    if (x > lo && x < hi) xs.push_back(x);
  }
  xs.push_back(hi);

  ErrorMetrics m;
  double prev_sq = 0.0;
  double integral = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double d = hermite_eval(a.x, a.y, slopes_a, xs[i]) - hermite_eval(b.x, b.y, slopes_b, xs[i]);
    const double ad = std::abs(d);
    if (ad > m.sup_norm) {
      m.sup_norm = ad;
      m.location_of_max = xs[i];
    }
    if (i > 0) integral += 0.5 * (xs[i] - xs[i - 1]) * (prev_sq + d * d);
    prev_sq = d * d;
  }
  if (m.sup_norm == 0.0) m.location_of_max = lo;
  m.l2_norm = std::sqrt(integral);
  return m;
}

Report cross_solver_suite(const ModelParams& p, double tol) {
  Report rep;
  const std::string tag = " [" + describe(p) + "]";
  shoot::ShootingConfig sc;
  sc.r_cover = 5.0 / p.eps;
  const auto s = shoot::shoot(p, sc);
  const auto sol = ie::solve_C(p);
  const auto m = compare_profiles(as_profile(s.profile), as_profile(sol.profile), 1.0, 5.0 / p.eps);
  rep.add("shoot vs integral equation sup-norm" + tag, m.sup_norm, 0.0, tol, Relation::kAtMost);
  const double C_shoot = shoot::extract_C(s, p);
  rep.add("C from shooting vs C from integral equation" + tag, C_shoot, sol.C, tol * std::max(1.0, sol.C));
  // From zero: the warm-started solve ends after too few sweeps to show a rate.
  ie::PicardConfig pc;
  pc.allow_large_phi = true;
  const auto diag = ie::picard_solve(p, sol.C, pc).second;
  rep.add("Picard contraction ratio" + tag, eventual_contraction(diag), diag.phi + 0.1, 0.0, Relation::kAtMost);
  return rep;
}

Report identity_suite(double tol) {
  if (!(tol > 0.0)) throw DomainError("identity_suite: tol must be positive");
  Report rep;
  rep.metadata.config["tol"] = fmt(tol);
  const double qtol = std::clamp(1e-2 * tol, 1e-13, 1e-12);
  auto quad = [qtol](const specfun::Integrand& f, double a) { return quad_adaptive(f, a, kInfinity, qtol).value; };
  auto scaled_tol = [tol](double ref) { return tol * std::max(1.0, std::abs(ref)); };

  for (double q : {1.0, 2.0, 2.5}) {
    for (double rho : {0.1, 0.5, 1.0, 2.0, 5.0}) {
      const double lhs = quad([q](double t) { return exp_integral(q, t); }, rho);
      const double rhs = exp_integral(q - 1.0, rho) - rho * exp_integral(q, rho);
      rep.add("integral_of_E q=" + fmt(q) + " rho=" + fmt(rho), lhs, rhs, scaled_tol(rhs));
    }
  }
  for (double rho : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    const double lhs = quad([](double t) { return std::exp(-t) / (t * t); }, rho);
    const double rhs = std::exp(-rho) / rho - exp_integral(1.0, rho);
    rep.add("E2 recurrence rho=" + fmt(rho), lhs, rhs, scaled_tol(rhs));
  }
  for (double rho : {0.1, 1.0, 3.0}) {
    const double lhs = quad(
        [&quad](double t) {
          const double inner = quad([](double s) { return exp_integral(1.0, s); }, t);
          return std::exp(-t) / t * inner;
        },
        rho);
    const double rhs = 2.0 * exp_integral(1.0, 2.0 * rho) - std::exp(-rho) * exp_integral(1.0, rho);
    rep.add("second term n=2 rho=" + fmt(rho), lhs, rhs, scaled_tol(rhs));
  }
  const double ln2 = std::numbers::ln2;
  rep.add("int exp(-s) E1(s) = log 2", quad([](double s) { return std::exp(-s) * exp_integral(1.0, s); }, 0.0),
          ln2, tol);
  rep.add("int E1(2s) = 1/2", quad([](double s) { return exp_integral(1.0, 2.0 * s); }, 0.0), 0.5, tol);
  rep.add("int E1(s)^2 = 2 log 2",
          quad(
              [](double s) {
                const double e = exp_integral(1.0, s);
                return e * e;
              },
              0.0),
          2.0 * ln2, tol);
  rep.add("-int exp(-t) log t = gamma", -quad([](double t) { return std::exp(-t) * std::log(t); }, 0.0),
          specfun::euler_gamma(), tol);
  return rep;
}

double order_estimate(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 3) throw FitError("order_estimate: need at least three samples", 0.0);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto [h, err] = samples[i];
    if (!(h > 0.0) || !(err > 0.0) || !std::isfinite(err)) {
      throw FitError("order_estimate: h and err must be positive", 0.0);
    }
    if (i > 0 && !(h < samples[i - 1].first)) {
      throw FitError("order_estimate: h must be strictly decreasing", 0.0);
    }
  }
  const double n = static_cast<double>(samples.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [h, err] : samples) {
    const double x = std::log(h);
    const double y = std::log(err);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (!(denom > 0.0)) throw FitError("order_estimate: degenerate abscissae", 0.0);
  return (n * sxy - sx * sy) / denom;
}

Report monotonicity_suite(const std::vector<ModelParams>& params_list, const MonotonicityConfig& cfg) {
  Report rep;
  std::vector<std::future<shoot::ShootResult>> jobs;
  jobs.reserve(params_list.size());
  for (const auto& p : params_list) {
    jobs.push_back(std::async(std::launch::async, [&p, &cfg] { return shoot::shoot(p, cfg.shooting); }));
  }
  std::vector<shoot::ShootResult> sols;
  sols.reserve(jobs.size());
  for (auto& j : jobs) sols.push_back(j.get());

  for (std::size_t idx = 0; idx < params_list.size(); ++idx) {
    const auto& p = params_list[idx];
    const auto& s = sols[idx];
    const auto& prof = s.profile;
    const std::string tag = " [" + describe(p) + "]";

    double min_step = std::numeric_limits<double>::infinity();
    double min_slope = std::numeric_limits<double>::infinity();
    double max_u = 0.0;
    double max_drift = 0.0;
    for (std::size_t i = 0; i < prof.r.size(); ++i) {
      if (i > 0) min_step = std::min(min_step, prof.u[i] - prof.u[i - 1]);
      min_slope = std::min(min_slope, prof.du[i]);
      max_u = std::max(max_u, prof.u[i]);
      max_drift = std::max(max_drift, std::abs(prof.first_integral(p, i) - s.c_star) / s.c_star);
    }
    rep.add("u increasing (min step)" + tag, min_step, 0.0, 0.0, Relation::kAtLeast);
    rep.add("u' positive (min slope)" + tag, min_slope, 0.0, 0.0, Relation::kStrictlyAbove);
    rep.add("u <= sqrt(2c/eps)" + tag, max_u, std::sqrt(2.0 * s.c_star / p.eps), 0.0, Relation::kAtMost);
    rep.add("first integral drift" + tag, max_drift, 0.0, 10.0 * cfg.shooting.ivp_tol, Relation::kAtMost);

    // u(r; c) increases with c at every r > 1.
    const double r_max = prof.r.back();
    std::vector<shoot::SolutionProfile> family;
    for (double f : cfg.c_factors) {
      family.push_back(shoot::integrate_ivp(p, f * s.c_star, r_max, cfg.shooting.ivp_tol));
    }
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j < family.size(); ++j) {
      for (std::size_t i = 1; i < prof.r.size(); ++i) {
        const double r = prof.r[i];
        min_gap = std::min(min_gap, family[j].u_at(r) - family[j - 1].u_at(r));
      }
      min_gap = std::min(min_gap, family[j].u_inf - family[j - 1].u_inf);
    }
    rep.add("u increasing in c (min gap)" + tag, min_gap, 0.0, 0.0, Relation::kStrictlyAbove);
  }

  // Pairwise comparison in sigma = eps r for eps1 < eps2.
  for (std::size_t i = 0; i < params_list.size(); ++i) {
    for (std::size_t j = 0; j < params_list.size(); ++j) {
      const auto& p1 = params_list[i];
      const auto& p2 = params_list[j];
      if (!(p1.eps < p2.eps) || !same_problem(p1, p2)) continue;
      const Profile a = as_sigma_profile(sols[i].profile, p1.eps);
      const Profile b = as_sigma_profile(sols[j].profile, p2.eps);
      const double lo = std::max(cfg.sigma_min, p2.eps);
      const double hi = std::min(a.x.back(), b.x.back());
      // Beyond the point where 1 - u drops below the tie tolerance the two
      // profiles are equal to working accuracy; there only ties are allowed.
      double strict_min = std::numeric_limits<double>::infinity();
      double weak_min = std::numeric_limits<double>::infinity();
      std::vector<double> sig;
      for (double x : a.x) {
        if (x >= lo && x <= hi) sig.push_back(x);
      }
      for (double x : b.x) {
        if (x >= lo && x <= hi) sig.push_back(x);
      }
      for (double x : sig) {
        const double u1 = interpolate(a, x);
        const double u2 = interpolate(b, x);
        const double d = u1 - u2;
        if (1.0 - u2 > 1e3 * cfg.comparison_tol) {
          strict_min = std::min(strict_min, d);
        } else {
          weak_min = std::min(weak_min, d);
        }
      }
      const std::string tag = " [eps " + fmt(p1.eps) + " vs " + fmt(p2.eps) + ", n=" + fmt(p1.n) + "]";
      if (std::isfinite(strict_min)) {
        rep.add("u_eps1 > u_eps2 (resolved range)" + tag, strict_min, 0.0, 0.0, Relation::kStrictlyAbove);
      }
      if (std::isfinite(weak_min)) {
        rep.add("u_eps1 >= u_eps2 (saturated range)" + tag, weak_min, 0.0, cfg.comparison_tol,
                Relation::kAtLeast);
      }
    }
  }
  return rep;
}

CoefficientFit coefficient_fit(asym::CaseId c, const std::vector<double>& eps_list,
                               const std::vector<double>& c_numeric, int remainder_terms, double max_condition) {
  if (eps_list.size() != c_numeric.size()) throw FitError("coefficient_fit: size mismatch", 0.0);
  if (eps_list.size() < 3) throw FitError("coefficient_fit: need at least three eps values", 0.0);
  if (remainder_terms < 0 || remainder_terms > 2) {
    throw FitError("coefficient_fit: remainder_terms must be 0, 1 or 2", 0.0);
  }
  const auto [lo, hi] = std::ranges::minmax(eps_list);
  if (!(lo > 0.0) || !(hi < 0.2)) throw FitError("coefficient_fit: eps must lie in (0, 0.2)", 0.0);
  // The log-scale bases need two decades to separate; the eps-power basis one.
  const double span = c.n() == 2 ? 100.0 : 10.0;
  if (hi < span * lo) throw FitError("coefficient_fit: eps values span too narrow a range", 0.0);

  const int cols = 3 + remainder_terms;
  const auto rows = static_cast<Eigen::Index>(eps_list.size());
  if (rows < cols) throw FitError("coefficient_fit: more unknowns than eps values", 0.0);
  Eigen::MatrixXd A(rows, cols);
  Eigen::VectorXd b(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double e = eps_list[static_cast<std::size_t>(i)];
    if (c.n() == 2) {
      const double il = 1.0 / std::log(1.0 / e);
      for (int j = 0; j < cols; ++j) A(i, j) = std::pow(il, j + 1);
    } else {
      const double el = e * std::log(e);
      const double basis[5] = {1.0, el, e, el * el, e * el};
      for (int j = 0; j < cols; ++j) A(i, j) = basis[j];
    }
    b(i) = c_numeric[static_cast<std::size_t>(i)];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
  if (!(cond <= max_condition)) {
    std::ostringstream msg;
    msg << "coefficient_fit: ill-conditioned basis (condition number " << cond << ")";
    throw FitError(msg.str(), cond);
  }
  const Eigen::VectorXd x = svd.solve(b);
  CoefficientFit out;
  out.coefficients.assign(x.data(), x.data() + x.size());
  out.condition_number = cond;
  out.residual_norm = (A * x - b).norm();
  return out;
}

BracketFit fit_outer_bracket(const std::vector<std::pair<double, Profile>>& solutions, double rho_lo,
                             double rho_hi, int samples) {
  if (solutions.empty() || samples < 2 || !(rho_lo < rho_hi)) {
    throw FitError("fit_outer_bracket: need solutions and a non-empty rho range", 0.0);
  }
  // u = base - a * beta with a = ((e-1)/e) E1(rho) / l^2, linear in beta.
  const double e = std::numbers::e;
  std::vector<double> as, ys;
  std::vector<std::tuple<double, double, double>> pts;  // eps, rho, u
  for (const auto& [eps, prof] : solutions) {
    const double il = 1.0 / std::log(1.0 / eps);
    for (int i = 0; i < samples; ++i) {
      const double rho = rho_lo + (rho_hi - rho_lo) * i / (samples - 1);
      const double u = interpolate(prof, rho);
      const double base = asym::outer_u_21(eps, rho, 0.0);
      as.push_back((e - 1.0) / e * exp_integral(1.0, rho) * il * il);
      ys.push_back(u - base);
      pts.emplace_back(eps, rho, u);
    }
  }
  double saa = 0.0, say = 0.0;
  for (std::size_t i = 0; i < as.size(); ++i) {
    saa += as[i] * as[i];
    say += as[i] * ys[i];
  }
  BracketFit fit;
  fit.coefficient = -say / saa;
  double rss = 0.0;
  for (std::size_t i = 0; i < as.size(); ++i) {
    const double r = ys[i] + as[i] * fit.coefficient;
    rss += r * r;
  }
  const double dof = std::max<double>(1.0, static_cast<double>(as.size()) - 1.0);
  fit.standard_error = std::sqrt(rss / dof / saa);
  auto misfit = [&pts](double coefficient) {
    double m = 0.0;
    for (const auto& [eps, rho, u] : pts) m = std::max(m, std::abs(u - asym::outer_u_21(eps, rho, coefficient)));
    return m;
  };
  fit.corrected_misfit = misfit(asym::outer_bracket_coefficient(asym::OuterBracket::kCorrected));
  fit.uncorrected_misfit = misfit(asym::outer_bracket_coefficient(asym::OuterBracket::kUncorrected));
  return fit;
}

double eventual_contraction(const ie::IterationDiagnostics& diag) {
  const auto& r = diag.contraction_ratios;
  if (r.empty()) return 0.0;
  const auto start = r.size() / 2;
  return *std::max_element(r.begin() + static_cast<std::ptrdiff_t>(start), r.end());
}

}  // namespace lagerstrom::verify
