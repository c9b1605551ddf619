#include "lagerstrom/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lagerstrom/errors.hpp"
#include "lagerstrom/quadrature.hpp"

namespace lagerstrom {

GeneralF::GeneralF(std::vector<double> u, std::vector<double> f) : u_(std::move(u)), f_(std::move(f)) {
  if (u_.size() != f_.size() || u_.size() < 2) {
    throw DomainError("GeneralF: need at least two (u, f) samples of equal length");
  }
  for (std::size_t i = 1; i < u_.size(); ++i) {
    if (!(u_[i] > u_[i - 1])) throw DomainError("GeneralF: u samples must be strictly increasing");
  }
  if (u_.front() > 0.0 || u_.back() < 1.0) {
    throw DomainError("GeneralF: table must cover [0, 1]");
  }
  F_.assign(u_.size(), 0.0);
  for (std::size_t i = 1; i < u_.size(); ++i) {
    F_[i] = F_[i - 1] + 0.5 * (f_[i] + f_[i - 1]) * (u_[i] - u_[i - 1]);
  }
  // Shift so that F(0) = 0.
  const auto it = std::upper_bound(u_.begin(), u_.end(), 0.0);
  const std::size_t j = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - u_.begin() - 1, 0));
  const double du = -u_[j];
  const double slope = j + 1 < u_.size() ? (f_[j + 1] - f_[j]) / (u_[j + 1] - u_[j]) : 0.0;
  const double at_zero = F_[j] + f_[j] * du + 0.5 * slope * du * du;
  for (double& v : F_) v -= at_zero;
}

GeneralF GeneralF::from_function(const std::function<double(double)>& fn, int samples) {
  if (samples < 2) throw DomainError("GeneralF::from_function: need at least two samples");
  std::vector<double> u(samples);
  std::vector<double> f(samples);
  for (int i = 0; i < samples; ++i) {
    u[i] = static_cast<double>(i) / (samples - 1);
    f[i] = fn(u[i]);
  }
  return GeneralF(std::move(u), std::move(f));
}

double GeneralF::f(double u) const {
  if (u <= u_.front()) return f_.front();
  if (u >= u_.back()) return f_.back();
  const auto it = std::upper_bound(u_.begin(), u_.end(), u);
  const std::size_t j = static_cast<std::size_t>(it - u_.begin() - 1);
  const double t = (u - u_[j]) / (u_[j + 1] - u_[j]);
  return f_[j] + t * (f_[j + 1] - f_[j]);
}

double GeneralF::F(double u) const {
  if (u <= u_.front()) return F_.front() + f_.front() * (u - u_.front());
  if (u >= u_.back()) return F_.back() + f_.back() * (u - u_.back());
  const auto it = std::upper_bound(u_.begin(), u_.end(), u);
  const std::size_t j = static_cast<std::size_t>(it - u_.begin() - 1);
  const double du = u - u_[j];
  const double slope = (f_[j + 1] - f_[j]) / (u_[j + 1] - u_[j]);
  return F_[j] + f_[j] * du + 0.5 * slope * du * du;
}

ModelParams ModelParams::constant_k(double n, double eps, double k) {
  ModelParams p;
  p.n = n;
  p.eps = eps;
  p.nonlinearity = ConstantK{k};
  return p;
}

void ModelParams::validate() const {
  if (!(n >= 1.0) || !std::isfinite(n)) throw DomainError("ModelParams: n must be >= 1");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("ModelParams: eps must be > 0");
  if (const auto* ck = std::get_if<ConstantK>(&nonlinearity)) {
    if (!(ck->k >= 0.0) || !std::isfinite(ck->k)) throw DomainError("ModelParams: k must be >= 0");
  } else {
    const auto& gf = std::get<GeneralF>(nonlinearity);
    for (int i = 0; i <= 256; ++i) {
      const double u = i / 256.0;
      if (!(gf.f(u) > 0.0)) throw DomainError("ModelParams: f must be positive on [0, 1]");
    }
  }
}

std::string describe(const ModelParams& p) {
  std::ostringstream s;
  s << "n=" << p.n << " eps=" << p.eps;
  if (const auto* ck = std::get_if<ConstantK>(&p.nonlinearity)) {
    s << " k=" << ck->k;
  } else {
    s << " f=table";
  }
  return s.str();
}

Transform::Transform(const Nonlinearity& nl) : nl_(nl) {
  if (const auto* ck = std::get_if<ConstantK>(&nl_)) {
    k_ = ck->k;
    linear_ = (k_ == 0.0);
    return;
  }
  const auto& gf = std::get<GeneralF>(nl_);
  // Refine the table so that each segment is at most 1/64 wide.
  nodes_.push_back(0.0);
  std::vector<double> breaks;
  for (double u : gf.u_nodes()) {
    if (u > 0.0 && u < 1.0) breaks.push_back(u);
  }
  breaks.push_back(1.0);
  double prev = 0.0;
  for (double b : breaks) {
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - prev) * 64.0)));
    for (int i = 1; i <= pieces; ++i) nodes_.push_back(prev + (b - prev) * i / pieces);
    prev = b;
  }
  G_nodes_.assign(nodes_.size(), 0.0);
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    G_nodes_[i] = G_nodes_[i - 1] + G_segment(nodes_[i - 1], nodes_[i]);
  }
}

double Transform::G_segment(double u0, double u1) const {
  const auto& gf = std::get<GeneralF>(nl_);
  return specfun::gauss_kronrod21([&gf](double v) { return std::exp(gf.F(v)); }, u0, u1).value;
}

double Transform::f(double u) const {
  if (std::holds_alternative<ConstantK>(nl_)) return k_;
  return std::get<GeneralF>(nl_).f(u);
}

double Transform::F(double u) const {
  if (std::holds_alternative<ConstantK>(nl_)) return k_ * u;
  return std::get<GeneralF>(nl_).F(u);
}

double Transform::dG(double u) const { return std::exp(F(u)); }

double Transform::G(double u) const {
  if (std::holds_alternative<ConstantK>(nl_)) {
    if (k_ == 0.0) return u;
    return std::expm1(k_ * u) / k_;
  }
  const auto& gf = std::get<GeneralF>(nl_);
  if (u <= 0.0) {
    // F linear below 0 with slope f(0) (continued end value).
    const double a = gf.f(0.0);
    return std::expm1(a * u) / a;
  }
  if (u >= 1.0) {
    const double a = gf.f(1.0);
    return G_nodes_.back() + std::exp(gf.F(1.0)) * std::expm1(a * (u - 1.0)) / a;
  }
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), u);
  const std::size_t j = static_cast<std::size_t>(it - nodes_.begin() - 1);
  return G_nodes_[j] + G_segment(nodes_[j], u);
}

double Transform::G_inverse(double g) const {
  if (std::holds_alternative<ConstantK>(nl_)) {
    if (k_ == 0.0) return g;
    const double arg = k_ * g;
    if (arg <= -1.0) return kFloorU;
    return std::max(kFloorU, std::log1p(arg) / k_);
  }
  const double g_floor = G(kFloorU);
  if (g <= g_floor) return kFloorU;
  // Newton on the increasing map G, safeguarded by bisection.
  double lo = kFloorU;
  double hi = 1.0;
  while (G(hi) < g) hi = hi * 2.0 + 1.0;
  double u = std::clamp(g / dG(0.0), lo, hi);
  for (int it = 0; it < 100; ++it) {
    const double r = G(u) - g;
    if (r > 0) hi = u; else lo = u;
    double next = u - r / dG(u);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - u) <= 1e-15 * std::max(1.0, std::abs(u))) return next;
    u = next;
  }
  return u;
}

}  // namespace lagerstrom
