#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace lagerstrom {

/// f(u) = k, k >= 0.
struct ConstantK {
  double k = 0.0;
};

/// Positive continuous f(u) on [0, 1], stored as a piecewise-linear table.
/// Outside [0, 1] f is continued by its end values.
class GeneralF {
 public:
  GeneralF(std::vector<double> u, std::vector<double> f);

  /// Samples `fn` at `samples` equally spaced points of [0, 1].
  static GeneralF from_function(const std::function<double(double)>& fn, int samples = 257);

  double f(double u) const;
  /// F(u) = \int_0^u f.
  double F(double u) const;

  std::span<const double> u_nodes() const { return u_; }
  std::span<const double> f_nodes() const { return f_; }

 private:
  std::vector<double> u_;
  std::vector<double> f_;
  std::vector<double> F_;  // F at the nodes
};

using Nonlinearity = std::variant<ConstantK, GeneralF>;

/// Problem instance of u'' + (n-1)/r u' + eps u u' + f(u) u'^2 = 0, u(1) = 0, u(inf) = 1.
struct ModelParams {
  double n = 2.0;
  double eps = 0.1;
  Nonlinearity nonlinearity = ConstantK{0.0};

  /// Throws DomainError if n < 1, eps <= 0, k < 0 or f fails positivity on [0, 1].
  void validate() const;

  static ModelParams constant_k(double n, double eps, double k);
};

std::string describe(const ModelParams& p);

/// Evaluates F and the transform G(u) = \int_0^u e^{F(v)} dv together with its
/// inverse. For constant k these are closed forms.
class Transform {
 public:
  explicit Transform(const Nonlinearity& nl);

  double f(double u) const;
  double F(double u) const;
  double G(double u) const;
  /// Solves G(u) = g; values below inf G are clamped to `kFloorU`.
  double G_inverse(double g) const;
  /// G'(u) = e^{F(u)}.
  double dG(double u) const;

  bool is_linear() const { return linear_; }

  static constexpr double kFloorU = -50.0;

 private:
  Nonlinearity nl_;
  bool linear_ = false;
  double k_ = 0.0;
  // GeneralF: G tabulated at the f-table nodes (refined), integrated by Gauss-Kronrod.
  std::vector<double> nodes_;
  std::vector<double> G_nodes_;
  double G_segment(double u0, double u1) const;
};

}  // namespace lagerstrom
