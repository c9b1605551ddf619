#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lagerstrom/asymptotics.hpp"
#include "lagerstrom/errors.hpp"
#include "lagerstrom/integral_eq.hpp"
#include "lagerstrom/interpolation.hpp"
#include "lagerstrom/specfun.hpp"

using namespace lagerstrom;
using namespace lagerstrom::ie;
using specfun::exp_integral;

namespace {

constexpr double kE = std::numbers::e;
constexpr double kGamma = specfun::kEulerGamma;

double first_term(const ModelParams& p, double C, double rho) {
  return -C * std::pow(p.eps, p.n - 2.0) * exp_integral(p.n - 1.0, rho);
}

double g_at(const RescaledProfile& prof, double rho) { return hermite_eval(prof.rho, prof.g, prof.dg, rho); }

void check_profile(const RescaledProfile& prof, const ModelParams& p, double C, bool boundary_fixed) {
  const double floor = prof.kind == ProfileKind::kV ? -1.0 : 1.0 - kE;
  const double slack = 1e-10;
  for (std::size_t i = 0; i < prof.size(); ++i) {
    if (boundary_fixed) {
      CHECK(prof.g[i] >= floor - slack);
    }
    CHECK(prof.g[i] <= 0.0);
    if (i > 0) CHECK(prof.g[i] >= prof.g[i - 1]);
    CHECK(std::abs(prof.g[i]) <= -first_term(p, C, prof.rho[i]) * (1.0 + 1e-9) + 1e-300);
  }
  if (boundary_fixed) CHECK(prof.g.front() == doctest::Approx(floor).epsilon(1e-10));
}

double eventual_ratio(const IterationDiagnostics& d) {
  double m = 0.0;
  for (std::size_t i = d.contraction_ratios.size() / 2; i < d.contraction_ratios.size(); ++i) {
    m = std::max(m, d.contraction_ratios[i]);
  }
  return m;
}

// Sum of the terms through power `power` of C.
double partial_sum(const std::vector<double>& t, int power) {
  const int upto = power == 1 ? 1 : power == 2 ? 2 : static_cast<int>(t.size());
  double s = 0.0;
  for (int i = 0; i < upto; ++i) s += t[i];
  return s;
}

}  // namespace

TEST_CASE("picard_rhs scales with C") {
  const auto p = ModelParams::constant_k(3, 0.1, 0);
  auto cur = zero_profile(p, 1.0);
  for (std::size_t i = 0; i < cur.size(); ++i) cur.g[i] = -0.5 * std::exp(-cur.rho[i]);
  const auto next = picard_rhs(p, 0.0, cur);
  for (double g : next.g) CHECK(g == 0.0);
}

TEST_CASE("first sweep from zero is the leading term") {
  for (const auto& p : {ModelParams::constant_k(3, 0.1, 0), ModelParams::constant_k(2, 1e-3, 0),
                        ModelParams::constant_k(2.5, 0.05, 0)}) {
    CAPTURE(describe(p));
    const double C = 0.8;
    const auto next = picard_rhs(p, C, zero_profile(p, C));
    double worst = 0.0;
    for (std::size_t i = 0; i < next.size(); i += 7) {
      const double ref = first_term(p, C, next.rho[i]);
      if (ref != 0.0) worst = std::max(worst, std::abs(next.g[i] / ref - 1.0));
    }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("second sweep matches the two-term series") {
  const auto p = ModelParams::constant_k(3, 0.1, 0);
  const double C = 1.0;
  const double phi = phi_diagnostic(p, C);
  const auto first = picard_rhs(p, C, zero_profile(p, C));
  const auto second = picard_rhs(p, C, first);
  double worst = 0.0;
  for (std::size_t i = 0; i < second.size(); i += 25) {
    const auto t = series_terms(p, C, second.rho[i], 2);
    worst = std::max(worst, std::abs(second.g[i] - t[0] - t[1]));
  }
  CHECK(worst <= 3.0 * phi * phi * phi);
}

TEST_CASE("picard_solve") {
  SUBCASE("C = 0 converges in one sweep") {
    const auto [prof, diag] = picard_solve(ModelParams::constant_k(2, 0.1, 1), 0.0);
    CHECK(diag.iterations == 1);
    CHECK(diag.phi == 0.0);
    for (double g : prof.g) CHECK(g == 0.0);
  }
  SUBCASE("contraction for n = 2, k = 0, eps = 1e-3") {
    const auto p = ModelParams::constant_k(2, 1e-3, 0);
    const auto sol = solve_C(p);
    const auto [prof, diag] = picard_solve(p, sol.C);
    CHECK(diag.phi == doctest::Approx(phi_diagnostic(p, sol.C)));
    CHECK(diag.phi < 0.5);
    CHECK(diag.final_residual <= 1e-12);
    REQUIRE(diag.contraction_ratios.size() >= 4);
    CHECK(eventual_ratio(diag) <= diag.phi + 0.1);
  }
  SUBCASE("a-priori bound after every sweep") {
    const auto p = ModelParams::constant_k(2, 0.05, 1);
    const double C = solve_C(p).C;
    auto cur = zero_profile(p, C);
    for (int sweep = 0; sweep < 12; ++sweep) {
      cur = picard_rhs(p, C, cur);
      check_profile(cur, p, C, false);
    }
  }
  SUBCASE("large Phi is refused unless allowed") {
    const auto p = ModelParams::constant_k(2, 0.1, 0);
    CHECK(phi_diagnostic(p, 3.0) >= 1.0);
    CHECK_THROWS_AS(picard_solve(p, 3.0), PreconditionError);
  }
  SUBCASE("non-convergence within the sweep budget") {
    PicardConfig cfg;
    cfg.max_iters = 3;
    CHECK_THROWS_AS(picard_solve(ModelParams::constant_k(2, 0.1, 1), 0.8, cfg), NonConvergence);
  }
  SUBCASE("coarse grid is an accuracy failure") {
    PicardConfig cfg;
    cfg.x_step = 0.5;
    CHECK_THROWS_AS(picard_solve(ModelParams::constant_k(3, 0.1, 0), 1.5, cfg), AccuracyFailure);
  }
  SUBCASE("n < 2 is rejected") {
    CHECK_THROWS_AS(picard_solve(ModelParams::constant_k(1.5, 0.1, 0), 1.0), DomainError);
    CHECK_THROWS_AS(solve_C(ModelParams::constant_k(1, 0.1, 0)), DomainError);
  }
}

TEST_CASE("solve_C against the closed-form expansions") {
  SUBCASE("n = 3, k = 0, eps = 0.05") {
    const double eps = 0.05;
    const auto sol = solve_C(ModelParams::constant_k(3, eps, 0));
    const double l = eps * std::log(eps);
    const double formula = 1.0 - 2.0 * l - eps * (2.0 * kGamma + 1.0);
    CHECK(std::abs(sol.C - formula) <= 10.0 * l * l);
    check_profile(sol.profile, ModelParams::constant_k(3, eps, 0), sol.C, true);
  }
  SUBCASE("n = 2, k = 0, eps = 1e-3") {
    const double eps = 1e-3;
    const auto sol = solve_C(ModelParams::constant_k(2, eps, 0));
    const double lambda = std::log(1.0 / eps);
    const auto cid = asym::CaseId::make(2, 0);
    const double three = asym::c_asym(cid, eps, 3);
    CHECK(three == doctest::Approx(1 / lambda + (kGamma + 1) / (lambda * lambda) +
                                   asym::coefficients(cid).B / std::pow(lambda, 3)));
    CHECK(std::abs(sol.C - three) <= 5.0 / std::pow(lambda, 4));
    CHECK(std::abs(sol.C - three) < std::abs(sol.C - asym::c_asym(cid, eps, 2)));
  }
  SUBCASE("n = 2, k = 1: C log(1/eps) tends to e - 1") {
    double prev = std::numeric_limits<double>::infinity();
    for (double eps : {1e-2, 1e-3, 1e-4, 1e-6}) {
      const auto p = ModelParams::constant_k(2, eps, 1);
      const auto sol = solve_C(p);
      const double gap = std::abs(sol.C * std::log(1.0 / eps) - (kE - 1.0));
      CAPTURE(eps);
      CHECK(gap < prev);
      prev = gap;
      check_profile(sol.profile, p, sol.C, true);
    }
    CHECK(prev <= 0.2);
  }
  SUBCASE("unit-slope table reproduces k = 1") {
    const double eps = 0.05;
    const auto a = solve_C(ModelParams::constant_k(2, eps, 1));
    const ModelParams general{2.0, eps, GeneralF({0.0, 1.0}, {1.0, 1.0})};
    const auto b = solve_C(general);
    CHECK(b.C == doctest::Approx(a.C).epsilon(1e-9));
  }
}

TEST_CASE("phi_diagnostic") {
  CHECK(phi_diagnostic(ModelParams::constant_k(3, 0.1, 0), 0.0) == 0.0);
  const double closed = 0.1 * (exp_integral(1, 0.1) - 0.1 * exp_integral(2, 0.1));
  CHECK(phi_diagnostic(ModelParams::constant_k(3, 0.1, 0), 1.0) == doctest::Approx(closed).epsilon(1e-14));
  CHECK(phi_diagnostic(ModelParams::constant_k(3, 0.1, 0), 1.0) ==
        doctest::Approx(0.11003789362253702).epsilon(1e-13));
  double prev = std::numeric_limits<double>::infinity();
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) {
    const double phi = phi_diagnostic(ModelParams::constant_k(3, eps, 0), 1.0);
    CHECK(phi < prev);
    prev = phi;
  }
  CHECK(prev <= 1e-3);
  CHECK_THROWS_AS(phi_diagnostic(ModelParams::constant_k(3, 0.1, 0), -1.0), DomainError);
}

TEST_CASE("series_terms") {
  SUBCASE("leading term is closed form") {
    for (const auto& p : {ModelParams::constant_k(3, 0.1, 0), ModelParams::constant_k(2, 0.01, 1)}) {
      for (double rho : {0.1, 1.0, 4.0}) {
        const auto t = series_terms(p, 1.3, rho, 1);
        REQUIRE(t.size() == 1);
        CHECK(t[0] == doctest::Approx(first_term(p, 1.3, rho)).epsilon(1e-15));
      }
    }
  }
  SUBCASE("n = 2 second term identity") {
    const auto p = ModelParams::constant_k(2, 1e-3, 0);
    const double C = 0.7;
    for (double rho : {1e-3, 5e-3, 0.02, 0.1, 0.3, 0.7, 1.5, 3.0, 6.0, 12.0}) {
      CAPTURE(rho);
      const auto t = series_terms(p, C, rho, 2);
      const double exact = C * C * (2.0 * exp_integral(1, 2.0 * rho) - std::exp(-rho) * exp_integral(1, rho));
      CHECK(t[1] == doctest::Approx(exact).epsilon(1e-9));
    }
  }
  SUBCASE("n = 2 second term near the origin") {
    const auto p = ModelParams::constant_k(2, 1e-8, 0);
    for (double rho : {1e-4, 1e-5, 1e-6}) {
      const double lead = -std::log(rho) - kGamma - 2.0 * std::log(2.0);
      CHECK(std::abs(series_terms(p, 1.0, rho, 2)[1] - lead) <= 10.0 * rho * std::abs(std::log(rho)));
    }
  }
  SUBCASE("partial sums converge as powers of Phi") {
    const ModelParams cases[] = {ModelParams::constant_k(3, 0.1, 0), ModelParams::constant_k(2, 0.05, 1),
                                 ModelParams{2.0, 0.05, GeneralF::from_function([](double u) { return 1.0 + u; })}};
    for (const auto& p : cases) {
      CAPTURE(describe(p));
      const int terms = Transform(p.nonlinearity).is_linear() ? 4 : 5;
      for (double rho : {p.eps, 0.5}) {
        double prev[3] = {0, 0, 0};
        for (double C : {0.1, 0.2}) {
          const auto prof = picard_solve(p, C).first;
          const auto t = series_terms(p, C, rho, terms);
          for (int power = 1; power <= 3; ++power) {
            const double r = std::abs(g_at(prof, rho) - partial_sum(t, power));
            if (C == 0.2) {
              // Doubling C doubles Phi; the remainder after power p scales as Phi^{p+1}.
              const double slope = std::log2(r / prev[power - 1]);
              CAPTURE(rho);
              CAPTURE(power);
              CHECK(std::abs(slope - (power + 1)) <= 0.3);
            }
            prev[power - 1] = r;
          }
        }
      }
    }
  }
  SUBCASE("k = 1 terms match the unit-slope table") {
    const auto a = series_terms(ModelParams::constant_k(2, 0.01, 1), 0.4, 0.2, 5);
    const auto b = series_terms(ModelParams{2.0, 0.01, GeneralF({0.0, 1.0}, {1.0, 1.0})}, 0.4, 0.2, 5);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] == doctest::Approx(a[i]).epsilon(1e-9));
  }
  SUBCASE("k = 1 terms carry the e-prefactors of the f = 0 terms") {
    const double C = 0.4, rho = 0.2;
    const auto lin = series_terms(ModelParams::constant_k(2, 0.01, 0), C, rho, 4);
    const auto one = series_terms(ModelParams::constant_k(2, 0.01, 1), C, rho, 5);
    CHECK(one[0] == doctest::Approx(lin[0]));
    CHECK(one[1] == doctest::Approx(lin[1] / kE));
    CHECK(one[3] == doctest::Approx(lin[2] / (kE * kE)));
    CHECK(one[4] == doctest::Approx(lin[3] / (kE * kE)));
    CHECK(one[2] > 0.0);
  }
  SUBCASE("domain") {
    const auto p = ModelParams::constant_k(2, 0.1, 0);
    CHECK_THROWS_AS(series_terms(p, 1.0, 0.05, 2), DomainError);
    CHECK_THROWS_AS(series_terms(p, 1.0, 1.0, 5), DomainError);
    CHECK_THROWS_AS(series_terms(p, 1.0, 1.0, 0), DomainError);
  }
}
