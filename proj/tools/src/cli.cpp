#include "lagerstrom/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lagerstrom/asymptotics.hpp"
#include "lagerstrom/errors.hpp"
#include "lagerstrom/integral_eq.hpp"
#include "lagerstrom/interpolation.hpp"
#include "lagerstrom/model.hpp"
#include "lagerstrom/ode_shoot.hpp"
#include "lagerstrom/report.hpp"
#include "lagerstrom/verify.hpp"

namespace lagerstrom::cli {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Raised for flag values that parse but make no sense.
struct FlagError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  double n = 2.0;
  double k = 0.0;
  std::string f_table;
  double eps = 0.1;
  std::string eps_grid;
  std::string case_id;
  std::optional<double> tol;
  std::optional<int> order;
  std::string grid;
  std::string grid_var = "r";
  std::string out;
  std::string format;
};

struct Grid {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw FlagError("");
    return v;
  } catch (const std::exception&) {
    throw FlagError(what + ": cannot parse '" + s + "' as a number");
  }
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const auto& p : split(s, ',')) out.push_back(parse_double(p, what));
  if (out.empty()) throw FlagError(what + ": empty list");
  return out;
}

Grid parse_grid(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 3) throw FlagError("--grid: expected lo:hi:count");
  Grid g{parse_double(parts[0], "--grid"), parse_double(parts[1], "--grid"),
         static_cast<int>(parse_double(parts[2], "--grid"))};
  if (!(g.lo < g.hi) || g.count < 2) throw FlagError("--grid: need lo < hi and count >= 2");
  return g;
}

std::vector<double> grid_points(const Grid& g) {
  std::vector<double> xs;
  for (int i = 0; i < g.count; ++i) xs.push_back(g.lo + (g.hi - g.lo) * i / (g.count - 1));
  return xs;
}

asym::CaseId parse_case(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() != 2) throw FlagError("--case: expected n,k");
  try {
    return asym::CaseId::make(static_cast<int>(parse_double(parts[0], "--case")),
                              static_cast<int>(parse_double(parts[1], "--case")));
  } catch (const DomainError& e) {
    throw FlagError(std::string("--case: ") + e.what());
  }
}

GeneralF read_f_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FlagError("--f-table: cannot open " + path);
  std::vector<double> us, fs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto cols = split(line, ',');
    if (cols.size() < 2) continue;
    try {
      std::size_t a = 0, b = 0;
      const double u = std::stod(cols[0], &a);
      const double f = std::stod(cols[1], &b);
      us.push_back(u);
      fs.push_back(f);
    } catch (const std::exception&) {
      if (!us.empty()) throw FlagError("--f-table: malformed row '" + line + "'");
      // leading header row
    }
  }
  try {
    return GeneralF(std::move(us), std::move(fs));
  } catch (const Error& e) {
    throw FlagError(std::string("--f-table: ") + e.what());
  }
}

ModelParams base_params(const RunConfig& cfg, double eps) {
  ModelParams p;
  p.n = cfg.n;
  p.eps = eps;
  if (!cfg.f_table.empty()) {
    p.nonlinearity = read_f_table(cfg.f_table);
  } else {
    p.nonlinearity = ConstantK{cfg.k};
  }
  try {
    p.validate();
  } catch (const DomainError& e) {
    throw FlagError(e.what());
  }
  return p;
}

ModelParams params_for_case(asym::CaseId c, double eps) {
  return ModelParams::constant_k(c.n(), eps, c.k());
}

std::string output_format(const RunConfig& cfg) {
  if (!cfg.format.empty()) return cfg.format;
  if (cfg.out.size() >= 5 && cfg.out.ends_with(".json")) return "json";
  return "csv";
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty() || cfg.out == "-") {
    out << text;
  } else {
    report::write_file(cfg.out, text);
  }
}

void emit_table(const RunConfig& cfg, report::Table t, std::ostream& out) {
  t.metadata["command"] = cfg.command;
  emit(cfg, output_format(cfg) == "json" ? report::to_json(t) : report::to_csv(t), out);
}

void emit_report(const RunConfig& cfg, verify::Report r, std::ostream& out) {
  r.metadata.config["command"] = cfg.command;
  emit(cfg, output_format(cfg) == "json" ? report::to_json(r) : report::to_csv(r), out);
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const auto p = base_params(cfg, cfg.eps);
  shoot::ShootingConfig sc;
  if (cfg.tol) sc.delta = *cfg.tol;
  std::optional<Grid> grid;
  if (!cfg.grid.empty()) {
    grid = parse_grid(cfg.grid);
    if (grid->lo < 1.0) throw FlagError("--grid: r must be >= 1 for solve");
    sc.r_cover = grid->hi;
  }
  const auto res = shoot::shoot(p, sc);
  const auto& prof = res.profile;

  report::Table t;
  t.metadata["params"] = describe(p);
  t.columns = {"r", "u", "du_dr", "w"};
  if (grid) {
    const Transform tr(p.nonlinearity);
    for (double r : grid_points(*grid)) {
      const double u = prof.u_at(r);
      const double w = hermite_eval(prof.r, prof.w, prof.u, r);
      const double du = res.c_star * std::exp((1.0 - p.n) * std::log(r) - tr.F(u) - p.eps * w);
      t.rows.push_back({r, u, du, w});
    }
  } else {
    for (std::size_t i = 0; i < prof.r.size(); ++i) t.rows.push_back({prof.r[i], prof.u[i], prof.du[i], prof.w[i]});
  }
  t.summary = {{"c_star", res.c_star},
               {"C", shoot::extract_C(res, p)},
               {"u_inf", prof.u_inf},
               {"u_inf_bound", prof.u_inf_bound},
               {"ivp_solves", static_cast<double>(res.ivp_solves)}};
  emit_table(cfg, std::move(t), out);
  return kOk;
}

ie::PicardConfig picard_config(const RunConfig& cfg) {
  ie::PicardConfig pc;
  if (cfg.tol) pc.tol = *cfg.tol;
  return pc;
}

void require_ie_range(const ModelParams& p) {
  if (p.n < 2.0) throw FlagError("the integral equation requires --n >= 2");
}

int cmd_ie(const RunConfig& cfg, std::ostream& out) {
  const auto p = base_params(cfg, cfg.eps);
  require_ie_range(p);
  const auto sol = ie::solve_C(p, picard_config(cfg));
  const auto& prof = sol.profile;

  report::Table t;
  t.metadata["params"] = describe(p);
  t.columns = {"rho", "r", "u", "du_drho"};
  if (!cfg.grid.empty()) {
    const auto g = parse_grid(cfg.grid);
    const bool by_rho = cfg.grid_var == "rho";
    const auto du_slopes = pchip_slopes(prof.rho, prof.du);
    for (double x : grid_points(g)) {
      const double rho = by_rho ? x : p.eps * x;
      if (rho < p.eps || rho > prof.P) throw FlagError("--grid: point outside [eps, P] of the rescaled grid");
      const double u = prof.u_at_rho(rho);
      const double du = hermite_eval(prof.rho, prof.du, du_slopes, rho);
      t.rows.push_back({rho, rho / p.eps, u, du});
    }
  } else {
    for (std::size_t i = 0; i < prof.size(); ++i) {
      t.rows.push_back({prof.rho[i], prof.rho[i] / p.eps, prof.u[i], prof.du[i]});
    }
  }
  t.summary = {{"C", sol.C},
               {"Phi", sol.diagnostics.phi},
               {"iterations", static_cast<double>(sol.diagnostics.iterations)},
               {"final_residual", sol.diagnostics.final_residual},
               {"outer_iterations", static_cast<double>(sol.outer_iterations)}};
  emit_table(cfg, std::move(t), out);
  return kOk;
}

int cmd_asym(const RunConfig& cfg, std::ostream& out) {
  if (cfg.case_id.empty()) throw FlagError("asym requires --case n,k");
  const auto c = parse_case(cfg.case_id);
  if (!(cfg.eps > 0.0 && cfg.eps < 0.2)) throw FlagError("--eps must lie in (0, 0.2) for asym");
  const int order = cfg.order.value_or(asym::kMaxCOrder);
  if (order < 1 || order > asym::kMaxCOrder) throw FlagError("--order must be 1, 2 or 3");
  const int inner_order = std::min(order, asym::max_inner_order(c));
  const int outer_order = std::min(order, asym::max_outer_order(c));
  const auto g = parse_grid(cfg.grid.empty() ? std::string("1:10:10") : cfg.grid);
  const bool by_rho = cfg.grid_var == "rho";
  const bool uncorrected = c.n() == 2 && c.k() == 1 && outer_order >= 2;

  report::Table t;
  t.metadata["case"] = c.label();
  t.metadata["eps"] = report::format_number(cfg.eps);
  t.columns = {"r", "rho", "u_inner", "u_outer"};
  if (uncorrected) t.columns.push_back("u_outer_uncorrected");
  for (double x : grid_points(g)) {
    const double r = by_rho ? x / cfg.eps : x;
    const double rho = by_rho ? x : cfg.eps * x;
    if (r < 1.0) throw FlagError("--grid: r must be >= 1");
    std::vector<double> row{r, rho, asym::inner_u(c, cfg.eps, r, inner_order),
                            asym::outer_u(c, cfg.eps, rho, outer_order)};
    if (uncorrected) row.push_back(asym::outer_u(c, cfg.eps, rho, outer_order, asym::OuterBracket::kUncorrected));
    t.rows.push_back(std::move(row));
  }
  const auto coef = asym::coefficients(c);
  t.summary = {{"C", asym::c_asym(c, cfg.eps, order)}, {"A", coef.A}, {"B", coef.B}};
  emit_table(cfg, std::move(t), out);
  return kOk;
}

struct SweepRow {
  double eps;
  double c_star;
  double C_shoot;
  double C_ie;
  double phi;
  double C_asym;
};

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  if (cfg.eps_grid.empty()) throw FlagError("sweep requires --eps-grid");
  const auto eps_list = parse_list(cfg.eps_grid, "--eps-grid");
  std::optional<asym::CaseId> c;
  if (!cfg.case_id.empty()) c = parse_case(cfg.case_id);
  std::vector<ModelParams> params;
  for (double e : eps_list) params.push_back(c ? params_for_case(*c, e) : base_params(cfg, e));
  for (auto& p : params) {
    try {
      p.validate();
    } catch (const DomainError& e) {
      throw FlagError(e.what());
    }
  }

  shoot::ShootingConfig sc;
  if (cfg.tol) sc.delta = *cfg.tol;
  const auto pc = ie::PicardConfig{};
  std::vector<std::future<SweepRow>> jobs;
  for (const auto& p : params) {
    jobs.push_back(std::async(std::launch::async, [p, sc, pc, c] {
      SweepRow row{p.eps, kNaN, kNaN, kNaN, kNaN, kNaN};
      const auto s = shoot::shoot(p, sc);
      row.c_star = s.c_star;
      row.C_shoot = shoot::extract_C(s, p);
      if (p.n >= 2.0) {
        const auto sol = ie::solve_C(p, pc);
        row.C_ie = sol.C;
        row.phi = sol.diagnostics.phi;
      }
      if (c && p.eps < 0.2) row.C_asym = asym::c_asym(*c, p.eps, asym::kMaxCOrder);
      return row;
    }));
  }
  report::Table t;
  t.metadata["params"] = describe(params.front());
  t.columns = {"eps", "c_star", "C_shoot", "C_ie", "Phi", "C_asym"};
  for (auto& j : jobs) {
    const auto r = j.get();
    t.rows.push_back({r.eps, r.c_star, r.C_shoot, r.C_ie, r.phi, r.C_asym});
  }
  emit_table(cfg, std::move(t), out);
  return kOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const std::vector<double> eps_list =
      cfg.eps_grid.empty() ? std::vector<double>{cfg.eps} : parse_list(cfg.eps_grid, "--eps-grid");
  std::optional<asym::CaseId> c;
  if (!cfg.case_id.empty()) c = parse_case(cfg.case_id);
  std::vector<ModelParams> params;
  for (double e : eps_list) params.push_back(c ? params_for_case(*c, e) : base_params(cfg, e));
  const double tol = cfg.tol.value_or(1e-6);

  verify::Report rep;
  rep.metadata.params["model"] = describe(params.front());
  rep.metadata.config["tol"] = report::format_number(tol);
  for (const auto& p : params) {
    if (p.n >= 2.0) rep.append(verify::cross_solver_suite(p, tol));
  }
  rep.append(verify::monotonicity_suite(params));
  const bool ok = rep.all_passed();
  emit_report(cfg, std::move(rep), out);
  return ok ? kOk : kVerificationFailure;
}

int cmd_identities(const RunConfig& cfg, std::ostream& out) {
  auto rep = verify::identity_suite(cfg.tol.value_or(1e-8));
  const bool ok = rep.all_passed();
  emit_report(cfg, std::move(rep), out);
  return ok ? kOk : kVerificationFailure;
}

void add_model_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--n", cfg.n, "Dimension parameter n >= 1");
  auto* k = sub->add_option("--k", cfg.k, "Constant coefficient of u'^2 (k >= 0)");
  sub->add_option("--f-table", cfg.f_table, "CSV of (u, f(u)) samples on [0, 1]")->excludes(k);
  sub->add_option("--eps", cfg.eps, "Small parameter eps > 0");
}

void add_output_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--out", cfg.out, "Output file (default: standard output)");
  sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Shooting, integral-equation and asymptotic solutions of u'' + (n-1)/r u' + eps u u' + f(u) u'^2 = 0"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "Shooting solution profile");
  add_model_flags(solve, cfg);
  solve->add_option("--tol", cfg.tol, "Target |u(inf) - 1|");
  solve->add_option("--grid", cfg.grid, "Sample r on lo:hi:count");
  add_output_flags(solve, cfg);

  auto* iec = app.add_subcommand("ie", "Integral-equation solution with C from the boundary condition");
  add_model_flags(iec, cfg);
  iec->add_option("--tol", cfg.tol, "Picard sup-norm tolerance");
  iec->add_option("--grid", cfg.grid, "Sample on lo:hi:count");
  iec->add_option("--grid-var", cfg.grid_var, "Grid variable")->check(CLI::IsMember({"r", "rho"}));
  add_output_flags(iec, cfg);

  auto* asy = app.add_subcommand("asym", "Inner and outer expansions on a grid");
  asy->add_option("--case", cfg.case_id, "Case n,k: 2,0 or 3,0 or 2,1")->required();
  asy->add_option("--eps", cfg.eps, "Small parameter in (0, 0.2)");
  asy->add_option("--order", cfg.order, "Truncation order (1..3)");
  asy->add_option("--grid", cfg.grid, "Sample on lo:hi:count");
  asy->add_option("--grid-var", cfg.grid_var, "Grid variable")->check(CLI::IsMember({"r", "rho"}));
  add_output_flags(asy, cfg);

  auto* sweep = app.add_subcommand("sweep", "Per-eps summary of c*, C and Phi");
  add_model_flags(sweep, cfg);
  sweep->add_option("--case", cfg.case_id, "Case n,k (overrides --n/--k)");
  sweep->add_option("--eps-grid", cfg.eps_grid, "Comma-separated eps values")->required();
  sweep->add_option("--tol", cfg.tol, "Target |u(inf) - 1|");
  add_output_flags(sweep, cfg);

  auto* ver = app.add_subcommand("verify", "Cross-solver and property checks");
  add_model_flags(ver, cfg);
  ver->add_option("--case", cfg.case_id, "Case n,k (overrides --n/--k)");
  ver->add_option("--eps-grid", cfg.eps_grid, "Comma-separated eps values");
  ver->add_option("--tol", cfg.tol, "Cross-solver tolerance");
  add_output_flags(ver, cfg);

  auto* ids = app.add_subcommand("identities", "Closed-form identities against quadrature");
  ids->add_option("--tol", cfg.tol, "Tolerance");
  add_output_flags(ids, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kFlagError;
  }

  try {
    if (solve->parsed()) return (cfg.command = "solve", cmd_solve(cfg, out));
    if (iec->parsed()) return (cfg.command = "ie", cmd_ie(cfg, out));
    if (asy->parsed()) return (cfg.command = "asym", cmd_asym(cfg, out));
    if (sweep->parsed()) return (cfg.command = "sweep", cmd_sweep(cfg, out));
    if (ver->parsed()) return (cfg.command = "verify", cmd_verify(cfg, out));
    if (ids->parsed()) return (cfg.command = "identities", cmd_identities(cfg, out));
  } catch (const FlagError& e) {
    err << "error: " << e.what() << "\n";
    return kFlagError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kSolverError;
  }
  return kFlagError;
}

}  // namespace lagerstrom::cli
