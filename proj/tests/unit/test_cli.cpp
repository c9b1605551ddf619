#include <doctest.h>

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "lagerstrom/asymptotics.hpp"
#include "lagerstrom/cli.hpp"

using namespace lagerstrom;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "lagerstrom");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Data rows of a csv table: comment lines and the header are skipped.
std::vector<std::vector<double>> rows_of(const std::string& csv, std::vector<std::string>* header = nullptr) {
  std::istringstream in(csv);
  std::string line;
  std::vector<std::vector<double>> rows;
  bool seen_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string cell;
    if (!seen_header) {
      seen_header = true;
      if (header) {
        while (std::getline(ls, cell, ',')) header->push_back(cell);
      }
      continue;
    }
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("solve writes a monotone profile") {
  const auto r = run({"solve", "--n", "3", "--k", "0", "--eps", "0.1", "--tol", "1e-8", "--out", "run.csv"});
  REQUIRE(r.code == cli::kOk);
  const auto csv = slurp("run.csv");
  std::vector<std::string> header;
  const auto rows = rows_of(csv, &header);
  REQUIRE(header.size() >= 2);
  CHECK(header[0] == "r");
  CHECK(header[1] == "u");
  REQUIRE(rows.size() > 10);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][1] > rows[i - 1][1]);
  CHECK(csv.find("# c_star = ") != std::string::npos);
  CHECK(csv.find("# C = ") != std::string::npos);
}

TEST_CASE("identical invocations give identical files") {
  REQUIRE(run({"solve", "--n", "2", "--k", "1", "--eps", "0.1", "--grid", "1:20:40", "--out", "a.csv"}).code == 0);
  REQUIRE(run({"solve", "--n", "2", "--k", "1", "--eps", "0.1", "--grid", "1:20:40", "--out", "b.csv"}).code == 0);
  CHECK(slurp("a.csv") == slurp("b.csv"));
  REQUIRE(run({"ie", "--n", "3", "--k", "0", "--eps", "0.1", "--out", "ie1.json"}).code == 0);
  REQUIRE(run({"ie", "--n", "3", "--k", "0", "--eps", "0.1", "--out", "ie2.json"}).code == 0);
  CHECK(slurp("ie1.json") == slurp("ie2.json"));
}

TEST_CASE("ie reports C and Phi") {
  const auto r = run({"ie", "--n", "3", "--k", "0", "--eps", "0.1", "--grid", "1:50:50", "--format", "json"});
  REQUIRE(r.code == cli::kOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["summary"]["C"].get<double>() == doctest::Approx(1.53203466040595).epsilon(1e-6));
  CHECK(j["summary"]["Phi"].get<double>() < 1.0);
  CHECK(j["rows"].size() == 50);
}

TEST_CASE("asym table") {
  const auto r = run({"asym", "--case", "2,1", "--eps", "1e-3", "--grid", "0.5:5:10", "--grid-var", "rho"});
  REQUIRE(r.code == cli::kOk);
  std::vector<std::string> header;
  const auto rows = rows_of(r.out, &header);
  CHECK(rows.size() == 10);
  CHECK(std::find(header.begin(), header.end(), "u_outer_uncorrected") != header.end());
}

TEST_CASE("sweep matches the (3,0) expansion") {
  const auto r = run({"sweep", "--case", "3,0", "--eps-grid", "0.05,0.02,0.01", "--out", "c.csv"});
  REQUIRE(r.code == cli::kOk);
  std::vector<std::string> header;
  const auto rows = rows_of(slurp("c.csv"), &header);
  REQUIRE(rows.size() == 3);
  const auto col = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
  };
  REQUIRE(col("C_ie") < header.size());
  for (const auto& row : rows) {
    const double eps = row[col("eps")];
    const double l = eps * std::log(eps);
    CHECK(std::abs(row[col("C_ie")] - asym::c_asym(asym::CaseId::make(3, 0), eps, 3)) <= 10.0 * l * l);
    CHECK(row[col("C_shoot")] == doctest::Approx(row[col("C_ie")]).epsilon(1e-6));
  }
}

TEST_CASE("identities and verify") {
  const auto id = run({"identities", "--tol", "1e-8", "--out", "id.json"});
  CHECK(id.code == cli::kOk);
  const auto j = nlohmann::json::parse(slurp("id.json"));
  CHECK(j["all_passed"] == true);
  CHECK(run({"identities", "--tol", "1e-30"}).code == cli::kVerificationFailure);
  const auto v = run({"verify", "--case", "3,0", "--eps-grid", "0.05,0.1"});
  CHECK(v.code == cli::kOk);
  CHECK(v.out.find("false") == std::string::npos);
}

TEST_CASE("exit codes for bad flags and solver failures") {
  CHECK(run({}).code == cli::kFlagError);
  CHECK(run({"bogus"}).code == cli::kFlagError);
  CHECK(run({"solve", "--eps", "abc"}).code == cli::kFlagError);
  CHECK(run({"solve", "--k", "1", "--f-table", "x.csv"}).code == cli::kFlagError);
  CHECK(run({"solve", "--eps", "0.1", "--format", "xml"}).code == cli::kFlagError);
  CHECK(run({"solve", "--eps", "0.1", "--grid", "1:2"}).code == cli::kFlagError);
  CHECK(run({"asym", "--case", "3,1"}).code == cli::kFlagError);
  CHECK(run({"--help"}).code == cli::kOk);
  const auto r = run({"ie", "--n", "2", "--k", "5", "--eps", "0.5"});
  CHECK(r.code == cli::kSolverError);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("f-table input") {
  {
    std::ofstream f("f.csv");
    f << "u,f\n0,1\n1,1\n";
  }
  const auto a = run({"ie", "--n", "2", "--f-table", "f.csv", "--eps", "0.05", "--format", "json"});
  const auto b = run({"ie", "--n", "2", "--k", "1", "--eps", "0.05", "--format", "json"});
  REQUIRE(a.code == cli::kOk);
  REQUIRE(b.code == cli::kOk);
  const double ca = nlohmann::json::parse(a.out)["summary"]["C"].get<double>();
  const double cb = nlohmann::json::parse(b.out)["summary"]["C"].get<double>();
  CHECK(ca == doctest::Approx(cb).epsilon(1e-9));
  CHECK(run({"ie", "--n", "2", "--f-table", "missing.csv", "--eps", "0.05"}).code == cli::kFlagError);
}
