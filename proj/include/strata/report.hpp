#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace strata {

// One checked claim in a verification report.
struct Claim {
  std::string id;
  bool pass = false;
  std::string detail;
  nlohmann::ordered_json data = nlohmann::ordered_json::object();
};

struct Report {
  std::string suite;
  std::vector<Claim> claims;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();

  void add(Claim c) { claims.push_back(std::move(c)); }
  bool ok() const;
  std::vector<std::string> failing() const;
  nlohmann::ordered_json to_json() const;  // schema "report_v1"
};

nlohmann::ordered_json combine(const std::vector<Report>& reports, const nlohmann::ordered_json& config);

// Flat run configuration. Text form: one "key = value" per line, '#' comments.
struct RunConfig {
  std::uint64_t seed = 1;
  long r_coset = 12;        // series truncation radius
  double r_lattice = 1.0;   // support radius of the test functions
  std::size_t samples = 200000;
  int quad_nx = 16, quad_nu = 64, quad_nv = 64;
  double grid_y_min = 1e-3, grid_y_max = 50.0;
  int grid_n = 4096;
  int M = 1, k = 0, n = 1, m = 1;
  std::vector<double> eps{1.0, 0.1, 0.01};
  int count = 10;
  std::string suite = "all";
  std::string output;           // empty: stdout
  std::string format = "json";  // json | csv

  std::map<std::string, std::string> to_map() const;
  std::string to_text() const;
  static RunConfig from_text(const std::string& text);  // unknown keys throw std::invalid_argument
  void set(const std::string& key, const std::string& value);
  nlohmann::ordered_json to_json() const;
};

// splittable seed: independent stream per suite name
std::uint64_t derive_seed(std::uint64_t seed, const std::string& stream);

}  // namespace strata
