#include "strata/report.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace strata {

bool Report::ok() const {
  for (const auto& c : claims)
    if (!c.pass) return false;
  return true;
}

std::vector<std::string> Report::failing() const {
  std::vector<std::string> out;
  for (const auto& c : claims)
    if (!c.pass) out.push_back(suite + "/" + c.id);
  return out;
}

nlohmann::ordered_json Report::to_json() const {
  nlohmann::ordered_json j;
  j["suite"] = suite;
  j["pass"] = ok();
  j["claims"] = nlohmann::ordered_json::array();
  for (const auto& c : claims) {
    nlohmann::ordered_json cj;
    cj["id"] = c.id;
    cj["pass"] = c.pass;
    cj["detail"] = c.detail;
    cj["data"] = c.data;
    j["claims"].push_back(cj);
  }
  if (!extra.empty()) j["extra"] = extra;
  return j;
}

nlohmann::ordered_json combine(const std::vector<Report>& reports, const nlohmann::ordered_json& config) {
  nlohmann::ordered_json j;
  j["schema"] = "report_v1";
  j["config"] = config;
  bool ok = true;
  j["suites"] = nlohmann::ordered_json::array();
  nlohmann::ordered_json failing = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    ok = ok && r.ok();
    j["suites"].push_back(r.to_json());
    for (auto& f : r.failing()) failing.push_back(f);
  }
  j["pass"] = ok;
  j["failing"] = failing;
  return j;
}

namespace {

// shortest text that reads back to the same double
std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<double> parse_list(const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

}  // namespace

std::map<std::string, std::string> RunConfig::to_map() const {
  std::string e;
  for (std::size_t i = 0; i < eps.size(); ++i) e += (i ? "," : "") + fmt_double(eps[i]);
  return {{"seed", std::to_string(seed)},
          {"r_coset", std::to_string(r_coset)},
          {"r_lattice", fmt_double(r_lattice)},
          {"samples", std::to_string(samples)},
          {"quad_nx", std::to_string(quad_nx)},
          {"quad_nu", std::to_string(quad_nu)},
          {"quad_nv", std::to_string(quad_nv)},
          {"grid_y_min", fmt_double(grid_y_min)},
          {"grid_y_max", fmt_double(grid_y_max)},
          {"grid_n", std::to_string(grid_n)},
          {"M", std::to_string(M)},
          {"k", std::to_string(k)},
          {"n", std::to_string(n)},
          {"m", std::to_string(m)},
          {"eps", e},
          {"count", std::to_string(count)},
          {"suite", suite},
          {"output", output},
          {"format", format}};
}

std::string RunConfig::to_text() const {
  std::string out;
  for (const auto& [k, v] : to_map()) out += k + " = " + v + "\n";
  return out;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "seed") seed = std::stoull(value);
  else if (key == "r_coset") r_coset = std::stol(value);
  else if (key == "r_lattice") r_lattice = std::stod(value);
  else if (key == "samples") samples = std::stoull(value);
  else if (key == "quad_nx") quad_nx = std::stoi(value);
  else if (key == "quad_nu") quad_nu = std::stoi(value);
  else if (key == "quad_nv") quad_nv = std::stoi(value);
  else if (key == "grid_y_min") grid_y_min = std::stod(value);
  else if (key == "grid_y_max") grid_y_max = std::stod(value);
  else if (key == "grid_n") grid_n = std::stoi(value);
  else if (key == "M") M = std::stoi(value);
  else if (key == "k") k = std::stoi(value);
  else if (key == "n") n = std::stoi(value);
  else if (key == "m") m = std::stoi(value);
  else if (key == "eps") eps = parse_list(value);
  else if (key == "count") count = std::stoi(value);
  else if (key == "suite") suite = value;
  else if (key == "output") output = value;
  else if (key == "format") {
    if (value != "json" && value != "csv") throw std::invalid_argument("format must be json or csv");
    format = value;
  } else
    throw std::invalid_argument("unknown config key: " + key);
}

RunConfig RunConfig::from_text(const std::string& text) {
  RunConfig c;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config line without '=': " + line);
    c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return c;
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  for (const auto& [k, v] : to_map()) j[k] = v;
  return j;
}

std::uint64_t derive_seed(std::uint64_t seed, const std::string& stream) {
  // FNV-1a of the stream name mixed with splitmix64
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : stream) h = (h ^ ch) * 1099511628211ULL;
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (h | 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace strata
