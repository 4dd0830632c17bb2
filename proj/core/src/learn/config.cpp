#include "tbn/learn/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "tbn/errors.hpp"

namespace tbn::learn {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  double x = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, x);
  if (ec != std::errc{} || ptr != end || !std::isfinite(x)) {
    throw ConfigError(key + ": expected a number, got '" + text + "'");
  }
  return x;
}

std::uint64_t to_uint(const std::string& key, const std::string& text) {
  std::uint64_t x = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, x);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + text + "'");
  }
  return x;
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "on") return true;
  if (text == "false" || text == "0" || text == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

std::string number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

LearnConfig LearnConfig::desk_scale() {
  LearnConfig c;
  c.restarts = 5;
  c.total_time_budget_seconds = 300.0;
  c.max_sdd_size = 200'000;
  c.max_swaps_per_restart = 40;
  return c;
}

double LearnConfig::search_alpha() const {
  if (alpha_grid.empty()) throw ConfigError("alpha_grid must not be empty");
  return *std::max_element(alpha_grid.begin(), alpha_grid.end());
}

double LearnConfig::restart_budget_seconds() const {
  return restarts == 0 ? 0.0 : total_time_budget_seconds / static_cast<double>(restarts);
}

void LearnConfig::validate() const {
  if (alpha_grid.empty()) throw ConfigError("alpha_grid must not be empty");
  for (double a : alpha_grid) {
    if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("alpha_grid values must be positive");
  }
  if (min_split_gain_per_example < 0.0) {
    throw ConfigError("min_split_gain_per_example must be non-negative");
  }
  if (max_sdd_size == 0) throw ConfigError("max_sdd_size must be positive");
  if (!(split_phase_time_limit_seconds > 0.0)) {
    throw ConfigError("split_phase_time_limit_seconds must be positive");
  }
  if (tabu_size == 0) throw ConfigError("tabu_size must be positive");
  if (restarts == 0) throw ConfigError("restarts must be positive");
  if (total_time_budget_seconds < 0.0) {
    throw ConfigError("total_time_budget_seconds must be non-negative");
  }
  if (size_penalty_kappa < 0.0) throw ConfigError("size_penalty_kappa must be non-negative");
  if (swap_candidate_beam == 0) throw ConfigError("swap_candidate_beam must be positive");
  if (jobs == 0) throw ConfigError("jobs must be positive");
}

void apply_setting(LearnConfig& c, const std::string& raw_key, const std::string& raw_value) {
  std::string key = trim(raw_key);
  std::replace(key.begin(), key.end(), '-', '_');
  const std::string value = trim(raw_value);
  if (key == "alpha_grid") {
    std::vector<double> grid;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) {
      item = trim(item);
      if (!item.empty()) grid.push_back(to_double(key, item));
    }
    c.alpha_grid = std::move(grid);
  } else if (key == "min_split_gain_per_example") {
    c.min_split_gain_per_example = to_double(key, value);
  } else if (key == "max_sdd_size") {
    c.max_sdd_size = to_uint(key, value);
  } else if (key == "split_phase_time_limit_seconds") {
    c.split_phase_time_limit_seconds = to_double(key, value);
  } else if (key == "tabu_size") {
    c.tabu_size = to_uint(key, value);
  } else if (key == "restarts") {
    c.restarts = to_uint(key, value);
  } else if (key == "total_time_budget_seconds") {
    c.total_time_budget_seconds = to_double(key, value);
  } else if (key == "size_penalty_kappa") {
    c.size_penalty_kappa = to_double(key, value);
  } else if (key == "swap_candidate_beam") {
    c.swap_candidate_beam = to_uint(key, value);
  } else if (key == "rng_seed") {
    c.rng_seed = to_uint(key, value);
  } else if (key == "max_swaps_per_restart") {
    c.max_swaps_per_restart = to_uint(key, value);
  } else if (key == "reset_dependents") {
    c.reset_dependents = to_bool(key, value);
  } else if (key == "jobs") {
    c.jobs = to_uint(key, value);
  } else if (key == "spare_parameter_slots") {
    c.spare_parameter_slots = to_uint(key, value);
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

void read_config(std::istream& in, LearnConfig& config) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
  }
}

void load_config(const std::filesystem::path& path, LearnConfig& config) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  read_config(in, config);
}

void write_config(std::ostream& out, const LearnConfig& c) {
  out << "alpha_grid = ";
  for (std::size_t i = 0; i < c.alpha_grid.size(); ++i) {
    out << (i ? "," : "") << number(c.alpha_grid[i]);
  }
  out << '\n'
      << "min_split_gain_per_example = " << number(c.min_split_gain_per_example) << '\n'
      << "max_sdd_size = " << c.max_sdd_size << '\n'
      << "split_phase_time_limit_seconds = " << number(c.split_phase_time_limit_seconds) << '\n'
      << "tabu_size = " << c.tabu_size << '\n'
      << "restarts = " << c.restarts << '\n'
      << "total_time_budget_seconds = " << number(c.total_time_budget_seconds) << '\n'
      << "size_penalty_kappa = " << number(c.size_penalty_kappa) << '\n'
      << "swap_candidate_beam = " << c.swap_candidate_beam << '\n'
      << "rng_seed = " << c.rng_seed << '\n'
      << "max_swaps_per_restart = " << c.max_swaps_per_restart << '\n'
      << "reset_dependents = " << (c.reset_dependents ? "true" : "false") << '\n'
      << "jobs = " << c.jobs << '\n'
      << "spare_parameter_slots = " << c.spare_parameter_slots << '\n';
}

}  // namespace tbn::learn
