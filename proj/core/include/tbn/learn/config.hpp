#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace tbn::learn {

struct LearnConfig {
  std::vector<double> alpha_grid{1.0, 0.1, 0.001, 0.00001};
  // Minimum mean log-likelihood gain per training example for a split.
  double min_split_gain_per_example = 0.0001;
  std::size_t max_sdd_size = 2'000'000;
  double split_phase_time_limit_seconds = 900.0;
  std::size_t tabu_size = 10;
  std::size_t restarts = 60;
  double total_time_budget_seconds = 3 * 24 * 3600.0;
  double size_penalty_kappa = 1e-9;
  // Split candidates (by likelihood gain) that get a trial compilation.
  std::size_t swap_candidate_beam = 5;
  std::uint64_t rng_seed = 0;

  // Swap moves per restart; 0 leaves only the time budget. A finite value
  // makes runs reproducible because the clock then never decides.
  std::size_t max_swaps_per_restart = 0;
  // Also reset the trees of variables that test a swapped variable.
  bool reset_dependents = false;
  // Restarts run on up to this many threads.
  std::size_t jobs = 1;
  // Parameter slots reserved per variable so trees can grow without
  // rebuilding the vtree.
  std::size_t spare_parameter_slots = 4;

  // restarts 5, 300 s, max size 200,000, 40 swaps per restart.
  static LearnConfig desk_scale();

  // Structure search runs at the largest grid value.
  double search_alpha() const;
  double restart_budget_seconds() const;

  // Throws ConfigError on non-positive limits or an empty grid.
  void validate() const;
};

// Sets one field from its text value. Keys are the field names above.
// Throws ConfigError for unknown keys or malformed values.
void apply_setting(LearnConfig& config, const std::string& key, const std::string& value);

// `key = value` lines, `#` comments. Unknown keys are errors.
void read_config(std::istream& in, LearnConfig& config);
void load_config(const std::filesystem::path& path, LearnConfig& config);
void write_config(std::ostream& out, const LearnConfig& config);

}  // namespace tbn::learn
