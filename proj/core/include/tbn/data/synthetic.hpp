#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "tbn/model/dataset.hpp"
#include "tbn/model/network.hpp"

namespace tbn::data {

// Ground-truth network plus baseline prevalences. A prevalence overrides
// P(X=1) of a parentless variable.
struct SyntheticSpec {
  BayesianNetwork network;
  std::map<std::string, double> prevalence;
  std::size_t samples = 0;
  std::uint64_t seed = 0;

  // The network with prevalences applied. Throws ConfigError for unknown
  // names, values outside (0,1), or variables that have parents.
  BayesianNetwork effective_network() const;
};

// Network serialization followed by `prevalence <name> <p>`, `samples <n>` and
// `seed <s>` lines.
void write_spec(std::ostream& out, const SyntheticSpec& spec);
SyntheticSpec read_spec(std::istream& in);
SyntheticSpec load_spec(const std::filesystem::path& path);
void save_spec(const std::filesystem::path& path, const SyntheticSpec& spec);

// Ancestral sampling in network order, one uniform draw per cell.
Dataset sample(const BayesianNetwork& bn, std::size_t rows, std::uint64_t seed);
Dataset generate(const SyntheticSpec& spec);

}  // namespace tbn::data
