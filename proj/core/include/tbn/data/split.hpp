#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include "tbn/model/dataset.hpp"

namespace tbn::data {

struct SplitProportions {
  double train = 0.75;
  double valid = 0.10;
  double test = 0.15;
};

struct DataSplit {
  Dataset train;
  Dataset valid;
  Dataset test;
};

// Part sizes by largest-remainder rounding (ties to the earlier part).
std::array<std::size_t, 3> split_sizes(std::size_t rows, const SplitProportions& p);

// Shuffles row indices with `seed`, cuts them into the three parts and keeps
// the original row order inside each part. Throws InputError on an empty
// dataset, ConfigError on bad proportions.
DataSplit split_dataset(const Dataset& data, const SplitProportions& p, std::uint64_t seed);

}  // namespace tbn::data
