#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

#include "tbn/data/metadata.hpp"
#include "tbn/data/synthetic.hpp"

namespace tbn::data {

// Desk-scale stand-in for the health-record cohort: four T1 drugs (C01, C10,
// M01, M02 at their baseline prevalences), four cardiovascular (K) and four
// musculo-skeletal (L) diseases, each observed in T1 and T2. T1 diseases
// depend on a drug, T2 diseases on their T1 counterpart, and some T2
// diseases on a drug, so the odds grid has entries above and below 1.
struct Cohort {
  SyntheticSpec spec;
  std::vector<VariableMeta> meta;  // aligned with spec.network variables
};

Cohort cohort_spec(std::size_t samples, std::uint64_t seed);

}  // namespace tbn::data
