#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace tbn {

// Dense index of a network variable, 0..V-1.
enum class VariableId : std::uint32_t {};

constexpr std::size_t index(VariableId v) noexcept {
  return static_cast<std::size_t>(v);
}

constexpr VariableId variable(std::size_t i) noexcept {
  return static_cast<VariableId>(static_cast<std::uint32_t>(i));
}

// One step of a root-to-leaf path in a CPT-tree: the tested variable and the
// branch taken.
struct PathStep {
  VariableId test;
  bool value;

  friend bool operator==(const PathStep&, const PathStep&) = default;
};

using LeafPath = std::vector<PathStep>;

struct SufficientStats {
  std::uint64_t count_true = 0;
  std::uint64_t count_false = 0;

  std::uint64_t total() const noexcept { return count_true + count_false; }

  friend bool operator==(const SufficientStats&, const SufficientStats&) = default;
};

}  // namespace tbn
