#include "tbn/data/split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "tbn/errors.hpp"
#include "tbn/random.hpp"

namespace tbn::data {

std::array<std::size_t, 3> split_sizes(std::size_t rows, const SplitProportions& p) {
  const std::array<double, 3> w{p.train, p.valid, p.test};
  double total = 0.0;
  for (double x : w) {
    if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError("split proportions must be positive");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-6) throw ConfigError("split proportions must sum to 1");

  std::array<std::size_t, 3> sizes{};
  std::array<double, 3> rem{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double exact = static_cast<double>(rows) * w[i] / total;
    sizes[i] = static_cast<std::size_t>(std::floor(exact));
    rem[i] = exact - static_cast<double>(sizes[i]);
    assigned += sizes[i];
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
  for (std::size_t k = 0; assigned < rows; ++k, ++assigned) ++sizes[order[k % 3]];
  return sizes;
}

DataSplit split_dataset(const Dataset& data, const SplitProportions& p, std::uint64_t seed) {
  if (data.empty()) throw InputError("cannot split an empty dataset");
  const auto sizes = split_sizes(data.rows(), p);
  std::vector<std::size_t> perm(data.rows());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(perm);

  auto part = [&](std::size_t from, std::size_t count) {
    std::vector<std::size_t> rows(perm.begin() + static_cast<std::ptrdiff_t>(from),
                                  perm.begin() + static_cast<std::ptrdiff_t>(from + count));
    std::sort(rows.begin(), rows.end());
    return data.select_rows(rows);
  };
  DataSplit out;
  out.train = part(0, sizes[0]);
  out.valid = part(sizes[0], sizes[1]);
  out.test = part(sizes[0] + sizes[1], sizes[2]);
  return out;
}

}  // namespace tbn::data
