#pragma once

#include <filesystem>
#include <iosfwd>

#include "tbn/model/network.hpp"

namespace tbn::data {

// Text format:
//   bn <V> <alpha>
//   var <id> <name>            (V lines)
//   order <id> ... <id>
//   cpt <id> <node-count>      then the tree in preorder, true branch first:
//   S <test-id>                split
//   P <count-true> <count-false> <prob-true>
// Probabilities use 17 significant digits; `c` lines are comments.
void write_network(std::ostream& out, const BayesianNetwork& bn);
// Throws ParseError with the line number on malformed input and on networks
// that fail validation.
BayesianNetwork read_network(std::istream& in);

BayesianNetwork load_network(const std::filesystem::path& path);
void save_network(const std::filesystem::path& path, const BayesianNetwork& bn);

}  // namespace tbn::data
