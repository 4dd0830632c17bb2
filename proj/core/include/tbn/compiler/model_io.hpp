#pragma once

#include <filesystem>
#include <iosfwd>

#include "tbn/compiler/encoder.hpp"

namespace tbn::compiler {

// Sidecar mapping between network variables and circuit variables:
//   ind <bn-var> <circuit-var>
//   par <bn-var> <leaf-index> <circuit-var> <w-pos> <w-neg>
//   spare <bn-var> <circuit-var>
// Weights are printed with 17 significant digits so they read back exactly.
void save_encoding_map(std::ostream& out, const CompiledModel& model);
EncodingMap load_encoding_map(std::istream& in, const BayesianNetwork& network);

struct ModelFiles {
  std::filesystem::path vtree;
  std::filesystem::path sdd;
  std::filesystem::path map;

  // <dir>/model.vtree, <dir>/model.sdd, <dir>/model.map
  static ModelFiles in_directory(const std::filesystem::path& dir);
};

void save_compiled(const CompiledModel& model, const ModelFiles& files);
// `network` must be the network the files were compiled from.
CompiledModel load_compiled(const ModelFiles& files, BayesianNetwork network);

}  // namespace tbn::compiler
