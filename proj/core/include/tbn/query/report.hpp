#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tbn/compiler/encoder.hpp"
#include "tbn/data/metadata.hpp"
#include "tbn/query/query.hpp"

namespace tbn::query {

// Odds of more diseases in T2 than T1 within a group given a T1 drug,
// relative to the unconditional probability, plus the increment sizes.
struct QueryReport {
  struct Column {
    data::Group group;
    std::optional<double> baseline;  // P(increase); empty when zero
    std::vector<double> increments;  // p_1..p_kmax; empty when undefined
  };
  struct Row {
    std::string drug;
    std::vector<std::optional<double>> odds;  // one per column; empty = undefined
  };

  std::size_t k_max = 4;
  std::vector<Column> columns;  // groups K then L, those present in the metadata
  std::vector<Row> rows;        // drugs in metadata order
};

// Source of the difference polynomial for a group under optional evidence.
using DifferenceFn =
    std::function<sdd::ShiftPolynomial(const GroupSpec&, const Evidence&)>;

QueryReport build_report(const std::vector<data::VariableMeta>& meta,
                         const DifferenceFn& difference, std::size_t k_max = 4);
// From the compiled model, one generating-function pass per (group, drug).
QueryReport analyze(const CompiledModel& model, const std::vector<data::VariableMeta>& meta,
                    std::size_t k_max = 4);
// Same numbers by enumerating the network's joint distribution.
QueryReport analyze_exact(const BayesianNetwork& bn, const std::vector<data::VariableMeta>& meta,
                          std::size_t k_max = 4);

// Fixed columns: section, row, then one column per disease group. Sections
// are `odds` (one row per drug), `baseline` (row `P(increase)`) and
// `increment` (rows k=1..k_max). Undefined cells print NA.
void write_report_tsv(std::ostream& out, const QueryReport& report);
void write_report_text(std::ostream& out, const QueryReport& report);

}  // namespace tbn::query
