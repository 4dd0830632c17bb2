#include "tbn/query/report.hpp"

#include <cstdio>
#include <ostream>
#include <string>

#include "tbn/errors.hpp"
#include "tbn/query/oracle.hpp"

namespace tbn::query {

namespace {

std::string cell(const std::optional<double>& x, const char* format) {
  if (!x) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, format, *x);
  return buf;
}

std::string group_label(data::Group g) {
  switch (g) {
    case data::Group::K:
      return "K (cardiovascular)";
    case data::Group::L:
      return "L (musculo-skeletal)";
    default:
      return "-";
  }
}

}  // namespace

QueryReport build_report(const std::vector<data::VariableMeta>& meta,
                         const DifferenceFn& difference, std::size_t k_max) {
  if (k_max < 1) throw InputError("k_max must be at least 1");
  QueryReport report;
  report.k_max = k_max;
  std::vector<GroupSpec> specs;
  for (data::Group g : {data::Group::K, data::Group::L}) {
    GroupSpec spec = make_group(meta, g);
    if (spec.t1.empty()) continue;
    QueryReport::Column col{g, std::nullopt, {}};
    const sdd::ShiftPolynomial base = difference(spec, {});
    try {
      col.baseline = increase_share(base);
      col.increments = increments_from(base, k_max).p;
    } catch (const UndefinedConditionalError&) {
      // An increase is impossible under the model; the column stays NA.
    }
    report.columns.push_back(std::move(col));
    specs.push_back(std::move(spec));
  }
  for (std::size_t i = 0; i < meta.size(); ++i) {
    if (meta[i].kind != data::VarKind::Drug) continue;
    QueryReport::Row row{meta[i].name, {}};
    for (std::size_t c = 0; c < specs.size(); ++c) {
      std::optional<double> odds;
      if (report.columns[c].baseline && *report.columns[c].baseline > 0.0) {
        try {
          odds = increase_share(difference(specs[c], {{variable(i), true}})) /
                 *report.columns[c].baseline;
        } catch (const UndefinedConditionalError&) {
          // The drug has probability zero under the model.
        }
      }
      row.odds.push_back(odds);
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

QueryReport analyze(const CompiledModel& model, const std::vector<data::VariableMeta>& meta,
                    std::size_t k_max) {
  if (meta.size() != model.network().size()) {
    throw SchemaError("metadata describes " + std::to_string(meta.size()) +
                      " variables, the model has " + std::to_string(model.network().size()));
  }
  for (std::size_t i = 0; i < meta.size(); ++i) {
    if (meta[i].name != model.network().names()[i]) {
      throw SchemaError("metadata entry '" + meta[i].name + "' does not match model variable '" +
                        model.network().names()[i] + "'");
    }
  }
  return build_report(
      meta,
      [&model](const GroupSpec& spec, const Evidence& given) {
        return count_difference(model, spec, given);
      },
      k_max);
}

QueryReport analyze_exact(const BayesianNetwork& bn, const std::vector<data::VariableMeta>& meta,
                          std::size_t k_max) {
  if (meta.size() != bn.size()) throw SchemaError("metadata does not match the network");
  const JointTable joint = brute_force_joint(bn);
  return build_report(
      meta,
      [&joint](const GroupSpec& spec, const Evidence& given) {
        return oracle_count_difference(joint, spec, given);
      },
      k_max);
}

void write_report_tsv(std::ostream& out, const QueryReport& report) {
  out << "section\trow";
  for (const auto& c : report.columns) out << '\t' << data::to_string(c.group);
  out << '\n';
  for (const auto& r : report.rows) {
    out << "odds\t" << r.drug;
    for (const auto& x : r.odds) out << '\t' << cell(x, "%.6f");
    out << '\n';
  }
  out << "baseline\tP(increase)";
  for (const auto& c : report.columns) out << '\t' << cell(c.baseline, "%.6f");
  out << '\n';
  for (std::size_t k = 1; k <= report.k_max; ++k) {
    out << "increment\tk=" << k;
    for (const auto& c : report.columns) {
      out << '\t'
          << cell(c.increments.empty() ? std::nullopt : std::optional(c.increments[k - 1]),
                  "%.6f");
    }
    out << '\n';
  }
}

void write_report_text(std::ostream& out, const QueryReport& report) {
  char buf[128];
  out << "Odds of more diseases in T2 than in T1 within a group, given a T1 drug\n";
  std::snprintf(buf, sizeof buf, "  %-8s", "drug");
  out << buf;
  for (const auto& c : report.columns) {
    std::snprintf(buf, sizeof buf, " %22s", group_label(c.group).c_str());
    out << buf;
  }
  out << '\n';
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof buf, "  %-8s", r.drug.c_str());
    out << buf;
    for (const auto& x : r.odds) {
      std::snprintf(buf, sizeof buf, " %22s", cell(x, "%.2f").c_str());
      out << buf;
    }
    out << '\n';
  }
  out << "\nBaseline P(increase)\n";
  for (const auto& c : report.columns) {
    std::snprintf(buf, sizeof buf, "  %-22s %s\n", group_label(c.group).c_str(),
                  cell(c.baseline, "%.2f").c_str());
    out << buf;
  }
  out << "\nP(exactly k more diseases | increase)\n";
  std::snprintf(buf, sizeof buf, "  %-22s", "group");
  out << buf;
  for (std::size_t k = 1; k <= report.k_max; ++k) {
    std::snprintf(buf, sizeof buf, " %6s", ("k=" + std::to_string(k)).c_str());
    out << buf;
  }
  out << '\n';
  for (const auto& c : report.columns) {
    std::snprintf(buf, sizeof buf, "  %-22s", group_label(c.group).c_str());
    out << buf;
    for (std::size_t k = 1; k <= report.k_max; ++k) {
      const auto x = c.increments.empty() ? std::nullopt : std::optional(c.increments[k - 1]);
      std::snprintf(buf, sizeof buf, " %6s", cell(x, "%.2f").c_str());
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace tbn::query
