#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "urbanmix/csv.hpp"
#include "urbanmix/sector_scaling.hpp"
#include "urbanmix/series.hpp"

namespace urbanmix::validation {

inline constexpr std::string_view kMatch = "match";
inline constexpr std::string_view kInconsistent = "paper-internal inconsistency";

/// One reconciled quantity: the value printed in the source tables against the
/// value recomputed from the recipe inputs.
struct ReconciliationRow {
  std::string item;
  std::string quantity;
  std::optional<double> printed;
  double recomputed = 0.0;
  std::string verdict;
  std::string note;

  [[nodiscard]] std::optional<double> delta() const {
    if (!printed) return std::nullopt;
    return recomputed - *printed;
  }
};

struct BuildingReconciliation {
  std::string name;
  std::optional<double> printed_national;
  double recomputed_national = 0.0;
  std::optional<long> printed_per_100k;  // appendix
  std::optional<long> table_count;       // summary table
  long count_printed_path = 0;
  long count_recomputed_path = 0;
  std::string verdict;
  std::string note;
};

struct ReconciliationReport {
  std::vector<BuildingReconciliation> buildings;
  std::vector<ReconciliationRow> office_bands;

  [[nodiscard]] std::vector<std::string> inconsistencies() const {
    std::vector<std::string> out;
    for (const auto& b : buildings) {
      if (b.verdict != kMatch) out.push_back(b.name);
    }
    for (const auto& r : office_bands) {
      if (r.verdict != kMatch) out.push_back(r.item);
    }
    return out;
  }
};

/// Cross-checks every building type of a scaling spec: printed national
/// equivalents against the recomputed value (match within one building), and
/// the appendix and summary-table counts against the count derived from the
/// printed intermediates. Office size bands are checked the same way.
inline ReconciliationReport reconcile_appendix(const scaling::ScalingSpecFile& spec) {
  ReconciliationReport r;
  const auto& ctx = spec.context;
  for (const auto& b : spec.buildings) {
    BuildingReconciliation row;
    row.name = b.name;
    row.printed_national = b.printed.national;
    row.recomputed_national = scaling::national_equivalents(b, ctx);
    row.printed_per_100k = b.printed.per_100k;
    row.table_count = b.expected_count;
    row.count_printed_path =
        scaling::per_100k(scaling::resolved_national(b, ctx, scaling::Path::printed), ctx.households_divisor);
    row.count_recomputed_path =
        scaling::per_100k(scaling::resolved_national(b, ctx, scaling::Path::recomputed), ctx.households_divisor);
    std::vector<std::string> notes;
    if (row.printed_national && std::abs(*row.printed_national - row.recomputed_national) > 1.0) {
      notes.push_back("printed national " + csv::format(*row.printed_national) + " vs recomputed " +
                      csv::fixed(row.recomputed_national, 1));
    }
    if (row.printed_per_100k && *row.printed_per_100k != row.count_printed_path) {
      notes.push_back("appendix per 100k " + std::to_string(*row.printed_per_100k) + " vs " +
                      std::to_string(row.count_printed_path));
    }
    if (row.table_count && *row.table_count != row.count_printed_path) {
      notes.push_back("summary table " + std::to_string(*row.table_count) + " vs " +
                      std::to_string(row.count_printed_path));
    }
    if (row.count_printed_path != row.count_recomputed_path) {
      notes.push_back("printed path " + std::to_string(row.count_printed_path) + " vs recomputed path " +
                      std::to_string(row.count_recomputed_path));
    }
    row.verdict = notes.empty() ? kMatch : kInconsistent;
    for (const auto& n : notes) row.note += (row.note.empty() ? "" : "; ") + n;
    r.buildings.push_back(std::move(row));
  }
  if (!ctx.office_bands.empty()) {
    const auto counts = scaling::office_band_counts(ctx.office_bands, ctx.office_total_used_area_m2);
    for (std::size_t j = 0; j < counts.size(); ++j) {
      const auto& band = ctx.office_bands[j];
      std::string label = "office band " + csv::format(band.min_m2) + "-" +
                          (band.max_m2 ? csv::format(*band.max_m2) : std::string("")) + " m2";
      ReconciliationRow row{label, "offices", band.printed_count, counts[j].count, "", ""};
      const bool ok = !band.printed_count || std::abs(*band.printed_count - counts[j].count) <= 1.0;
      row.verdict = ok ? kMatch : kInconsistent;
      if (!ok) row.note = "printed " + csv::format(*band.printed_count) + " vs " + csv::fixed(counts[j].count, 2);
      r.office_bands.push_back(std::move(row));
    }
  }
  return r;
}

inline void write_reconciliation_csv(const ReconciliationReport& r, const std::filesystem::path& path) {
  auto opt_num = [](auto v) { return v ? csv::format(static_cast<double>(*v)) : std::string(); };
  csv::Writer w(path, {"item", "printed_national", "recomputed_national", "delta", "appendix_per_100k",
                       "table_count", "count_printed_path", "count_recomputed_path", "verdict", "note"});
  for (const auto& b : r.buildings) {
    const std::string delta =
        b.printed_national ? csv::fixed(b.recomputed_national - *b.printed_national, 2) : std::string();
    w.row({b.name, opt_num(b.printed_national), csv::fixed(b.recomputed_national, 2), delta,
           opt_num(b.printed_per_100k), opt_num(b.table_count), std::to_string(b.count_printed_path),
           std::to_string(b.count_recomputed_path), b.verdict, b.note});
  }
  for (const auto& o : r.office_bands) {
    const auto d = o.delta();
    w.row({o.item, opt_num(o.printed), csv::fixed(o.recomputed, 2), d ? csv::fixed(*d, 2) : std::string(), "", "", "",
           "", o.verdict, o.note});
  }
}

inline void write_reconciliation_text(const ReconciliationReport& r, std::ostream& os) {
  char line[256];
  std::snprintf(line, sizeof line, "%-26s %10s %12s %8s %6s %6s %6s  %s\n", "building type", "printed", "recomputed",
                "delta", "app.", "table", "count", "verdict");
  os << line;
  for (const auto& b : r.buildings) {
    const std::string printed = b.printed_national ? csv::format(*b.printed_national) : "-";
    const std::string delta = b.printed_national ? csv::fixed(b.recomputed_national - *b.printed_national, 1) : "-";
    std::snprintf(line, sizeof line, "%-26s %10s %12s %8s %6s %6s %6ld  %s\n", b.name.c_str(), printed.c_str(),
                  csv::fixed(b.recomputed_national, 1).c_str(), delta.c_str(),
                  b.printed_per_100k ? std::to_string(*b.printed_per_100k).c_str() : "-",
                  b.table_count ? std::to_string(*b.table_count).c_str() : "-", b.count_printed_path,
                  b.verdict.c_str());
    os << line;
    if (!b.note.empty()) os << "    " << b.note << '\n';
  }
  for (const auto& o : r.office_bands) {
    const std::string printed = o.printed ? csv::format(*o.printed) : "-";
    std::snprintf(line, sizeof line, "%-26s %10s %12s %8s %6s %6s %6s  %s\n", o.item.c_str(), printed.c_str(),
                  csv::fixed(o.recomputed, 1).c_str(), o.delta() ? csv::fixed(*o.delta(), 1).c_str() : "-", "", "",
                  "", o.verdict.c_str());
    os << line;
  }
}

// ---------------------------------------------------------------------------
// National service-sector total

struct NationalCheck {
  bool skipped = true;
  std::string status;
  double modeled_twh = 0.0;
  double expected_twh = 0.0;
  std::map<std::string, double> reference_twh;
  std::map<std::string, double> ratios;
};

/// Extrapolates the service-sector demand of the modelled households to the
/// national household count. Only meaningful with real reference profiles;
/// fixture data gets the numbers but a skipped status.
inline NationalCheck national_total_check(const HourlySeries& service, double modeled_households,
                                          double households_total, const std::map<std::string, double>& references,
                                          double expected_twh, bool real_inputs) {
  if (!(modeled_households > 0.0) || !(households_total > 0.0)) {
    throw ValidationError("household counts must be positive");
  }
  NationalCheck c;
  const double kwh = service.in(Unit::kW).sum();
  c.modeled_twh = kwh * (households_total / modeled_households) * 1e-9;
  c.expected_twh = expected_twh;
  c.reference_twh = references;
  for (const auto& [name, twh] : references) {
    if (!(twh > 0.0)) throw ValidationError("reference total for " + name + " must be positive");
    c.ratios[name] = c.modeled_twh / twh;
  }
  c.skipped = !real_inputs;
  c.status = real_inputs ? "checked" : "fixture-only, check skipped";
  return c;
}

inline void write_national_csv(const NationalCheck& c, const std::filesystem::path& path) {
  csv::Writer w(path, {"quantity", "value", "status"});
  w.row({"modeled_twh", csv::format(c.modeled_twh), c.status});
  w.row({"expected_twh", csv::format(c.expected_twh), c.status});
  for (const auto& [name, twh] : c.reference_twh) {
    w.row({"reference_twh_" + name, csv::format(twh), c.status});
    w.row({"ratio_" + name, csv::format(c.ratios.at(name)), c.status});
  }
}

}  // namespace urbanmix::validation
