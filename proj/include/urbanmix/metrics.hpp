#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "urbanmix/error.hpp"
#include "urbanmix/series.hpp"

// Renewable-integration metrics for a copper-plate system without storage
// or load flexibility. Power is in MW and each hour contributes its average
// power times one hour, so energies are in MWh.

namespace urbanmix::metrics {

struct HourMetrics {
  double mismatch = 0.0;     // G - L
  double utilisation = 0.0;  // min(G, L)
};

struct AggregateMetrics {
  double pos_mismatch = 0.0;  // sum of max(M, 0)
  double neg_mismatch = 0.0;  // sum of min(M, 0), <= 0
  double utilisation = 0.0;
  double generation = 0.0;
  double load = 0.0;
  std::optional<double> self_consumption;  // empty when no generation
};

enum class Metric { mismatch, pos_mismatch, neg_mismatch, utilisation, self_consumption };

inline constexpr std::array kReportedMetrics = {Metric::pos_mismatch, Metric::neg_mismatch, Metric::utilisation,
                                                Metric::self_consumption};

inline std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::mismatch: return "mismatch";
    case Metric::pos_mismatch: return "pos_mismatch";
    case Metric::neg_mismatch: return "neg_mismatch";
    case Metric::utilisation: return "utilisation";
    case Metric::self_consumption: return "self_consumption";
  }
  return "?";
}

inline std::vector<HourMetrics> hourly_metrics(std::span<const double> generation, std::span<const double> load) {
  if (generation.size() != load.size()) {
    throw ValidationError("hourly metrics: generation and load lengths differ");
  }
  std::vector<HourMetrics> out(generation.size());
  for (std::size_t h = 0; h < out.size(); ++h) {
    const double g = generation[h];
    const double l = load[h];
    if (g < 0.0 || l < 0.0) throw ValidationError("hourly metrics: negative generation or load");
    out[h] = {g - l, g <= l ? g : l};
  }
  return out;
}

inline std::vector<HourMetrics> hourly_metrics(const HourlySeries& generation, const HourlySeries& load) {
  require_same_shape(generation, load, "hourly metrics");
  return hourly_metrics(generation.values(), load.values());
}

inline AggregateMetrics aggregate(std::span<const HourMetrics> hours, std::span<const double> generation) {
  if (hours.size() != generation.size()) throw ValidationError("aggregate: length mismatch");
  AggregateMetrics a;
  for (std::size_t h = 0; h < hours.size(); ++h) {
    const double m = hours[h].mismatch;
    if (m > 0.0) {
      a.pos_mismatch += m;
    } else {
      a.neg_mismatch += m;
    }
    a.utilisation += hours[h].utilisation;
    a.generation += generation[h];
    a.load += generation[h] - m;
  }
  if (a.generation > 0.0) a.self_consumption = a.utilisation / a.generation;
  return a;
}

inline AggregateMetrics aggregate(std::span<const HourMetrics> hours, const HourlySeries& generation) {
  return aggregate(hours, generation.values());
}

inline AggregateMetrics evaluate(const HourlySeries& generation, const HourlySeries& load) {
  const auto hours = hourly_metrics(generation, load);
  return aggregate(hours, generation);
}

/// Per-hour values of one metric. Self-consumption is NaN for hours without
/// generation.
inline std::vector<double> metric_values(std::span<const HourMetrics> hours, std::span<const double> generation,
                                         Metric metric) {
  std::vector<double> out(hours.size());
  for (std::size_t h = 0; h < hours.size(); ++h) {
    const auto& hm = hours[h];
    switch (metric) {
      case Metric::mismatch: out[h] = hm.mismatch; break;
      case Metric::pos_mismatch: out[h] = std::max(hm.mismatch, 0.0); break;
      case Metric::neg_mismatch: out[h] = std::min(hm.mismatch, 0.0); break;
      case Metric::utilisation: out[h] = hm.utilisation; break;
      case Metric::self_consumption:
        out[h] = generation[h] > 0.0 ? hm.utilisation / generation[h] : std::numeric_limits<double>::quiet_NaN();
        break;
    }
  }
  return out;
}

/// Annual value of one metric, MWh or a ratio. Empty for undefined
/// self-consumption.
inline std::optional<double> annual_value(const AggregateMetrics& a, Metric metric) {
  switch (metric) {
    case Metric::mismatch: return a.pos_mismatch + a.neg_mismatch;
    case Metric::pos_mismatch: return a.pos_mismatch;
    case Metric::neg_mismatch: return a.neg_mismatch;
    case Metric::utilisation: return a.utilisation;
    case Metric::self_consumption: return a.self_consumption;
  }
  return std::nullopt;
}

/// Mismatch difference between residential-only and mixed loads,
/// M_r - M_m = s(t) - (phi - 1) h(t). Independent of generation.
inline HourlySeries delta_mismatch(const HourlySeries& service, const HourlySeries& household, double phi) {
  require_same_shape(service, household, "delta mismatch");
  std::vector<double> out(service.size());
  for (std::size_t h = 0; h < out.size(); ++h) out[h] = service[h] - (phi - 1.0) * household[h];
  return HourlySeries(std::move(out), service.unit(), service.year());
}

/// R_r - R_m in MWh for a common generation series.
inline double delta_utilisation(const HourlySeries& generation, const HourlySeries& load_residential,
                                const HourlySeries& load_mixed) {
  require_same_shape(generation, load_residential, "delta utilisation");
  require_same_shape(generation, load_mixed, "delta utilisation");
  double r = 0.0;
  double m = 0.0;
  for (std::size_t h = 0; h < generation.size(); ++h) {
    r += std::min(generation[h], load_residential[h]);
    m += std::min(generation[h], load_mixed[h]);
  }
  return r - m;
}

}  // namespace urbanmix::metrics
