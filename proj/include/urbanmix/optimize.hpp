#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

#include "urbanmix/error.hpp"
#include "urbanmix/parallel.hpp"
#include "urbanmix/random.hpp"

// Area-constrained choice of PV panel area and wind-turbine footprint area.
//
//   minimize  f(x) = p_pos M+(x) + p_neg M-(x) + p_ren R(x)
//   s.t.      0 <= x_pv <= phi A_roof   (A_roof when PV is roof-only)
//             0 <= x_turbine <= (phi - 1) A_roof
//             x_pv + x_turbine <= phi A_roof
//
// with G = x_pv g_pv + (x_turbine / footprint) g_turbine.

namespace urbanmix::opt {

enum class SignConvention { magnitude_neg, signed_neg };

inline std::string_view to_string(SignConvention s) {
  return s == SignConvention::magnitude_neg ? "magnitude-neg" : "signed-neg";
}

struct Weights {
  double pos = 1.0;
  double neg = 1.0;
  double ren = -5.0;
};

struct MixProblem {
  std::vector<double> g_pv;       // W per m2 of panel
  std::vector<double> g_turbine;  // kW per turbine
  std::vector<double> load;       // MW
  double roof_area_m2 = 0.0;
  double phi_area = 3.0;
  Weights weights;
  double turbine_footprint_m2 = 0.345e6 * 0.5;
  double pv_rated_w_m2 = 100.0;
  double turbine_nominal_kw = 500.0;
  SignConvention sign = SignConvention::magnitude_neg;
  bool roof_only_pv = false;

  [[nodiscard]] double pv_max() const { return roof_only_pv ? roof_area_m2 : phi_area * roof_area_m2; }
  [[nodiscard]] double turbine_max() const { return (phi_area - 1.0) * roof_area_m2; }
  [[nodiscard]] double total_max() const { return phi_area * roof_area_m2; }

  void validate() const {
    if (!(weights.pos > 0.0) || !(weights.neg > 0.0) || !(weights.ren < 0.0)) {
      throw ValidationError("objective weights need p_pos > 0, p_neg > 0, p_ren < 0");
    }
    if (!(roof_area_m2 > 0.0)) throw ValidationError("roof area must be positive");
    if (!(phi_area >= 1.0)) throw ValidationError("area factor must be >= 1");
    if (!(turbine_footprint_m2 > 0.0)) throw ValidationError("turbine footprint must be positive");
    if (g_pv.size() != load.size() || g_turbine.size() != load.size() || load.empty()) {
      throw ValidationError("optimizer series lengths differ");
    }
  }
};

struct Point {
  double pv_m2 = 0.0;
  double turbine_m2 = 0.0;
};

struct ObjectiveTerms {
  double pos_mismatch = 0.0;  // MWh
  double neg_mismatch = 0.0;  // MWh, signed (<= 0)
  double utilisation = 0.0;   // MWh
  double value = 0.0;
};

inline bool feasible(const Point& x, const MixProblem& p) {
  return x.pv_m2 >= 0.0 && x.turbine_m2 >= 0.0 && x.pv_m2 <= p.pv_max() && x.turbine_m2 <= p.turbine_max() &&
         x.pv_m2 + x.turbine_m2 <= p.total_max();
}

/// Objective with the turbine count x_turbine / footprint taken as continuous.
inline ObjectiveTerms evaluate_turbines(double pv_m2, double turbines, const MixProblem& p) {
  ObjectiveTerms t;
  const double pv_scale = pv_m2 * 1e-6;
  const double wt_scale = turbines * 1e-3;
  for (std::size_t h = 0; h < p.load.size(); ++h) {
    const double g = pv_scale * p.g_pv[h] + wt_scale * p.g_turbine[h];
    const double l = p.load[h];
    const double m = g - l;
    if (m > 0.0) {
      t.pos_mismatch += m;
    } else {
      t.neg_mismatch += m;
    }
    t.utilisation += g <= l ? g : l;
  }
  const double neg = p.sign == SignConvention::magnitude_neg ? -t.neg_mismatch : t.neg_mismatch;
  t.value = p.weights.pos * t.pos_mismatch + p.weights.neg * neg + p.weights.ren * t.utilisation;
  return t;
}

inline ObjectiveTerms objective_terms(const Point& x, const MixProblem& p) {
  if (!feasible(x, p)) throw ValidationError("objective: point outside the feasible area");
  return evaluate_turbines(x.pv_m2, x.turbine_m2 / p.turbine_footprint_m2, p);
}

inline double objective(const Point& x, const MixProblem& p) { return objective_terms(x, p).value; }

/// Euclidean projection onto the feasible polygon.
inline Point project(Point x, const MixProblem& p) {
  const double px = p.pv_max();
  const double ty = p.turbine_max();
  const double total = p.total_max();
  Point b{std::clamp(x.pv_m2, 0.0, px), std::clamp(x.turbine_m2, 0.0, ty)};
  if (b.pv_m2 + b.turbine_m2 <= total) return b;
  // Nearest point on the segment of x_pv + x_turbine = total inside the box.
  const double lo = std::max(0.0, total - ty);
  const double hi = std::min(px, total);
  const double pv = std::clamp(x.pv_m2 - 0.5 * (x.pv_m2 + x.turbine_m2 - total), lo, hi);
  double wt = std::clamp(total - pv, 0.0, ty);
  while (pv + wt > total) wt = std::nextafter(wt, 0.0);
  return {pv, wt};
}

struct MixSolution {
  Point x;
  double pv_mw = 0.0;
  double turbines_continuous = 0.0;
  long turbines = 0;
  double turbine_m2_rounded = 0.0;
  ObjectiveTerms continuous;
  ObjectiveTerms rounded;
  std::size_t generations = 0;
  std::size_t evaluations = 0;
};

/// Fills the reported fields of a solution from its continuous point. The
/// turbine count is rounded to the nearest integer and lowered until every
/// area constraint holds.
inline MixSolution finish_solution(const Point& x, const MixProblem& p) {
  MixSolution s;
  s.x = x;
  s.pv_mw = x.pv_m2 * p.pv_rated_w_m2 * 1e-6;
  s.turbines_continuous = x.turbine_m2 / p.turbine_footprint_m2;
  s.turbines = std::max(0L, std::lround(s.turbines_continuous));
  while (s.turbines > 0 && !feasible({x.pv_m2, static_cast<double>(s.turbines) * p.turbine_footprint_m2}, p)) {
    --s.turbines;
  }
  s.turbine_m2_rounded = static_cast<double>(s.turbines) * p.turbine_footprint_m2;
  s.continuous = objective_terms(x, p);
  s.rounded = evaluate_turbines(x.pv_m2, static_cast<double>(s.turbines), p);
  return s;
}

struct GaConfig {
  std::size_t population = 50;
  std::size_t tournament = 3;
  double crossover_rate = 0.9;
  double blend_alpha = 0.5;
  double mutation_rate = 0.2;     // per gene
  double mutation_sigma = 0.02;   // fraction of the variable range
  std::size_t elites = 2;
  std::size_t stall_generations = 20;
  double tolerance = 1e-6;        // relative improvement over the stall window
  std::size_t max_generations = 1000;
  std::uint64_t seed = 42;
  unsigned workers = 1;
};

/// Real-coded genetic algorithm: tournament selection, blend (BLX-alpha)
/// crossover, Gaussian mutation, projection onto the feasible polygon,
/// elitism. Stops when the best objective improves by less than the relative
/// tolerance over `stall_generations` generations.
inline MixSolution ga_optimize(const MixProblem& p, const GaConfig& cfg = {}) {
  p.validate();
  if (cfg.population < 4 || cfg.tournament < 1 || cfg.elites >= cfg.population) {
    throw ValidationError("invalid GA configuration");
  }
  const double range[2] = {p.pv_max(), p.turbine_max()};
  Rng rng(cfg.seed);

  struct Individual {
    Point x;
    double f = 0.0;
  };
  std::vector<Individual> pop(cfg.population);
  // Seed the vertices of the feasible polygon, the rest uniformly.
  const std::array<Point, 4> vertices = {
      Point{0.0, 0.0}, Point{range[0], 0.0}, Point{0.0, range[1]},
      project(Point{range[0], range[1]}, p)};
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (i < vertices.size()) {
      pop[i].x = project(vertices[i], p);
      continue;
    }
    Point x{rng.uniform(0.0, range[0]), rng.uniform(0.0, range[1])};
    while (!feasible(x, p)) x = {rng.uniform(0.0, range[0]), rng.uniform(0.0, range[1])};
    pop[i].x = x;
  }

  std::size_t evaluations = 0;
  auto evaluate_all = [&](std::vector<Individual>& group, std::size_t from) {
    parallel_for(group.size() - from, cfg.workers, [&](std::size_t i) {
      group[from + i].f = objective(group[from + i].x, p);
    });
    evaluations += group.size() - from;
  };
  auto by_fitness = [](const Individual& a, const Individual& b) { return a.f < b.f; };
  evaluate_all(pop, 0);
  std::stable_sort(pop.begin(), pop.end(), by_fitness);

  auto select = [&]() -> const Individual& {
    std::size_t best = rng.index(pop.size());
    for (std::size_t k = 1; k < cfg.tournament; ++k) {
      const std::size_t c = rng.index(pop.size());
      if (pop[c].f < pop[best].f) best = c;
    }
    return pop[best];
  };

  std::vector<double> history{pop.front().f};
  std::size_t generation = 0;
  while (generation < cfg.max_generations) {
    ++generation;
    std::vector<Individual> next(pop.begin(), pop.begin() + static_cast<std::ptrdiff_t>(cfg.elites));
    while (next.size() < pop.size()) {
      const Point a = select().x;
      const Point b = select().x;
      Point c1 = a, c2 = b;
      if (rng.uniform() < cfg.crossover_rate) {
        double* g1[2] = {&c1.pv_m2, &c1.turbine_m2};
        double* g2[2] = {&c2.pv_m2, &c2.turbine_m2};
        const double pa[2] = {a.pv_m2, a.turbine_m2};
        const double pb[2] = {b.pv_m2, b.turbine_m2};
        for (int g = 0; g < 2; ++g) {
          const double lo = std::min(pa[g], pb[g]);
          const double hi = std::max(pa[g], pb[g]);
          const double span = hi - lo;
          *g1[g] = rng.uniform(lo - cfg.blend_alpha * span, hi + cfg.blend_alpha * span);
          *g2[g] = rng.uniform(lo - cfg.blend_alpha * span, hi + cfg.blend_alpha * span);
        }
      }
      for (Point* c : {&c1, &c2}) {
        if (rng.uniform() < cfg.mutation_rate) c->pv_m2 += rng.normal() * cfg.mutation_sigma * range[0];
        if (rng.uniform() < cfg.mutation_rate) c->turbine_m2 += rng.normal() * cfg.mutation_sigma * range[1];
        if (next.size() < pop.size()) next.push_back({project(*c, p), 0.0});
      }
    }
    evaluate_all(next, cfg.elites);
    std::stable_sort(next.begin(), next.end(), by_fitness);
    pop = std::move(next);
    history.push_back(pop.front().f);
    if (history.size() > cfg.stall_generations) {
      const double before = history[history.size() - 1 - cfg.stall_generations];
      const double now = history.back();
      const double scale = std::max(std::abs(before), std::numeric_limits<double>::min());
      if (before - now < cfg.tolerance * scale) break;
    }
  }
  MixSolution s = finish_solution(pop.front().x, p);
  s.generations = generation;
  s.evaluations = evaluations;
  return s;
}

/// Exhaustive search over `resolution` evenly spaced values per axis
/// (endpoints included); infeasible grid points are skipped.
inline MixSolution grid_oracle(const MixProblem& p, std::size_t resolution, unsigned workers = 1) {
  p.validate();
  if (resolution < 2) throw ValidationError("grid resolution must be >= 2");
  const double step_pv = p.pv_max() / static_cast<double>(resolution - 1);
  const double step_wt = p.turbine_max() / static_cast<double>(resolution - 1);
  struct RowBest {
    Point x;
    double f = std::numeric_limits<double>::infinity();
    std::size_t evaluated = 0;
  };
  std::vector<RowBest> rows(resolution);
  parallel_for(resolution, workers, [&](std::size_t i) {
    const double pv = i + 1 == resolution ? p.pv_max() : static_cast<double>(i) * step_pv;
    for (std::size_t j = 0; j < resolution; ++j) {
      const double wt = j + 1 == resolution ? p.turbine_max() : static_cast<double>(j) * step_wt;
      const Point x{pv, wt};
      if (!feasible(x, p)) continue;
      const double f = objective(x, p);
      ++rows[i].evaluated;
      if (f < rows[i].f) rows[i] = {x, f, rows[i].evaluated};
    }
  });
  RowBest best;
  std::size_t evaluations = 0;
  for (const auto& r : rows) {
    evaluations += r.evaluated;
    if (r.f < best.f) best = r;
  }
  MixSolution s = finish_solution(best.x, p);
  s.evaluations = evaluations;
  return s;
}

}  // namespace urbanmix::opt
