#include <gtest/gtest.h>

#include <cmath>

#include "urbanmix/optimize.hpp"
#include "urbanmix/random.hpp"

using namespace urbanmix;
using namespace urbanmix::opt;

namespace {

MixProblem small_problem(std::uint64_t seed = 1) {
  Rng rng(seed);
  MixProblem p;
  const std::size_t n = 24 * 30;
  p.g_pv.resize(n);
  p.g_turbine.resize(n);
  p.load.resize(n);
  for (std::size_t h = 0; h < n; ++h) {
    const double hour = static_cast<double>(h % 24);
    p.g_pv[h] = std::max(0.0, std::sin((hour - 6.0) / 12.0 * 3.14159265)) * rng.uniform(40, 110);
    p.g_turbine[h] = rng.uniform(0, 500);
    p.load[h] = 1.0 + 0.5 * std::sin(hour / 24.0 * 6.2831853) + rng.uniform(0, 0.3);
  }
  p.roof_area_m2 = 40000;
  p.turbine_footprint_m2 = 1000;
  return p;
}

}  // namespace

TEST(Optimize, OriginObjective) {
  const auto p = small_problem();
  double sum = 0.0;
  for (double l : p.load) sum += l;
  const auto t = objective_terms({0, 0}, p);
  EXPECT_EQ(t.pos_mismatch, 0.0);
  EXPECT_NEAR(t.neg_mismatch, -sum, 1e-9);
  EXPECT_EQ(t.utilisation, 0.0);
  EXPECT_NEAR(t.value, p.weights.neg * sum, 1e-9);
  auto s = p;
  s.sign = SignConvention::signed_neg;
  EXPECT_NEAR(objective({0, 0}, s), -sum, 1e-9);
}

TEST(Optimize, HomogeneousInWeights) {
  const auto p = small_problem();
  auto q = p;
  q.weights = {2 * p.weights.pos, 2 * p.weights.neg, 2 * p.weights.ren};
  for (const Point x : {Point{1000, 2000}, Point{30000, 50000}}) {
    EXPECT_NEAR(objective(x, q), 2 * objective(x, p), 1e-9 * std::abs(objective(x, q)));
  }
}

TEST(Optimize, Feasibility) {
  const auto p = small_problem();
  EXPECT_TRUE(feasible({0, 0}, p));
  EXPECT_TRUE(feasible({p.pv_max(), 0}, p));
  EXPECT_TRUE(feasible({0, p.turbine_max()}, p));
  EXPECT_FALSE(feasible({p.pv_max(), 1}, p));
  EXPECT_FALSE(feasible({-1, 0}, p));
  auto roof = p;
  roof.roof_only_pv = true;
  EXPECT_FALSE(feasible({p.roof_area_m2 + 1, 0}, roof));
}

TEST(Optimize, ProjectionLandsInside) {
  const auto p = small_problem();
  Rng rng(9);
  for (int i = 0; i < 1000; ++i) {
    const Point x{rng.uniform(-2e5, 2e5), rng.uniform(-2e5, 2e5)};
    const Point y = project(x, p);
    ASSERT_TRUE(feasible(y, p)) << x.pv_m2 << " " << x.turbine_m2;
    if (feasible(x, p)) {
      ASSERT_DOUBLE_EQ(y.pv_m2, x.pv_m2);
      ASSERT_DOUBLE_EQ(y.turbine_m2, x.turbine_m2);
    }
  }
}

TEST(Optimize, GridOracleMatchesBruteForce) {
  const auto p = small_problem();
  const auto g = grid_oracle(p, 21);
  double best = INFINITY;
  for (int i = 0; i < 21; ++i) {
    for (int j = 0; j < 21; ++j) {
      const Point x{i == 20 ? p.pv_max() : i * p.pv_max() / 20, j == 20 ? p.turbine_max() : j * p.turbine_max() / 20};
      if (feasible(x, p)) best = std::min(best, objective(x, p));
    }
  }
  EXPECT_DOUBLE_EQ(g.continuous.value, best);
  EXPECT_EQ(grid_oracle(p, 21, 4).continuous.value, g.continuous.value);
  const auto two = grid_oracle(p, 2);
  EXPECT_EQ(two.evaluations, 3u);
  EXPECT_LE(grid_oracle(p, 5).continuous.value, grid_oracle(p, 3).continuous.value);
  EXPECT_THROW(grid_oracle(p, 1), ValidationError);
}

TEST(Optimize, GaFeasibleDeterministicAndCompetitive) {
  const auto p = small_problem();
  GaConfig cfg;
  cfg.seed = 5;
  const auto a = ga_optimize(p, cfg);
  const auto b = ga_optimize(p, cfg);
  EXPECT_EQ(a.x.pv_m2, b.x.pv_m2);
  EXPECT_EQ(a.x.turbine_m2, b.x.turbine_m2);
  EXPECT_EQ(a.generations, b.generations);
  cfg.workers = 4;
  const auto c = ga_optimize(p, cfg);
  EXPECT_EQ(a.x.pv_m2, c.x.pv_m2);
  EXPECT_TRUE(feasible(a.x, p));
  EXPECT_TRUE(feasible({a.x.pv_m2, a.turbine_m2_rounded}, p));
  const auto g = grid_oracle(p, 200);
  EXPECT_LE(a.continuous.value, g.continuous.value + 0.02 * std::abs(g.continuous.value));
}

TEST(Optimize, RoundedTurbinesStayFeasible) {
  auto p = small_problem();
  p.turbine_footprint_m2 = 7777;
  const Point x{p.total_max() - 7777 * 0.6, 7777 * 0.6};
  ASSERT_TRUE(feasible(x, p));
  const auto s = finish_solution(x, p);
  EXPECT_EQ(s.turbines, 0);
  EXPECT_TRUE(feasible({s.x.pv_m2, s.turbine_m2_rounded}, p));
  EXPECT_DOUBLE_EQ(s.turbine_m2_rounded, static_cast<double>(s.turbines) * p.turbine_footprint_m2);
}

TEST(Optimize, InvalidProblems) {
  auto p = small_problem();
  p.weights.ren = 1.0;
  EXPECT_THROW(ga_optimize(p), ValidationError);
  p = small_problem();
  p.roof_area_m2 = 0;
  EXPECT_THROW(grid_oracle(p, 5), ValidationError);
  p = small_problem();
  p.load.pop_back();
  EXPECT_THROW(grid_oracle(p, 5), ValidationError);
  GaConfig bad;
  bad.population = 2;
  EXPECT_THROW(ga_optimize(small_problem(), bad), ValidationError);
}
