#include <algorithm>
#include <array>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "hubspoke/fixtures.h"
#include "hubspoke/route_optimizer.h"
#include "oracles/route_enumerator.h"
#include "unit/test_support.h"

namespace hubspoke {
namespace {

using testing::contains;
using testing::uniform_instance;

std::vector<std::pair<std::vector<std::string>, int>> design_key(const RouteDesign& d) {
  std::vector<std::pair<std::vector<std::string>, int>> key;
  for (const auto& r : d.routes) key.emplace_back(r.stops, r.index);
  std::sort(key.begin(), key.end());
  return key;
}

bool row_holds(const Constraint& c, const std::vector<double>& x) {
  double s = 0.0;
  for (auto [v, a] : c.terms) s += a * x[static_cast<std::size_t>(v)];
  switch (c.sense) {
    case lp::RowSense::kLe: return s <= c.rhs + 1e-12;
    case lp::RowSense::kGe: return s >= c.rhs - 1e-12;
    case lp::RowSense::kEq: return std::abs(s - c.rhs) <= 1e-12;
  }
  return false;
}

TEST(RouteModel, VariableBlockSizes) {
  const auto rm = build_model(uniform_instance(4, 1.0, 2, 3));
  EXPECT_EQ(rm.x_count(), 2);
  EXPECT_EQ(rm.y_count(), 8);
  EXPECT_EQ(rm.u_count(), 5 * 2 * 3);
  EXPECT_EQ(rm.z_count(), 5 * 5 * 2 * 2);
  EXPECT_EQ(static_cast<std::int64_t>(rm.model().vars.size()),
            rm.x_count() + rm.y_count() + rm.u_count() + rm.z_count());
  std::set<int> seen;
  for (int j = 0; j < 2; ++j) {
    seen.insert(rm.x(j));
    for (int i = 0; i < 4; ++i) seen.insert(rm.y(i, j));
    for (int k = 0; k < 3; ++k) {
      for (int i = 0; i <= 4; ++i) seen.insert(rm.u(i, k, j));
    }
    for (int k = 0; k < 2; ++k) {
      for (int a = 0; a <= 4; ++a) {
        for (int b = 0; b <= 4; ++b) seen.insert(rm.z(a, b, k, j));
      }
    }
  }
  EXPECT_EQ(seen.size(), rm.model().vars.size());
}

TEST(RouteModel, TooLargeIsRefusedWithCounts) {
  ModelOptions opts;
  opts.max_variables = 50;
  try {
    build_model(uniform_instance(4, 1.0, 2, 3), opts);
    FAIL() << "expected ModelTooLargeError";
  } catch (const ModelTooLargeError& e) {
    EXPECT_NE(std::string(e.what()).find("|I|=4"), std::string::npos);
  }
}

// Every (u1, u2, z) in {0,1}^3 satisfies the three envelope rows iff z = u1*u2.
TEST(RouteModel, McCormickEnvelopeIsExactOnBinaries) {
  const auto rm = build_model(uniform_instance(2, 1.0, 1, 3));
  const auto& m = rm.model();
  int checked = 0;
  for (int k = 0; k + 1 < rm.visits(); ++k) {
    for (int i1 = 0; i1 <= rm.stops(); ++i1) {
      for (int i2 = 0; i2 <= rm.stops(); ++i2) {
        const int zv = rm.z(i1, i2, k, 0);
        std::vector<const Constraint*> rows;
        for (const auto& c : m.constraints) {
          if (c.family.rfind("mccormick", 0) != 0) continue;
          for (auto [v, a] : c.terms) {
            if (v == zv) rows.push_back(&c);
          }
        }
        ASSERT_EQ(rows.size(), 3u);
        for (int bits = 0; bits < 8; ++bits) {
          std::vector<double> x(m.vars.size(), 0.0);
          const int u1 = bits & 1;
          const int u2 = (bits >> 1) & 1;
          const int z = (bits >> 2) & 1;
          x[static_cast<std::size_t>(rm.u(i1, k, 0))] = u1;
          x[static_cast<std::size_t>(rm.u(i2, k + 1, 0))] = u2;
          x[static_cast<std::size_t>(zv)] = z;
          bool all = true;
          for (const auto* c : rows) all = all && row_holds(*c, x);
          EXPECT_EQ(all, z == u1 * u2) << "u1=" << u1 << " u2=" << u2 << " z=" << z;
          ++checked;
        }
      }
    }
  }
  EXPECT_EQ(checked, 2 * 9 * 8);
}

TEST(RouteModel, AllZeroWithoutCoverageCostsNothing) {
  ModelOptions opts;
  opts.coverage = false;
  const auto rm = build_model(uniform_instance(3, 2.0, 2, 2), opts);
  const std::vector<double> zero(rm.model().vars.size(), 0.0);
  EXPECT_TRUE(rm.model().violations(zero).empty());
  EXPECT_EQ(rm.model().objective(zero), 0.0);
}

TEST(RouteModel, EncodeDecodeRoundTrip) {
  auto inst = uniform_instance(4, 1.5, 2, 3);
  inst.stop_dwell = 0.5;
  const auto rm = build_model(inst);
  RouteDesign d;
  d.routes = {{0, {"s2", "s0"}, 0.0}, {1, {"s1", "s3"}, 0.0}};
  for (auto& r : d.routes) r.duration_min = route_duration(r.stops, inst);
  d.objective = objective_value(d, inst);
  const auto x = rm.encode(d);
  EXPECT_TRUE(rm.model().violations(x).empty());
  EXPECT_DOUBLE_EQ(rm.model().objective(x), d.objective.total);
  EXPECT_EQ(rm.decode(x), d);
  // Each loop: three 1.5-min legs plus two 0.5-min dwells.
  EXPECT_DOUBLE_EQ(d.objective.fixed, 20.0);
  EXPECT_DOUBLE_EQ(d.objective.time, (3 * 1.5 + 1.0) * 2);
}

TEST(RouteModel, TimeCapRowCatchesLongRoute) {
  auto inst = uniform_instance(3, 2.0, 1, 3);
  inst.time_cap = 7.0;
  const auto rm = build_model(inst);
  RouteDesign d;
  d.routes = {{0, {"s0", "s1", "s2"}, 8.0}};
  const auto v = rm.model().violations(rm.encode(d));
  EXPECT_NE(std::find(v.begin(), v.end(), "time-cap"), v.end());
  EXPECT_TRUE(contains(check_design(d, inst), "time cap exceeded"));
}

TEST(CheckDesign, ReportsStructuralProblems) {
  const auto inst = uniform_instance(3, 1.0, 1, 2);
  RouteDesign d;
  d.routes = {{0, {"s0", "s0", "s1"}, 0.0}, {0, {}, 0.0}, {5, {"hub"}, 0.0}};
  const auto msgs = check_design(d, inst);
  for (const char* m : {"more routes than candidate routes", "duplicate visit s0",
                        "too many visits", "duplicate route index", "empty route",
                        "index out of range", "unknown stop hub",
                        "required stop s2 not covered"}) {
    EXPECT_TRUE(contains(msgs, m)) << m;
  }
}

TEST(ObviousInfeasibility, RoundTripBeyondCapAndSlotShortage) {
  auto inst = uniform_instance(3, 5.0, 1, 2);
  inst.time_cap = 9.0;
  EXPECT_FALSE(obvious_infeasibility(inst, true).empty());
  EXPECT_TRUE(obvious_infeasibility(inst, false).empty());
  inst.time_cap = 100.0;
  EXPECT_FALSE(obvious_infeasibility(inst, true).empty());  // 3 required, 2 slots
  EXPECT_THROW(solve_exact(build_model(inst)), InfeasibleError);
  EXPECT_THROW(solve_heuristic(inst), InfeasibleError);
}

TEST(SolveExact, InfeasibleFoundBySearch) {
  // Each stop alone fits, but any two together exceed the cap; one route.
  auto inst = uniform_instance(2, 3.0, 1, 2);
  inst.time_cap = 8.0;
  SolveOptions opts;
  opts.warm_start = false;
  EXPECT_THROW(solve_exact(build_model(inst), opts), InfeasibleError);
}

TEST(SolveExact, MatchesEnumeratorOnRandomInstances) {
  std::mt19937_64 rng(31337);
  int feasible = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = oracle::random_instance(rng, 4, 2, 3);
    const auto expected = oracle::enumerate_designs(inst);
    if (!expected.feasible) {
      EXPECT_THROW(solve_exact(build_model(inst)), InfeasibleError) << "trial " << trial;
      continue;
    }
    ++feasible;
    const auto res = solve_exact(build_model(inst));
    EXPECT_EQ(res.design.objective.total, expected.objective) << "trial " << trial;
    EXPECT_EQ(design_key(res.design), oracle::tie_key(inst, expected.routes)) << "trial " << trial;
    EXPECT_EQ(res.certificate.status, BnbStatus::kOptimal);
    EXPECT_TRUE(check_design(res.design, inst).empty());
  }
  EXPECT_GT(feasible, 5);
}

TEST(SolveExact, ZeroAlphaKeepsTimeCap) {
  auto inst = uniform_instance(3, 2.0, 2, 3);
  inst.alpha = 0.0;
  inst.time_cap = 6.0;  // at most two stops per loop
  const auto res = solve_exact(build_model(inst));
  EXPECT_TRUE(check_design(res.design, inst).empty());
  EXPECT_DOUBLE_EQ(res.design.objective.total, 20.0);
}

TEST(SolveExact, SymmetryBreakingKeepsObjective) {
  std::mt19937_64 rng(5);
  int compared = 0;
  for (int trial = 0; trial < 20 && compared < 6; ++trial) {
    auto inst = oracle::random_instance(rng, 4, 2, 3);
    inst.route_fixed_cost = {7.0};
    if (!oracle::enumerate_designs(inst).feasible) continue;
    SolveOptions opts;
    const double plain = solve_exact(build_model(inst), opts).design.objective.total;
    ModelOptions mo;
    mo.symmetry_breaking = true;
    opts.symmetry_breaking = true;
    const auto sym = solve_exact(build_model(inst, mo), opts);
    EXPECT_EQ(sym.design.objective.total, plain);
    EXPECT_TRUE(check_design(sym.design, inst).empty());
    ++compared;
  }
  EXPECT_GT(compared, 0);
}

TEST(SolveExact, EqualOptimaResolveDeterministically) {
  const auto inst = uniform_instance(3, 1.0, 2, 3);
  const auto a = solve_exact(build_model(inst));
  const auto b = solve_exact(build_model(inst));
  EXPECT_EQ(a.design, b.design);
  EXPECT_EQ(design_key(a.design),
            oracle::tie_key(inst, oracle::enumerate_designs(inst).routes));
  SolveOptions cold;
  cold.warm_start = false;
  EXPECT_EQ(solve_exact(build_model(inst), cold).design, a.design);
}

TEST(SolveExact, TinyBudgetKeepsWarmStart) {
  const auto fx = load_fixture("um-2020");
  SolveOptions opts;
  opts.time_budget_s = 1e-6;
  const auto res = solve_exact(build_model(fx.north_instance), opts);
  EXPECT_EQ(res.certificate.status, BnbStatus::kBudgetExhausted);
  EXPECT_TRUE(check_design(res.design, fx.north_instance).empty());
  EXPECT_LE(res.certificate.best_bound, res.certificate.incumbent);
  opts.warm_start = false;
  EXPECT_THROW(solve_exact(build_model(fx.north_instance), opts), Error);
}

TEST(SolveExact, RejectsBadOptions) {
  const auto rm = build_model(uniform_instance(2, 1.0));
  SolveOptions opts;
  opts.time_budget_s = 0.0;
  EXPECT_THROW(solve_exact(rm, opts), Error);
  opts = {};
  opts.mode = SolveMode::kHeuristic;
  EXPECT_THROW(solve_exact(rm, opts), Error);
}

TEST(Heuristic, FeasibleAndNeverBelowOptimum) {
  std::mt19937_64 rng(77);
  int solved = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const auto inst = oracle::random_instance(rng, 5, 2, 4);
    const auto best = oracle::enumerate_designs(inst);
    RouteDesign d;
    try {
      d = solve_heuristic(inst);
    } catch (const InfeasibleError&) {
      continue;  // the heuristic may miss a feasible design; never the reverse
    }
    ASSERT_TRUE(best.feasible) << "trial " << trial;
    EXPECT_TRUE(check_design(d, inst).empty()) << "trial " << trial;
    EXPECT_GE(d.objective.total, best.objective);
    ++solved;
  }
  EXPECT_GT(solved, 5);
}

TEST(Heuristic, SeededRestartsAreDeterministic) {
  const auto fx = load_fixture("um-2020");
  SolveOptions opts;
  opts.mode = SolveMode::kHeuristic;
  opts.seed = 3;
  const auto a = solve_heuristic(fx.north_instance, opts);
  EXPECT_EQ(a, solve_heuristic(fx.north_instance, opts));
  EXPECT_TRUE(check_design(a, fx.north_instance).empty());
  opts.restarts = 0;
  EXPECT_THROW(solve_heuristic(fx.north_instance, opts), Error);
}

TEST(Heuristic, NorthInstanceSplitsIntoTwoLoops) {
  const auto fx = load_fixture("um-2020");
  const auto d = solve_heuristic(fx.north_instance);
  EXPECT_EQ(d.routes.size(), 2u);
  for (const auto& r : d.routes) EXPECT_LE(r.duration_min, fx.north_instance.time_cap);
}

TEST(DesignOrder, SortsByStopsThenIndex) {
  RouteDesign a;
  a.routes = {{1, {"a"}, 0.0}};
  RouteDesign b;
  b.routes = {{0, {"b"}, 0.0}};
  EXPECT_TRUE(design_less(a, b));
  EXPECT_FALSE(design_less(b, a));
  EXPECT_FALSE(design_less(a, a));
}

}  // namespace
}  // namespace hubspoke
