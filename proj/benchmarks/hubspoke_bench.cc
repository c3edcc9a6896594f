#include <random>

#include <benchmark/benchmark.h>

#include "hubspoke/fixtures.h"
#include "hubspoke/lp.h"
#include "hubspoke/route_optimizer.h"
#include "hubspoke/sim.h"
#include "hubspoke/transit_graph.h"

namespace hubspoke {
namespace {

TransitInstance grid_instance(int stops, int routes, int visits) {
  TransitInstance inst;
  for (int i = 0; i < stops; ++i) {
    inst.stops.push_back({"s" + std::to_string(i), "", false});
    inst.required_stops.push_back(inst.stops.back().id);
  }
  inst.hub = {"hub", "", true};
  inst.route_count = routes;
  inst.max_visits = visits;
  inst.route_fixed_cost = {20.0};
  inst.stop_dwell = 0.5;
  inst.time_cap = 20.0;
  inst.travel = TravelTimeMatrix(static_cast<std::size_t>(stops + 1));
  for (int a = 0; a <= stops; ++a) {
    for (int b = 0; b <= stops; ++b) {
      inst.travel.set(static_cast<std::size_t>(a), static_cast<std::size_t>(b),
                      a == b ? 0.0 : 1.0 + 0.25 * ((a * 7 + b * 3) % 9));
    }
  }
  return inst;
}

void BM_LpRelaxation(benchmark::State& state) {
  const auto rm = build_model(grid_instance(static_cast<int>(state.range(0)), 2, 4));
  lp::Problem p;
  for (const auto& v : rm.model().vars) p.add_var(v.cost, v.lower, v.upper);
  for (const auto& c : rm.model().constraints) p.rows.push_back({c.terms, c.sense, c.rhs});
  for (auto _ : state) {
    lp::DualSimplex s(p);
    benchmark::DoNotOptimize(s.solve());
  }
}
BENCHMARK(BM_LpRelaxation)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_SolveExact(benchmark::State& state) {
  const auto rm = build_model(grid_instance(static_cast<int>(state.range(0)), 2, 4));
  for (auto _ : state) benchmark::DoNotOptimize(solve_exact(rm).design.objective.total);
}
BENCHMARK(BM_SolveExact)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_Heuristic(benchmark::State& state) {
  const auto fx = load_fixture("um-2020");
  SolveOptions opts;
  opts.mode = SolveMode::kHeuristic;
  for (auto _ : state) benchmark::DoNotOptimize(solve_heuristic(fx.north_instance, opts));
}
BENCHMARK(BM_Heuristic)->Unit(benchmark::kMillisecond);

void BM_RoutingPlan(benchmark::State& state) {
  const auto fx = load_fixture("um-2020");
  const auto plan = plan_route_frequencies(fx.network.routes, fx.legacy, fx.fleet, 0.5);
  const RoutingGraph g(fx.network, plan);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> pick(0, g.stop_count() - 1);
  for (auto _ : state) benchmark::DoNotOptimize(g.plan(pick(rng), pick(rng)));
}
BENCHMARK(BM_RoutingPlan);

void BM_SimReplication(benchmark::State& state) {
  const auto fx = load_fixture("um-2020");
  SimConfig cfg;
  cfg.usable_cap = 40;
  cfg.demand = fx.demand(Period::kAm, static_cast<double>(state.range(0)));
  cfg.plan = plan_route_frequencies(fx.network.routes, fx.legacy, fx.fleet, 0.5);
  const Simulator sim(fx.network, cfg);
  int rep = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sim.run_replication(rep++).events);
}
BENCHMARK(BM_SimReplication)->Arg(1500)->Arg(2625)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace hubspoke

BENCHMARK_MAIN();
