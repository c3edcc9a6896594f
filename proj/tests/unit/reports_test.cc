#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "hubspoke/reports.h"
#include "unit/test_support.h"

namespace hubspoke {
namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SimReport small_report(std::uint64_t seed, std::optional<BreakdownSpec> breakdown = {}) {
  static const Fixture fx = load_fixture("um-2020");
  SimConfig cfg;
  cfg.usable_cap = 40;
  cfg.demand = fx.demand(Period::kAm, 1500.0);
  cfg.plan = plan_route_frequencies(fx.network.routes, fx.legacy, fx.fleet, 0.5);
  cfg.replications = 6;
  cfg.seed = seed;
  cfg.breakdown = std::move(breakdown);
  return run_simulation(fx.network, cfg);
}

TEST(Histogram, BinsAndFormat) {
  SimReport r;
  r.wait_hist[0].ci.mean = 0.714;
  r.wait_hist[1].ci.mean = 0.2;
  r.wait_hist[2].ci.mean = 0.05;
  r.wait_hist[3].ci.mean = 0.036;
  EXPECT_EQ(emit_histogram(r),
            "bin,fraction\n[0,5),0.71\n[5,10),0.20\n[10,15),0.05\n[15,inf),0.04\n");
}

TEST(Diff, AgainstItselfIsZero) {
  const auto a = small_report(7);
  const auto d = diff_reports(a, a);
  EXPECT_EQ(d.metrics.size(), 8u + 2u * a.routes.size());
  for (const auto& m : d.metrics) {
    EXPECT_EQ(m.delta, 0.0) << m.metric;
    EXPECT_EQ(m.bootstrap.low, 0.0);
    EXPECT_EQ(m.bootstrap.high, 0.0);
    EXPECT_EQ(m.t.low, 0.0);
  }
  EXPECT_THROW(d.metric("nope"), Error);
  EXPECT_NO_THROW(d.metric("u_s:Campus Connector"));
}

TEST(Diff, BreakdownPairsReplications) {
  const auto a = small_report(7);
  const auto b = small_report(7, BreakdownSpec{"Oxford-Markley Loop", 1});
  const auto d = diff_reports(a, b);
  const auto& w = d.metric("avg_wait_min");
  EXPECT_NEAR(w.delta, w.b - w.a, 1e-9);
  EXPECT_LE(w.bootstrap.low, w.delta);
  EXPECT_GE(w.bootstrap.high, w.delta);
  EXPECT_LE(w.t.low, w.delta);
  EXPECT_GE(w.t.high, w.delta);
  const Json j = to_json(d);
  EXPECT_EQ(j["metrics"].size(), d.metrics.size());
}

TEST(Diff, RejectsMismatchedReports) {
  const auto a = small_report(7);
  auto b = a;
  b.seed = 9;
  EXPECT_THROW(diff_reports(a, b), Error);
  b = a;
  b.period = "noon";
  EXPECT_THROW(diff_reports(a, b), Error);
  b = a;
  b.replications = 5;
  EXPECT_THROW(diff_reports(a, b), Error);
  b = a;
  b.routes.pop_back();
  EXPECT_THROW(diff_reports(a, b), Error);
}

TEST(Tables, CsvShapes) {
  ComparisonTable t;
  t.cases = {{40, 1500.0}};
  t.reports = {small_report(7)};
  const auto csv5 = table5_csv(t);
  EXPECT_EQ(csv5.rfind("metric,C=40 D=1500\n", 0), 0u);
  EXPECT_NE(csv5.find("\navg wait time (min),"), std::string::npos);
  EXPECT_NE(csv5.find("\nU_s all routes,"), std::string::npos);
  const auto fig = figure4_csv(t);
  EXPECT_EQ(fig.rfind("case,bin,fraction\n\"C=40 D=1500\",[0,5),", 0), 0u);
  EXPECT_EQ(table6_csv(t),
            "route,buses_before,buses_after,baseline_wait_min,breakdown_wait_min,delta_min,"
            "ci_low,ci_high\n");
}

TEST(Slug, Names) {
  EXPECT_EQ(slug("Green Rd-NW5 Loop"), "green-rd-nw5-loop");
  EXPECT_EQ(slug("  Campus  Connector "), "campus-connector");
}

TEST(DesignedRoutes, LoopThroughHub) {
  auto inst = testing::uniform_instance(3, 2.0);
  inst.stop_dwell = 0.5;
  RouteDesign d;
  d.routes = {{1, {"s2", "s0"}, 0.0}};
  const auto routes = routes_from_design(d, inst, 35);
  ASSERT_EQ(routes.size(), 1u);
  const auto& r = routes[0];
  EXPECT_EQ(r.name, "Route 2");
  EXPECT_EQ(r.stops, (std::vector<std::string>{"hub", "s2", "s0"}));
  EXPECT_EQ(r.leg_minutes, (std::vector<double>{2.0, 2.0, 2.0}));
  EXPECT_DOUBLE_EQ(r.cycle_minutes(), route_duration(d.routes[0].stops, inst));
  EXPECT_EQ(r.vehicle_seats, 35);
}

TEST(Pipeline, EmptyCasesFailAtConfig) {
  PipelineConfig cfg;
  cfg.cases.clear();
  try {
    run_pipeline(cfg);
    FAIL();
  } catch (const PipelineError& e) {
    EXPECT_EQ(e.stage(), "config");
  }
}

TEST(Pipeline, SmallRunIsIdempotent) {
  const auto dir = std::filesystem::temp_directory_path() / "hubspoke-pipeline-test";
  std::filesystem::remove_all(dir);
  PipelineConfig cfg;
  cfg.solver.mode = SolveMode::kHeuristic;
  cfg.cases = {{40, 600.0}, {20, 600.0}};
  cfg.replications = 3;
  cfg.out_dir = dir;
  const auto t = run_pipeline(cfg);
  EXPECT_EQ(t.reports.size(), 2u);
  EXPECT_EQ(t.stress.size(), 6u);
  EXPECT_EQ(slurp(dir / "STAGE"), "done\n");
  for (const char* f : {"design.json", "plan.json", "report-case-1.json", "report-case-2.json",
                        "stress-northwood-loop.json", "table5.csv", "table6.csv",
                        "figure4.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  const auto first5 = slurp(dir / "table5.csv");
  const auto first6 = slurp(dir / "table6.csv");
  const auto design = slurp(dir / "design.json");
  run_pipeline(cfg);
  EXPECT_EQ(slurp(dir / "table5.csv"), first5);
  EXPECT_EQ(slurp(dir / "table6.csv"), first6);
  EXPECT_EQ(slurp(dir / "design.json"), design);
  std::filesystem::remove_all(dir);
}

TEST(Pipeline, FailureRecordsStage) {
  const auto dir = std::filesystem::temp_directory_path() / "hubspoke-pipeline-fail";
  std::filesystem::remove_all(dir);
  PipelineConfig cfg;
  cfg.solver.mode = SolveMode::kHeuristic;
  cfg.fixture = "nowhere";
  cfg.out_dir = dir;
  EXPECT_THROW(run_pipeline(cfg), PipelineError);
  EXPECT_EQ(slurp(dir / "STAGE"), "config\n");
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace hubspoke
