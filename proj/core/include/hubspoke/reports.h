#ifndef HUBSPOKE_REPORTS_H_
#define HUBSPOKE_REPORTS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hubspoke/fixtures.h"
#include "hubspoke/json_io.h"
#include "hubspoke/route_optimizer.h"
#include "hubspoke/sim.h"
#include "hubspoke/stats.h"

namespace hubspoke {

// Operated loops for a design: hub, then the design's stops, back to the
// hub. Legs come from the instance matrix and each non-hub stop dwells
// stop_dwell minutes.
std::vector<ServiceRoute> routes_from_design(const RouteDesign& design,
                                             const TransitInstance& inst, int seats = 70,
                                             const std::string& prefix = "Route ");

std::string emit_histogram(const SimReport& report);

struct MetricDelta {
  std::string metric;
  double a = 0.0;
  double b = 0.0;
  double delta = 0.0;  // mean of paired b - a
  Interval bootstrap;
  Interval t;
};

struct ReportDiff {
  std::vector<MetricDelta> metrics;
  const MetricDelta& metric(std::string_view name) const;
};

inline constexpr int kBootstrapResamples = 2000;

// Paired by replication index. Throws when the reports differ in period,
// replication count or seed.
ReportDiff diff_reports(const SimReport& a, const SimReport& b,
                        int resamples = kBootstrapResamples, double level = 0.95);

Json to_json(const ReportDiff& diff);

struct DemandCase {
  int capacity = 40;
  double demand_per_hour = 2625.0;
};

struct StressRow {
  std::string route;
  int buses_before = 0;
  int buses_after = 0;
  SimReport scenario;
  ReportDiff diff;
};

struct ComparisonTable {
  std::vector<DemandCase> cases;
  std::vector<SimReport> reports;  // one per case
  std::vector<StressRow> stress;   // against reports[0]
};

std::string table5_csv(const ComparisonTable& t);
std::string table6_csv(const ComparisonTable& t);
std::string figure4_csv(const ComparisonTable& t);

struct PipelineConfig {
  std::string fixture = "um-2020";
  SolveOptions solver;
  double capacity_fraction = 0.5;
  std::vector<DemandCase> cases = {{40, 2625.0}, {20, 1500.0}, {20, 2625.0}};
  Period period = Period::kAm;
  int replications = 40;
  std::uint64_t seed = 7;
  int stress_removed = 1;
  bool stress = true;
  int threads = 0;
  std::filesystem::path out_dir = "out";
};

std::vector<std::string> validate_pipeline(const PipelineConfig& cfg);

class PipelineError : public Error {
 public:
  PipelineError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// Writes design.json, plan.json, report-case-N.json, stress-<route>.json,
// table5.csv, table6.csv, figure4.csv and a STAGE marker naming the last
// stage reached ("done" on success).
ComparisonTable run_pipeline(const PipelineConfig& cfg);

std::string slug(std::string_view name);

}  // namespace hubspoke

#endif  // HUBSPOKE_REPORTS_H_
