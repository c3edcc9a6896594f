#ifndef HUBSPOKE_SIM_H_
#define HUBSPOKE_SIM_H_

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hubspoke/frequency.h"
#include "hubspoke/network.h"
#include "hubspoke/stats.h"
#include "hubspoke/transit_graph.h"

namespace hubspoke {

class SimulationError : public Error {
 public:
  using Error::Error;
};

struct Arrival {
  double time = 0.0;  // minutes from the start of the period
  int origin = 0;
  int dest = 0;

  friend bool operator==(const Arrival&, const Arrival&) = default;
};

// Poisson arrivals per O-D row at total_per_hour * share, plus a uniform
// component whose origin is any stop and whose destination is any other
// stop. `routable` rejects pairs for resampling. Sorted by time.
std::vector<Arrival> sample_arrivals(const DemandSpec& demand,
                                     std::span<const std::string> stop_ids,
                                     std::mt19937_64& rng,
                                     const std::function<bool(int, int)>& routable = {});

struct DwellRules {
  double idle_min = 0.0;
  double activity_min = 1.0;
  double busy_min = 2.0;
  int busy_threshold = 10;  // strictly more loaded + unloaded is busy
};

double dwell_minutes(const DwellRules& rules, int loaded, int unloaded, bool hub);

// Share of seats in use; 0.75 and above counts as overloaded.
double utilization(int curr_cap, int max_cap);
bool overloaded(int curr_cap, int max_cap);

struct BreakdownSpec {
  std::string route;
  int removed = 1;
};

struct SimConfig {
  int usable_cap = 40;
  DemandSpec demand;
  std::string period = "am";
  FrequencyPlan plan;
  DwellRules dwell;
  double transfer_walk_min = 0.5;
  GraphOptions graph;
  int replications = 40;
  std::uint64_t seed = 7;
  std::optional<BreakdownSpec> breakdown;
  int threads = 0;  // 0 picks the hardware concurrency
};

std::vector<std::string> validate_config(const SimConfig& cfg);

inline constexpr int kWaitBins = 4;
inline constexpr std::array<double, kWaitBins> kWaitBinEdges = {0.0, 5.0, 10.0, 15.0};
int wait_bin(double wait_min);

struct SegmentTally {
  double util_sum = 0.0;
  std::int64_t segments = 0;
  std::int64_t overloaded = 0;

  double u_s() const { return segments ? util_sum / static_cast<double>(segments) : 0.0; }
  double s75() const {
    return segments ? static_cast<double>(overloaded) / static_cast<double>(segments) : 0.0;
  }
};

struct AuditCounts {
  std::int64_t capacity = 0;
  std::int64_t fifo = 0;
  std::int64_t timestamp = 0;
  std::int64_t conservation = 0;

  std::int64_t total() const { return capacity + fifo + timestamp + conservation; }
};

struct CompletedTrip {
  int origin = 0;
  int dest = 0;
  double arrival = 0.0;
  double exit = 0.0;
  double on_bus = 0.0;
  int transfers = 0;

  double total() const { return exit - arrival; }
  double wait() const { return total() - on_bus; }
};

struct ReplicationResult {
  int index = 0;
  std::vector<SegmentTally> routes;
  SegmentTally overall;

  std::int64_t created = 0;
  std::int64_t exited = 0;
  std::int64_t onboard_at_end = 0;
  std::int64_t waiting_at_end = 0;  // includes walkers

  double avg_total = 0.0;
  double avg_wait = 0.0;
  double avg_wait_all = 0.0;  // every created passenger, waits up to the horizon
  double avg_on_bus = 0.0;
  double avg_transfers = 0.0;
  double pct_transfers = 0.0;  // percent of completed trips
  std::array<double, kWaitBins> wait_hist{};  // fractions of completed trips

  std::vector<CompletedTrip> trips;
  AuditCounts audits;
  std::int64_t equivalent_skips = 0;  // buses passed up that also served the leg
  std::int64_t events = 0;
};

struct MetricSummary {
  Interval ci;
  std::vector<double> per_rep;
};

struct RouteSummary {
  std::string route;
  int buses = 0;
  double headway_min = 0.0;
  MetricSummary u_s;
  MetricSummary s75;
};

struct SimReport {
  int usable_cap = 0;
  double demand_per_hour = 0.0;
  std::string period;
  int replications = 0;
  std::uint64_t seed = 0;
  std::optional<BreakdownSpec> breakdown;

  std::vector<RouteSummary> routes;
  RouteSummary overall;
  MetricSummary avg_total;
  MetricSummary avg_wait;
  MetricSummary avg_wait_all;
  MetricSummary avg_on_bus;
  MetricSummary avg_transfers;
  MetricSummary pct_transfers;
  std::array<MetricSummary, kWaitBins> wait_hist;
  std::int64_t created = 0;
  std::int64_t exited = 0;
  AuditCounts audits;
  std::int64_t equivalent_skips = 0;
};

class Simulator {
 public:
  Simulator(const TransitNetwork& net, const SimConfig& cfg);

  const SimConfig& config() const { return cfg_; }
  const FrequencyPlan& effective_plan() const { return plan_; }
  const RoutingGraph& graph() const { return *graph_; }

  ReplicationResult run_replication(int index) const;
  std::vector<ReplicationResult> run_all() const;
  SimReport run() const;

 private:
  TransitNetwork net_;
  SimConfig cfg_;
  FrequencyPlan plan_;
  std::unique_ptr<RoutingGraph> graph_;
  std::unique_ptr<PlanCache> cache_;
};

SimReport summarize(const SimConfig& cfg, const FrequencyPlan& plan,
                    const TransitNetwork& net, const std::vector<ReplicationResult>& reps);

SimReport run_simulation(const TransitNetwork& net, const SimConfig& cfg);

struct BreakdownResult {
  SimReport baseline;
  SimReport scenario;
};

// Paired run: identical arrival streams, `removed` fewer buses on `route`.
BreakdownResult run_breakdown(const TransitNetwork& net, const SimConfig& cfg,
                              const std::string& route, int removed);

}  // namespace hubspoke

#endif  // HUBSPOKE_SIM_H_
