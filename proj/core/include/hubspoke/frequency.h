#ifndef HUBSPOKE_FREQUENCY_H_
#define HUBSPOKE_FREQUENCY_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hubspoke/network.h"

namespace hubspoke {

// A pre-pandemic route and the stops it passed through.
struct LegacyRoute {
  std::string id;
  double headway_min = 10.0;
  int seats = 70;
  std::vector<std::string> stops;

  friend bool operator==(const LegacyRoute&, const LegacyRoute&) = default;
};

struct LegacyService {
  std::string route_id;
  double headway_min = 0.0;
  int seats = 0;
};

struct LegacyCoverage {
  std::vector<LegacyRoute> routes;

  std::vector<LegacyService> services_at(std::string_view stop) const;
  friend bool operator==(const LegacyCoverage&, const LegacyCoverage&) = default;
};

std::vector<std::string> validate_legacy(const LegacyCoverage& cov);

struct VehiclePool {
  std::string kind;
  int seats = 70;
  int available = 0;

  friend bool operator==(const VehiclePool&, const VehiclePool&) = default;
};

struct Fleet {
  std::vector<VehiclePool> pools;
  friend bool operator==(const Fleet&, const Fleet&) = default;
};

struct HeadwayGrid {
  double step_min = 0.5;
  double min_headway = 2.0;
  double max_headway = 60.0;
};

class FrequencyError : public Error {
 public:
  using Error::Error;
};

// Seats per hour the legacy system offered at `stop`.
double legacy_throughput(std::string_view stop, const LegacyCoverage& cov);

// Largest grid headway h such that sum(caps) * 60 / h >= legacy_per_hour.
// All new routes serving the stop share h.
double required_headway(double legacy_per_hour, std::span<const int> new_route_caps,
                        const HeadwayGrid& grid = {});
double required_headway(std::string_view stop, const LegacyCoverage& cov,
                        std::span<const int> new_route_caps,
                        const HeadwayGrid& grid = {});

int usable_capacity(int seats, double capacity_fraction);

struct RouteFrequency {
  std::string route;
  std::string governing_stop;
  double headway_min = 0.0;
  int buses_required = 0;
  int vehicle_seats = 0;
  int usable_capacity = 0;
  double cycle_min = 0.0;
};

struct PoolUsage {
  std::string kind;
  int seats = 0;
  int used = 0;
  int available = 0;
};

struct FrequencyPlan {
  double capacity_fraction = 0.5;
  std::vector<RouteFrequency> routes;
  std::vector<PoolUsage> fleet_usage;
  bool fleet_feasible = true;

  const RouteFrequency& route(std::string_view name) const;
};

// The tightest stop on each route sets its headway. Cycle times come from
// the routes' leg and average dwell columns. Stops without legacy service
// are unconstrained.
FrequencyPlan plan_route_frequencies(std::span<const ServiceRoute> routes,
                                     const LegacyCoverage& legacy,
                                     const Fleet& fleet,
                                     double capacity_fraction,
                                     const HeadwayGrid& grid = {});

// Throws FrequencyError listing per-route bus counts when the plan needs more
// vehicles than the fleet holds.
void require_fleet(const FrequencyPlan& plan);

// Copy of `plan` with `removed` fewer buses on `route`. Throws if the route
// would be left without buses.
FrequencyPlan with_buses_removed(const FrequencyPlan& plan, std::string_view route,
                                 int removed);

}  // namespace hubspoke

#endif  // HUBSPOKE_FREQUENCY_H_
