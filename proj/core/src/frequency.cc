#include "hubspoke/frequency.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace hubspoke {
namespace {

constexpr double kEps = 1e-9;

int ceil_div(double cycle, double headway) {
  return static_cast<int>(std::ceil(cycle / headway - kEps));
}

}  // namespace

std::vector<LegacyService> LegacyCoverage::services_at(std::string_view stop) const {
  std::vector<LegacyService> out;
  for (const auto& r : routes) {
    if (std::find(r.stops.begin(), r.stops.end(), stop) != r.stops.end()) {
      out.push_back({r.id, r.headway_min, r.seats});
    }
  }
  return out;
}

std::vector<std::string> validate_legacy(const LegacyCoverage& cov) {
  std::vector<std::string> out;
  for (const auto& r : cov.routes) {
    if (!(r.headway_min > 0.0)) out.push_back("legacy route " + r.id + " headway <= 0");
    if (r.seats <= 0) out.push_back("legacy route " + r.id + " seats <= 0");
  }
  return out;
}

double legacy_throughput(std::string_view stop, const LegacyCoverage& cov) {
  const auto services = cov.services_at(stop);
  if (services.empty()) {
    throw FrequencyError("stop " + std::string(stop) + " has no legacy service");
  }
  double total = 0.0;
  for (const auto& s : services) total += s.seats * (60.0 / s.headway_min);
  return total;
}

double required_headway(double legacy_per_hour, std::span<const int> new_route_caps,
                        const HeadwayGrid& grid) {
  if (new_route_caps.empty()) throw FrequencyError("stop served by no new route");
  const double caps = std::accumulate(new_route_caps.begin(), new_route_caps.end(), 0.0);
  if (legacy_per_hour <= 0.0) return grid.max_headway;
  if (caps <= 0.0) throw FrequencyError("new routes have no usable capacity");
  // Walk the grid downward from the largest value not above the bound.
  const double bound = caps * 60.0 / legacy_per_hour;
  const double steps = std::floor((std::min(bound, grid.max_headway) - grid.min_headway) /
                                      grid.step_min + kEps);
  if (steps < 0.0) {
    std::ostringstream msg;
    msg << "legacy throughput " << legacy_per_hour << "/h needs headway " << bound
        << " min, below the " << grid.min_headway << " min floor";
    throw FrequencyError(msg.str());
  }
  return grid.min_headway + steps * grid.step_min;
}

double required_headway(std::string_view stop, const LegacyCoverage& cov,
                        std::span<const int> new_route_caps, const HeadwayGrid& grid) {
  const double legacy =
      cov.services_at(stop).empty() ? 0.0 : legacy_throughput(stop, cov);
  try {
    return required_headway(legacy, new_route_caps, grid);
  } catch (const FrequencyError& e) {
    throw FrequencyError("bottleneck stop " + std::string(stop) + ": " + e.what());
  }
}

int usable_capacity(int seats, double capacity_fraction) {
  return static_cast<int>(std::floor(capacity_fraction * seats + kEps));
}

const RouteFrequency& FrequencyPlan::route(std::string_view name) const {
  for (const auto& r : routes) {
    if (r.route == name) return r;
  }
  throw Error("route not in frequency plan: " + std::string(name));
}

FrequencyPlan plan_route_frequencies(std::span<const ServiceRoute> routes,
                                     const LegacyCoverage& legacy, const Fleet& fleet,
                                     double capacity_fraction, const HeadwayGrid& grid) {
  if (!(capacity_fraction > 0.0 && capacity_fraction <= 1.0)) {
    throw FrequencyError("capacity fraction must be in (0, 1]");
  }
  FrequencyPlan plan;
  plan.capacity_fraction = capacity_fraction;

  // Usable seats of every new route passing each stop.
  std::map<std::string, std::vector<int>> caps_at;
  for (const auto& r : routes) {
    const int cap = usable_capacity(r.vehicle_seats, capacity_fraction);
    std::set<std::string> seen;
    for (const auto& s : r.stops) {
      if (seen.insert(s).second) caps_at[s].push_back(cap);
    }
  }

  for (const auto& r : routes) {
    RouteFrequency rf;
    rf.route = r.name;
    rf.vehicle_seats = r.vehicle_seats;
    rf.usable_capacity = usable_capacity(r.vehicle_seats, capacity_fraction);
    rf.cycle_min = r.cycle_minutes();
    rf.headway_min = grid.max_headway;
    for (const auto& s : r.stops) {
      const double h = required_headway(s, legacy, caps_at.at(s), grid);
      if (h < rf.headway_min) {
        rf.headway_min = h;
        rf.governing_stop = s;
      }
    }
    rf.buses_required = std::max(1, ceil_div(rf.cycle_min, rf.headway_min));
    plan.routes.push_back(rf);
  }

  std::map<int, int> used_by_seats;
  for (const auto& rf : plan.routes) used_by_seats[rf.vehicle_seats] += rf.buses_required;
  for (const auto& pool : fleet.pools) {
    PoolUsage u{pool.kind, pool.seats, used_by_seats[pool.seats], pool.available};
    if (u.used > u.available) plan.fleet_feasible = false;
    plan.fleet_usage.push_back(u);
    used_by_seats.erase(pool.seats);
  }
  for (const auto& [seats, used] : used_by_seats) {
    if (used == 0) continue;
    plan.fleet_usage.push_back({"unlisted", seats, used, 0});
    plan.fleet_feasible = false;
  }
  return plan;
}

void require_fleet(const FrequencyPlan& plan) {
  if (plan.fleet_feasible) return;
  std::ostringstream msg;
  msg << "fleet exceeded:";
  for (const auto& u : plan.fleet_usage) {
    msg << " " << u.kind << " " << u.used << "/" << u.available << ";";
  }
  for (const auto& r : plan.routes) msg << " " << r.route << "=" << r.buses_required;
  throw FrequencyError(msg.str());
}

FrequencyPlan with_buses_removed(const FrequencyPlan& plan, std::string_view route,
                                 int removed) {
  if (removed < 0) throw FrequencyError("cannot remove a negative number of buses");
  FrequencyPlan out = plan;
  for (auto& r : out.routes) {
    if (r.route != route) continue;
    if (removed > 0 && r.buses_required - removed < 1) {
      throw FrequencyError("route " + r.route + " operates " +
                           std::to_string(r.buses_required) +
                           " bus(es); removing " + std::to_string(removed) +
                           " would leave none");
    }
    r.buses_required -= removed;
    return out;
  }
  throw FrequencyError("route not in plan: " + std::string(route));
}

}  // namespace hubspoke
