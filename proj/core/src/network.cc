#include "hubspoke/network.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace hubspoke {
namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::string describe_pair(const TransitInstance& inst, std::size_t a,
                          std::size_t b) {
  return inst.node_id(static_cast<int>(a)) + " -> " +
         inst.node_id(static_cast<int>(b));
}

}  // namespace

TravelTimeMatrix::TravelTimeMatrix(std::size_t nodes)
    : nodes_(nodes), minutes_(nodes * nodes, kMissing) {
  for (std::size_t i = 0; i < nodes; ++i) minutes_[i * nodes + i] = 0.0;
}

bool TravelTimeMatrix::has(std::size_t from, std::size_t to) const {
  return from < nodes_ && to < nodes_ && !std::isnan(minutes_[from * nodes_ + to]);
}

double TravelTimeMatrix::at(std::size_t from, std::size_t to) const {
  if (from >= nodes_ || to >= nodes_) {
    throw Error("travel time index out of range");
  }
  return minutes_[from * nodes_ + to];
}

void TravelTimeMatrix::set(std::size_t from, std::size_t to, double minutes) {
  if (from >= nodes_ || to >= nodes_) {
    throw Error("travel time index out of range");
  }
  minutes_[from * nodes_ + to] = minutes;
}

bool operator==(const TravelTimeMatrix& a, const TravelTimeMatrix& b) {
  if (a.nodes_ != b.nodes_) return false;
  for (std::size_t i = 0; i < a.minutes_.size(); ++i) {
    const double x = a.minutes_[i];
    const double y = b.minutes_[i];
    if (std::isnan(x) != std::isnan(y)) return false;
    if (!std::isnan(x) && x != y) return false;
  }
  return true;
}

const std::string& TransitInstance::node_id(int index) const {
  if (index == hub_index()) return hub.id;
  if (index < 0 || index > hub_index()) throw Error("node index out of range");
  return stops[static_cast<std::size_t>(index)].id;
}

std::optional<int> TransitInstance::index_of(std::string_view id) const {
  if (id == hub.id) return hub_index();
  for (std::size_t i = 0; i < stops.size(); ++i) {
    if (stops[i].id == id) return static_cast<int>(i);
  }
  return std::nullopt;
}

int TransitInstance::require_index(std::string_view id) const {
  auto idx = index_of(id);
  if (!idx) throw UnknownStopError(id);
  return *idx;
}

double TransitInstance::fixed_cost(int route) const {
  if (route_fixed_cost.empty()) return 0.0;
  if (route_fixed_cost.size() == 1) return route_fixed_cost.front();
  return route_fixed_cost.at(static_cast<std::size_t>(route));
}

bool TransitInstance::uniform_fixed_cost() const {
  return std::all_of(route_fixed_cost.begin(), route_fixed_cost.end(),
                     [&](double c) { return c == route_fixed_cost.front(); });
}

std::vector<std::string> validate_instance(const TransitInstance& inst) {
  std::vector<std::string> out;
  if (inst.route_count < 1) out.push_back("route count must be >= 1");
  if (inst.max_visits < 1) out.push_back("max visits must be >= 1");
  if (!(inst.time_cap > 0.0)) out.push_back("time cap must be positive");
  if (!(inst.stop_dwell >= 0.0)) out.push_back("negative stop dwell");
  if (!(inst.alpha >= 0.0)) out.push_back("negative alpha");
  if (inst.route_fixed_cost.size() != 1 &&
      inst.route_fixed_cost.size() != static_cast<std::size_t>(inst.route_count)) {
    out.push_back("fixed cost needs one value or one per route");
  }
  for (double c : inst.route_fixed_cost) {
    if (!(c >= 0.0)) {
      out.push_back("negative fixed cost");
      break;
    }
  }
  if (!inst.hub.is_hub) out.push_back("hub stop not flagged as hub");

  std::set<std::string> ids{inst.hub.id};
  for (const Stop& s : inst.stops) {
    if (!ids.insert(s.id).second) out.push_back("duplicate stop id " + s.id);
    if (s.is_hub) out.push_back("candidate stop " + s.id + " flagged as hub");
  }
  if (inst.required_stops.empty()) out.push_back("empty required set");
  for (const std::string& r : inst.required_stops) {
    auto idx = inst.index_of(r);
    if (!idx || *idx == inst.hub_index()) {
      out.push_back("unknown required stop " + r);
    }
  }

  const std::size_t n = inst.node_count();
  if (inst.travel.size() != n) {
    out.push_back("travel matrix has " + std::to_string(inst.travel.size()) +
                  " nodes, expected " + std::to_string(n));
    return out;
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (!inst.travel.has(a, b)) {
        out.push_back("missing travel time " + describe_pair(inst, a, b));
        continue;
      }
      const double t = inst.travel.at(a, b);
      if (t < 0.0) {
        out.push_back("negative travel time " + describe_pair(inst, a, b));
      } else if (a == b && t != 0.0) {
        out.push_back("nonzero diagonal at " + inst.node_id(static_cast<int>(a)));
      }
    }
  }
  return out;
}

double route_duration(std::span<const int> seq, const TransitInstance& inst) {
  if (seq.empty()) return 0.0;
  const int hub = inst.hub_index();
  for (int s : seq) {
    if (s < 0 || s > hub) throw Error("stop index out of range in route");
  }
  double total = inst.travel.at(hub, seq.front());
  for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
    total += inst.travel.at(seq[k], seq[k + 1]);
  }
  total += inst.travel.at(seq.back(), hub);
  const auto visits = std::count_if(seq.begin(), seq.end(),
                                    [hub](int s) { return s != hub; });
  return total + inst.stop_dwell * static_cast<double>(visits);
}

double route_duration(const std::vector<std::string>& seq,
                      const TransitInstance& inst) {
  std::vector<int> idx;
  idx.reserve(seq.size());
  for (const auto& id : seq) idx.push_back(inst.require_index(id));
  return route_duration(idx, inst);
}

double ServiceRoute::driving_minutes() const {
  return std::accumulate(leg_minutes.begin(), leg_minutes.end(), 0.0);
}

double ServiceRoute::dwell_minutes() const {
  return std::accumulate(avg_dwell_minutes.begin(), avg_dwell_minutes.end(),
                         0.0);
}

std::string_view to_string(TransferKind kind) {
  return kind == TransferKind::kSameStop ? "same-stop" : "nearby-stop";
}

TransferKind transfer_kind_from_string(std::string_view text) {
  if (text == "same-stop") return TransferKind::kSameStop;
  if (text == "nearby-stop") return TransferKind::kNearbyStop;
  throw Error("unknown transfer kind: " + std::string(text));
}

std::size_t TransferGroup::member_count() const {
  return kind == TransferKind::kSameStop ? routes.size() : stops.size();
}

std::vector<std::string> validate_transfer_group(const TransferGroup& group) {
  std::vector<std::string> out;
  if (group.member_count() < 2) {
    out.push_back("transfer group " + group.location + " has fewer than 2 members");
  }
  const double expected = group.kind == TransferKind::kSameStop ? 0.0 : 0.5;
  if (group.walk_minutes != expected) {
    out.push_back("transfer group " + group.location + " walk time must be " +
                  (expected == 0.0 ? std::string("0") : std::string("0.5")));
  }
  if (group.kind == TransferKind::kSameStop && group.stops.size() != 1) {
    out.push_back("same-stop group " + group.location + " must name one stop");
  }
  return out;
}

double DemandSpec::od_share() const {
  double s = 0.0;
  for (const auto& row : od) s += row.share;
  return s;
}

std::vector<std::string> validate_demand(const DemandSpec& demand) {
  std::vector<std::string> out;
  if (!(demand.total_per_hour >= 0.0)) out.push_back("negative total demand");
  if (!(demand.horizon_min > 0.0)) out.push_back("horizon must be positive");
  if (!(demand.random_share >= 0.0)) out.push_back("negative random share");
  for (const auto& row : demand.od) {
    if (!(row.share >= 0.0)) {
      out.push_back("negative share " + row.origin + " -> " + row.dest);
    }
    if (row.origin == row.dest) {
      out.push_back("origin equals destination at " + row.origin);
    }
  }
  const double total = demand.od_share() + demand.random_share;
  if (std::abs(total - 1.0) > kShareTolerance) {
    std::ostringstream msg;
    msg << "shares sum to " << total << ", expected 1";
    out.push_back(msg.str());
  }
  return out;
}

std::vector<DemandRow> normalize_rows(std::span<const DemandRow> raw_percent_rows,
                                      double target_share) {
  double sum = 0.0;
  for (const auto& r : raw_percent_rows) sum += r.share;
  if (!(sum > 0.0)) throw Error("cannot normalize an all-zero demand table");
  std::vector<DemandRow> out;
  out.reserve(raw_percent_rows.size());
  for (const auto& r : raw_percent_rows) {
    out.push_back({r.origin, r.dest, r.share / sum * target_share});
  }
  return out;
}

std::optional<int> TransitNetwork::stop_index(std::string_view id) const {
  for (std::size_t i = 0; i < stops.size(); ++i) {
    if (stops[i].id == id) return static_cast<int>(i);
  }
  return std::nullopt;
}

int TransitNetwork::require_stop(std::string_view id) const {
  auto idx = stop_index(id);
  if (!idx) throw UnknownStopError(id);
  return *idx;
}

std::optional<int> TransitNetwork::route_index(std::string_view name) const {
  for (std::size_t i = 0; i < routes.size(); ++i) {
    if (routes[i].name == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

int TransitNetwork::require_route(std::string_view name) const {
  auto idx = route_index(name);
  if (!idx) throw Error("unknown route: " + std::string(name));
  return *idx;
}

bool TransitNetwork::is_hub(std::string_view id) const {
  auto idx = stop_index(id);
  return idx && stops[static_cast<std::size_t>(*idx)].is_hub;
}

std::vector<std::string> validate_network(const TransitNetwork& net) {
  std::vector<std::string> out;
  std::set<std::string> ids;
  for (const auto& s : net.stops) {
    if (!ids.insert(s.id).second) out.push_back("duplicate stop id " + s.id);
  }
  std::set<std::string> names;
  for (const auto& r : net.routes) {
    if (!names.insert(r.name).second) out.push_back("duplicate route " + r.name);
    if (r.stops.size() < 2) out.push_back("route " + r.name + " has < 2 stops");
    if (r.leg_minutes.size() != r.stops.size() ||
        r.avg_dwell_minutes.size() != r.stops.size()) {
      out.push_back("route " + r.name + " leg/dwell columns mismatch stop count");
    }
    for (const auto& s : r.stops) {
      if (!ids.count(s)) out.push_back("route " + r.name + " unknown stop " + s);
    }
    for (double t : r.leg_minutes) {
      if (!(t > 0.0)) out.push_back("route " + r.name + " non-positive leg");
    }
    for (double t : r.avg_dwell_minutes) {
      if (!(t >= 0.0)) out.push_back("route " + r.name + " negative dwell");
    }
    if (r.vehicle_seats <= 0) out.push_back("route " + r.name + " has no seats");
  }
  for (const auto& g : net.transfers) {
    for (auto& v : validate_transfer_group(g)) out.push_back(std::move(v));
    for (const auto& s : g.stops) {
      if (!ids.count(s)) out.push_back("transfer group unknown stop " + s);
    }
    for (const auto& rn : g.routes) {
      auto ri = net.route_index(rn);
      if (!ri) {
        out.push_back("transfer group unknown route " + rn);
        continue;
      }
      const auto& route = net.routes[static_cast<std::size_t>(*ri)];
      const bool serves = std::any_of(g.stops.begin(), g.stops.end(), [&](const std::string& s) {
        return std::find(route.stops.begin(), route.stops.end(), s) != route.stops.end();
      });
      if (!serves) {
        out.push_back("route " + rn + " does not serve transfer group " + g.location);
      }
    }
  }
  return out;
}

TravelTimeMatrix closure_travel_times(std::span<const ServiceRoute> routes,
                                      std::span<const std::string> node_ids) {
  std::map<std::string, std::size_t> index;
  for (const auto& r : routes) {
    for (const auto& s : r.stops) index.emplace(s, index.size());
  }
  for (const auto& id : node_ids) index.emplace(id, index.size());
  const std::size_t n = index.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> d(n * n, kInf);
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0.0;
  for (const auto& r : routes) {
    const std::size_t m = r.stops.size();
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t a = index.at(r.stops[k]);
      const std::size_t b = index.at(r.stops[(k + 1) % m]);
      if (a == b) continue;
      d[a * n + b] = std::min(d[a * n + b], r.leg_minutes[k]);
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double dik = d[i * n + k];
      if (dik == kInf) continue;
      for (std::size_t j = 0; j < n; ++j) {
        const double cand = dik + d[k * n + j];
        if (cand < d[i * n + j]) d[i * n + j] = cand;
      }
    }
  }
  TravelTimeMatrix out(node_ids.size());
  for (std::size_t a = 0; a < node_ids.size(); ++a) {
    for (std::size_t b = 0; b < node_ids.size(); ++b) {
      const double v = d[index.at(node_ids[a]) * n + index.at(node_ids[b])];
      if (v != kInf) out.set(a, b, v);
    }
  }
  return out;
}

}  // namespace hubspoke
