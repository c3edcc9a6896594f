#ifndef HUBSPOKE_NETWORK_H_
#define HUBSPOKE_NETWORK_H_

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hubspoke {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownStopError : public Error {
 public:
  explicit UnknownStopError(std::string_view id)
      : Error("unknown stop: " + std::string(id)) {}
};

struct Stop {
  std::string id;
  std::string name;
  bool is_hub = false;

  friend bool operator==(const Stop&, const Stop&) = default;
};

// Travel minutes between every ordered pair of nodes. Missing entries are
// stored as NaN so that the validator can report them.
class TravelTimeMatrix {
 public:
  TravelTimeMatrix() = default;
  explicit TravelTimeMatrix(std::size_t nodes);

  std::size_t size() const { return nodes_; }
  bool has(std::size_t from, std::size_t to) const;
  double at(std::size_t from, std::size_t to) const;
  void set(std::size_t from, std::size_t to, double minutes);

  friend bool operator==(const TravelTimeMatrix& a, const TravelTimeMatrix& b);

 private:
  std::size_t nodes_ = 0;
  std::vector<double> minutes_;
};

// One hub sub-region of the route-design problem. Node indices 0..|I|-1 are
// the candidate stops, index |I| is the hub.
struct TransitInstance {
  std::vector<Stop> stops;
  Stop hub;
  int route_count = 1;
  int max_visits = 1;
  std::vector<double> route_fixed_cost;  // one entry per candidate route
  double alpha = 1.0;
  double stop_dwell = 0.0;
  double time_cap = 15.0;
  std::vector<std::string> required_stops;
  TravelTimeMatrix travel;

  int hub_index() const { return static_cast<int>(stops.size()); }
  std::size_t node_count() const { return stops.size() + 1; }
  const std::string& node_id(int index) const;
  std::optional<int> index_of(std::string_view id) const;
  int require_index(std::string_view id) const;
  double fixed_cost(int route) const;
  bool uniform_fixed_cost() const;

  friend bool operator==(const TransitInstance&,
                         const TransitInstance&) = default;
};

// Empty result means the instance is well formed. Never throws.
std::vector<std::string> validate_instance(const TransitInstance& inst);

// Hub -> seq[0] -> ... -> seq.back() -> hub driving time plus stop_dwell for
// every non-hub visit. An empty sequence never leaves the hub.
double route_duration(std::span<const int> seq, const TransitInstance& inst);
double route_duration(const std::vector<std::string>& seq,
                      const TransitInstance& inst);

// A route as operated: a loop through `stops` that returns to stops.front().
struct ServiceRoute {
  std::string name;
  std::vector<std::string> stops;
  std::vector<double> leg_minutes;        // stops[i] -> stops[(i + 1) % n]
  std::vector<double> avg_dwell_minutes;  // scheduled stop time at stops[i]
  int vehicle_seats = 70;

  double driving_minutes() const;
  double dwell_minutes() const;
  double cycle_minutes() const { return driving_minutes() + dwell_minutes(); }

  friend bool operator==(const ServiceRoute&, const ServiceRoute&) = default;
};

enum class TransferKind { kSameStop, kNearbyStop };

std::string_view to_string(TransferKind kind);
TransferKind transfer_kind_from_string(std::string_view text);

// Same-stop groups name one stop shared by several routes; nearby groups list
// the physically distinct stops reachable from each other on foot.
struct TransferGroup {
  TransferKind kind = TransferKind::kNearbyStop;
  std::string location;
  std::vector<std::string> stops;
  std::vector<std::string> routes;
  double walk_minutes = 0.5;

  // Members are stops for nearby groups and routes for same-stop groups.
  std::size_t member_count() const;

  friend bool operator==(const TransferGroup&, const TransferGroup&) = default;
};

std::vector<std::string> validate_transfer_group(const TransferGroup& group);

struct DemandRow {
  std::string origin;
  std::string dest;
  double share = 0.0;  // fraction of total_per_hour

  friend bool operator==(const DemandRow&, const DemandRow&) = default;
};

struct DemandSpec {
  double total_per_hour = 0.0;
  double horizon_min = 120.0;
  double random_share = 0.12;
  std::vector<DemandRow> od;

  double od_share() const;

  friend bool operator==(const DemandSpec&, const DemandSpec&) = default;
};

inline constexpr double kShareTolerance = 1e-9;

std::vector<std::string> validate_demand(const DemandSpec& demand);

// Rescales raw table percentages so the rows sum to `target_share`, keeping
// their relative weights.
std::vector<DemandRow> normalize_rows(
    std::span<const DemandRow> raw_percent_rows, double target_share);

struct TransitNetwork {
  std::vector<Stop> stops;
  std::vector<ServiceRoute> routes;
  std::vector<TransferGroup> transfers;

  std::optional<int> stop_index(std::string_view id) const;
  int require_stop(std::string_view id) const;
  std::optional<int> route_index(std::string_view name) const;
  int require_route(std::string_view name) const;
  bool is_hub(std::string_view id) const;

  friend bool operator==(const TransitNetwork&,
                         const TransitNetwork&) = default;
};

std::vector<std::string> validate_network(const TransitNetwork& net);

// All-pairs shortest driving time over the directed legs of `routes`,
// restricted to `node_ids`. Unreachable pairs stay missing.
TravelTimeMatrix closure_travel_times(std::span<const ServiceRoute> routes,
                                      std::span<const std::string> node_ids);

}  // namespace hubspoke

#endif  // HUBSPOKE_NETWORK_H_
