#ifndef HUBSPOKE_TRANSIT_GRAPH_H_
#define HUBSPOKE_TRANSIT_GRAPH_H_

#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "hubspoke/frequency.h"
#include "hubspoke/network.h"

namespace hubspoke {

enum class EdgeKind { kRide, kBoard, kAlight, kWalk };

std::string_view to_string(EdgeKind kind);

struct Edge {
  int from = 0;
  int to = 0;
  double weight = 0.0;
  EdgeKind kind = EdgeKind::kRide;
  int route = -1;
};

// Adjacency-list digraph with non-negative weights.
class Digraph {
 public:
  explicit Digraph(int nodes = 0) : out_(static_cast<std::size_t>(nodes)) {}

  int add_node();
  // Throws on negative or non-finite weights and unknown endpoints.
  void add_edge(const Edge& e);
  void add_edge(int from, int to, double weight) { add_edge(Edge{from, to, weight}); }

  int node_count() const { return static_cast<int>(out_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  // Indices into edges(), in insertion order.
  const std::vector<int>& out(int node) const { return out_[static_cast<std::size_t>(node)]; }

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> out_;
};

struct ShortestPath {
  bool reachable = false;
  double weight = 0.0;
  std::vector<int> nodes;  // origin .. dest inclusive
  std::vector<int> edges;  // indices into Digraph::edges()
};

// Ties between equal-weight paths go to the predecessor with the smaller
// node id.
ShortestPath dijkstra(const Digraph& g, int origin, int dest);
std::vector<double> dijkstra_distances(const Digraph& g, int origin);

struct GraphOptions {
  // Boarding edge weight is factor * effective headway; 0 gives pure
  // in-vehicle plans.
  double boarding_factor = 0.5;
};

// One ride on one route. Positions index the route's stop list.
struct PlanLeg {
  int route = 0;
  int board_stop = 0;
  int board_pos = 0;
  int alight_stop = 0;
  int alight_pos = 0;

  friend bool operator==(const PlanLeg&, const PlanLeg&) = default;
};

struct PassengerPlan {
  int origin = 0;
  int dest = 0;
  bool reachable = false;
  double weight = 0.0;
  std::vector<PlanLeg> legs;

  int transfers() const { return legs.empty() ? 0 : static_cast<int>(legs.size()) - 1; }
  // Stops where a later leg is boarded.
  std::vector<int> transfer_stops() const;

  friend bool operator==(const PassengerPlan&, const PassengerPlan&) = default;
};

inline constexpr int kExitStop = -1;

// Stop nodes come first (same indices as TransitNetwork::stops), then one
// node per (route, position) visit.
class RoutingGraph {
 public:
  RoutingGraph(const TransitNetwork& net, const FrequencyPlan& plan,
               const GraphOptions& opts = {});

  const Digraph& graph() const { return graph_; }
  const TransitNetwork& network() const { return net_; }
  int stop_count() const { return static_cast<int>(net_.stops.size()); }
  int visit_node(int route, int pos) const;
  std::string node_label(int node) const;
  // Mean minutes between buses of `route` under the plan.
  double effective_headway(int route) const { return headway_[static_cast<std::size_t>(route)]; }

  PassengerPlan plan(int origin, int dest) const;
  PassengerPlan plan(std::string_view origin, std::string_view dest) const;

  // Ordered (origin, dest) stop pairs with no path.
  std::vector<std::pair<int, int>> unreachable_pairs() const;

  // from,to,kind,route,weight
  void write_edge_csv(std::ostream& os) const;

 private:
  TransitNetwork net_;
  std::vector<double> headway_;
  std::vector<int> visit_base_;
  std::vector<std::pair<int, int>> visit_of_;  // node - stop_count -> (route, pos)
  Digraph graph_;
};

// Algorithm state a passenger carries: the plan and the index of the next
// leg not yet completed.
struct PlanCursor {
  const PassengerPlan* plan = nullptr;
  int leg = 0;
};

// Route to board at curr_stop, or nullopt when the next leg does not start
// there. Throws when the cursor has no plan.
std::optional<int> get_on(const PlanCursor& c, int curr_stop);
// While riding leg c.leg: true at that leg's alighting stop or the
// destination.
bool get_off(const PlanCursor& c, int curr_stop);
// After alighting (c.leg already advanced): kExitStop at the destination,
// otherwise the stop where the next leg is boarded, or the destination when
// only a walk remains.
int next_stop(const PlanCursor& c, int curr_stop);

// Memoized plans, safe for concurrent lookups.
class PlanCache {
 public:
  explicit PlanCache(const RoutingGraph& graph) : graph_(graph) {}

  std::shared_ptr<const PassengerPlan> get(int origin, int dest);
  std::size_t size() const;

 private:
  const RoutingGraph& graph_;
  mutable std::shared_mutex mu_;
  std::map<std::pair<int, int>, std::shared_ptr<const PassengerPlan>> plans_;
};

}  // namespace hubspoke

#endif  // HUBSPOKE_TRANSIT_GRAPH_H_
