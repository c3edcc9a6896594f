#include "hubspoke/transit_graph.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <mutex>
#include <queue>

namespace hubspoke {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Search {
  std::vector<double> dist;
  std::vector<int> pred_edge;
};

Search run_dijkstra(const Digraph& g, int origin) {
  const int n = g.node_count();
  if (origin < 0 || origin >= n) throw Error("dijkstra: origin out of range");
  Search s{std::vector<double>(static_cast<std::size_t>(n), kInf),
           std::vector<int>(static_cast<std::size_t>(n), -1)};
  std::vector<int> pred_node(static_cast<std::size_t>(n), std::numeric_limits<int>::max());
  std::vector<char> done(static_cast<std::size_t>(n), 0);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  s.dist[static_cast<std::size_t>(origin)] = 0.0;
  pq.emplace(0.0, origin);
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (done[static_cast<std::size_t>(u)] || d > s.dist[static_cast<std::size_t>(u)]) continue;
    done[static_cast<std::size_t>(u)] = 1;
    for (int ei : g.out(u)) {
      const Edge& e = g.edges()[static_cast<std::size_t>(ei)];
      const auto v = static_cast<std::size_t>(e.to);
      if (done[v]) continue;
      const double nd = d + e.weight;
      if (nd < s.dist[v] || (nd == s.dist[v] && u < pred_node[v])) {
        const bool improved = nd < s.dist[v];
        s.dist[v] = nd;
        s.pred_edge[v] = ei;
        pred_node[v] = u;
        if (improved) pq.emplace(nd, e.to);
      }
    }
  }
  return s;
}

}  // namespace

std::string_view to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::kRide: return "ride";
    case EdgeKind::kBoard: return "board";
    case EdgeKind::kAlight: return "alight";
    case EdgeKind::kWalk: return "walk";
  }
  return "?";
}

int Digraph::add_node() {
  out_.emplace_back();
  return node_count() - 1;
}

void Digraph::add_edge(const Edge& e) {
  if (e.from < 0 || e.from >= node_count() || e.to < 0 || e.to >= node_count()) {
    throw Error("edge endpoint out of range");
  }
  if (!std::isfinite(e.weight) || e.weight < 0.0) throw Error("edge weight must be >= 0");
  out_[static_cast<std::size_t>(e.from)].push_back(static_cast<int>(edges_.size()));
  edges_.push_back(e);
}

ShortestPath dijkstra(const Digraph& g, int origin, int dest) {
  if (dest < 0 || dest >= g.node_count()) throw Error("dijkstra: dest out of range");
  const Search s = run_dijkstra(g, origin);
  ShortestPath out;
  const double d = s.dist[static_cast<std::size_t>(dest)];
  if (d == kInf) return out;
  out.reachable = true;
  out.weight = d;
  for (int v = dest; v != origin;) {
    const int ei = s.pred_edge[static_cast<std::size_t>(v)];
    out.edges.push_back(ei);
    out.nodes.push_back(v);
    v = g.edges()[static_cast<std::size_t>(ei)].from;
  }
  out.nodes.push_back(origin);
  std::reverse(out.nodes.begin(), out.nodes.end());
  std::reverse(out.edges.begin(), out.edges.end());
  return out;
}

std::vector<double> dijkstra_distances(const Digraph& g, int origin) {
  return run_dijkstra(g, origin).dist;
}

std::vector<int> PassengerPlan::transfer_stops() const {
  std::vector<int> out;
  for (std::size_t i = 1; i < legs.size(); ++i) out.push_back(legs[i].board_stop);
  return out;
}

RoutingGraph::RoutingGraph(const TransitNetwork& net, const FrequencyPlan& plan,
                           const GraphOptions& opts)
    : net_(net), graph_(static_cast<int>(net.stops.size())) {
  if (!(opts.boarding_factor >= 0.0)) throw Error("boarding factor must be >= 0");
  for (std::size_t r = 0; r < net_.routes.size(); ++r) {
    const ServiceRoute& route = net_.routes[r];
    const RouteFrequency& f = plan.route(route.name);
    if (f.buses_required < 1) throw Error("route " + route.name + " has no buses");
    headway_.push_back(route.cycle_minutes() / f.buses_required);
    visit_base_.push_back(graph_.node_count());
    for (std::size_t p = 0; p < route.stops.size(); ++p) {
      graph_.add_node();
      visit_of_.emplace_back(static_cast<int>(r), static_cast<int>(p));
    }
  }
  for (std::size_t r = 0; r < net_.routes.size(); ++r) {
    const ServiceRoute& route = net_.routes[r];
    const int ri = static_cast<int>(r);
    const std::size_t len = route.stops.size();
    const double board = opts.boarding_factor * headway_[r];
    for (std::size_t p = 0; p < len; ++p) {
      const int stop = net_.require_stop(route.stops[p]);
      const int node = visit_node(ri, static_cast<int>(p));
      graph_.add_edge({stop, node, board, EdgeKind::kBoard, ri});
      graph_.add_edge({node, stop, 0.0, EdgeKind::kAlight, ri});
      const std::size_t q = (p + 1) % len;
      graph_.add_edge({node, visit_node(ri, static_cast<int>(q)),
                       route.leg_minutes[p] + route.avg_dwell_minutes[q], EdgeKind::kRide, ri});
    }
  }
  for (const auto& g : net_.transfers) {
    if (g.kind != TransferKind::kNearbyStop) continue;
    for (const auto& a : g.stops) {
      for (const auto& b : g.stops) {
        if (a == b) continue;
        graph_.add_edge(
            {net_.require_stop(a), net_.require_stop(b), g.walk_minutes, EdgeKind::kWalk, -1});
      }
    }
  }
}

int RoutingGraph::visit_node(int route, int pos) const {
  return visit_base_[static_cast<std::size_t>(route)] + pos;
}

std::string RoutingGraph::node_label(int node) const {
  if (node < stop_count()) return net_.stops[static_cast<std::size_t>(node)].id;
  const auto [r, p] = visit_of_[static_cast<std::size_t>(node - stop_count())];
  const ServiceRoute& route = net_.routes[static_cast<std::size_t>(r)];
  return route.name + "@" + std::to_string(p) + ":" + route.stops[static_cast<std::size_t>(p)];
}

PassengerPlan RoutingGraph::plan(int origin, int dest) const {
  if (origin < 0 || origin >= stop_count() || dest < 0 || dest >= stop_count()) {
    throw Error("plan: stop index out of range");
  }
  PassengerPlan out;
  out.origin = origin;
  out.dest = dest;
  const ShortestPath sp = dijkstra(graph_, origin, dest);
  if (!sp.reachable) return out;
  out.reachable = true;
  out.weight = sp.weight;
  PlanLeg leg;
  for (int ei : sp.edges) {
    const Edge& e = graph_.edges()[static_cast<std::size_t>(ei)];
    if (e.kind == EdgeKind::kBoard) {
      leg = PlanLeg{};
      leg.route = e.route;
      leg.board_stop = e.from;
      leg.board_pos = visit_of_[static_cast<std::size_t>(e.to - stop_count())].second;
    } else if (e.kind == EdgeKind::kAlight) {
      leg.alight_stop = e.to;
      leg.alight_pos = visit_of_[static_cast<std::size_t>(e.from - stop_count())].second;
      out.legs.push_back(leg);
    }
  }
  return out;
}

PassengerPlan RoutingGraph::plan(std::string_view origin, std::string_view dest) const {
  return plan(net_.require_stop(origin), net_.require_stop(dest));
}

std::vector<std::pair<int, int>> RoutingGraph::unreachable_pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int o = 0; o < stop_count(); ++o) {
    const auto dist = dijkstra_distances(graph_, o);
    for (int d = 0; d < stop_count(); ++d) {
      if (dist[static_cast<std::size_t>(d)] == kInf) out.emplace_back(o, d);
    }
  }
  return out;
}

void RoutingGraph::write_edge_csv(std::ostream& os) const {
  os << "from,to,kind,route,weight\n";
  os << std::fixed << std::setprecision(2);
  for (const Edge& e : graph_.edges()) {
    os << node_label(e.from) << ',' << node_label(e.to) << ',' << to_string(e.kind) << ','
       << (e.route >= 0 ? net_.routes[static_cast<std::size_t>(e.route)].name : "") << ','
       << e.weight << '\n';
  }
}

std::optional<int> get_on(const PlanCursor& c, int curr_stop) {
  if (!c.plan) throw Error("get_on: passenger has no plan");
  const auto& legs = c.plan->legs;
  if (c.leg < 0 || c.leg >= static_cast<int>(legs.size())) return std::nullopt;
  const PlanLeg& leg = legs[static_cast<std::size_t>(c.leg)];
  if (leg.board_stop != curr_stop) return std::nullopt;
  return leg.route;
}

bool get_off(const PlanCursor& c, int curr_stop) {
  if (!c.plan) return false;
  if (curr_stop == c.plan->dest) return true;
  const auto& legs = c.plan->legs;
  if (c.leg < 0 || c.leg >= static_cast<int>(legs.size())) return false;
  return legs[static_cast<std::size_t>(c.leg)].alight_stop == curr_stop;
}

int next_stop(const PlanCursor& c, int curr_stop) {
  if (!c.plan) throw Error("next_stop: passenger has no plan");
  if (curr_stop == c.plan->dest) return kExitStop;
  const auto& legs = c.plan->legs;
  if (c.leg >= 0 && c.leg < static_cast<int>(legs.size())) {
    return legs[static_cast<std::size_t>(c.leg)].board_stop;
  }
  return c.plan->dest;
}

std::shared_ptr<const PassengerPlan> PlanCache::get(int origin, int dest) {
  const auto key = std::make_pair(origin, dest);
  {
    std::shared_lock lock(mu_);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
  }
  auto plan = std::make_shared<const PassengerPlan>(graph_.plan(origin, dest));
  std::unique_lock lock(mu_);
  auto [it, inserted] = plans_.emplace(key, std::move(plan));
  return it->second;
}

std::size_t PlanCache::size() const {
  std::shared_lock lock(mu_);
  return plans_.size();
}

}  // namespace hubspoke
