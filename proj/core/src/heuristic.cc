#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "hubspoke/route_optimizer.h"

namespace hubspoke {
namespace {

constexpr double kTimeTol = 1e-9;
constexpr double kImprove = 1e-9;

class Search {
 public:
  explicit Search(const TransitInstance& inst) : inst_(inst) {}

  double duration(const std::vector<int>& seq) const { return route_duration(seq, inst_); }

  bool fits(const std::vector<int>& seq) const {
    return static_cast<int>(seq.size()) <= inst_.max_visits &&
           duration(seq) <= inst_.time_cap + kTimeTol;
  }

  double route_cost(int j, const std::vector<int>& seq) const {
    if (seq.empty()) return 0.0;
    return inst_.fixed_cost(j) + inst_.alpha * duration(seq);
  }

  double total(const std::vector<std::vector<int>>& routes) const {
    double sum = 0.0;
    for (std::size_t j = 0; j < routes.size(); ++j) {
      sum += route_cost(static_cast<int>(j), routes[j]);
    }
    return sum;
  }

  // Cheapest insertion first; opens the lowest-index empty route when no
  // open route can take any remaining stop.
  bool greedy(const std::vector<int>& order, std::vector<std::vector<int>>& routes) const {
    std::vector<int> pending = order;
    while (!pending.empty()) {
      double best = std::numeric_limits<double>::infinity();
      int best_s = -1, best_j = -1, best_p = -1;
      for (std::size_t s = 0; s < pending.size(); ++s) {
        for (std::size_t j = 0; j < routes.size(); ++j) {
          auto& seq = routes[j];
          if (seq.empty()) continue;
          const double before = duration(seq);
          for (std::size_t p = 0; p <= seq.size(); ++p) {
            std::vector<int> next = seq;
            next.insert(next.begin() + static_cast<long>(p), pending[s]);
            if (!fits(next)) continue;
            const double delta = inst_.alpha * (duration(next) - before);
            if (delta < best - kImprove) {
              best = delta;
              best_s = static_cast<int>(s);
              best_j = static_cast<int>(j);
              best_p = static_cast<int>(p);
            }
          }
        }
      }
      if (best_s < 0) {
        int open = -1;
        for (std::size_t j = 0; j < routes.size(); ++j) {
          if (routes[j].empty()) {
            open = static_cast<int>(j);
            break;
          }
        }
        if (open < 0) return false;
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < pending.size(); ++s) {
          const double d = duration({pending[s]});
          if (d <= inst_.time_cap + kTimeTol && d < nearest - kImprove) {
            nearest = d;
            best_s = static_cast<int>(s);
          }
        }
        if (best_s < 0) return false;
        best_j = open;
        best_p = 0;
      }
      auto& seq = routes[static_cast<std::size_t>(best_j)];
      seq.insert(seq.begin() + best_p, pending[static_cast<std::size_t>(best_s)]);
      pending.erase(pending.begin() + best_s);
    }
    return true;
  }

  // First-improvement relocate, swap and segment reversal until stuck.
  void improve(std::vector<std::vector<int>>& routes) const {
    const int nr = static_cast<int>(routes.size());
    bool changed = true;
    while (changed) {
      changed = false;
      // Relocate one stop, possibly into an empty route.
      for (int a = 0; a < nr && !changed; ++a) {
        for (std::size_t p = 0; p < routes[a].size() && !changed; ++p) {
          std::vector<int> from = routes[a];
          const int s = from[p];
          from.erase(from.begin() + static_cast<long>(p));
          const double base_a = route_cost(a, routes[a]);
          const double new_a = route_cost(a, from);
          for (int b = 0; b < nr && !changed; ++b) {
            const std::vector<int>& target = b == a ? from : routes[b];
            const double base_b = b == a ? 0.0 : route_cost(b, routes[b]);
            const double cur_b = b == a ? new_a : base_b;
            for (std::size_t q = 0; q <= target.size(); ++q) {
              std::vector<int> to = target;
              to.insert(to.begin() + static_cast<long>(q), s);
              if (!fits(to)) continue;
              const double after = route_cost(b, to);
              double delta;
              if (b == a) {
                delta = after - base_a;
              } else {
                delta = (new_a - base_a) + (after - cur_b);
              }
              if (delta < -kImprove) {
                if (b == a) {
                  routes[a] = std::move(to);
                } else {
                  routes[a] = from;
                  routes[b] = std::move(to);
                }
                changed = true;
                break;
              }
            }
          }
        }
      }
      // Swap stops between two routes.
      for (int a = 0; a < nr && !changed; ++a) {
        for (int b = a + 1; b < nr && !changed; ++b) {
          const double base = route_cost(a, routes[a]) + route_cost(b, routes[b]);
          for (std::size_t p = 0; p < routes[a].size() && !changed; ++p) {
            for (std::size_t q = 0; q < routes[b].size() && !changed; ++q) {
              std::vector<int> ra = routes[a], rb = routes[b];
              std::swap(ra[p], rb[q]);
              if (!fits(ra) || !fits(rb)) continue;
              if (route_cost(a, ra) + route_cost(b, rb) < base - kImprove) {
                routes[a] = std::move(ra);
                routes[b] = std::move(rb);
                changed = true;
              }
            }
          }
        }
      }
      // Reverse a segment within a route.
      for (int a = 0; a < nr && !changed; ++a) {
        const double base = route_cost(a, routes[a]);
        for (std::size_t p = 0; p + 1 < routes[a].size() && !changed; ++p) {
          for (std::size_t q = p + 1; q < routes[a].size() && !changed; ++q) {
            std::vector<int> r = routes[a];
            std::reverse(r.begin() + static_cast<long>(p), r.begin() + static_cast<long>(q) + 1);
            if (!fits(r)) continue;
            if (route_cost(a, r) < base - kImprove) {
              routes[a] = std::move(r);
              changed = true;
            }
          }
        }
      }
    }
  }

  RouteDesign to_design(const std::vector<std::vector<int>>& routes) const {
    RouteDesign d;
    for (std::size_t j = 0; j < routes.size(); ++j) {
      if (routes[j].empty()) continue;
      DesignedRoute r;
      r.index = static_cast<int>(j);
      for (int i : routes[j]) r.stops.push_back(inst_.stops[static_cast<std::size_t>(i)].id);
      r.duration_min = duration(routes[j]);
      d.routes.push_back(std::move(r));
    }
    d.objective = objective_value(d, inst_);
    return d;
  }

 private:
  const TransitInstance& inst_;
};

}  // namespace

RouteDesign solve_heuristic(const TransitInstance& inst, const SolveOptions& opts) {
  if (auto why = obvious_infeasibility(inst, opts.coverage); !why.empty()) {
    throw InfeasibleError(why.front());
  }
  if (opts.restarts < 1) throw Error("restarts must be >= 1");
  Search search(inst);
  if (!opts.coverage) return {};

  std::vector<int> required;
  {
    std::set<int> seen;
    for (const auto& s : inst.required_stops) {
      const int i = inst.require_index(s);
      if (seen.insert(i).second) required.push_back(i);
    }
    std::sort(required.begin(), required.end());
  }

  std::mt19937_64 rng(opts.seed);
  bool found = false;
  RouteDesign best;
  for (int attempt = 0; attempt < opts.restarts; ++attempt) {
    std::vector<int> order = required;
    if (attempt > 0) std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::vector<int>> routes(static_cast<std::size_t>(inst.route_count));
    if (!search.greedy(order, routes)) continue;
    search.improve(routes);
    RouteDesign d = search.to_design(routes);
    const double tol = 1e-9 * (1.0 + std::abs(d.objective.total));
    if (!found || d.objective.total < best.objective.total - tol ||
        (d.objective.total <= best.objective.total + tol && design_less(d, best))) {
      best = std::move(d);
      found = true;
    }
  }
  if (!found) {
    throw InfeasibleError("no construction covered every required stop within the " +
                          std::to_string(inst.time_cap) + " min cap");
  }
  return best;
}

}  // namespace hubspoke
