#ifndef HUBSPOKE_TESTS_ORACLES_ROUTE_ENUMERATOR_H_
#define HUBSPOKE_TESTS_ORACLES_ROUTE_ENUMERATOR_H_

// Exhaustive route-design search for tiny instances. Shares no code with the
// solver beyond reading the instance fields.

#include <algorithm>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "hubspoke/network.h"

namespace hubspoke::oracle {

struct EnumeratedDesign {
  bool feasible = false;
  double objective = std::numeric_limits<double>::infinity();
  std::vector<std::vector<int>> routes;  // per candidate route, empty if unused
};

// (stop ids, route index) per used route, sorted: the order in which equal
// optima are expected to resolve.
inline std::vector<std::pair<std::vector<std::string>, int>> tie_key(
    const TransitInstance& inst, const std::vector<std::vector<int>>& routes) {
  std::vector<std::pair<std::vector<std::string>, int>> key;
  for (std::size_t j = 0; j < routes.size(); ++j) {
    if (routes[j].empty()) continue;
    std::vector<std::string> ids;
    for (int i : routes[j]) ids.push_back(inst.stops[static_cast<std::size_t>(i)].id);
    key.emplace_back(std::move(ids), static_cast<int>(j));
  }
  std::sort(key.begin(), key.end());
  return key;
}

inline double loop_minutes(const TransitInstance& inst, const std::vector<int>& seq) {
  if (seq.empty()) return 0.0;
  const std::size_t hub = inst.stops.size();
  double t = inst.travel.at(hub, static_cast<std::size_t>(seq.front()));
  for (std::size_t k = 1; k < seq.size(); ++k) {
    t += inst.travel.at(static_cast<std::size_t>(seq[k - 1]), static_cast<std::size_t>(seq[k]));
  }
  t += inst.travel.at(static_cast<std::size_t>(seq.back()), hub);
  return t + inst.stop_dwell * static_cast<double>(seq.size());
}

// Every sequence of distinct stops with 1..max_visits entries that fits the
// time cap.
inline std::vector<std::vector<int>> feasible_sequences(const TransitInstance& inst) {
  std::vector<std::vector<int>> out;
  const int n = static_cast<int>(inst.stops.size());
  std::vector<int> cur;
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::function<void()> rec = [&] {
    if (!cur.empty() && loop_minutes(inst, cur) <= inst.time_cap + 1e-9) out.push_back(cur);
    if (static_cast<int>(cur.size()) == inst.max_visits) return;
    for (int i = 0; i < n; ++i) {
      if (used[static_cast<std::size_t>(i)]) continue;
      used[static_cast<std::size_t>(i)] = 1;
      cur.push_back(i);
      rec();
      cur.pop_back();
      used[static_cast<std::size_t>(i)] = 0;
    }
  };
  rec();
  return out;
}

inline EnumeratedDesign enumerate_designs(const TransitInstance& inst, bool coverage = true) {
  const auto seqs = feasible_sequences(inst);
  std::vector<int> required;
  if (coverage) {
    for (const auto& id : inst.required_stops) {
      for (std::size_t i = 0; i < inst.stops.size(); ++i) {
        if (inst.stops[i].id == id) required.push_back(static_cast<int>(i));
      }
    }
  }
  EnumeratedDesign best;
  std::vector<int> choice(static_cast<std::size_t>(inst.route_count), -1);
  std::function<void(int, double)> rec = [&](int j, double cost) {
    if (cost > best.objective) return;  // costs are non-negative
    if (j == inst.route_count) {
      for (int s : required) {
        bool hit = false;
        for (int c : choice) {
          if (c < 0) continue;
          for (int v : seqs[static_cast<std::size_t>(c)]) hit = hit || v == s;
        }
        if (!hit) return;
      }
      std::vector<std::vector<int>> routes(static_cast<std::size_t>(inst.route_count));
      for (int k = 0; k < inst.route_count; ++k) {
        if (choice[static_cast<std::size_t>(k)] >= 0) {
          routes[static_cast<std::size_t>(k)] =
              seqs[static_cast<std::size_t>(choice[static_cast<std::size_t>(k)])];
        }
      }
      if (cost == best.objective && tie_key(inst, routes) >= tie_key(inst, best.routes)) return;
      best.feasible = true;
      best.objective = cost;
      best.routes = std::move(routes);
      return;
    }
    const double fixed = inst.route_fixed_cost.size() == 1
                             ? inst.route_fixed_cost[0]
                             : inst.route_fixed_cost[static_cast<std::size_t>(j)];
    choice[static_cast<std::size_t>(j)] = -1;
    rec(j + 1, cost);
    for (std::size_t c = 0; c < seqs.size(); ++c) {
      choice[static_cast<std::size_t>(j)] = static_cast<int>(c);
      rec(j + 1, cost + fixed + inst.alpha * loop_minutes(inst, seqs[c]));
    }
    choice[static_cast<std::size_t>(j)] = -1;
  };
  rec(0, 0.0);
  return best;
}

// Random instance on a quarter-minute grid with integer costs, so sums are
// exact in binary floating point.
inline TransitInstance random_instance(std::mt19937_64& rng, int max_stops = 5,
                                       int max_routes = 2, int max_visits = 4) {
  std::uniform_int_distribution<int> n_stops(2, max_stops);
  std::uniform_int_distribution<int> n_routes(1, max_routes);
  std::uniform_int_distribution<int> n_visits(1, max_visits);
  std::uniform_int_distribution<int> quarter(1, 20);
  std::uniform_int_distribution<int> cost(0, 20);
  std::uniform_int_distribution<int> coin(0, 1);
  TransitInstance inst;
  const int n = n_stops(rng);
  for (int i = 0; i < n; ++i) {
    inst.stops.push_back({"s" + std::to_string(i), "Stop " + std::to_string(i), false});
  }
  inst.hub = {"hub", "Hub", true};
  inst.route_count = n_routes(rng);
  inst.max_visits = n_visits(rng);
  if (coin(rng)) {
    inst.route_fixed_cost = {static_cast<double>(cost(rng))};
  } else {
    for (int j = 0; j < inst.route_count; ++j) {
      inst.route_fixed_cost.push_back(static_cast<double>(cost(rng)));
    }
  }
  inst.alpha = static_cast<double>(1 + coin(rng));
  inst.stop_dwell = 0.25 * std::uniform_int_distribution<int>(0, 4)(rng);
  inst.time_cap = 0.25 * std::uniform_int_distribution<int>(16, 60)(rng);
  inst.travel = TravelTimeMatrix(static_cast<std::size_t>(n + 1));
  for (int a = 0; a <= n; ++a) {
    for (int b = 0; b <= n; ++b) {
      if (a != b) inst.travel.set(static_cast<std::size_t>(a), static_cast<std::size_t>(b), 0.25 * quarter(rng));
    }
  }
  for (int i = 0; i < n; ++i) {
    if (coin(rng) || inst.required_stops.empty() && i == n - 1) {
      inst.required_stops.push_back(inst.stops[static_cast<std::size_t>(i)].id);
    }
  }
  return inst;
}

}  // namespace hubspoke::oracle

#endif  // HUBSPOKE_TESTS_ORACLES_ROUTE_ENUMERATOR_H_
