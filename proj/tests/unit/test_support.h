#ifndef HUBSPOKE_TESTS_UNIT_TEST_SUPPORT_H_
#define HUBSPOKE_TESTS_UNIT_TEST_SUPPORT_H_

#include <string>
#include <vector>

#include "hubspoke/network.h"

namespace hubspoke::testing {

// Hub plus `n` stops; every off-diagonal entry is `minutes`.
inline TransitInstance uniform_instance(int n, double minutes, int routes = 1,
                                        int visits = 3) {
  TransitInstance inst;
  for (int i = 0; i < n; ++i) {
    inst.stops.push_back({"s" + std::to_string(i), "Stop " + std::to_string(i), false});
  }
  inst.hub = {"hub", "Hub", true};
  inst.route_count = routes;
  inst.max_visits = visits;
  inst.route_fixed_cost = {10.0};
  inst.alpha = 1.0;
  inst.stop_dwell = 0.0;
  inst.time_cap = 100.0;
  for (const auto& s : inst.stops) inst.required_stops.push_back(s.id);
  inst.travel = TravelTimeMatrix(static_cast<std::size_t>(n + 1));
  for (int a = 0; a <= n; ++a) {
    for (int b = 0; b <= n; ++b) {
      inst.travel.set(static_cast<std::size_t>(a), static_cast<std::size_t>(b),
                      a == b ? 0.0 : minutes);
    }
  }
  return inst;
}

inline bool contains(const std::vector<std::string>& msgs, const std::string& needle) {
  for (const auto& m : msgs) {
    if (m.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace hubspoke::testing

#endif  // HUBSPOKE_TESTS_UNIT_TEST_SUPPORT_H_
