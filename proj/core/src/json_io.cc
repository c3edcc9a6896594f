#include "hubspoke/json_io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hubspoke {
namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw FormatError(std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw FormatError(std::string("missing field '") + key + "'");
  return *it;
}

template <typename T>
T get(const Json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("field '") + key + "': " + e.what());
  }
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return get<T>(j, key);
}

const Json& array_field(const Json& j, const char* key) {
  const Json& a = field(j, key);
  if (!a.is_array()) throw FormatError(std::string("field '") + key + "' must be an array");
  return a;
}

Json stop_json(const Stop& s) { return {{"id", s.id}, {"name", s.name}, {"is_hub", s.is_hub}}; }

Stop stop_from(const Json& j) {
  return {get<std::string>(j, "id"), get_or<std::string>(j, "name", ""),
          get_or<bool>(j, "is_hub", false)};
}

Json interval_json(const MetricSummary& m) {
  return {{"mean", m.ci.mean}, {"ci_low", m.ci.low}, {"ci_high", m.ci.high},
          {"per_rep", m.per_rep}};
}

}  // namespace

Json to_json(const TransitInstance& inst) {
  Json j;
  Json stops = Json::array();
  for (const auto& s : inst.stops) stops.push_back(stop_json(s));
  stops.push_back(stop_json(inst.hub));
  j["stops"] = std::move(stops);
  Json travel = Json::array();
  for (std::size_t a = 0; a < inst.node_count(); ++a) {
    for (std::size_t b = 0; b < inst.node_count(); ++b) {
      if (a == b || !inst.travel.has(a, b)) continue;
      travel.push_back({{"from", inst.node_id(static_cast<int>(a))},
                        {"to", inst.node_id(static_cast<int>(b))},
                        {"minutes", inst.travel.at(a, b)}});
    }
  }
  j["travel"] = std::move(travel);
  Json params;
  params["routes"] = inst.route_count;
  params["max_visits"] = inst.max_visits;
  if (inst.route_fixed_cost.size() == 1) {
    params["fixed_cost"] = inst.route_fixed_cost[0];
  } else {
    params["fixed_cost"] = inst.route_fixed_cost;
  }
  params["alpha"] = inst.alpha;
  params["stop_dwell"] = inst.stop_dwell;
  params["time_cap"] = inst.time_cap;
  j["params"] = std::move(params);
  j["required"] = inst.required_stops;
  return j;
}

TransitInstance instance_from_json(const Json& j) {
  TransitInstance inst;
  bool have_hub = false;
  for (const auto& s : array_field(j, "stops")) {
    Stop stop = stop_from(s);
    if (stop.is_hub) {
      if (have_hub) throw FormatError("instance has more than one hub: " + stop.id);
      inst.hub = std::move(stop);
      have_hub = true;
    } else {
      inst.stops.push_back(std::move(stop));
    }
  }
  if (!have_hub) throw FormatError("instance has no hub stop");
  const Json& params = field(j, "params");
  inst.route_count = get<int>(params, "routes");
  inst.max_visits = get<int>(params, "max_visits");
  const Json& cost = field(params, "fixed_cost");
  if (cost.is_array()) {
    inst.route_fixed_cost = cost.get<std::vector<double>>();
  } else if (cost.is_number()) {
    inst.route_fixed_cost = {cost.get<double>()};
  } else {
    throw FormatError("fixed_cost must be a number or an array");
  }
  inst.alpha = get<double>(params, "alpha");
  inst.stop_dwell = get<double>(params, "stop_dwell");
  inst.time_cap = get<double>(params, "time_cap");
  inst.required_stops = get_or<std::vector<std::string>>(j, "required", {});
  inst.travel = TravelTimeMatrix(inst.node_count());
  for (const auto& t : array_field(j, "travel")) {
    const auto from = inst.index_of(get<std::string>(t, "from"));
    const auto to = inst.index_of(get<std::string>(t, "to"));
    if (!from || !to) {
      throw FormatError("travel entry names an unknown stop: " + get<std::string>(t, "from") +
                        " -> " + get<std::string>(t, "to"));
    }
    inst.travel.set(static_cast<std::size_t>(*from), static_cast<std::size_t>(*to),
                    get<double>(t, "minutes"));
  }
  return inst;
}

Json to_json(const DemandSpec& demand) {
  Json od = Json::array();
  for (const auto& r : demand.od) {
    od.push_back({{"origin", r.origin}, {"dest", r.dest}, {"pct", r.share}});
  }
  return {{"total_per_hour", demand.total_per_hour},
          {"horizon_min", demand.horizon_min},
          {"random_share", demand.random_share},
          {"od", std::move(od)}};
}

DemandSpec demand_from_json(const Json& j) {
  DemandSpec d;
  d.total_per_hour = get<double>(j, "total_per_hour");
  d.horizon_min = get_or<double>(j, "horizon_min", 120.0);
  d.random_share = get_or<double>(j, "random_share", 0.12);
  for (const auto& r : array_field(j, "od")) {
    d.od.push_back({get<std::string>(r, "origin"), get<std::string>(r, "dest"),
                    get<double>(r, "pct")});
  }
  return d;
}

Json transfers_to_json(std::span<const TransferGroup> groups) {
  Json arr = Json::array();
  for (const auto& g : groups) {
    Json e;
    e["kind"] = std::string(to_string(g.kind));
    if (!g.location.empty()) e["location"] = g.location;
    e["stops"] = g.stops;
    if (!g.routes.empty()) e["routes"] = g.routes;
    e["walk_min"] = g.walk_minutes;
    arr.push_back(std::move(e));
  }
  return {{"groups", std::move(arr)}};
}

std::vector<TransferGroup> transfers_from_json(const Json& j) {
  std::vector<TransferGroup> out;
  for (const auto& e : array_field(j, "groups")) {
    TransferGroup g;
    try {
      g.kind = transfer_kind_from_string(get<std::string>(e, "kind"));
    } catch (const Error& err) {
      throw FormatError(err.what());
    }
    g.location = get_or<std::string>(e, "location", "");
    g.stops = get<std::vector<std::string>>(e, "stops");
    g.routes = get_or<std::vector<std::string>>(e, "routes", {});
    g.walk_minutes = get_or<double>(e, "walk_min", g.kind == TransferKind::kSameStop ? 0.0 : 0.5);
    out.push_back(std::move(g));
  }
  return out;
}

Json to_json(const RouteDesign& design) {
  Json routes = Json::array();
  for (const auto& r : design.routes) {
    routes.push_back({{"index", r.index}, {"stops", r.stops}, {"duration_min", r.duration_min}});
  }
  return {{"routes", std::move(routes)},
          {"objective",
           {{"total", design.objective.total},
            {"fixed", design.objective.fixed},
            {"time", design.objective.time}}}};
}

RouteDesign design_from_json(const Json& j) {
  RouteDesign d;
  for (const auto& r : array_field(j, "routes")) {
    d.routes.push_back({get<int>(r, "index"), get<std::vector<std::string>>(r, "stops"),
                        get<double>(r, "duration_min")});
  }
  const Json& obj = field(j, "objective");
  d.objective = {get<double>(obj, "total"), get<double>(obj, "fixed"), get<double>(obj, "time")};
  return d;
}

Json to_json(const LegacyCoverage& legacy) {
  Json routes = Json::array();
  for (const auto& r : legacy.routes) {
    routes.push_back(
        {{"id", r.id}, {"headway_min", r.headway_min}, {"seats", r.seats}, {"stops", r.stops}});
  }
  return {{"routes", std::move(routes)}};
}

LegacyCoverage legacy_from_json(const Json& j) {
  LegacyCoverage c;
  for (const auto& r : array_field(j, "routes")) {
    c.routes.push_back({get<std::string>(r, "id"), get<double>(r, "headway_min"),
                        get<int>(r, "seats"), get<std::vector<std::string>>(r, "stops")});
  }
  return c;
}

Json to_json(const Fleet& fleet) {
  Json pools = Json::array();
  for (const auto& p : fleet.pools) {
    pools.push_back({{"kind", p.kind}, {"seats", p.seats}, {"available", p.available}});
  }
  return {{"pools", std::move(pools)}};
}

Fleet fleet_from_json(const Json& j) {
  Fleet f;
  for (const auto& p : array_field(j, "pools")) {
    f.pools.push_back(
        {get<std::string>(p, "kind"), get<int>(p, "seats"), get<int>(p, "available")});
  }
  return f;
}

Json to_json(const FrequencyPlan& plan) {
  Json routes = Json::array();
  for (const auto& r : plan.routes) {
    routes.push_back({{"route", r.route},
                      {"governing_stop", r.governing_stop},
                      {"headway_min", r.headway_min},
                      {"buses", r.buses_required},
                      {"vehicle_seats", r.vehicle_seats},
                      {"usable_capacity", r.usable_capacity},
                      {"cycle_min", r.cycle_min}});
  }
  Json usage = Json::array();
  for (const auto& u : plan.fleet_usage) {
    usage.push_back(
        {{"kind", u.kind}, {"seats", u.seats}, {"used", u.used}, {"available", u.available}});
  }
  return {{"capacity_fraction", plan.capacity_fraction},
          {"fleet_feasible", plan.fleet_feasible},
          {"routes", std::move(routes)},
          {"fleet_usage", std::move(usage)}};
}

FrequencyPlan plan_from_json(const Json& j) {
  FrequencyPlan p;
  p.capacity_fraction = get<double>(j, "capacity_fraction");
  p.fleet_feasible = get_or<bool>(j, "fleet_feasible", true);
  for (const auto& r : array_field(j, "routes")) {
    RouteFrequency f;
    f.route = get<std::string>(r, "route");
    f.governing_stop = get_or<std::string>(r, "governing_stop", "");
    f.headway_min = get<double>(r, "headway_min");
    f.buses_required = get<int>(r, "buses");
    f.vehicle_seats = get_or<int>(r, "vehicle_seats", 0);
    f.usable_capacity = get_or<int>(r, "usable_capacity", 0);
    f.cycle_min = get_or<double>(r, "cycle_min", 0.0);
    p.routes.push_back(std::move(f));
  }
  if (j.contains("fleet_usage")) {
    for (const auto& u : array_field(j, "fleet_usage")) {
      p.fleet_usage.push_back({get<std::string>(u, "kind"), get<int>(u, "seats"),
                               get<int>(u, "used"), get<int>(u, "available")});
    }
  }
  return p;
}

Json routes_to_json(std::span<const ServiceRoute> routes) {
  Json arr = Json::array();
  for (const auto& r : routes) {
    arr.push_back({{"name", r.name},
                   {"stops", r.stops},
                   {"leg_min", r.leg_minutes},
                   {"dwell_min", r.avg_dwell_minutes},
                   {"seats", r.vehicle_seats}});
  }
  return {{"routes", std::move(arr)}};
}

std::vector<ServiceRoute> routes_from_json(const Json& j) {
  std::vector<ServiceRoute> out;
  for (const auto& r : array_field(j, "routes")) {
    ServiceRoute s;
    s.name = get<std::string>(r, "name");
    s.stops = get<std::vector<std::string>>(r, "stops");
    s.leg_minutes = get<std::vector<double>>(r, "leg_min");
    s.avg_dwell_minutes = get<std::vector<double>>(r, "dwell_min");
    s.vehicle_seats = get_or<int>(r, "seats", 70);
    out.push_back(std::move(s));
  }
  return out;
}

Json to_json(const TransitNetwork& net) {
  Json stops = Json::array();
  for (const auto& s : net.stops) stops.push_back(stop_json(s));
  Json j;
  j["stops"] = std::move(stops);
  j["routes"] = routes_to_json(net.routes)["routes"];
  j["transfers"] = transfers_to_json(net.transfers);
  return j;
}

TransitNetwork network_from_json(const Json& j) {
  TransitNetwork net;
  for (const auto& s : array_field(j, "stops")) net.stops.push_back(stop_from(s));
  net.routes = routes_from_json(j);
  net.transfers = transfers_from_json(field(j, "transfers"));
  return net;
}

Json to_json(const SimReport& r) {
  auto route_json = [](const RouteSummary& s) {
    return Json{{"route", s.route},
                {"buses", s.buses},
                {"headway_min", s.headway_min},
                {"u_s", interval_json(s.u_s)},
                {"s_075", interval_json(s.s75)}};
  };
  Json routes = Json::array();
  for (const auto& s : r.routes) routes.push_back(route_json(s));
  Json hist = Json::array();
  for (int b = 0; b < kWaitBins; ++b) {
    Json e = interval_json(r.wait_hist[static_cast<std::size_t>(b)]);
    e["from_min"] = kWaitBinEdges[static_cast<std::size_t>(b)];
    if (b + 1 < kWaitBins) {
      e["to_min"] = kWaitBinEdges[static_cast<std::size_t>(b + 1)];
    } else {
      e["to_min"] = nullptr;
    }
    hist.push_back(std::move(e));
  }
  Json config{{"usable_cap", r.usable_cap},
              {"demand_per_hour", r.demand_per_hour},
              {"period", r.period},
              {"replications", r.replications},
              {"seed", r.seed}};
  if (r.breakdown) {
    config["breakdown"] = {{"route", r.breakdown->route}, {"removed", r.breakdown->removed}};
  }
  return {{"config", std::move(config)},
          {"routes", std::move(routes)},
          {"overall", route_json(r.overall)},
          {"passengers",
           {{"created", r.created},
            {"exited", r.exited},
            {"avg_total_min", interval_json(r.avg_total)},
            {"avg_wait_min", interval_json(r.avg_wait)},
            {"avg_wait_all_min", interval_json(r.avg_wait_all)},
            {"avg_on_bus_min", interval_json(r.avg_on_bus)},
            {"avg_transfers", interval_json(r.avg_transfers)},
            {"pct_transfers", interval_json(r.pct_transfers)}}},
          {"wait_histogram", std::move(hist)},
          {"audits",
           {{"capacity", r.audits.capacity},
            {"fifo", r.audits.fifo},
            {"timestamp", r.audits.timestamp},
            {"conservation", r.audits.conservation}}},
          {"equivalent_route_skips", r.equivalent_skips}};
}

TravelTimeMatrix travel_from_csv(std::istream& in, std::span<const std::string> node_ids) {
  TravelTimeMatrix m(node_ids.size());
  auto index = [&](const std::string& id, int line) {
    for (std::size_t i = 0; i < node_ids.size(); ++i) {
      if (node_ids[i] == id) return i;
    }
    throw FormatError("line " + std::to_string(line) + ": unknown stop " + id);
  };
  std::string row;
  int line = 0;
  while (std::getline(in, row)) {
    ++line;
    if (!row.empty() && row.back() == '\r') row.pop_back();
    if (row.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(row);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 3) {
      throw FormatError("line " + std::to_string(line) + ": expected from,to,minutes");
    }
    double minutes = 0.0;
    const auto& v = cells[2];
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), minutes);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
      if (line == 1) continue;  // header
      throw FormatError("line " + std::to_string(line) + ": bad minutes '" + v + "'");
    }
    m.set(index(cells[0], line), index(cells[1], line), minutes);
  }
  return m;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace hubspoke
