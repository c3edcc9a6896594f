#include "hubspoke/fixtures.h"

#include <utility>

namespace hubspoke {
namespace {

struct StopRow {
  const char* id;
  const char* name;
  bool hub;
};

// The 44 stops served by the six 2020-2021 routes.
constexpr StopRow kStops[] = {
    // Campus Connector
    {"pierpont-bonisteel", "Pierpont - Bonisteel", true},
    {"mitchell-nc78", "Mitchell Field (Lot NC 78)", false},
    {"glen-catherine-in", "Glen and Catherine Inbound", false},
    {"museum", "Museum", true},
    {"power-center", "Power Center", false},
    {"glen-catherine-out", "Glen and Catherine Outbound", false},
    {"mitchell-m75", "Mitchell Field Lot M75", false},
    {"cooley-in", "Cooley - Inbound", false},
    // Stadium-Diag Loop
    {"oxford-housing", "Oxford Housing", false},
    {"stockwell", "Stockwell", false},
    {"mott-in", "Mott Inbound", false},
    {"bsrb", "BSRB", false},
    {"rackham", "Rackham", false},
    {"cctc-chemistry", "CCTC - Chemistry", true},
    {"east-quad", "East Quad", false},
    {"henderson-house", "Henderson House", false},
    // Oxford-Markley Loop
    {"crisler-sc7", "Crisler Center Lot SC-7", false},
    {"kipke-green", "Kipke and Green", false},
    {"im-outbound", "IM Building Outbound", false},
    {"law-quad", "Law Quad", false},
    {"michigan-union", "Michigan Union (NB State)", false},
    {"kraus", "Kraus", false},
    {"hill-oakland", "Hill at Oakland", false},
    {"im-new-inbound", "New Inbound IM", false},
    {"icle", "ICLE", false},
    // Green Rd-NW5 Loop
    {"green-road-pr", "Green Road Park and Ride", false},
    {"northwood-5", "Northwood 5", false},
    {"ncac-hubbard", "NCAC (on Hubbard)", false},
    {"hubbard-hayward-in", "Hubbard and Hayward - Inbound", false},
    {"fxb-in", "FXB - Inbound", false},
    {"lmbe", "LMBE", false},
    {"art-architecture", "Art and Architecture", true},
    {"fxb-out", "FXB - Outbound", false},
    {"hubbard-hayward-out", "Hubbard and Hayward - Outbound", false},
    {"ncac-south-out", "NCAC South Outbound", false},
    // Bursley-Baits Loop
    {"pierpont-murfin", "Pierpont - Murfin", true},
    {"baits-2", "Baits 2", false},
    {"bursley", "Bursley", false},
    {"northwood-1", "Northwood 1", false},
    {"hubbard-hayward-nc46", "Hubbard/Hayward Lot (NC46)", false},
    // Northwood Loop
    {"northwood-3", "Northwood 3", false},
    {"northwood-2", "Northwood 2", false},
    {"plymouth-crosswalk", "Plymouth Road Crosswalk", false},
    {"northwood-cc", "Northwood Community Center", false},
};

std::vector<ServiceRoute> appendix_routes() {
  return {
      {"Campus Connector",
       {"pierpont-bonisteel", "mitchell-nc78", "glen-catherine-in", "museum",
        "power-center", "glen-catherine-out", "mitchell-m75", "cooley-in"},
       {1.7, 2.9, 2.2, 0.9, 1.0, 2.9, 2.8, 0.7},
       {2, 1, 1, 2, 1, 1, 1, 1},
       70},
      {"Stadium-Diag Loop",
       {"oxford-housing", "stockwell", "mott-in", "bsrb", "rackham",
        "cctc-chemistry", "east-quad", "henderson-house"},
       {1.7, 3.0, 1.8, 1.5, 1.5, 1.7, 1.2, 2.2},
       {1, 1, 1, 1, 1, 2, 2, 1},
       70},
      {"Oxford-Markley Loop",
       {"crisler-sc7", "kipke-green", "im-outbound", "law-quad", "michigan-union",
        "kraus", "cctc-chemistry", "east-quad", "hill-oakland", "im-new-inbound",
        "icle"},
       {2.0, 1.8, 2.3, 0.7, 2.0, 1.3, 2.4, 2.5, 3.3, 1.6, 5.2},
       {1, 1, 2, 1, 2, 1, 2, 2, 1, 1, 1},
       70},
      {"Green Rd-NW5 Loop",
       {"green-road-pr", "northwood-5", "ncac-hubbard", "hubbard-hayward-in",
        "fxb-in", "lmbe", "art-architecture", "fxb-out", "hubbard-hayward-out",
        "ncac-south-out", "northwood-5"},
       {3.6, 0.8, 0.7, 1.1, 1.3, 2.1, 2.3, 1.4, 1.0, 1.9, 4.2},
       {2, 2, 1, 1, 1, 1, 2, 1, 1, 1, 2},
       35},
      {"Bursley-Baits Loop",
       {"pierpont-murfin", "baits-2", "bursley", "northwood-1",
        "hubbard-hayward-nc46", "fxb-in"},
       {2.3, 0.8, 1.3, 1.9, 1.6, 2.6},
       {2, 2, 2, 1, 2, 1},
       70},
      {"Northwood Loop",
       {"pierpont-murfin", "northwood-3", "northwood-2", "plymouth-crosswalk",
        "northwood-cc", "hubbard-hayward-nc46"},
       {1.3, 1.9, 1.7, 1.1, 0.6, 3.4},
       {2, 1, 2, 2, 2, 2},
       70},
  };
}

std::vector<TransferGroup> appendix_transfers() {
  using K = TransferKind;
  return {
      // Same-stop transfers.
      {K::kSameStop, "CCTC-Chemistry", {"cctc-chemistry"},
       {"Stadium-Diag Loop", "Oxford-Markley Loop"}, 0.0},
      {K::kSameStop, "East Quad", {"east-quad"},
       {"Stadium-Diag Loop", "Oxford-Markley Loop"}, 0.0},
      {K::kSameStop, "FXB Inbound", {"fxb-in"},
       {"Bursley-Baits Loop", "Green Rd-NW5 Loop"}, 0.0},
      {K::kSameStop, "Pierpont - Murfin", {"pierpont-murfin"},
       {"Northwood Loop", "Bursley-Baits Loop"}, 0.0},
      {K::kSameStop, "Hubbard/Hayward Lot 46", {"hubbard-hayward-nc46"},
       {"Northwood Loop", "Bursley-Baits Loop"}, 0.0},
      // Nearby-stop transfers.
      {K::kNearbyStop, "CCTC", {"cctc-chemistry", "museum"},
       {"Stadium-Diag Loop", "Oxford-Markley Loop", "Campus Connector"}, 0.5},
      {K::kNearbyStop, "FXB Building", {"fxb-in", "fxb-out"},
       {"Green Rd-NW5 Loop"}, 0.5},
      {K::kNearbyStop, "NCAC", {"ncac-hubbard", "ncac-south-out"},
       {"Green Rd-NW5 Loop"}, 0.5},
      {K::kNearbyStop, "Pierpont",
       {"pierpont-bonisteel", "pierpont-murfin", "art-architecture"},
       {"Campus Connector", "Bursley-Baits Loop", "Northwood Loop", "Green Rd-NW5 Loop"},
       0.5},
      {K::kNearbyStop, "Admin. Service", {"kipke-green", "icle"},
       {"Oxford-Markley Loop"}, 0.5},
      {K::kNearbyStop, "Mitchell Field", {"mitchell-nc78", "mitchell-m75"},
       {"Campus Connector"}, 0.5},
      {K::kNearbyStop, "Glen and Catherine", {"glen-catherine-in", "glen-catherine-out"},
       {"Campus Connector"}, 0.5},
      {K::kNearbyStop, "IM Building", {"im-new-inbound", "im-outbound"},
       {"Oxford-Markley Loop"}, 0.5},
      {K::kNearbyStop, "Hubbard/Hayward",
       {"hubbard-hayward-nc46", "hubbard-hayward-in", "hubbard-hayward-out"},
       {"Bursley-Baits Loop", "Northwood Loop", "Green Rd-NW5 Loop"}, 0.5},
  };
}

std::vector<OdTableEntry> am_table() {
  return {
      {"plymouth-crosswalk", "pierpont-murfin", 7.08},
      {"plymouth-crosswalk", "museum", 1.92},
      {"northwood-cc", "pierpont-murfin", 2.36},
      {"northwood-cc", "museum", 0.64},
      {"northwood-2", "pierpont-murfin", 2.36},
      {"northwood-2", "museum", 0.64},
      {"northwood-5", "art-architecture", 4.55},
      {"northwood-5", "museum", 2.45},
      {"michigan-union", "pierpont-bonisteel", 14},
      {"cctc-chemistry", "pierpont-bonisteel", 19},
      {"baits-2", "museum", 12},
      {"bursley", "museum", 8},
      {"im-outbound", "cctc-chemistry", 1.35},
      {"im-outbound", "pierpont-murfin", 1.5},
      {"green-road-pr", "fxb-in", 4.2},
      {"green-road-pr", "hubbard-hayward-in", 2.8},
  };
}

std::vector<OdTableEntry> noon_table() {
  return {
      {"pierpont-murfin", "plymouth-crosswalk", 7.08},
      {"pierpont-murfin", "northwood-cc", 2.36},
      {"pierpont-murfin", "northwood-2", 2.36},
      {"pierpont-murfin", "im-outbound", 1.5},
      {"pierpont-bonisteel", "cctc-chemistry", 10},
      {"pierpont-bonisteel", "michigan-union", 14},
      {"art-architecture", "northwood-5", 4.55},
      {"cctc-chemistry", "im-new-inbound", 1.35},
      {"museum", "plymouth-crosswalk", 1.92},
      {"museum", "northwood-cc", 0.64},
      {"museum", "northwood-2", 0.64},
      {"museum", "northwood-5", 2.45},
      {"museum", "baits-2", 12},
      {"museum", "bursley", 8},
      {"fxb-out", "green-road-pr", 4.2},
      {"hubbard-hayward-out", "green-road-pr", 2.8},
  };
}

// Synthetic pre-pandemic service. Headways were chosen so that the matching
// procedure lands on plausible frequencies for the new loops.
LegacyCoverage synthetic_legacy() {
  return {{
      {"Commute North", 8.0, 70,
       {"pierpont-bonisteel", "mitchell-nc78", "glen-catherine-in", "museum",
        "power-center", "glen-catherine-out", "mitchell-m75", "cooley-in"}},
      {"Commute South", 8.0, 70,
       {"pierpont-bonisteel", "museum", "power-center", "crisler-sc7", "kipke-green",
        "icle"}},
      {"Oxford Shuttle", 12.0, 70,
       {"oxford-housing", "stockwell", "hill-oakland", "east-quad", "cctc-chemistry",
        "michigan-union", "law-quad"}},
      {"Diag to Diag Express", 12.0, 70,
       {"michigan-union", "kraus", "cctc-chemistry", "bsrb", "mott-in", "rackham",
        "henderson-house"}},
      {"Bursley-Baits", 5.0, 70,
       {"baits-2", "bursley", "northwood-1", "hubbard-hayward-nc46"}},
      {"Northwood", 7.0, 70,
       {"pierpont-murfin", "northwood-3", "northwood-2", "plymouth-crosswalk",
        "northwood-cc"}},
      {"North-East Shuttle", 10.0, 35,
       {"green-road-pr", "northwood-5", "ncac-hubbard", "hubbard-hayward-in", "fxb-in",
        "lmbe", "art-architecture", "fxb-out", "hubbard-hayward-out",
        "ncac-south-out"}},
  }};
}

Fleet synthetic_fleet() {
  return {{{"bus", 70, 50}, {"shuttle", 35, 9}}};
}

TransitInstance north_instance(const TransitNetwork& net,
                               std::span<const ServiceRoute> routes) {
  const std::vector<std::string> ids = {
      "baits-2",     "bursley",     "northwood-1",        "hubbard-hayward-nc46",
      "fxb-in",      "northwood-3", "northwood-2",        "plymouth-crosswalk",
      "northwood-cc"};
  TransitInstance inst;
  for (const auto& id : ids) {
    const auto& s = net.stops[static_cast<std::size_t>(net.require_stop(id))];
    inst.stops.push_back(s);
  }
  inst.hub = net.stops[static_cast<std::size_t>(net.require_stop("pierpont-murfin"))];
  inst.route_count = 3;
  inst.max_visits = 6;
  inst.route_fixed_cost = {100.0};
  inst.alpha = 1.0;
  inst.stop_dwell = 0.5;
  inst.time_cap = 15.0;
  inst.required_stops = ids;
  std::vector<std::string> nodes = ids;
  nodes.push_back(inst.hub.id);
  inst.travel = closure_travel_times(routes, nodes);
  return inst;
}

Fixture make_um2020() {
  Fixture f;
  f.name = "um-2020";
  for (const auto& row : kStops) f.network.stops.push_back({row.id, row.name, row.hub});
  f.network.routes = appendix_routes();
  f.network.transfers = appendix_transfers();
  f.north_instance = north_instance(f.network, f.network.routes);
  f.am_table = am_table();
  f.noon_table = noon_table();
  f.random_percent = 12.0;
  f.legacy = synthetic_legacy();
  f.fleet = synthetic_fleet();
  return f;
}

}  // namespace

std::string_view to_string(Period p) { return p == Period::kAm ? "am" : "noon"; }

Period period_from_string(std::string_view text) {
  if (text == "am") return Period::kAm;
  if (text == "noon") return Period::kNoon;
  throw Error("unknown period: " + std::string(text) + " (expected am|noon)");
}

const std::vector<OdTableEntry>& Fixture::table(Period p) const {
  return p == Period::kAm ? am_table : noon_table;
}

DemandSpec Fixture::demand(Period p, double total_per_hour, double horizon_min) const {
  std::vector<DemandRow> raw;
  for (const auto& e : table(p)) raw.push_back({e.origin, e.dest, e.percent});
  DemandSpec spec;
  spec.total_per_hour = total_per_hour;
  spec.horizon_min = horizon_min;
  spec.random_share = random_percent / 100.0;
  spec.od = normalize_rows(raw, 1.0 - spec.random_share);
  return spec;
}

std::vector<std::string> fixture_names() { return {"um-2020"}; }

Fixture load_fixture(std::string_view name) {
  if (name == "um-2020") return make_um2020();
  throw UnknownFixtureError(name);
}

}  // namespace hubspoke
