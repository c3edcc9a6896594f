#ifndef HUBSPOKE_JSON_IO_H_
#define HUBSPOKE_JSON_IO_H_

#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hubspoke/frequency.h"
#include "hubspoke/network.h"
#include "hubspoke/route_optimizer.h"
#include "hubspoke/sim.h"

namespace hubspoke {

using Json = nlohmann::ordered_json;

class FormatError : public Error {
 public:
  using Error::Error;
};

Json to_json(const TransitInstance& inst);
TransitInstance instance_from_json(const Json& j);

// od[].pct is a fraction of total demand, like random_share.
Json to_json(const DemandSpec& demand);
DemandSpec demand_from_json(const Json& j);

Json transfers_to_json(std::span<const TransferGroup> groups);
std::vector<TransferGroup> transfers_from_json(const Json& j);

Json to_json(const RouteDesign& design);
RouteDesign design_from_json(const Json& j);

Json to_json(const LegacyCoverage& legacy);
LegacyCoverage legacy_from_json(const Json& j);

Json to_json(const Fleet& fleet);
Fleet fleet_from_json(const Json& j);

Json to_json(const FrequencyPlan& plan);
FrequencyPlan plan_from_json(const Json& j);

Json routes_to_json(std::span<const ServiceRoute> routes);
std::vector<ServiceRoute> routes_from_json(const Json& j);

Json to_json(const TransitNetwork& net);
TransitNetwork network_from_json(const Json& j);

Json to_json(const SimReport& report);

// Rows of from,to,minutes with an optional header; ids index `node_ids`.
TravelTimeMatrix travel_from_csv(std::istream& in, std::span<const std::string> node_ids);

Json read_json_file(const std::filesystem::path& path);
// Two-space indent and a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace hubspoke

#endif  // HUBSPOKE_JSON_IO_H_
