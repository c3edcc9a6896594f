#ifndef HUBSPOKE_FIXTURES_H_
#define HUBSPOKE_FIXTURES_H_

#include <string>
#include <string_view>
#include <vector>

#include "hubspoke/frequency.h"
#include "hubspoke/network.h"

namespace hubspoke {

enum class Period { kAm, kNoon };

std::string_view to_string(Period p);
Period period_from_string(std::string_view text);

// One row of an origin-destination table exactly as printed (percent).
struct OdTableEntry {
  std::string origin;
  std::string dest;
  double percent = 0.0;
};

struct Fixture {
  std::string name;
  TransitNetwork network;
  TransitInstance north_instance;
  std::vector<OdTableEntry> am_table;
  std::vector<OdTableEntry> noon_table;
  double random_percent = 12.0;
  LegacyCoverage legacy;  // synthetic; the real pre-pandemic data is private
  Fleet fleet;            // synthetic

  const std::vector<OdTableEntry>& table(Period p) const;

  // Rows rescaled to (100 - random_percent)% of demand, plus the random share.
  DemandSpec demand(Period p, double total_per_hour, double horizon_min = 120.0) const;
};

class UnknownFixtureError : public Error {
 public:
  explicit UnknownFixtureError(std::string_view name)
      : Error("unknown fixture: " + std::string(name)) {}
};

std::vector<std::string> fixture_names();
Fixture load_fixture(std::string_view name);

}  // namespace hubspoke

#endif  // HUBSPOKE_FIXTURES_H_
