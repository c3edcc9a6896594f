#ifndef HUBSPOKE_ROUTE_OPTIMIZER_H_
#define HUBSPOKE_ROUTE_OPTIMIZER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "hubspoke/milp.h"
#include "hubspoke/network.h"

namespace hubspoke {

struct DesignedRoute {
  int index = 0;                   // candidate route j
  std::vector<std::string> stops;  // visit order, hub excluded
  double duration_min = 0.0;

  friend bool operator==(const DesignedRoute&, const DesignedRoute&) = default;
};

struct ObjectiveBreakdown {
  double total = 0.0;
  double fixed = 0.0;
  double time = 0.0;  // alpha * sum of route durations

  friend bool operator==(const ObjectiveBreakdown&, const ObjectiveBreakdown&) = default;
};

struct RouteDesign {
  std::vector<DesignedRoute> routes;
  ObjectiveBreakdown objective;

  friend bool operator==(const RouteDesign&, const RouteDesign&) = default;
};

struct ModelOptions {
  bool coverage = true;
  bool symmetry_breaking = false;
  // Refuse to build models with more variables than this.
  std::int64_t max_variables = 200'000;
};

class ModelTooLargeError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// The route-design MILP for one hub. Variable blocks are laid out as
// x_j | y_ij | u^j_{i,k} (i = |I| is the hub) | z^j_{i1,i2,k}.
class RouteModel {
 public:
  RouteModel(const TransitInstance& inst, const ModelOptions& opts);

  const LinearModel& model() const { return model_; }
  const TransitInstance& instance() const { return inst_; }
  const ModelOptions& options() const { return opts_; }

  int stops() const { return stops_; }
  int routes() const { return routes_; }
  int visits() const { return visits_; }

  int x(int j) const { return j; }
  int y(int i, int j) const { return routes_ + j * stops_ + i; }
  // k is zero-based here: visit k+1 in the usual numbering.
  int u(int i, int k, int j) const {
    return u_base_ + (j * visits_ + k) * (stops_ + 1) + i;
  }
  int z(int i1, int i2, int k, int j) const {
    return z_base_ + ((j * (visits_ - 1) + k) * (stops_ + 1) + i1) * (stops_ + 1) + i2;
  }

  std::int64_t x_count() const { return routes_; }
  std::int64_t y_count() const { return static_cast<std::int64_t>(stops_) * routes_; }
  std::int64_t u_count() const {
    return static_cast<std::int64_t>(stops_ + 1) * routes_ * visits_;
  }
  std::int64_t z_count() const {
    return static_cast<std::int64_t>(stops_ + 1) * (stops_ + 1) * routes_ * (visits_ - 1);
  }

  // Full assignment (z = u1*u2) encoding a design.
  std::vector<double> encode(const RouteDesign& design) const;
  RouteDesign decode(std::span<const double> values) const;

 private:
  void add_constraint(std::string family, std::vector<std::pair<int, double>> terms,
                      lp::RowSense sense, double rhs);
  void append_route_time(int j, std::vector<std::pair<int, double>>& terms,
                         double scale) const;

  TransitInstance inst_;
  ModelOptions opts_;
  int stops_;
  int routes_;
  int visits_;
  int u_base_;
  int z_base_;
  LinearModel model_;
};

RouteModel build_model(const TransitInstance& inst, const ModelOptions& opts = {});

enum class SolveMode { kExact, kHeuristic };

struct SolveOptions {
  SolveMode mode = SolveMode::kExact;
  double time_budget_s = 60.0;
  double optimality_gap = 0.0;
  bool symmetry_breaking = false;
  bool coverage = true;
  bool warm_start = true;  // seed branch-and-bound with the heuristic
  std::uint64_t seed = 7;
  int restarts = 8;
};

struct BoundCertificate {
  BnbStatus status = BnbStatus::kInfeasible;
  double incumbent = 0.0;
  double best_bound = 0.0;
  double gap = 0.0;
  BnbStats stats;
};

struct ExactResult {
  RouteDesign design;
  BoundCertificate certificate;
  std::vector<double> encoding;  // model-space values of the returned design
};

ExactResult solve_exact(const RouteModel& model, const SolveOptions& opts = {});
RouteDesign solve_heuristic(const TransitInstance& inst, const SolveOptions& opts = {});

std::vector<std::string> check_design(const RouteDesign& design,
                                      const TransitInstance& inst,
                                      bool require_coverage = true);
ObjectiveBreakdown objective_value(const RouteDesign& design, const TransitInstance& inst);

// Reasons the instance has no feasible design that are visible without
// search (a required stop whose shortest round trip from the hub exceeds the
// cap, more required stops than route slots).
std::vector<std::string> obvious_infeasibility(const TransitInstance& inst, bool coverage);

// Stable ordering used to break ties between equal-objective designs: route
// stop sequences sorted lexicographically, then route indices.
bool design_less(const RouteDesign& a, const RouteDesign& b);

}  // namespace hubspoke

#endif  // HUBSPOKE_ROUTE_OPTIMIZER_H_
