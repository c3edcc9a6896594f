#ifndef HUBSPOKE_MILP_H_
#define HUBSPOKE_MILP_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hubspoke/lp.h"

namespace hubspoke {

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
  double cost = 0.0;
  bool integer = true;
};

struct Constraint {
  std::string family;  // e.g. "mccormick-lower", "time-cap"
  std::vector<std::pair<int, double>> terms;
  lp::RowSense sense = lp::RowSense::kLe;
  double rhs = 0.0;
};

struct LinearModel {
  std::vector<Variable> vars;
  std::vector<Constraint> constraints;

  int add_var(Variable v);
  double objective(std::span<const double> x) const;
  // Families of the constraints violated by `x` beyond `tol`.
  std::vector<std::string> violations(std::span<const double> x,
                                      double tol = 1e-7) const;
};

struct BnbOptions {
  double time_budget_s = 60.0;
  double relative_gap = 0.0;
  double absolute_tol = 1e-9;
  std::int64_t max_nodes = 50'000'000;
  // Keep searching nodes whose bound equals the incumbent so that
  // BnbHooks::prefer sees every optimum. Ignored when relative_gap > 0.
  bool explore_ties = false;
};

enum class BnbStatus { kOptimal, kInfeasible, kBudgetExhausted };

struct BnbStats {
  std::int64_t nodes = 0;
  std::int64_t lp_iterations = 0;
  double root_bound = 0.0;
  // Child LP bounds that came out below their parent's bound.
  std::int64_t monotone_violations = 0;
  double seconds = 0.0;
};

struct BnbResult {
  BnbStatus status = BnbStatus::kInfeasible;
  bool has_incumbent = false;
  std::vector<double> solution;  // LP-space values of the incumbent
  double objective = 0.0;
  double best_bound = 0.0;
  double gap = 0.0;
  BnbStats stats;
};

struct BnbHooks {
  // Exact objective of an integral LP point, or nullopt to reject it.
  std::function<std::optional<double>(std::span<const double>)> evaluate;
  // True when `a` should replace an equal-objective incumbent `b`.
  std::function<bool(std::span<const double> a, std::span<const double> b)> prefer;
  std::optional<std::pair<std::vector<double>, double>> initial_incumbent;
};

// Depth-first dive until the first incumbent, best-bound afterwards.
// Branches on the most fractional of `branch_vars` (lowest index on ties).
BnbResult branch_and_bound(const lp::Problem& relaxation,
                           std::span<const int> branch_vars,
                           const BnbOptions& opts, const BnbHooks& hooks);

}  // namespace hubspoke

#endif  // HUBSPOKE_MILP_H_
