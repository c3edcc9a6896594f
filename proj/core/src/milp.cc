#include "hubspoke/milp.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>

namespace hubspoke {
namespace {

constexpr double kIntTol = 1e-6;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Node {
  std::vector<std::pair<int, double>> fixings;
  double parent_bound = -kInf;
  std::int64_t id = 0;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.parent_bound != b.parent_bound) return a.parent_bound > b.parent_bound;
    return a.id > b.id;
  }
};

int most_fractional(const lp::DualSimplex& lp, std::span<const int> branch_vars) {
  int best = -1;
  double best_frac = kIntTol;
  for (int v : branch_vars) {
    const double x = lp.value(v);
    const double frac = std::abs(x - std::round(x));
    if (frac > best_frac) {
      best = v;
      best_frac = frac;
    }
  }
  return best;
}

}  // namespace

int LinearModel::add_var(Variable v) {
  vars.push_back(std::move(v));
  return static_cast<int>(vars.size()) - 1;
}

double LinearModel::objective(std::span<const double> x) const {
  double obj = 0.0;
  for (std::size_t j = 0; j < vars.size(); ++j) obj += vars[j].cost * x[j];
  return obj;
}

std::vector<std::string> LinearModel::violations(std::span<const double> x,
                                                 double tol) const {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < vars.size(); ++j) {
    if (x[j] < vars[j].lower - tol || x[j] > vars[j].upper + tol) {
      out.push_back("bound:" + vars[j].name);
    } else if (vars[j].integer && std::abs(x[j] - std::round(x[j])) > tol) {
      out.push_back("integrality:" + vars[j].name);
    }
  }
  for (const auto& c : constraints) {
    double lhs = 0.0;
    for (const auto& [v, a] : c.terms) lhs += a * x[static_cast<std::size_t>(v)];
    const double slack = tol * (1.0 + std::abs(c.rhs));
    bool bad = false;
    switch (c.sense) {
      case lp::RowSense::kLe: bad = lhs > c.rhs + slack; break;
      case lp::RowSense::kGe: bad = lhs < c.rhs - slack; break;
      case lp::RowSense::kEq: bad = std::abs(lhs - c.rhs) > slack; break;
    }
    if (bad) out.push_back(c.family);
  }
  return out;
}

BnbResult branch_and_bound(const lp::Problem& relaxation,
                           std::span<const int> branch_vars,
                           const BnbOptions& opts, const BnbHooks& hooks) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };

  BnbResult result;
  double incumbent = kInf;
  if (hooks.initial_incumbent) {
    result.solution = hooks.initial_incumbent->first;
    incumbent = hooks.initial_incumbent->second;
    result.has_incumbent = true;
  }

  const bool ties = opts.explore_ties && hooks.prefer && opts.relative_gap == 0.0;
  auto prune_threshold = [&] {
    if (incumbent == kInf) return kInf;
    const double tol = opts.absolute_tol * (1.0 + std::abs(incumbent));
    if (ties) return incumbent + tol;
    return incumbent - std::max(tol, opts.relative_gap * std::abs(incumbent));
  };

  auto offer = [&](const lp::DualSimplex& lp) {
    auto x = lp.values();
    for (int v : branch_vars) x[v] = std::round(x[v]);
    const auto obj = hooks.evaluate(x);
    if (!obj) return;
    const double tol = opts.absolute_tol * (1.0 + std::abs(*obj));
    const bool better = *obj < incumbent - tol;
    const bool tie = !better && std::abs(*obj - incumbent) <= tol && hooks.prefer &&
                     hooks.prefer(x, result.solution);
    if (better || tie || !result.has_incumbent) {
      incumbent = *obj;
      result.solution = std::move(x);
      result.has_incumbent = true;
    }
  };

  lp::DualSimplex root(relaxation);
  const auto root_status = root.solve();
  result.stats.lp_iterations += root.iterations();
  result.stats.nodes = 1;
  if (root_status == lp::Status::kInfeasible) {
    result.status = result.has_incumbent ? BnbStatus::kOptimal : BnbStatus::kInfeasible;
    result.objective = incumbent;
    result.stats.seconds = elapsed();
    return result;
  }
  result.stats.root_bound = root.objective();

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  std::vector<Node> dive_stack;
  std::int64_t next_id = 1;
  bool budget_hit = false;

  // Solves `lp` (already carrying the node's fixings) and either prunes,
  // records an incumbent, or returns the branching variable.
  auto process = [&](lp::DualSimplex& lp, double parent_bound,
                     const std::vector<std::pair<int, double>>& fixings) -> std::optional<int> {
    const auto before = lp.iterations();
    const auto status = lp.solve();
    result.stats.lp_iterations += lp.iterations() - before;
    if (status != lp::Status::kOptimal) return std::nullopt;
    const double bound = lp.objective();
    if (bound < parent_bound - 1e-7 * (1.0 + std::abs(parent_bound))) {
      ++result.stats.monotone_violations;
    }
    if (ties ? bound > prune_threshold() : bound >= prune_threshold()) return std::nullopt;
    const int branch = most_fractional(lp, branch_vars);
    if (branch >= 0) return branch;
    offer(lp);
    if (!ties) return std::nullopt;
    // Other optima may share this node's face: split on the first free variable.
    for (int v : branch_vars) {
      const bool fixed = std::any_of(fixings.begin(), fixings.end(),
                                     [v](const auto& f) { return f.first == v; });
      if (!fixed) return v;
    }
    return std::nullopt;
  };

  auto children = [&](const std::vector<std::pair<int, double>>& fixings, int var,
                      double value_hint, double bound) {
    const double first = value_hint >= 0.5 ? 1.0 : 0.0;
    Node near{fixings, bound, next_id++};
    near.fixings.emplace_back(var, first);
    Node far{fixings, bound, next_id++};
    far.fixings.emplace_back(var, 1.0 - first);
    return std::pair{std::move(near), std::move(far)};
  };

  {
    auto branch = process(root, -kInf, {});
    if (branch) {
      auto [near, far] = children({}, *branch, root.value(*branch), root.objective());
      if (result.has_incumbent) {
        open.push(std::move(far));
        open.push(std::move(near));
      } else {
        dive_stack.push_back(std::move(far));
        dive_stack.push_back(std::move(near));
      }
    }
  }

  auto budget_exceeded = [&] {
    return elapsed() > opts.time_budget_s || result.stats.nodes >= opts.max_nodes;
  };

  // Dive: reuse the parent's tableau for the preferred child.
  while (!dive_stack.empty() && !result.has_incumbent) {
    if (budget_exceeded()) {
      budget_hit = true;
      break;
    }
    Node node = std::move(dive_stack.back());
    dive_stack.pop_back();
    lp::DualSimplex lp = root;
    for (const auto& [v, val] : node.fixings) lp.fix(v, val);
    auto fixings = node.fixings;
    double parent_bound = node.parent_bound;
    for (;;) {
      ++result.stats.nodes;
      auto branch = process(lp, parent_bound, fixings);
      if (!branch) break;
      const double bound = lp.objective();
      auto [near, far] = children(fixings, *branch, lp.value(*branch), bound);
      dive_stack.push_back(std::move(far));
      lp.fix(near.fixings.back().first, near.fixings.back().second);
      fixings = std::move(near.fixings);
      parent_bound = bound;
      if (result.has_incumbent || budget_exceeded()) {
        dive_stack.push_back(Node{fixings, parent_bound, next_id++});
        break;
      }
    }
  }
  for (auto& n : dive_stack) open.push(std::move(n));
  dive_stack.clear();

  while (!open.empty() && !budget_hit) {
    if (budget_exceeded()) {
      budget_hit = true;
      break;
    }
    Node node = open.top();
    open.pop();
    if (ties ? node.parent_bound > prune_threshold() : node.parent_bound >= prune_threshold()) {
      continue;
    }
    lp::DualSimplex lp = root;
    for (const auto& [v, val] : node.fixings) lp.fix(v, val);
    ++result.stats.nodes;
    auto branch = process(lp, node.parent_bound, node.fixings);
    if (!branch) continue;
    auto [near, far] = children(node.fixings, *branch, lp.value(*branch), lp.objective());
    open.push(std::move(near));
    open.push(std::move(far));
  }

  result.objective = incumbent;
  if (budget_hit) {
    double bound = incumbent;
    if (!open.empty()) bound = std::min(bound, open.top().parent_bound);
    result.best_bound = bound;
    result.status = BnbStatus::kBudgetExhausted;
    result.gap = result.has_incumbent
                     ? (incumbent - bound) / std::max(1e-9, std::abs(incumbent))
                     : kInf;
  } else if (result.has_incumbent) {
    result.status = BnbStatus::kOptimal;
    result.best_bound = incumbent;
    result.gap = 0.0;
  } else {
    result.status = BnbStatus::kInfeasible;
  }
  result.stats.seconds = elapsed();
  return result;
}

}  // namespace hubspoke
