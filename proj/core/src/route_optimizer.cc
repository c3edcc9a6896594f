#include "hubspoke/route_optimizer.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace hubspoke {
namespace {

constexpr double kTimeTol = 1e-9;

std::string var_name(char kind, std::initializer_list<int> idx) {
  std::string s(1, kind);
  for (int i : idx) s += "_" + std::to_string(i);
  return s;
}

}  // namespace

RouteModel::RouteModel(const TransitInstance& inst, const ModelOptions& opts)
    : inst_(inst),
      opts_(opts),
      stops_(static_cast<int>(inst.stops.size())),
      routes_(inst.route_count),
      visits_(inst.max_visits),
      u_base_(0),
      z_base_(0) {
  if (routes_ < 1 || visits_ < 1) throw Error("route and visit counts must be >= 1");
  const std::int64_t total = x_count() + y_count() + u_count() + z_count();
  if (total > opts.max_variables) {
    std::ostringstream msg;
    msg << "instance needs " << total << " variables, budget is " << opts.max_variables
        << " (|I|=" << stops_ << ", |J|=" << routes_ << ", |K|=" << visits_ << ")";
    throw ModelTooLargeError(msg.str());
  }
  u_base_ = static_cast<int>(x_count() + y_count());
  z_base_ = static_cast<int>(u_base_ + u_count());

  const int hub = stops_;
  const double alpha = inst.alpha;
  const auto& t = inst.travel;

  for (int j = 0; j < routes_; ++j) {
    model_.add_var({var_name('x', {j}), 0, 1, inst.fixed_cost(j), true});
  }
  for (int j = 0; j < routes_; ++j) {
    for (int i = 0; i < stops_; ++i) model_.add_var({var_name('y', {i, j}), 0, 1, 0, true});
  }
  for (int j = 0; j < routes_; ++j) {
    for (int k = 0; k < visits_; ++k) {
      for (int i = 0; i <= stops_; ++i) {
        double c = 0.0;
        if (i != hub) {
          if (k == 0) c += t.at(hub, i);
          if (k == visits_ - 1) c += t.at(i, hub);
          c += inst.stop_dwell;
        }
        model_.add_var({var_name('u', {i, k, j}), 0, 1, alpha * c, true});
      }
    }
  }
  for (int j = 0; j < routes_; ++j) {
    for (int k = 0; k + 1 < visits_; ++k) {
      for (int i1 = 0; i1 <= stops_; ++i1) {
        for (int i2 = 0; i2 <= stops_; ++i2) {
          model_.add_var({var_name('z', {i1, i2, k, j}), 0, 1, alpha * t.at(i1, i2), true});
        }
      }
    }
  }

  using S = lp::RowSense;
  for (int j = 0; j < routes_; ++j) {
    // A stop may join route j only when j operates.
    for (int i = 0; i < stops_; ++i) {
      add_constraint("assign-requires-route", {{y(i, j), 1.0}, {x(j), -1.0}}, S::kLe, 0.0);
    }
    // An assigned stop takes exactly one visit.
    for (int i = 0; i < stops_; ++i) {
      std::vector<std::pair<int, double>> terms;
      for (int k = 0; k < visits_; ++k) terms.emplace_back(u(i, k, j), 1.0);
      terms.emplace_back(y(i, j), -1.0);
      add_constraint("one-visit", std::move(terms), S::kEq, 0.0);
    }
    // No stop at visit k+1 unless visit k holds a stop.
    for (int k = 0; k + 1 < visits_; ++k) {
      std::vector<std::pair<int, double>> terms;
      for (int i = 0; i < stops_; ++i) {
        terms.emplace_back(u(i, k + 1, j), 1.0);
        terms.emplace_back(u(i, k, j), -1.0);
      }
      add_constraint("contiguous-visits", std::move(terms), S::kLe, 0.0);
    }
    // Every visit of an operated route is a stop or the hub.
    for (int k = 0; k < visits_; ++k) {
      std::vector<std::pair<int, double>> terms;
      for (int i = 0; i <= stops_; ++i) terms.emplace_back(u(i, k, j), 1.0);
      terms.emplace_back(x(j), -1.0);
      add_constraint("visit-filled", std::move(terms), S::kEq, 0.0);
    }
    {
      std::vector<std::pair<int, double>> terms;
      append_route_time(j, terms, 1.0);
      add_constraint("time-cap", std::move(terms), S::kLe, inst.time_cap);
    }
    for (int k = 0; k + 1 < visits_; ++k) {
      for (int i1 = 0; i1 <= stops_; ++i1) {
        for (int i2 = 0; i2 <= stops_; ++i2) {
          const int zv = z(i1, i2, k, j);
          add_constraint("mccormick-upper-first", {{zv, 1.0}, {u(i1, k, j), -1.0}}, S::kLe, 0.0);
          add_constraint("mccormick-upper-second", {{zv, 1.0}, {u(i2, k + 1, j), -1.0}}, S::kLe,
                         0.0);
          add_constraint("mccormick-lower",
                         {{zv, 1.0}, {u(i1, k, j), -1.0}, {u(i2, k + 1, j), -1.0}}, S::kGe,
                         -1.0);
        }
      }
    }
  }

  if (opts.coverage) {
    std::set<int> required;
    for (const auto& id : inst.required_stops) required.insert(inst.require_index(id));
    for (int i : required) {
      std::vector<std::pair<int, double>> terms;
      for (int j = 0; j < routes_; ++j) terms.emplace_back(y(i, j), 1.0);
      add_constraint("coverage", std::move(terms), S::kGe, 1.0);
    }
  }

  // Route permutations are only interchangeable when they cost the same.
  if (opts.symmetry_breaking && inst.uniform_fixed_cost()) {
    for (int j = 0; j + 1 < routes_; ++j) {
      add_constraint("symmetry-operate", {{x(j + 1), 1.0}, {x(j), -1.0}}, S::kLe, 0.0);
      std::vector<std::pair<int, double>> terms;
      for (int i = 0; i < stops_; ++i) {
        terms.emplace_back(u(i, 0, j), static_cast<double>(i + 1));
        terms.emplace_back(u(i, 0, j + 1), -static_cast<double>(i + 1));
      }
      terms.emplace_back(x(j + 1), static_cast<double>(stops_ + 1));
      add_constraint("symmetry-first-stop", std::move(terms), S::kLe,
                     static_cast<double>(stops_ + 1));
    }
  }
}

void RouteModel::add_constraint(std::string family, std::vector<std::pair<int, double>> terms,
                                lp::RowSense sense, double rhs) {
  model_.constraints.push_back({std::move(family), std::move(terms), sense, rhs});
}

void RouteModel::append_route_time(int j, std::vector<std::pair<int, double>>& terms,
                                   double scale) const {
  const int hub = stops_;
  const auto& t = inst_.travel;
  for (int k = 0; k < visits_; ++k) {
    for (int i = 0; i < stops_; ++i) {
      double c = inst_.stop_dwell;
      if (k == 0) c += t.at(hub, i);
      if (k == visits_ - 1) c += t.at(i, hub);
      if (c != 0.0) terms.emplace_back(u(i, k, j), scale * c);
    }
  }
  for (int k = 0; k + 1 < visits_; ++k) {
    for (int i1 = 0; i1 <= stops_; ++i1) {
      for (int i2 = 0; i2 <= stops_; ++i2) {
        const double c = t.at(i1, i2);
        if (c != 0.0) terms.emplace_back(z(i1, i2, k, j), scale * c);
      }
    }
  }
}

std::vector<double> RouteModel::encode(const RouteDesign& design) const {
  std::vector<double> v(model_.vars.size(), 0.0);
  const int hub = stops_;
  for (const auto& r : design.routes) {
    const int j = r.index;
    if (j < 0 || j >= routes_) throw Error("design route index out of range");
    if (static_cast<int>(r.stops.size()) > visits_) throw Error("design exceeds max visits");
    v[x(j)] = 1.0;
    std::vector<int> seq;
    for (const auto& id : r.stops) seq.push_back(inst_.require_index(id));
    for (int k = 0; k < visits_; ++k) {
      const int node = k < static_cast<int>(seq.size()) ? seq[k] : hub;
      v[u(node, k, j)] = 1.0;
      if (node != hub) v[y(node, j)] = 1.0;
    }
  }
  for (int j = 0; j < routes_; ++j) {
    for (int k = 0; k + 1 < visits_; ++k) {
      for (int i1 = 0; i1 <= stops_; ++i1) {
        if (v[u(i1, k, j)] == 0.0) continue;
        for (int i2 = 0; i2 <= stops_; ++i2) {
          v[z(i1, i2, k, j)] = v[u(i2, k + 1, j)];
        }
      }
    }
  }
  return v;
}

RouteDesign RouteModel::decode(std::span<const double> values) const {
  RouteDesign design;
  for (int j = 0; j < routes_; ++j) {
    if (values[x(j)] < 0.5) continue;
    DesignedRoute r;
    r.index = j;
    for (int k = 0; k < visits_; ++k) {
      int chosen = -1;
      for (int i = 0; i < stops_; ++i) {
        if (values[u(i, k, j)] > 0.5) chosen = i;
      }
      if (chosen < 0) break;  // hub padding from here on
      r.stops.push_back(inst_.stops[chosen].id);
    }
    if (r.stops.empty()) continue;
    r.duration_min = route_duration(r.stops, inst_);
    design.routes.push_back(std::move(r));
  }
  design.objective = objective_value(design, inst_);
  return design;
}

RouteModel build_model(const TransitInstance& inst, const ModelOptions& opts) {
  return RouteModel(inst, opts);
}

ObjectiveBreakdown objective_value(const RouteDesign& design, const TransitInstance& inst) {
  ObjectiveBreakdown out;
  double minutes = 0.0;
  for (const auto& r : design.routes) {
    out.fixed += inst.fixed_cost(r.index);
    minutes += route_duration(r.stops, inst);
  }
  out.time = inst.alpha * minutes;
  out.total = out.fixed + out.time;
  return out;
}

std::vector<std::string> check_design(const RouteDesign& design, const TransitInstance& inst,
                                      bool require_coverage) {
  std::vector<std::string> out;
  if (static_cast<int>(design.routes.size()) > inst.route_count) {
    out.push_back("more routes than candidate routes");
  }
  std::set<int> indices;
  std::set<std::string> covered;
  for (const auto& r : design.routes) {
    const std::string tag = "route " + std::to_string(r.index) + ": ";
    if (r.index < 0 || r.index >= inst.route_count) out.push_back(tag + "index out of range");
    if (!indices.insert(r.index).second) out.push_back(tag + "duplicate route index");
    if (r.stops.empty()) out.push_back(tag + "empty route");
    if (static_cast<int>(r.stops.size()) > inst.max_visits) out.push_back(tag + "too many visits");
    std::set<std::string> seen;
    bool known = true;
    for (const auto& s : r.stops) {
      auto idx = inst.index_of(s);
      if (!idx || *idx == inst.hub_index()) {
        out.push_back(tag + "unknown stop " + s);
        known = false;
        continue;
      }
      if (!seen.insert(s).second) out.push_back(tag + "duplicate visit " + s);
      covered.insert(s);
    }
    if (known && route_duration(r.stops, inst) > inst.time_cap + kTimeTol) {
      out.push_back(tag + "time cap exceeded");
    }
  }
  if (require_coverage) {
    for (const auto& s : inst.required_stops) {
      if (!covered.count(s)) out.push_back("required stop " + s + " not covered");
    }
  }
  return out;
}

std::vector<std::string> obvious_infeasibility(const TransitInstance& inst, bool coverage) {
  std::vector<std::string> out;
  if (!coverage) return out;
  // The matrix need not obey the triangle inequality, so bound each loop by
  // shortest paths out of and back to the hub.
  const std::size_t n = inst.node_count();
  std::vector<double> dist(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) dist[a * n + b] = inst.travel.at(a, b);
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        dist[a * n + b] = std::min(dist[a * n + b], dist[a * n + k] + dist[k * n + b]);
      }
    }
  }
  const std::size_t hub = static_cast<std::size_t>(inst.hub_index());
  std::set<int> required;
  for (const auto& s : inst.required_stops) {
    const int i = inst.require_index(s);
    required.insert(i);
    const auto iu = static_cast<std::size_t>(i);
    const double d = dist[hub * n + iu] + dist[iu * n + hub] + inst.stop_dwell;
    if (d > inst.time_cap + kTimeTol) {
      std::ostringstream msg;
      msg << "required stop " << s << " needs at least " << d << " min, above the "
          << inst.time_cap << " min cap";
      out.push_back(msg.str());
    }
  }
  const long slots = static_cast<long>(inst.route_count) * inst.max_visits;
  if (static_cast<long>(required.size()) > slots) {
    out.push_back(std::to_string(required.size()) + " required stops exceed " +
                  std::to_string(slots) + " route visit slots");
  }
  return out;
}

bool design_less(const RouteDesign& a, const RouteDesign& b) {
  auto key = [](const RouteDesign& d) {
    std::vector<std::pair<std::vector<std::string>, int>> k;
    for (const auto& r : d.routes) k.emplace_back(r.stops, r.index);
    std::sort(k.begin(), k.end());
    return k;
  };
  return key(a) < key(b);
}

ExactResult solve_exact(const RouteModel& rm, const SolveOptions& opts) {
  if (opts.mode != SolveMode::kExact) throw Error("solve_exact needs mode=exact");
  if (!(opts.time_budget_s > 0.0)) throw Error("time budget must be positive");
  if (!(opts.optimality_gap >= 0.0)) throw Error("gap must be >= 0");
  const TransitInstance& inst = rm.instance();
  const LinearModel& model = rm.model();

  if (auto why = obvious_infeasibility(inst, rm.options().coverage); !why.empty()) {
    throw InfeasibleError(why.front());
  }

  // The LP relaxation drops z columns whose travel coefficient is zero (their
  // McCormick rows can always be met) and the two upper McCormick rows: with
  // non-negative travel times every z appears with a non-negative
  // coefficient in the objective and in the <= time-cap rows, so an LP
  // optimum can lower z to max(0, u1 + u2 - 1), which never exceeds
  // min(u1, u2).
  bool nonnegative = true;
  for (std::size_t a = 0; a < inst.node_count(); ++a) {
    for (std::size_t b = 0; b < inst.node_count(); ++b) {
      if (inst.travel.at(a, b) < 0.0) nonnegative = false;
    }
  }
  std::vector<int> to_lp(model.vars.size(), -1);
  lp::Problem relax;
  const int first_z = rm.z(0, 0, 0, 0);
  const bool has_z = rm.visits() > 1;
  auto is_z = [&](int v) { return has_z && v >= first_z; };
  // z columns the time-cap rows read must stay, even at zero cost (alpha = 0).
  std::vector<char> in_time_cap(model.vars.size(), 0);
  for (const auto& c : model.constraints) {
    if (c.family != "time-cap") continue;
    for (const auto& [v, a] : c.terms) in_time_cap[static_cast<std::size_t>(v)] = 1;
  }
  for (std::size_t v = 0; v < model.vars.size(); ++v) {
    const int vi = static_cast<int>(v);
    if (is_z(vi) && nonnegative && model.vars[v].cost == 0.0 && !in_time_cap[v]) continue;
    to_lp[v] = relax.add_var(model.vars[v].cost, model.vars[v].lower, model.vars[v].upper);
  }
  for (const auto& c : model.constraints) {
    if (nonnegative && (c.family == "mccormick-upper-first" ||
                        c.family == "mccormick-upper-second")) {
      continue;
    }
    lp::Row row;
    row.sense = c.sense;
    row.rhs = c.rhs;
    bool dropped = false;
    for (const auto& [v, a] : c.terms) {
      const int col = to_lp[static_cast<std::size_t>(v)];
      if (col < 0) {
        dropped = true;
        break;
      }
      row.terms.emplace_back(col, a);
    }
    if (dropped) {
      if (c.family != "mccormick-lower") throw Error("internal: dropped column in " + c.family);
      continue;
    }
    relax.rows.push_back(std::move(row));
  }
  std::vector<int> branch_vars;
  for (std::size_t v = 0; v < model.vars.size(); ++v) {
    if (!is_z(static_cast<int>(v))) branch_vars.push_back(to_lp[v]);
  }

  auto to_model = [&](std::span<const double> lpx) {
    std::vector<double> full(model.vars.size(), 0.0);
    for (std::size_t v = 0; v < model.vars.size(); ++v) {
      if (!is_z(static_cast<int>(v))) full[v] = lpx[static_cast<std::size_t>(to_lp[v])];
    }
    for (int j = 0; j < rm.routes(); ++j) {
      for (int k = 0; k + 1 < rm.visits(); ++k) {
        for (int i1 = 0; i1 <= rm.stops(); ++i1) {
          for (int i2 = 0; i2 <= rm.stops(); ++i2) {
            full[rm.z(i1, i2, k, j)] = full[rm.u(i1, k, j)] * full[rm.u(i2, k + 1, j)];
          }
        }
      }
    }
    return full;
  };
  auto to_lp_space = [&](const std::vector<double>& full) {
    std::vector<double> lpx(static_cast<std::size_t>(relax.num_vars()), 0.0);
    for (std::size_t v = 0; v < model.vars.size(); ++v) {
      if (to_lp[v] >= 0) lpx[static_cast<std::size_t>(to_lp[v])] = full[v];
    }
    return lpx;
  };

  BnbHooks hooks;
  hooks.evaluate = [&](std::span<const double> lpx) -> std::optional<double> {
    const auto full = to_model(lpx);
    if (!model.violations(full).empty()) return std::nullopt;
    return rm.decode(full).objective.total;
  };
  hooks.prefer = [&](std::span<const double> a, std::span<const double> b) {
    return design_less(rm.decode(to_model(a)), rm.decode(to_model(b)));
  };
  if (opts.warm_start) {
    try {
      SolveOptions h = opts;
      h.mode = SolveMode::kHeuristic;
      h.coverage = rm.options().coverage;
      RouteDesign seed = solve_heuristic(inst, h);
      const auto full = rm.encode(seed);
      if (model.violations(full).empty()) {
        hooks.initial_incumbent = {to_lp_space(full), rm.decode(full).objective.total};
      }
    } catch (const InfeasibleError&) {
      // Branch-and-bound decides.
    }
  }

  BnbOptions bo;
  bo.time_budget_s = opts.time_budget_s;
  bo.relative_gap = opts.optimality_gap;
  bo.explore_ties = true;  // equal optima resolve by design_less
  const BnbResult res = branch_and_bound(relax, branch_vars, bo, hooks);

  ExactResult out;
  out.certificate.status = res.status;
  out.certificate.incumbent = res.objective;
  out.certificate.best_bound = res.best_bound;
  out.certificate.gap = res.gap;
  out.certificate.stats = res.stats;
  if (!res.has_incumbent) {
    if (res.status == BnbStatus::kInfeasible) {
      throw InfeasibleError(
          "no design covers every required stop within the " +
          std::to_string(inst.time_cap) + " min cap using " +
          std::to_string(inst.route_count) + " route(s) of at most " +
          std::to_string(inst.max_visits) + " visits");
    }
    throw Error("time budget exhausted before any feasible design was found");
  }
  out.encoding = to_model(res.solution);
  out.design = rm.decode(out.encoding);
  return out;
}

}  // namespace hubspoke
