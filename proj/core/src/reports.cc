#include "hubspoke/reports.h"

#include <cctype>
#include <cstdio>
#include <sstream>

namespace hubspoke {
namespace {

std::string fmt2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string case_label(const DemandCase& c) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "C=%d D=%g", c.capacity, c.demand_per_hour);
  return buf;
}

struct Series {
  std::string name;
  const MetricSummary* a;
  const MetricSummary* b;
};

std::vector<Series> paired_series(const SimReport& a, const SimReport& b) {
  std::vector<Series> out = {
      {"avg_wait_min", &a.avg_wait, &b.avg_wait},
      {"avg_wait_all_min", &a.avg_wait_all, &b.avg_wait_all},
      {"avg_total_min", &a.avg_total, &b.avg_total},
      {"avg_on_bus_min", &a.avg_on_bus, &b.avg_on_bus},
      {"avg_transfers", &a.avg_transfers, &b.avg_transfers},
      {"pct_transfers", &a.pct_transfers, &b.pct_transfers},
      {"u_s", &a.overall.u_s, &b.overall.u_s},
      {"s_075", &a.overall.s75, &b.overall.s75},
  };
  for (std::size_t i = 0; i < a.routes.size() && i < b.routes.size(); ++i) {
    out.push_back({"u_s:" + a.routes[i].route, &a.routes[i].u_s, &b.routes[i].u_s});
    out.push_back({"s_075:" + a.routes[i].route, &a.routes[i].s75, &b.routes[i].s75});
  }
  return out;
}

void stage_marker(const std::filesystem::path& dir, const std::string& stage) {
  write_text_file(dir / "STAGE", stage + "\n");
}

}  // namespace

std::string slug(std::string_view name) {
  std::string out;
  bool dash = false;
  for (unsigned char c : name) {
    if (std::isalnum(c)) {
      if (dash && !out.empty()) out += '-';
      out += static_cast<char>(std::tolower(c));
      dash = false;
    } else {
      dash = true;
    }
  }
  return out;
}

std::vector<ServiceRoute> routes_from_design(const RouteDesign& design,
                                             const TransitInstance& inst, int seats,
                                             const std::string& prefix) {
  std::vector<ServiceRoute> out;
  const int hub = inst.hub_index();
  for (const auto& r : design.routes) {
    ServiceRoute s;
    s.name = prefix + std::to_string(r.index + 1);
    s.vehicle_seats = seats;
    s.stops.push_back(inst.hub.id);
    s.avg_dwell_minutes.push_back(0.0);
    int prev = hub;
    for (const auto& id : r.stops) {
      const int i = inst.require_index(id);
      s.leg_minutes.push_back(inst.travel.at(static_cast<std::size_t>(prev), static_cast<std::size_t>(i)));
      s.stops.push_back(id);
      s.avg_dwell_minutes.push_back(inst.stop_dwell);
      prev = i;
    }
    s.leg_minutes.push_back(inst.travel.at(static_cast<std::size_t>(prev), static_cast<std::size_t>(hub)));
    out.push_back(std::move(s));
  }
  return out;
}

std::string emit_histogram(const SimReport& report) {
  std::ostringstream os;
  os << "bin,fraction\n";
  for (int b = 0; b < kWaitBins; ++b) {
    const auto lo = kWaitBinEdges[static_cast<std::size_t>(b)];
    os << '[' << lo << ',';
    if (b + 1 < kWaitBins) {
      os << kWaitBinEdges[static_cast<std::size_t>(b + 1)] << ')';
    } else {
      os << "inf)";
    }
    os << ',' << fmt2(report.wait_hist[static_cast<std::size_t>(b)].ci.mean) << '\n';
  }
  return os.str();
}

const MetricDelta& ReportDiff::metric(std::string_view name) const {
  for (const auto& m : metrics) {
    if (m.metric == name) return m;
  }
  throw Error("no metric " + std::string(name) + " in diff");
}

ReportDiff diff_reports(const SimReport& a, const SimReport& b, int resamples, double level) {
  if (a.period != b.period) throw Error("reports cover different periods");
  if (a.replications != b.replications) throw Error("reports differ in replication count");
  if (a.seed != b.seed) throw Error("reports use different seeds");
  if (a.routes.size() != b.routes.size()) throw Error("reports cover different routes");
  for (std::size_t i = 0; i < a.routes.size(); ++i) {
    if (a.routes[i].route != b.routes[i].route) throw Error("reports cover different routes");
  }
  ReportDiff out;
  std::uint64_t idx = 0;
  for (const auto& s : paired_series(a, b)) {
    if (s.a->per_rep.size() != s.b->per_rep.size()) {
      throw Error("metric " + s.name + " has unpaired replications");
    }
    std::vector<double> d(s.a->per_rep.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = s.b->per_rep[i] - s.a->per_rep[i];
    MetricDelta m;
    m.metric = s.name;
    m.a = s.a->ci.mean;
    m.b = s.b->ci.mean;
    m.delta = mean(d);
    m.bootstrap = bootstrap_interval(d, resamples, level, derive_seed(a.seed, "bootstrap", idx++));
    m.t = t_interval(d, level);
    out.metrics.push_back(std::move(m));
  }
  return out;
}

Json to_json(const ReportDiff& diff) {
  Json arr = Json::array();
  for (const auto& m : diff.metrics) {
    arr.push_back({{"metric", m.metric},
                   {"a", m.a},
                   {"b", m.b},
                   {"delta", m.delta},
                   {"bootstrap_low", m.bootstrap.low},
                   {"bootstrap_high", m.bootstrap.high},
                   {"t_low", m.t.low},
                   {"t_high", m.t.high}});
  }
  return {{"metrics", std::move(arr)}};
}

std::string table5_csv(const ComparisonTable& t) {
  std::ostringstream os;
  os << "metric";
  for (const auto& c : t.cases) os << ',' << case_label(c);
  os << '\n';
  auto row = [&](const std::string& name, auto&& cell) {
    os << name;
    for (const auto& r : t.reports) os << ',' << fmt2(cell(r));
    os << '\n';
  };
  if (t.reports.empty()) return os.str();
  const auto& first = t.reports.front();
  for (std::size_t i = 0; i < first.routes.size(); ++i) {
    row("U_s " + first.routes[i].route, [i](const SimReport& r) { return r.routes[i].u_s.ci.mean; });
  }
  row("U_s all routes", [](const SimReport& r) { return r.overall.u_s.ci.mean; });
  for (std::size_t i = 0; i < first.routes.size(); ++i) {
    row("S_0.75 " + first.routes[i].route,
        [i](const SimReport& r) { return r.routes[i].s75.ci.mean; });
  }
  row("S_0.75 all routes", [](const SimReport& r) { return r.overall.s75.ci.mean; });
  row("avg total travel time (min)", [](const SimReport& r) { return r.avg_total.ci.mean; });
  row("avg wait time (min)", [](const SimReport& r) { return r.avg_wait.ci.mean; });
  row("avg on-bus time (min)", [](const SimReport& r) { return r.avg_on_bus.ci.mean; });
  row("avg number of transfers", [](const SimReport& r) { return r.avg_transfers.ci.mean; });
  row("% who make transfers", [](const SimReport& r) { return r.pct_transfers.ci.mean; });
  return os.str();
}

std::string table6_csv(const ComparisonTable& t) {
  std::ostringstream os;
  os << "route,buses_before,buses_after,baseline_wait_min,breakdown_wait_min,delta_min,"
        "ci_low,ci_high\n";
  for (const auto& s : t.stress) {
    const auto& m = s.diff.metric("avg_wait_min");
    os << s.route << ',' << s.buses_before << ',' << s.buses_after << ',' << fmt2(m.a) << ','
       << fmt2(m.b) << ',' << fmt2(m.delta) << ',' << fmt2(m.bootstrap.low) << ','
       << fmt2(m.bootstrap.high) << '\n';
  }
  return os.str();
}

std::string figure4_csv(const ComparisonTable& t) {
  std::ostringstream os;
  os << "case,bin,fraction\n";
  for (std::size_t c = 0; c < t.reports.size(); ++c) {
    std::istringstream rows(emit_histogram(t.reports[c]));
    std::string line;
    std::getline(rows, line);  // header
    while (std::getline(rows, line)) os << '"' << case_label(t.cases[c]) << "\"," << line << '\n';
  }
  return os.str();
}

std::vector<std::string> validate_pipeline(const PipelineConfig& cfg) {
  std::vector<std::string> out;
  if (cfg.cases.empty()) out.push_back("at least one demand case is required");
  for (const auto& c : cfg.cases) {
    if (c.capacity < 1) out.push_back("case capacity must be >= 1");
    if (!(c.demand_per_hour >= 0.0)) out.push_back("case demand must be >= 0");
  }
  if (cfg.replications < 1) out.push_back("replications must be >= 1");
  if (!(cfg.capacity_fraction > 0.0 && cfg.capacity_fraction <= 1.0)) {
    out.push_back("capacity fraction must be in (0, 1]");
  }
  if (cfg.stress_removed < 0) out.push_back("buses removed must be >= 0");
  if (cfg.out_dir.empty()) out.push_back("output directory is empty");
  return out;
}

ComparisonTable run_pipeline(const PipelineConfig& cfg) {
  if (auto errs = validate_pipeline(cfg); !errs.empty()) throw PipelineError("config", errs[0]);
  const auto& dir = cfg.out_dir;
  try {
    std::filesystem::create_directories(dir);
  } catch (const std::filesystem::filesystem_error& e) {
    throw PipelineError("config", e.what());
  }
  std::string stage = "config";
  ComparisonTable table;
  table.cases = cfg.cases;
  try {
    stage_marker(dir, stage);
    const Fixture fx = load_fixture(cfg.fixture);

    stage = "optimize";
    stage_marker(dir, stage);
    RouteDesign design;
    if (cfg.solver.mode == SolveMode::kExact) {
      ModelOptions mo;
      mo.coverage = cfg.solver.coverage;
      mo.symmetry_breaking = cfg.solver.symmetry_breaking;
      design = solve_exact(build_model(fx.north_instance, mo), cfg.solver).design;
    } else {
      design = solve_heuristic(fx.north_instance, cfg.solver);
    }
    if (auto bad = check_design(design, fx.north_instance, cfg.solver.coverage); !bad.empty()) {
      throw Error("design check failed: " + bad[0]);
    }
    write_json_file(dir / "design.json", to_json(design));

    stage = "plan-frequency";
    stage_marker(dir, stage);
    const FrequencyPlan plan =
        plan_route_frequencies(fx.network.routes, fx.legacy, fx.fleet, cfg.capacity_fraction);
    require_fleet(plan);
    write_json_file(dir / "plan.json", to_json(plan));

    stage = "simulate";
    stage_marker(dir, stage);
    SimConfig base;
    base.plan = plan;
    base.period = std::string(to_string(cfg.period));
    base.replications = cfg.replications;
    base.seed = cfg.seed;
    base.threads = cfg.threads;
    for (std::size_t c = 0; c < cfg.cases.size(); ++c) {
      SimConfig sc = base;
      sc.usable_cap = cfg.cases[c].capacity;
      sc.demand = fx.demand(cfg.period, cfg.cases[c].demand_per_hour);
      table.reports.push_back(run_simulation(fx.network, sc));
      write_json_file(dir / ("report-case-" + std::to_string(c + 1) + ".json"),
                      to_json(table.reports.back()));
    }

    if (cfg.stress) {
      stage = "stress";
      stage_marker(dir, stage);
      SimConfig sc = base;
      sc.usable_cap = cfg.cases[0].capacity;
      sc.demand = fx.demand(cfg.period, cfg.cases[0].demand_per_hour);
      for (const auto& route : fx.network.routes) {
        SimConfig broken = sc;
        broken.breakdown = BreakdownSpec{route.name, cfg.stress_removed};
        StressRow row;
        row.route = route.name;
        row.buses_before = plan.route(route.name).buses_required;
        row.buses_after = row.buses_before - cfg.stress_removed;
        row.scenario = run_simulation(fx.network, broken);
        row.diff = diff_reports(table.reports[0], row.scenario);
        Json j{{"route", route.name},
               {"buses_before", row.buses_before},
               {"buses_after", row.buses_after},
               {"scenario", to_json(row.scenario)},
               {"diff", to_json(row.diff)}};
        write_json_file(dir / ("stress-" + slug(route.name) + ".json"), j);
        table.stress.push_back(std::move(row));
      }
    }

    stage = "report";
    stage_marker(dir, stage);
    write_text_file(dir / "table5.csv", table5_csv(table));
    write_text_file(dir / "table6.csv", table6_csv(table));
    write_text_file(dir / "figure4.csv", figure4_csv(table));
    stage_marker(dir, "done");
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(stage, e.what());
  }
  return table;
}

}  // namespace hubspoke
