#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hubspoke/fixtures.h"
#include "hubspoke/frequency.h"
#include "hubspoke/json_io.h"
#include "hubspoke/reports.h"
#include "hubspoke/route_optimizer.h"
#include "hubspoke/sim.h"

namespace fs = std::filesystem;
using namespace hubspoke;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kInfeasible = 3, kTooLarge = 4 };

// Relative output paths land under $HUBSPOKE_OUT_DIR when it is set.
fs::path output_path(const std::string& p) {
  fs::path path(p);
  if (path.is_relative()) {
    if (const char* dir = std::getenv("HUBSPOKE_OUT_DIR"); dir && *dir) return fs::path(dir) / path;
  }
  return path;
}

void emit(const std::string& out, const Json& j) {
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << "\n";
  } else {
    write_json_file(output_path(out), j);
  }
}

struct SimArgs {
  std::string fixture = "um-2020";
  std::string period = "am";
  int capacity = 40;
  double demand = 2625.0;
  int reps = 40;
  std::uint64_t seed = 7;
  std::string plan_path;
  double capacity_fraction = 0.5;
  double boarding_factor = 0.5;
  int threads = 0;
};

void add_sim_options(CLI::App* cmd, SimArgs& a) {
  cmd->add_option("--fixture", a.fixture, "Fixture name");
  cmd->add_option("--period", a.period, "am or noon")->check(CLI::IsMember({"am", "noon"}));
  cmd->add_option("--capacity", a.capacity, "Usable seats per bus (C)")->check(CLI::PositiveNumber);
  cmd->add_option("--demand", a.demand, "Passengers per hour (D)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--reps", a.reps, "Replications")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", a.seed, "Top-level seed");
  cmd->add_option("--plan", a.plan_path, "Frequency plan JSON (default: planned from the fixture)");
  cmd->add_option("--capacity-fraction", a.capacity_fraction,
                  "Seat fraction used when planning frequencies");
  cmd->add_option("--boarding-factor", a.boarding_factor,
                  "Boarding edge weight as a multiple of headway");
  cmd->add_option("--threads", a.threads, "Worker threads (0 = all cores)");
}

SimConfig make_sim_config(const Fixture& fx, const SimArgs& a) {
  SimConfig cfg;
  cfg.usable_cap = a.capacity;
  cfg.period = a.period;
  cfg.demand = fx.demand(period_from_string(a.period), a.demand);
  cfg.replications = a.reps;
  cfg.seed = a.seed;
  cfg.threads = a.threads;
  cfg.graph.boarding_factor = a.boarding_factor;
  cfg.plan = a.plan_path.empty()
                 ? plan_route_frequencies(fx.network.routes, fx.legacy, fx.fleet,
                                          a.capacity_fraction)
                 : plan_from_json(read_json_file(a.plan_path));
  return cfg;
}

void export_fixture(const Fixture& fx, const fs::path& dir) {
  write_json_file(dir / "network.json", to_json(fx.network));
  write_json_file(dir / "instance-north.json", to_json(fx.north_instance));
  write_json_file(dir / "legacy.json", to_json(fx.legacy));
  write_json_file(dir / "fleet.json", to_json(fx.fleet));
  for (Period p : {Period::kAm, Period::kNoon}) {
    const std::string name(to_string(p));
    write_json_file(dir / ("demand-" + name + ".json"), to_json(fx.demand(p, 2625.0)));
    std::ostringstream csv;
    csv << "origin,dest,percent\n";
    for (const auto& row : fx.table(p)) csv << row.origin << ',' << row.dest << ',' << row.percent << '\n';
    write_text_file(dir / ("od-" + name + ".csv"), csv.str());
  }
  std::ostringstream travel;
  travel << "from,to,minutes\n";
  const auto& inst = fx.north_instance;
  for (std::size_t a = 0; a < inst.node_count(); ++a) {
    for (std::size_t b = 0; b < inst.node_count(); ++b) {
      if (a == b || !inst.travel.has(a, b)) continue;
      travel << inst.node_id(static_cast<int>(a)) << ',' << inst.node_id(static_cast<int>(b)) << ','
             << inst.travel.at(a, b) << '\n';
    }
  }
  write_text_file(dir / "travel-north.csv", travel.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hub-and-spoke campus transit design, frequency planning and simulation"};
  app.require_subcommand(1);

  // optimize
  auto* optimize = app.add_subcommand("optimize", "Design routes for one hub sub-region");
  std::string instance_path, travel_csv, opt_fixture, opt_out = "design.json", mode = "exact";
  double gap = 0.0, budget = 60.0;
  std::uint64_t opt_seed = 7;
  int restarts = 8;
  bool symmetry = false, no_coverage = false, no_warm_start = false;
  auto* inst_opt = optimize->add_option("--instance", instance_path, "Instance JSON");
  optimize->add_option("--fixture", opt_fixture, "Use a fixture's north-campus instance")
      ->excludes(inst_opt);
  optimize->add_option("--travel-csv", travel_csv, "Replace the matrix with from,to,minutes rows");
  optimize->add_option("--mode", mode, "exact or heuristic")->check(CLI::IsMember({"exact", "heuristic"}));
  optimize->add_option("--gap", gap, "Relative optimality gap")->check(CLI::NonNegativeNumber);
  optimize->add_option("--budget", budget, "Time budget in seconds")->check(CLI::PositiveNumber);
  optimize->add_option("--seed", opt_seed, "Heuristic seed");
  optimize->add_option("--restarts", restarts, "Heuristic restarts")->check(CLI::PositiveNumber);
  optimize->add_flag("--symmetry-breaking", symmetry, "Order interchangeable routes");
  optimize->add_flag("--no-coverage", no_coverage, "Drop the coverage rows");
  optimize->add_flag("--no-warm-start", no_warm_start, "Do not seed branch-and-bound");
  optimize->add_option("--out", opt_out, "Design JSON ('-' for stdout)");

  // plan-frequency
  auto* plan_cmd = app.add_subcommand("plan-frequency", "Set headways and bus counts");
  std::string pf_fixture = "um-2020", design_path, pf_instance, legacy_path, fleet_path,
              pf_out = "plan.json";
  double fraction = 0.5;
  int design_seats = 70;
  plan_cmd->add_option("--fixture", pf_fixture, "Fixture supplying routes, legacy data and fleet");
  auto* design_opt = plan_cmd->add_option("--design", design_path, "Design JSON to operate");
  plan_cmd->add_option("--instance", pf_instance, "Instance the design was solved on")
      ->needs(design_opt);
  design_opt->needs("--instance");
  plan_cmd->add_option("--seats", design_seats, "Seats per bus on designed routes");
  plan_cmd->add_option("--legacy", legacy_path, "Legacy coverage JSON");
  plan_cmd->add_option("--fleet", fleet_path, "Fleet JSON");
  plan_cmd->add_option("--capacity-fraction", fraction, "Usable seat fraction")
      ->check(CLI::Range(0.0, 1.0));
  plan_cmd->add_option("--out", pf_out, "Plan JSON ('-' for stdout)");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Run replications of one demand case");
  SimArgs sim_args;
  std::string sim_out = "report.json", hist_out;
  add_sim_options(simulate, sim_args);
  simulate->add_option("--out", sim_out, "Report JSON ('-' for stdout)");
  simulate->add_option("--histogram", hist_out, "Wait histogram CSV");

  // stress
  auto* stress = app.add_subcommand("stress", "Remove buses from one route, paired with baseline");
  SimArgs stress_args;
  std::string route, stress_out = "stress.json";
  int removed = 1;
  add_sim_options(stress, stress_args);
  stress->add_option("--route", route, "Route name")->required();
  stress->add_option("--remove", removed, "Buses removed")->check(CLI::NonNegativeNumber);
  stress->add_option("--out", stress_out, "Stress JSON ('-' for stdout)");

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "optimize, plan, simulate, stress and report");
  PipelineConfig pcfg;
  std::string pl_mode = "exact", pl_period = "am", pl_out;
  bool no_stress = false;
  pipeline->add_option("--fixture", pcfg.fixture, "Fixture name");
  pipeline->add_option("--mode", pl_mode, "Optimizer mode")->check(CLI::IsMember({"exact", "heuristic"}));
  pipeline->add_option("--budget", pcfg.solver.time_budget_s, "Optimizer budget in seconds")
      ->check(CLI::PositiveNumber);
  pipeline->add_option("--period", pl_period, "am or noon")->check(CLI::IsMember({"am", "noon"}));
  pipeline->add_option("--reps", pcfg.replications, "Replications per case")->check(CLI::PositiveNumber);
  pipeline->add_option("--seed", pcfg.seed, "Top-level seed");
  pipeline->add_option("--capacity-fraction", pcfg.capacity_fraction, "Usable seat fraction");
  pipeline->add_option("--remove", pcfg.stress_removed, "Buses removed per stress run");
  pipeline->add_option("--threads", pcfg.threads, "Worker threads (0 = all cores)");
  pipeline->add_flag("--no-stress", no_stress, "Skip the breakdown runs");
  pipeline->add_option("--out-dir", pl_out, "Output directory (default $HUBSPOKE_OUT_DIR or out)");

  // fixtures
  auto* fixtures = app.add_subcommand("fixtures", "List or export built-in fixtures");
  fixtures->require_subcommand(1);
  auto* fx_list = fixtures->add_subcommand("list", "Print fixture names");
  auto* fx_export = fixtures->add_subcommand("export", "Write a fixture's tables as JSON/CSV");
  std::string export_name, export_dir = "fixture";
  fx_export->add_option("name", export_name, "Fixture name")->required();
  fx_export->add_option("--out-dir", export_dir, "Directory to write");

  CLI11_PARSE(app, argc, argv);

  try {
    if (optimize->parsed()) {
      TransitInstance inst;
      if (!instance_path.empty()) {
        inst = instance_from_json(read_json_file(instance_path));
      } else {
        inst = load_fixture(opt_fixture.empty() ? "um-2020" : opt_fixture).north_instance;
      }
      if (!travel_csv.empty()) {
        std::ifstream in(travel_csv);
        if (!in) throw Error("cannot open " + travel_csv);
        std::vector<std::string> ids;
        for (std::size_t i = 0; i < inst.node_count(); ++i) ids.push_back(inst.node_id(static_cast<int>(i)));
        inst.travel = travel_from_csv(in, ids);
      }
      if (auto bad = validate_instance(inst); !bad.empty()) {
        for (const auto& m : bad) std::cerr << "invalid instance: " << m << "\n";
        return kUsage;
      }
      SolveOptions so;
      so.mode = mode == "exact" ? SolveMode::kExact : SolveMode::kHeuristic;
      so.optimality_gap = gap;
      so.time_budget_s = budget;
      so.seed = opt_seed;
      so.restarts = restarts;
      so.symmetry_breaking = symmetry;
      so.coverage = !no_coverage;
      so.warm_start = !no_warm_start;
      RouteDesign design;
      if (so.mode == SolveMode::kExact) {
        ModelOptions mo;
        mo.coverage = so.coverage;
        mo.symmetry_breaking = symmetry;
        const auto res = solve_exact(build_model(inst, mo), so);
        design = res.design;
        const auto& c = res.certificate;
        std::cerr << "status="
                  << (c.status == BnbStatus::kOptimal ? "optimal" : "budget-exhausted")
                  << " incumbent=" << c.incumbent << " bound=" << c.best_bound
                  << " gap=" << c.gap << " nodes=" << c.stats.nodes << "\n";
      } else {
        design = solve_heuristic(inst, so);
      }
      if (auto bad = check_design(design, inst, so.coverage); !bad.empty()) {
        throw Error("design check failed: " + bad[0]);
      }
      emit(opt_out, to_json(design));
      return kOk;
    }

    if (plan_cmd->parsed()) {
      const Fixture fx = load_fixture(pf_fixture);
      std::vector<ServiceRoute> routes = fx.network.routes;
      if (!design_path.empty()) {
        const auto inst = instance_from_json(read_json_file(pf_instance));
        const auto design = design_from_json(read_json_file(design_path));
        if (auto bad = check_design(design, inst, false); !bad.empty()) {
          throw Error("design does not fit the instance: " + bad[0]);
        }
        routes = routes_from_design(design, inst, design_seats);
      }
      const LegacyCoverage legacy =
          legacy_path.empty() ? fx.legacy : legacy_from_json(read_json_file(legacy_path));
      const Fleet fleet = fleet_path.empty() ? fx.fleet : fleet_from_json(read_json_file(fleet_path));
      const FrequencyPlan plan = plan_route_frequencies(routes, legacy, fleet, fraction);
      emit(pf_out, to_json(plan));
      require_fleet(plan);
      return kOk;
    }

    if (simulate->parsed()) {
      const Fixture fx = load_fixture(sim_args.fixture);
      const SimReport report = run_simulation(fx.network, make_sim_config(fx, sim_args));
      emit(sim_out, to_json(report));
      if (!hist_out.empty()) write_text_file(output_path(hist_out), emit_histogram(report));
      return report.audits.total() == 0 ? kOk : kFailure;
    }

    if (stress->parsed()) {
      const Fixture fx = load_fixture(stress_args.fixture);
      const auto res = run_breakdown(fx.network, make_sim_config(fx, stress_args), route, removed);
      const auto diff = diff_reports(res.baseline, res.scenario);
      emit(stress_out, Json{{"route", route},
                            {"removed", removed},
                            {"baseline", to_json(res.baseline)},
                            {"scenario", to_json(res.scenario)},
                            {"diff", to_json(diff)}});
      return kOk;
    }

    if (pipeline->parsed()) {
      pcfg.solver.mode = pl_mode == "exact" ? SolveMode::kExact : SolveMode::kHeuristic;
      pcfg.period = period_from_string(pl_period);
      pcfg.stress = !no_stress;
      if (!pl_out.empty()) {
        pcfg.out_dir = output_path(pl_out);
      } else if (const char* dir = std::getenv("HUBSPOKE_OUT_DIR"); dir && *dir) {
        pcfg.out_dir = dir;
      }
      run_pipeline(pcfg);
      std::cerr << "wrote " << pcfg.out_dir.string() << "\n";
      return kOk;
    }

    if (fx_list->parsed()) {
      for (const auto& n : fixture_names()) std::cout << n << "\n";
      return kOk;
    }
    if (fx_export->parsed()) {
      export_fixture(load_fixture(export_name), output_path(export_dir));
      return kOk;
    }
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const ModelTooLargeError& e) {
    std::cerr << "model too large: " << e.what() << "\n";
    return kTooLarge;
  } catch (const PipelineError& e) {
    std::cerr << "pipeline failed at stage " << e.stage() << ": " << e.what() << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}
