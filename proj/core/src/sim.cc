#include "hubspoke/sim.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <exception>
#include <map>
#include <queue>
#include <sstream>
#include <thread>

namespace hubspoke {
namespace {

constexpr double kEps = 1e-9;
constexpr std::int64_t kStallLimit = 1'000'000;

enum class EventKind { kBusArrive, kBusDepart, kPassengerArrive, kWalkDone };

struct Event {
  double time;
  std::uint64_t seq;
  EventKind kind;
  int who;  // bus or passenger index
  int stop = -1;
};

struct EventLater {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }
};

struct Passenger {
  int origin = 0;
  int dest = 0;
  std::shared_ptr<const PassengerPlan> plan;
  int leg = 0;
  double arrival = 0.0;
  double last_event = 0.0;
  double board_time = 0.0;
  double queue_join = 0.0;
  double on_bus = 0.0;
  bool riding = false;
  bool walking = false;
  bool done = false;

  PlanCursor cursor() const { return {plan.get(), leg}; }
};

struct Bus {
  int route = 0;
  int pos = 0;
  std::vector<int> riders;
};

}  // namespace

std::vector<Arrival> sample_arrivals(const DemandSpec& demand,
                                     std::span<const std::string> stop_ids,
                                     std::mt19937_64& rng,
                                     const std::function<bool(int, int)>& routable) {
  if (!(demand.horizon_min > 0.0)) throw Error("horizon must be positive");
  auto index_of = [&](const std::string& id) {
    auto it = std::find(stop_ids.begin(), stop_ids.end(), id);
    if (it == stop_ids.end()) throw UnknownStopError(id);
    return static_cast<int>(it - stop_ids.begin());
  };
  std::vector<Arrival> out;
  auto stream = [&](double per_hour, auto&& draw_pair) {
    if (!(per_hour > 0.0)) return;
    std::exponential_distribution<double> gap(per_hour / 60.0);
    for (double t = gap(rng); t < demand.horizon_min; t += gap(rng)) {
      const auto [o, d] = draw_pair();
      out.push_back({t, o, d});
    }
  };
  for (const auto& row : demand.od) {
    const int o = index_of(row.origin);
    const int d = index_of(row.dest);
    stream(demand.total_per_hour * row.share, [&] { return std::pair{o, d}; });
  }
  const int n = static_cast<int>(stop_ids.size());
  if (n >= 2) {
    std::uniform_int_distribution<int> any(0, n - 1);
    std::uniform_int_distribution<int> other(0, n - 2);
    stream(demand.total_per_hour * demand.random_share, [&] {
      for (int tries = 0;; ++tries) {
        const int o = any(rng);
        int d = other(rng);
        if (d >= o) ++d;
        if (!routable || routable(o, d)) return std::pair{o, d};
        if (tries > 10000) throw Error("no routable random origin-destination pair");
      }
    });
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Arrival& a, const Arrival& b) { return a.time < b.time; });
  return out;
}

double dwell_minutes(const DwellRules& rules, int loaded, int unloaded, bool hub) {
  const int activity = loaded + unloaded;
  if (activity == 0) return rules.idle_min;
  if (hub || activity > rules.busy_threshold) return rules.busy_min;
  return rules.activity_min;
}

double utilization(int curr_cap, int max_cap) {
  return static_cast<double>(curr_cap) / static_cast<double>(max_cap);
}

bool overloaded(int curr_cap, int max_cap) {
  return static_cast<std::int64_t>(curr_cap) * 4 >= static_cast<std::int64_t>(max_cap) * 3;
}

int wait_bin(double wait_min) {
  for (int b = kWaitBins - 1; b > 0; --b) {
    if (wait_min >= kWaitBinEdges[static_cast<std::size_t>(b)]) return b;
  }
  return 0;
}

std::vector<std::string> validate_config(const SimConfig& cfg) {
  std::vector<std::string> out;
  if (cfg.usable_cap < 1) out.push_back("usable capacity must be >= 1");
  if (cfg.replications < 1) out.push_back("replications must be >= 1");
  if (cfg.transfer_walk_min < 0.0) out.push_back("walk time must be >= 0");
  if (cfg.threads < 0) out.push_back("threads must be >= 0");
  for (auto& m : validate_demand(cfg.demand)) out.push_back(m);
  return out;
}

Simulator::Simulator(const TransitNetwork& net, const SimConfig& cfg)
    : net_(net), cfg_(cfg), plan_(cfg.plan) {
  if (auto errs = validate_config(cfg); !errs.empty()) throw Error("invalid config: " + errs[0]);
  if (auto errs = validate_network(net); !errs.empty()) throw Error("invalid network: " + errs[0]);
  for (auto& g : net_.transfers) {
    if (g.kind == TransferKind::kNearbyStop) g.walk_minutes = cfg.transfer_walk_min;
  }
  // Passengers plan against the published service, so a breakdown does not
  // change their plans.
  graph_ = std::make_unique<RoutingGraph>(net_, cfg.plan, cfg.graph);
  cache_ = std::make_unique<PlanCache>(*graph_);
  if (cfg.breakdown) {
    plan_ = with_buses_removed(cfg.plan, cfg.breakdown->route, cfg.breakdown->removed);
  }
  if (auto bad = graph_->unreachable_pairs(); !bad.empty()) {
    throw Error("stop " + net_.stops[static_cast<std::size_t>(bad[0].second)].id +
                " is not reachable from " +
                net_.stops[static_cast<std::size_t>(bad[0].first)].id);
  }
}

ReplicationResult Simulator::run_replication(int index) const {
  const int n_stops = static_cast<int>(net_.stops.size());
  const int n_routes = static_cast<int>(net_.routes.size());
  const int cap = cfg_.usable_cap;
  const double horizon = cfg_.demand.horizon_min;

  ReplicationResult res;
  res.index = index;
  res.routes.resize(static_cast<std::size_t>(n_routes));

  std::vector<char> is_hub(static_cast<std::size_t>(n_stops));
  for (int s = 0; s < n_stops; ++s) is_hub[static_cast<std::size_t>(s)] = net_.stops[static_cast<std::size_t>(s)].is_hub;
  std::vector<std::vector<int>> route_stop(static_cast<std::size_t>(n_routes));
  std::vector<std::vector<char>> serves(static_cast<std::size_t>(n_routes),
                                        std::vector<char>(static_cast<std::size_t>(n_stops), 0));
  for (int r = 0; r < n_routes; ++r) {
    for (const auto& id : net_.routes[static_cast<std::size_t>(r)].stops) {
      const int s = net_.require_stop(id);
      route_stop[static_cast<std::size_t>(r)].push_back(s);
      serves[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)] = 1;
    }
  }

  std::mt19937_64 rng(derive_seed(cfg_.seed, "arrivals", static_cast<std::uint64_t>(index)));
  std::vector<std::string> ids;
  for (const auto& s : net_.stops) ids.push_back(s.id);
  const auto arrivals = sample_arrivals(cfg_.demand, ids, rng);

  std::priority_queue<Event, std::vector<Event>, EventLater> events;
  std::uint64_t seq = 0;
  auto schedule = [&](double t, EventKind k, int who, int stop = -1) {
    events.push({t, seq++, k, who, stop});
  };

  std::vector<Bus> buses;
  for (int r = 0; r < n_routes; ++r) {
    const ServiceRoute& route = net_.routes[static_cast<std::size_t>(r)];
    const int n = plan_.route(route.name).buses_required;
    const double cycle = route.cycle_minutes();
    std::vector<double> nominal(route.stops.size());
    double t = 0.0;
    for (std::size_t p = 0; p < route.stops.size(); ++p) {
      nominal[p] = t;
      t += route.avg_dwell_minutes[p] + route.leg_minutes[p];
    }
    for (int b = 0; b < n; ++b) {
      const double offset = cycle * b / n;
      std::size_t p = 0;
      while (p < nominal.size() && nominal[p] < offset - kEps) ++p;
      const double at = p < nominal.size() ? nominal[p] : cycle;
      if (p == nominal.size()) p = 0;
      buses.push_back({r, static_cast<int>(p), {}});
      schedule(at - offset, EventKind::kBusArrive, static_cast<int>(buses.size()) - 1);
    }
  }

  std::vector<Passenger> pax;
  pax.reserve(arrivals.size());
  for (std::size_t i = 0; i < arrivals.size(); ++i) {
    const Arrival& a = arrivals[i];
    Passenger p;
    p.origin = a.origin;
    p.dest = a.dest;
    p.arrival = a.time;
    p.last_event = a.time;
    pax.push_back(std::move(p));
    schedule(a.time, EventKind::kPassengerArrive, static_cast<int>(i));
  }

  std::vector<std::deque<int>> queues(static_cast<std::size_t>(n_stops * n_routes));
  auto queue_at = [&](int stop, int route) -> std::deque<int>& {
    return queues[static_cast<std::size_t>(stop * n_routes + route)];
  };
  std::int64_t walking = 0;

  auto touch = [&](Passenger& p, double now) {
    if (now < p.last_event - kEps) ++res.audits.timestamp;
    p.last_event = now;
  };

  auto finish = [&](Passenger& p, double now) {
    touch(p, now);
    p.done = true;
    ++res.exited;
    CompletedTrip trip{p.origin, p.dest, p.arrival, now, p.on_bus, std::max(0, p.leg - 1)};
    if (trip.exit < trip.arrival - kEps || p.on_bus < -kEps || p.on_bus > trip.total() + kEps) {
      ++res.audits.timestamp;
    }
    if (p.leg != static_cast<int>(p.plan->legs.size())) ++res.audits.timestamp;
    res.trips.push_back(trip);
  };

  // Passenger standing at `stop` (just arrived, alighted, or walked in).
  auto settle = [&](int id, int stop, double now) {
    Passenger& p = pax[static_cast<std::size_t>(id)];
    touch(p, now);
    const int nxt = next_stop(p.cursor(), stop);
    if (nxt == kExitStop) {
      finish(p, now);
      return;
    }
    if (nxt != stop) {
      p.walking = true;
      ++walking;
      schedule(now + cfg_.transfer_walk_min, EventKind::kWalkDone, id, nxt);
      return;
    }
    const auto route = get_on(p.cursor(), stop);
    if (!route) throw SimulationError("passenger has no route to board at " + net_.stops[static_cast<std::size_t>(stop)].id);
    p.queue_join = now;
    queue_at(stop, *route).push_back(id);
  };

  auto load = [&](Bus& bus, int stop, double now) {
    auto& q = queue_at(stop, bus.route);
    int loaded = 0;
    while (!q.empty() && static_cast<int>(bus.riders.size()) < cap) {
      const int id = q.front();
      q.pop_front();
      Passenger& p = pax[static_cast<std::size_t>(id)];
      if (!q.empty() && pax[static_cast<std::size_t>(q.front())].queue_join < p.queue_join - kEps) {
        ++res.audits.fifo;
      }
      touch(p, now);
      p.riding = true;
      p.board_time = now;
      bus.riders.push_back(id);
      ++loaded;
    }
    if (static_cast<int>(bus.riders.size()) > cap) ++res.audits.capacity;
    if (static_cast<int>(bus.riders.size()) < cap) {
      // Riders of other routes at this stop whose leg this bus also serves.
      for (int r = 0; r < n_routes; ++r) {
        if (r == bus.route) continue;
        for (int id : queue_at(stop, r)) {
          const Passenger& p = pax[static_cast<std::size_t>(id)];
          const PlanLeg& leg = p.plan->legs[static_cast<std::size_t>(p.leg)];
          if (serves[static_cast<std::size_t>(bus.route)][static_cast<std::size_t>(leg.alight_stop)]) {
            ++res.equivalent_skips;
          }
        }
      }
    }
    return loaded;
  };

  double last_time = -1.0;
  std::int64_t stalled = 0;
  while (!events.empty()) {
    const Event ev = events.top();
    if (ev.time > horizon) break;
    events.pop();
    ++res.events;
    if (ev.time > last_time) {
      last_time = ev.time;
      stalled = 0;
    } else if (++stalled > kStallLimit) {
      std::ostringstream msg;
      msg << "simulation stalled at t=" << ev.time << " after " << res.events << " events";
      throw SimulationError(msg.str());
    }
    const double now = ev.time;
    switch (ev.kind) {
      case EventKind::kPassengerArrive: {
        Passenger& p = pax[static_cast<std::size_t>(ev.who)];
        p.plan = cache_->get(p.origin, p.dest);
        if (!p.plan->reachable) throw SimulationError("unroutable passenger");
        ++res.created;
        settle(ev.who, p.origin, now);
        break;
      }
      case EventKind::kWalkDone: {
        Passenger& p = pax[static_cast<std::size_t>(ev.who)];
        p.walking = false;
        --walking;
        settle(ev.who, ev.stop, now);
        break;
      }
      case EventKind::kBusArrive: {
        Bus& bus = buses[static_cast<std::size_t>(ev.who)];
        const int stop = route_stop[static_cast<std::size_t>(bus.route)][static_cast<std::size_t>(bus.pos)];
        std::vector<int> staying;
        std::vector<int> leaving;
        for (int id : bus.riders) {
          Passenger& p = pax[static_cast<std::size_t>(id)];
          if (get_off(p.cursor(), stop)) {
            leaving.push_back(id);
          } else {
            staying.push_back(id);
          }
        }
        bus.riders = std::move(staying);
        for (int id : leaving) {
          Passenger& p = pax[static_cast<std::size_t>(id)];
          p.riding = false;
          p.on_bus += now - p.board_time;
          ++p.leg;
          settle(id, stop, now);
        }
        const int loaded = load(bus, stop, now);
        const double dwell = dwell_minutes(cfg_.dwell, loaded, static_cast<int>(leaving.size()),
                                           is_hub[static_cast<std::size_t>(stop)]);
        schedule(now + dwell, EventKind::kBusDepart, ev.who);
        break;
      }
      case EventKind::kBusDepart: {
        Bus& bus = buses[static_cast<std::size_t>(ev.who)];
        const ServiceRoute& route = net_.routes[static_cast<std::size_t>(bus.route)];
        const int stop = route_stop[static_cast<std::size_t>(bus.route)][static_cast<std::size_t>(bus.pos)];
        load(bus, stop, now);  // late arrivals while the bus dwelled
        const int on = static_cast<int>(bus.riders.size());
        if (on > cap) ++res.audits.capacity;
        for (SegmentTally* t : {&res.routes[static_cast<std::size_t>(bus.route)], &res.overall}) {
          t->util_sum += utilization(on, cap);
          ++t->segments;
          if (overloaded(on, cap)) ++t->overloaded;
        }
        const double leg = route.leg_minutes[static_cast<std::size_t>(bus.pos)];
        bus.pos = (bus.pos + 1) % static_cast<int>(route.stops.size());
        schedule(now + leg, EventKind::kBusArrive, ev.who);
        break;
      }
    }
  }

  std::int64_t queued = 0;
  for (const auto& q : queues) queued += static_cast<std::int64_t>(q.size());
  for (const auto& b : buses) res.onboard_at_end += static_cast<std::int64_t>(b.riders.size());
  res.waiting_at_end = queued + walking;
  if (res.created != res.exited + res.onboard_at_end + res.waiting_at_end) ++res.audits.conservation;

  double wait_all = 0.0;
  std::int64_t counted = 0;
  for (const auto& p : pax) {
    if (!p.plan) continue;  // arrival after the last processed event
    ++counted;
    if (p.done) continue;
    double on_bus = p.on_bus + (p.riding ? horizon - p.board_time : 0.0);
    wait_all += (horizon - p.arrival) - on_bus;
  }
  if (!res.trips.empty()) {
    double total = 0.0, wait = 0.0, on_bus = 0.0, transfers = 0.0, with_transfer = 0.0;
    std::array<double, kWaitBins> bins{};
    for (const auto& t : res.trips) {
      total += t.total();
      wait += t.wait();
      on_bus += t.on_bus;
      transfers += t.transfers;
      if (t.transfers > 0) with_transfer += 1.0;
      bins[static_cast<std::size_t>(wait_bin(t.wait()))] += 1.0;
    }
    const double n = static_cast<double>(res.trips.size());
    res.avg_total = total / n;
    res.avg_wait = wait / n;
    res.avg_on_bus = on_bus / n;
    res.avg_transfers = transfers / n;
    res.pct_transfers = 100.0 * with_transfer / n;
    for (std::size_t b = 0; b < bins.size(); ++b) res.wait_hist[b] = bins[b] / n;
    wait_all += wait;
  }
  res.avg_wait_all = counted ? wait_all / static_cast<double>(counted) : 0.0;
  return res;
}

std::vector<ReplicationResult> Simulator::run_all() const {
  const int reps = cfg_.replications;
  std::vector<ReplicationResult> out(static_cast<std::size_t>(reps));
  int threads = cfg_.threads > 0 ? cfg_.threads
                                 : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, reps);
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  auto work = [&](int w) {
    try {
      for (int i = next++; i < reps; i = next++) out[static_cast<std::size_t>(i)] = run_replication(i);
    } catch (...) {
      errors[static_cast<std::size_t>(w)] = std::current_exception();
      next = reps;
    }
  };
  if (threads <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

SimReport Simulator::run() const { return summarize(cfg_, plan_, net_, run_all()); }

namespace {

MetricSummary summarize_metric(std::vector<double> xs) {
  MetricSummary m;
  m.ci = t_interval(xs);
  m.per_rep = std::move(xs);
  return m;
}

}  // namespace

SimReport summarize(const SimConfig& cfg, const FrequencyPlan& plan,
                    const TransitNetwork& net, const std::vector<ReplicationResult>& reps) {
  SimReport out;
  out.usable_cap = cfg.usable_cap;
  out.demand_per_hour = cfg.demand.total_per_hour;
  out.period = cfg.period;
  out.replications = static_cast<int>(reps.size());
  out.seed = cfg.seed;
  out.breakdown = cfg.breakdown;

  auto collect = [&](auto&& f, bool passengers_only) {
    std::vector<double> xs;
    for (const auto& r : reps) {
      if (passengers_only && r.trips.empty()) continue;
      xs.push_back(f(r));
    }
    return summarize_metric(std::move(xs));
  };
  for (std::size_t i = 0; i < net.routes.size(); ++i) {
    RouteSummary rs;
    rs.route = net.routes[i].name;
    const RouteFrequency& f = plan.route(rs.route);
    rs.buses = f.buses_required;
    rs.headway_min = net.routes[i].cycle_minutes() / f.buses_required;
    rs.u_s = collect([&](const ReplicationResult& r) { return r.routes[i].u_s(); }, false);
    rs.s75 = collect([&](const ReplicationResult& r) { return r.routes[i].s75(); }, false);
    out.routes.push_back(std::move(rs));
  }
  out.overall.route = "all";
  for (const auto& r : out.routes) out.overall.buses += r.buses;
  out.overall.u_s = collect([](const ReplicationResult& r) { return r.overall.u_s(); }, false);
  out.overall.s75 = collect([](const ReplicationResult& r) { return r.overall.s75(); }, false);
  out.avg_total = collect([](const ReplicationResult& r) { return r.avg_total; }, true);
  out.avg_wait = collect([](const ReplicationResult& r) { return r.avg_wait; }, true);
  out.avg_wait_all = collect([](const ReplicationResult& r) { return r.avg_wait_all; }, true);
  out.avg_on_bus = collect([](const ReplicationResult& r) { return r.avg_on_bus; }, true);
  out.avg_transfers = collect([](const ReplicationResult& r) { return r.avg_transfers; }, true);
  out.pct_transfers = collect([](const ReplicationResult& r) { return r.pct_transfers; }, true);
  for (std::size_t b = 0; b < kWaitBins; ++b) {
    out.wait_hist[b] = collect([b](const ReplicationResult& r) { return r.wait_hist[b]; }, true);
  }
  for (const auto& r : reps) {
    out.created += r.created;
    out.exited += r.exited;
    out.audits.capacity += r.audits.capacity;
    out.audits.fifo += r.audits.fifo;
    out.audits.timestamp += r.audits.timestamp;
    out.audits.conservation += r.audits.conservation;
    out.equivalent_skips += r.equivalent_skips;
  }
  return out;
}

SimReport run_simulation(const TransitNetwork& net, const SimConfig& cfg) {
  return Simulator(net, cfg).run();
}

BreakdownResult run_breakdown(const TransitNetwork& net, const SimConfig& cfg,
                              const std::string& route, int removed) {
  SimConfig base = cfg;
  base.breakdown.reset();
  SimConfig scenario = cfg;
  scenario.breakdown = BreakdownSpec{route, removed};
  BreakdownResult out;
  out.baseline = run_simulation(net, base);
  out.scenario = run_simulation(net, scenario);
  return out;
}

}  // namespace hubspoke
