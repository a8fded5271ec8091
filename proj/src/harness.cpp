#include "slicing/harness.hpp"

#include <algorithm>
#include <chrono>
#include <queue>
#include <random>
#include <set>

#include "slicing/errors.hpp"

namespace slicing {

Protocol parse_protocol(std::string_view s) {
  if (s == "ps" || s == "primary-secondary") return Protocol::PrimarySecondary;
  if (s == "db" || s == "db-partition") return Protocol::DbPartition;
  if (s == "random") return Protocol::Random;
  throw Error("unknown protocol '" + std::string(s) + "'");
}

std::string_view to_string(Protocol p) {
  switch (p) {
    case Protocol::PrimarySecondary: return "ps";
    case Protocol::DbPartition: return "db";
    case Protocol::Random: return "random";
  }
  return "?";
}

namespace {

using Assignments = std::vector<std::pair<std::string, Value>>;

Value num(std::int64_t v) { return Value{v}; }

// Discrete-event loop. Every process ticks after 1 + Exp(mean) and every
// message takes as long to arrive. A process stops ticking once it holds
// max_events events; the run ends when nothing is left in flight.
class Engine {
 public:
  explicit Engine(const SimConfig& cfg) : cfg_(cfg), rng_(cfg.seed), exp_(1.0 / cfg.delay_mean) {
    trace_.process_count = cfg.processes;
    trace_.vars.resize(cfg.processes);
    trace_.events.resize(cfg.processes);
  }

  struct Delivery {
    int from, from_event, to, tag;
    std::int64_t value;
  };

  template <class OnTick, class OnMessage>
  void run(OnTick on_tick, OnMessage on_message) {
    for (int p = 0; p < cfg_.processes; ++p) schedule({now_ + delay(), seq_++, p, std::nullopt});
    while (!queue_.empty()) {
      Item it = queue_.top();
      queue_.pop();
      now_ = it.time;
      if (it.msg) {
        on_message(*it.msg);
      } else if (static_cast<int>(trace_.events[it.process].size()) < cfg_.max_events_per_process) {
        on_tick(it.process);
        schedule({now_ + delay(), seq_++, it.process, std::nullopt});
      }
    }
  }

  int event(int p, Assignments a, bool init = false) {
    trace_.events[p].push_back({init, std::move(a)});
    return static_cast<int>(trace_.events[p].size());
  }

  void send(int from, int from_event, int to, int tag, std::int64_t value = 0) {
    schedule({now_ + delay(), seq_++, to, Delivery{from, from_event, to, tag, value}});
  }

  // Receive event for d; returns its index.
  int receive(const Delivery& d, Assignments a) {
    int k = event(d.to, std::move(a));
    trace_.messages.push_back({{d.from, d.from_event}, {d.to, k}});
    return k;
  }

  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  std::mt19937_64& rng() { return rng_; }
  TraceData& trace() { return trace_; }

 private:
  struct Item {
    double time;
    std::uint64_t seq;
    int process;
    std::optional<Delivery> msg;
    bool operator>(const Item& o) const { return std::tie(time, seq) > std::tie(o.time, o.seq); }
  };
  void schedule(Item it) { queue_.push(std::move(it)); }
  double delay() { return 1.0 + exp_(rng_); }

  const SimConfig& cfg_;
  std::mt19937_64 rng_;
  std::exponential_distribution<double> exp_;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue_;
  double now_ = 0;
  std::uint64_t seq_ = 0;
  TraceData trace_;
};

enum PsTag { kBecome, kBecomeAck, kStop, kStopDone, kPromote, kPromoteAck, kDemoteDone };

TraceData run_primary_secondary(const SimConfig& cfg) {
  Engine e(cfg);
  const int n = cfg.processes;
  std::vector<int> is_p(n, 0), is_s(n, 0), prim(n, 0), sec(n, 0);
  std::vector<char> busy(n, 0);
  for (int p = 0; p < n; ++p)
    for (const char* v : {"isPrimary", "isSecondary", "primary", "secondary"})
      e.trace().vars[p].push_back({v, Monotonicity::None, num(0)});
  is_p[0] = 1;
  sec[0] = 2;
  is_s[1] = 1;
  prim[1] = 1;
  for (int p = 0; p < n; ++p)
    e.event(p, {{"isPrimary", num(is_p[p])}, {"isSecondary", num(is_s[p])}, {"primary", num(prim[p])}, {"secondary", num(sec[p])}}, true);

  auto on_tick = [&](int p) {
    if (!is_p[p] || busy[p] || !e.coin()) {
      e.event(p, {});
      return;
    }
    int s = sec[p] - 1;
    busy[p] = 1;
    if (n >= 3 && e.coin()) {
      int t;
      do t = e.pick(0, n - 1);
      while (t == p || t == s);
      int k = e.event(p, {});
      e.send(p, k, t, kBecome);
    } else {
      is_s[p] = 1;
      prim[p] = s + 1;
      int k = e.event(p, {{"isSecondary", num(1)}, {"primary", num(s + 1)}});
      e.send(p, k, s, kPromote);
    }
  };
  auto on_message = [&](const Engine::Delivery& d) {
    int q = d.to, from = d.from;
    switch (d.tag) {
      case kBecome: {
        is_s[q] = 1;
        prim[q] = from + 1;
        int k = e.receive(d, {{"isSecondary", num(1)}, {"primary", num(from + 1)}});
        e.send(q, k, from, kBecomeAck);
        break;
      }
      case kBecomeAck: {
        int old = sec[q] - 1;
        sec[q] = from + 1;
        int k = e.receive(d, {{"secondary", num(from + 1)}});
        e.send(q, k, old, kStop);
        break;
      }
      case kStop: {
        is_s[q] = 0;
        prim[q] = 0;
        int k = e.receive(d, {{"isSecondary", num(0)}, {"primary", num(0)}});
        e.send(q, k, from, kStopDone);
        break;
      }
      case kStopDone:
        e.receive(d, {});
        busy[q] = 0;
        break;
      case kPromote: {
        is_p[q] = 1;
        sec[q] = from + 1;
        busy[q] = 1;
        int k = e.receive(d, {{"isPrimary", num(1)}, {"secondary", num(from + 1)}});
        e.send(q, k, from, kPromoteAck);
        break;
      }
      case kPromoteAck: {
        is_p[q] = 0;
        sec[q] = 0;
        busy[q] = 0;
        int k = e.receive(d, {{"isPrimary", num(0)}, {"secondary", num(0)}});
        e.send(q, k, from, kDemoteDone);
        break;
      }
      case kDemoteDone:
        is_s[q] = 0;
        prim[q] = 0;
        busy[q] = 0;
        e.receive(d, {{"isSecondary", num(0)}, {"primary", num(0)}});
        break;
    }
  };
  e.run(on_tick, on_message);
  return std::move(e.trace());
}

enum DbTag { kPropose, kAck, kToken };

TraceData run_db_partition(const SimConfig& cfg) {
  Engine e(cfg);
  const int n = cfg.processes;
  std::vector<int> part(n, 1);
  int holder = 1, acks = 0;
  bool proposing = false;
  for (int p = 0; p < n; ++p) {
    e.trace().vars[p].push_back({"partition", Monotonicity::None, num(0)});
    if (p > 0) e.trace().vars[p].push_back({"change", Monotonicity::None, num(0)});
    Assignments a{{"partition", num(1)}};
    if (p > 0) a.push_back({"change", num(0)});
    e.event(p, std::move(a), true);
  }
  auto on_tick = [&](int p) {
    if (p != holder || proposing || !e.coin()) {
      e.event(p, {});
      return;
    }
    int v;
    do v = e.pick(1, 4);
    while (v == part[p]);
    part[p] = v;
    proposing = true;
    acks = 0;
    int k = e.event(p, {{"change", num(1)}, {"partition", num(v)}});
    for (int q = 0; q < n; ++q)
      if (q != p) e.send(p, k, q, kPropose, v);
  };
  auto on_message = [&](const Engine::Delivery& d) {
    int q = d.to;
    switch (d.tag) {
      case kPropose: {
        part[q] = static_cast<int>(d.value);
        int k = e.receive(d, {{"partition", num(d.value)}});
        e.send(q, k, d.from, kAck);
        break;
      }
      case kAck: {
        if (++acks < n - 1) {
          e.receive(d, {});
          break;
        }
        proposing = false;
        int k = e.receive(d, {{"change", num(0)}});
        int next = q + 1 < n ? q + 1 : 1;
        holder = -1;
        if (next == q) holder = q;
        else e.send(q, k, next, kToken);
        break;
      }
      case kToken:
        e.receive(d, {});
        holder = q;
        break;
    }
  };
  e.run(on_tick, on_message);
  return std::move(e.trace());
}

TraceData run_random(const SimConfig& cfg) {
  Engine e(cfg);
  const int n = cfg.processes;
  std::vector<std::int64_t> counter(n, 0);
  for (int p = 0; p < n; ++p) {
    e.trace().vars[p].push_back({"x", Monotonicity::None, num(0)});
    e.trace().vars[p].push_back({"c", Monotonicity::NonDecreasing, num(0)});
    e.trace().vars[p].push_back({"flag", Monotonicity::None, num(0)});
  }
  auto local = [&](int p) {
    counter[p] += e.pick(0, 1);
    return Assignments{{"x", num(e.pick(0, 3))}, {"c", num(counter[p])}, {"flag", num(e.coin() ? 1 : 0)}};
  };
  auto on_tick = [&](int p) {
    int k = e.event(p, local(p));
    if (e.coin(0.2)) e.trace().checkpoints.push_back({p, k});
    if (n > 1 && e.coin(0.4)) {
      int q;
      do q = e.pick(0, n - 1);
      while (q == p);
      e.send(p, k, q, 0);
    }
  };
  auto on_message = [&](const Engine::Delivery& d) {
    int k = e.receive(d, local(d.to));
    if (e.coin(0.2)) e.trace().checkpoints.push_back({d.to, k});
  };
  e.run(on_tick, on_message);
  return std::move(e.trace());
}

// Flip one protocol variable at one mid-trace event, restoring the true
// value at the next event, until a cut through that event shows the fault.
TraceData inject_fault(const SimConfig& cfg, const TraceData& clean) {
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int n = clean.process_count;
  Computation base(clean);
  for (int attempt = 0; attempt < 500; ++attempt) {
    int p = pick(0, n - 1);
    int m = static_cast<int>(clean.events[p].size());
    if (m < 3) continue;
    int idx = pick(std::max(2, m / 4 + 1), std::max(2, (3 * m) / 4));
    const auto& decls = clean.vars[p];
    int slot = pick(0, static_cast<int>(decls.size()) - 1);
    const std::string& name = decls[slot].name;
    std::int64_t cur = std::get<std::int64_t>(base.value(p, slot, idx));
    std::int64_t flipped;
    if (name == "isPrimary" || name == "isSecondary" || name == "change") flipped = 1 - cur;
    else if (name == "partition") do flipped = pick(1, 4); while (flipped == cur);
    else do flipped = pick(0, n); while (flipped == cur);

    TraceData t = clean;
    auto set = [&](int k, std::int64_t v) {
      auto& a = t.events[p][k - 1].assignments;
      auto it = std::find_if(a.begin(), a.end(), [&](const auto& kv) { return kv.first == name; });
      if (it != a.end()) it->second = num(v);
      else a.push_back({name, num(v)});
    };
    set(idx, flipped);
    if (idx < m) {
      auto& a = t.events[p][idx].assignments;
      bool assigned = std::any_of(a.begin(), a.end(), [&](const auto& kv) { return kv.first == name; });
      if (!assigned) set(idx + 1, cur);
    }
    Computation comp(t);
    Predicate fault = builtin_fault_predicate(cfg.protocol, comp);
    const Layout& l = comp.layout();
    auto lo = comp.graph().down(l.vertex(p, idx));
    auto hi = comp.graph().reach(l.vertex(p, idx + 1));
    Cut least(lo.begin(), lo.end()), greatest(hi.begin(), hi.end());
    for (int& x : greatest) --x;
    if (eval(fault, comp, least) || eval(fault, comp, greatest)) return t;
  }
  throw Error("fault injection found no faulty cut; try another seed");
}

}  // namespace

TraceData simulate_trace(const SimConfig& cfg) {
  int min_n = cfg.protocol == Protocol::Random ? 1 : 2;
  if (cfg.processes < min_n) throw Error("simulation needs at least " + std::to_string(min_n) + " processes");
  if (cfg.max_events_per_process < 1) throw Error("simulation needs at least one event per process");
  if (!(cfg.delay_mean > 0)) throw Error("delay mean must be positive");
  TraceData t;
  switch (cfg.protocol) {
    case Protocol::PrimarySecondary: t = run_primary_secondary(cfg); break;
    case Protocol::DbPartition: t = run_db_partition(cfg); break;
    case Protocol::Random: t = run_random(cfg); break;
  }
  if (cfg.inject_fault) {
    if (cfg.protocol == Protocol::Random) throw Error("fault injection needs a protocol with an invariant");
    t = inject_fault(cfg, t);
  }
  return t;
}

std::string simulate(const SimConfig& cfg) { return write_trace(simulate_trace(cfg)); }

Predicate builtin_fault_predicate(Protocol protocol, const Computation& comp) {
  const int n = comp.process_count();
  std::string text;
  auto p = [](int i) { return "p" + std::to_string(i); };
  if (protocol == Protocol::PrimarySecondary) {
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        if (i == j) continue;
        if (!text.empty()) text += " && ";
        text += "(!" + p(i) + ".isPrimary || !" + p(j) + ".isSecondary || " + p(i) + ".secondary != " + std::to_string(j) +
                " || " + p(j) + ".primary != " + std::to_string(i) + ")";
      }
  } else if (protocol == Protocol::DbPartition) {
    auto slot = comp.var_slot(0, "partition");
    if (!slot || n < 2) throw Error("trace lacks the db-partition variables");
    std::set<Value> values;
    for (int k = comp.is_init(0) ? 1 : 0; k <= comp.events(0); ++k) values.insert(comp.value(0, *slot, k));
    for (int i = 2; i <= n; ++i) text += "!" + p(i) + ".change && ";
    text += "(";
    bool first = true;
    for (const auto& v : values) {
      if (!first) text += " || ";
      first = false;
      std::string vs = to_string(v);
      text += "(p1.partition = " + vs + " && (";
      for (int i = 2; i <= n; ++i) text += (i > 2 ? " || " : "") + p(i) + ".partition != " + vs;
      text += "))";
    }
    text += ")";
  } else {
    throw Error("the random protocol has no built-in fault predicate");
  }
  try {
    return parse_predicate(text, comp);
  } catch (const ParseError& e) {
    throw Error(std::string("trace lacks the protocol variables: ") + e.what());
  }
}

std::vector<BenchRow> bench(const BenchConfig& cfg) {
  std::vector<BenchRow> rows;
  using clock = std::chrono::steady_clock;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n)
    for (int run = 1; run <= cfg.runs; ++run)
      for (bool fault : {false, true}) {
        if (fault && !cfg.with_faults) continue;
        SimConfig sc;
        sc.protocol = cfg.protocol;
        sc.processes = n;
        sc.max_events_per_process = cfg.events;
        sc.seed = static_cast<std::uint64_t>(run);
        sc.inject_fault = fault;
        Computation comp(simulate_trace(sc));
        Predicate b = builtin_fault_predicate(cfg.protocol, comp);
        for (const char* method : {"slice", "naive"}) {
          BenchRow row{cfg.protocol, n, sc.seed, fault, method, "false"};
          auto t0 = clock::now();
          try {
            DetectionResult r = std::string_view(method) == "slice" ? detect_possibly(comp, b, cfg.budget)
                                                                    : search_lattice(comp.graph(), comp, b, cfg.budget);
            row.found = r.found ? "true" : "false";
            row.cuts_explored = r.cuts_explored;
            row.scc = r.slice_scc_count;
            row.peak_nodes = r.peak_nodes;
          } catch (const BudgetExceeded&) {
            row.found = "budget";
            row.cuts_explored = cfg.budget;
          }
          row.time_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
          rows.push_back(row);
        }
      }
  return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "protocol,n,seed,fault,method,found,cuts_explored,scc,time_ms,peak_nodes\n";
  for (const auto& r : rows)
    out << to_string(r.protocol) << "," << r.n << "," << r.seed << "," << (r.fault ? "true" : "false") << "," << r.method
        << "," << r.found << "," << r.cuts_explored << "," << r.scc << "," << r.time_ms << "," << r.peak_nodes << "\n";
}

}  // namespace slicing
