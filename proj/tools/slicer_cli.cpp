// slicer: command-line front end for the slicing library.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "slicing/analysis.hpp"
#include "slicing/errors.hpp"
#include "slicing/harness.hpp"
#include "slicing/oracle.hpp"
#include "slicing/slice_algebra.hpp"
#include "slicing/slicer_fast.hpp"

using namespace slicing;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string cut_text(const Cut& c) {
  std::string s = "(";
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
  return s + ")";
}

void print_stats(const Slice& s) {
  std::cout << "sccs: " << s.scc_count() << "\n"
            << "nontrivial_sccs: " << s.nontrivial_scc_count() << "\n"
            << "edges: " << s.graph().edge_count() << "\n"
            << "empty: " << (s.empty() ? "true" : "false") << "\n";
}

void dump_cuts(const EventGraph& g) {
  for (const auto& c : oracle::enumerate_cuts(g)) std::cout << cut_text(c) << "\n";
}

Slice slice_by_algo(const Computation& comp, const Predicate& b, const std::string& algo, int cap, bool exact_dnf,
                    bool force, std::vector<std::string>* explain) {
  if (exact_dnf) {
    int k = static_cast<int>(support(b).size());
    if (k > cap && !force) throw Error("exact DNF over " + std::to_string(k) + " processes exceeds the cap; pass --force");
    return slice_klocal_general(comp, b, std::max(cap, k));
  }
  if (algo == "auto" || algo == "approx") return approximate_slice(comp, b, cap, explain);
  if (algo == "regular") return slice_regular(comp, b);
  if (algo == "postlinear") return slice_postlinear(comp, b);
  if (algo == "conjunctive") return slice_conjunctive(comp, b);
  if (algo == "channel") {
    if (b.kind() != Predicate::Kind::Atom) throw ClassError("channel slicer needs a single channel atom");
    auto cb = channel_bound(b.atom());
    if (!cb) throw ClassError("not a channel atom: " + b.to_string());
    if (kind(b.atom()) == AtomKind::ChannelAtMost) return slice_channel_atmost(comp, cb->from, cb->to, static_cast<int>(cb->k));
    if (kind(b.atom()) == AtomKind::ChannelAtLeast) return slice_channel_atleast(comp, cb->from, cb->to, static_cast<int>(cb->k));
    return compose_meet(slice_channel_atmost(comp, cb->from, cb->to, static_cast<int>(cb->k)),
                        slice_channel_atleast(comp, cb->from, cb->to, static_cast<int>(cb->k)));
  }
  if (algo == "klocal") {
    PredicateClass c = classify(b, cap);
    if (c.regular) {
      if (explain) explain->push_back("projection onto " + std::to_string(c.support.size()) + " processes");
      return slice_klocal_regular(comp, b, c.support);
    }
    return slice_klocal_general(comp, b, cap);
  }
  throw Error("unknown algorithm '" + algo + "'");
}

std::vector<EventId> parse_event_list(const std::string& text) {
  std::vector<EventId> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int p = 0, k = 0;
    char tail = 0;
    if (std::sscanf(item.c_str(), "p%d:%d%c", &p, &k, &tail) != 2 || p < 1 || k < 1)
      throw Error("bad checkpoint '" + item + "', expected p<i>:<index>");
    out.push_back({p - 1, k});
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Computation slicing toolkit"};
  app.require_subcommand(1);

  std::string trace_path, pred_text, pred2_text;
  std::size_t budget = oracle::kDefaultBudget;

  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force lattice statistics");
  bool dump_lattice = false;
  oracle_cmd->add_option("trace", trace_path)->required();
  oracle_cmd->add_option("predicate", pred_text);
  oracle_cmd->add_flag("--dump-lattice", dump_lattice);
  oracle_cmd->add_option("--budget", budget);

  auto* slice_cmd = app.add_subcommand("slice", "Slice a computation");
  std::string algo = "auto", dot_path;
  bool stats = false, cuts = false, explain = false, exact_dnf = false, force = false;
  int cap = kDefaultLocalityCap;
  slice_cmd->add_option("trace", trace_path)->required();
  slice_cmd->add_option("predicate", pred_text)->required();
  slice_cmd->add_option("--algo", algo)
      ->check(CLI::IsMember({"auto", "regular", "postlinear", "conjunctive", "channel", "klocal", "approx"}));
  slice_cmd->add_option("--dot", dot_path);
  slice_cmd->add_flag("--stats", stats);
  slice_cmd->add_flag("--dump-cuts", cuts);
  slice_cmd->add_flag("--explain", explain);
  slice_cmd->add_option("--k-cap", cap);
  slice_cmd->add_flag("--exact-dnf", exact_dnf);
  slice_cmd->add_flag("--force", force);

  auto* compose_cmd = app.add_subcommand("compose", "Compose two slices");
  std::string op = "meet";
  compose_cmd->add_option("trace", trace_path)->required();
  compose_cmd->add_option("pred1", pred_text)->required();
  compose_cmd->add_option("pred2", pred2_text)->required();
  compose_cmd->add_option("--op", op)->check(CLI::IsMember({"meet", "join"}));
  compose_cmd->add_flag("--dump-cuts", cuts);

  auto* detect_cmd = app.add_subcommand("detect", "Detect or monitor a predicate");
  std::string modality = "possibly";
  detect_cmd->add_option("trace", trace_path)->required();
  detect_cmd->add_option("predicate", pred_text)->required();
  detect_cmd->add_option("--modality", modality);
  detect_cmd->add_option("--budget", budget);

  auto* count_cmd = app.add_subcommand("count", "Count the cuts of a predicate's slice");
  count_cmd->add_option("trace", trace_path)->required();
  count_cmd->add_option("predicate", pred_text)->required();
  count_cmd->add_option("--budget", budget);

  auto* cp_cmd = app.add_subcommand("checkpoint", "Consistent global checkpoints");
  std::string min_list, max_list;
  bool rgraph = false;
  cp_cmd->add_option("trace", trace_path)->required();
  cp_cmd->add_option("--min", min_list);
  cp_cmd->add_option("--max", max_list);
  cp_cmd->add_flag("--rgraph", rgraph);

  auto* comb_cmd = app.add_subcommand("combinatorics", "Counting through slices");
  std::string problem;
  int cn = 0, ck = 0;
  comb_cmd->add_option("problem", problem)->required()->check(CLI::IsMember({"nonconsecutive"}));
  comb_cmd->add_option("n", cn)->required();
  comb_cmd->add_option("k", ck)->required();

  auto* sim_cmd = app.add_subcommand("simulate", "Generate a protocol trace");
  SimConfig sim;
  std::string protocol = "ps", out_path;
  sim_cmd->add_option("--protocol", protocol)->check(CLI::IsMember({"ps", "db", "random"}));
  sim_cmd->add_option("-n", sim.processes);
  sim_cmd->add_option("--events", sim.max_events_per_process);
  sim_cmd->add_option("--seed", sim.seed);
  sim_cmd->add_option("--delay-mean", sim.delay_mean);
  sim_cmd->add_flag("--fault", sim.inject_fault);
  sim_cmd->add_option("-o", out_path);

  auto* bench_cmd = app.add_subcommand("bench", "Slice detection against naive search");
  BenchConfig bc;
  std::string range = "4:7";
  bench_cmd->add_option("--protocol", protocol)->check(CLI::IsMember({"ps", "db"}));
  bench_cmd->add_option("--n-range", range);
  bench_cmd->add_option("--runs", bc.runs);
  bench_cmd->add_option("--events", bc.events);
  bench_cmd->add_flag("--faults", bc.with_faults);
  bench_cmd->add_option("--budget", bc.budget);
  bench_cmd->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*oracle_cmd) {
      Computation comp = load_trace(read_file(trace_path));
      auto lattice = oracle::enumerate_cuts(comp, budget);
      std::cout << "cuts: " << lattice.size() << "\n";
      if (!pred_text.empty()) {
        Predicate b = parse_predicate(pred_text, comp);
        auto sat = oracle::filter(lattice, comp, b);
        std::cout << "satisfying: " << sat.size() << "\n"
                  << "closure: " << oracle::reg_closure(sat).size() << "\n";
      }
      std::cout << "join_irreducibles: " << oracle::join_irreducibles(lattice).size() << "\n";
      if (dump_lattice)
        for (const auto& c : lattice) std::cout << cut_text(c) << "\n";
    } else if (*slice_cmd) {
      Computation comp = load_trace(read_file(trace_path));
      Predicate b = parse_predicate(pred_text, comp);
      std::vector<std::string> lines;
      if (explain) {
        PredicateClass c = classify(b, cap);
        std::cout << "class: " << to_string(c.tag) << " (support " << c.k << ")\n";
      }
      Slice s = slice_by_algo(comp, b, algo, cap, exact_dnf, force, explain ? &lines : nullptr);
      if (explain) {
        if (lines.empty()) std::cout << "algorithm: " << algo << "\n";
        for (const auto& l : lines) std::cout << l << "\n";
      }
      if (stats || (!cuts && dot_path.empty() && !explain)) print_stats(s);
      if (!dot_path.empty()) {
        std::ofstream out(dot_path);
        if (!out) throw Error("cannot write " + dot_path);
        out << s.graph().to_dot();
      }
      if (cuts) dump_cuts(s.graph());
    } else if (*compose_cmd) {
      Computation comp = load_trace(read_file(trace_path));
      Slice a = approximate_slice(comp, parse_predicate(pred_text, comp));
      Slice b = approximate_slice(comp, parse_predicate(pred2_text, comp));
      Slice s = op == "meet" ? compose_meet(a, b) : compose_join(a, b);
      print_stats(s);
      std::cout << "cuts: " << count_slice_cuts(s) << "\n";
      if (cuts) dump_cuts(s.graph());
    } else if (*detect_cmd) {
      Computation comp = load_trace(read_file(trace_path));
      Predicate b = parse_predicate(pred_text, comp);
      Modality m = parse_modality(modality);
      if (m == Modality::Possibly && !classify(b).regular) {
        DetectionResult r = detect_possibly(comp, b, budget);
        std::cout << "found: " << (r.found ? "true" : "false") << "\n";
        if (r.witness) std::cout << "witness: " << cut_text(*r.witness) << "\n";
        std::cout << "cuts_explored: " << r.cuts_explored << "\n"
                  << "slice_sccs: " << r.slice_scc_count << "\n";
      } else {
        std::cout << modality << ": " << (monitor_regular(comp, b, m) ? "true" : "false") << "\n";
      }
    } else if (*count_cmd) {
      Computation comp = load_trace(read_file(trace_path));
      std::cout << count_slice_cuts(approximate_slice(comp, parse_predicate(pred_text, comp)), budget) << "\n";
    } else if (*cp_cmd) {
      Computation comp = load_trace(read_file(trace_path));
      if (!min_list.empty())
        std::cout << "min: " << cut_text(min_consistent_checkpoint(comp, parse_event_list(min_list))) << "\n";
      if (!max_list.empty())
        std::cout << "max: " << cut_text(max_consistent_checkpoint(comp, parse_event_list(max_list))) << "\n";
      if (rgraph || (min_list.empty() && max_list.empty())) {
        RGraph r = build_rgraph(comp);
        for (std::size_t a = 0; a < r.nodes.size(); ++a)
          for (int b : r.edges[a]) std::cout << to_string(r.nodes[a]) << " -> " << to_string(r.nodes[b]) << "\n";
      }
    } else if (*comb_cmd) {
      std::cout << ksubset_count_nonconsecutive(cn, ck) << "\n";
    } else if (*sim_cmd) {
      sim.protocol = parse_protocol(protocol);
      std::string text = simulate(sim);
      if (out_path.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(out_path);
        if (!out) throw Error("cannot write " + out_path);
        out << text;
      }
    } else if (*bench_cmd) {
      bc.protocol = parse_protocol(protocol);
      auto colon = range.find(':');
      if (colon == std::string::npos) throw Error("--n-range expects lo:hi");
      bc.n_min = std::stoi(range.substr(0, colon));
      bc.n_max = std::stoi(range.substr(colon + 1));
      auto rows = bench(bc);
      if (out_path.empty()) {
        write_bench_csv(std::cout, rows);
      } else {
        std::ofstream out(out_path);
        if (!out) throw Error("cannot write " + out_path);
        write_bench_csv(out, rows);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
