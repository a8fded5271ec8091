// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "slicing/errors.hpp"
#include "slicing/harness.hpp"
#include "test_support.hpp"

using namespace slicing;
using namespace testing_support;

namespace {

constexpr int kInstances = 300;

struct Outcome {
  int checked = 0;
  int failed = 0;
  std::string first_failure;

  void expect(bool ok, const std::string& what) {
    ++checked;
    if (!ok && failed++ == 0) first_failure = what;
  }
  void error(const std::string& what) { expect(false, what); }
};

std::string describe(std::uint64_t seed, const std::string& pred) {
  return "seed " + std::to_string(seed) + ": " + pred;
}

template <class Body>
Outcome over_instances(std::uint64_t salt, Body body, const RandomSpec& spec = {}) {
  Outcome out;
  for (int i = 0; i < kInstances; ++i) {
    std::uint64_t seed = salt * 100003 + i;
    std::mt19937_64 rng(seed);
    Computation comp = random_computation(rng, spec);
    try {
      body(comp, rng, seed, out);
    } catch (const std::exception& e) {
      out.error(describe(seed, std::string("exception: ") + e.what()));
    }
  }
  return out;
}

Outcome criterion1() {
  return over_instances(1, [](const Computation& comp, std::mt19937_64& rng, std::uint64_t seed, Outcome& out) {
    for (int r = 0; r < 3; ++r) {
      std::string text = random_regular(rng, comp.process_count());
      Predicate b = parse_predicate(text, comp);
      out.expect(classify(b).regular, describe(seed, "not classified regular: " + text));
      out.expect(cuts_of(slice_regular(comp, b)) == oracle::satisfying_cuts(comp, b), describe(seed, text));
    }
  });
}

Outcome criterion2() {
  return over_instances(1, [](const Computation& comp, std::mt19937_64& rng, std::uint64_t seed, Outcome& out) {
    auto lattice = oracle::enumerate_cuts(comp);
    out.expect(oracle::closed_under_meet_and_join(lattice), describe(seed, "lattice not closed"));
    out.expect(static_cast<int>(oracle::join_irreducibles(lattice).size()) == comp.graph().nontrivial_scc_count(),
               describe(seed, "computation join-irreducibles"));
    for (int r = 0; r < 3; ++r) {
      std::string text = random_regular(rng, comp.process_count());
      Predicate b = parse_predicate(text, comp);
      auto sat = oracle::filter(lattice, comp, b);
      out.expect(oracle::closed_under_meet_and_join(sat), describe(seed, "sublattice not closed: " + text));
      Slice s = slice_regular(comp, b);
      out.expect(s.nontrivial_scc_count() == static_cast<int>(oracle::join_irreducibles(sat).size()), describe(seed, text));
    }
  });
}

Outcome criterion3() {
  return over_instances(3, [](const Computation& comp, std::mt19937_64& rng, std::uint64_t seed, Outcome& out) {
    const int n = comp.process_count();
    auto agree = [&](const Slice& fast, const Predicate& b, const std::string& what) {
      Slice reg = slice_regular(comp, b);
      auto truth = oracle::brute_slice(comp, b);
      out.expect(cuts_of(fast) == truth, describe(seed, what + " vs oracle: " + b.to_string()));
      out.expect(cuts_of(reg) == truth, describe(seed, "regular vs oracle: " + b.to_string()));
      out.expect(cut_equivalent(fast.graph(), reg.graph()), describe(seed, what + " vs regular: " + b.to_string()));
    };

    Predicate conj = parse_predicate(random_conjunctive(rng, n), comp);
    agree(slice_conjunctive(comp, conj), conj, "conjunctive");

    for (int which = 0; which < 2; ++which) {
      Predicate ch = parse_predicate(channel_atom(rng, n, which), comp);
      auto cb = channel_bound(ch.atom());
      int k = static_cast<int>(cb->k);
      agree(which == 0 ? slice_channel_atmost(comp, cb->from, cb->to, k) : slice_channel_atleast(comp, cb->from, cb->to, k),
            ch, which == 0 ? "channel at-most" : "channel at-least");
    }

    Predicate mono = parse_predicate(monotone_atom(rng, n), comp);
    agree(slice_klocal_regular(comp, mono, support(mono)), mono, "k-local regular");
    std::vector<int> all(n);
    for (int p = 0; p < n; ++p) all[p] = p;
    agree(slice_klocal_regular(comp, mono, all), mono, "k-local regular over all processes");

    std::vector<LocalConjunct> parts;
    std::vector<Predicate> preds;
    for (int c = uniform(rng, 1, 3); c > 0; --c) {
      Predicate p = parse_predicate(uniform(rng, 0, 1) ? monotone_atom(rng, n) : channel_atom(rng, n), comp);
      parts.push_back({p, support(p)});
      preds.push_back(p);
    }
    agree(slice_decomposable(comp, parts), Predicate::all(preds), "decomposable");
  });
}

Outcome criterion4() {
  return over_instances(4, [](const Computation& comp, std::mt19937_64& rng, std::uint64_t seed, Outcome& out) {
    const int n = comp.process_count();
    auto operand = [&]() {
      if (uniform(rng, 0, 3) == 0) return slice_klocal_general(comp, parse_predicate(random_two_local(rng, n), comp));
      return slice_regular(comp, parse_predicate(random_regular(rng, n), comp));
    };
    Slice a = operand(), b = operand(), c = operand();
    auto ca = cuts_of(a), cb = cuts_of(b), cc = cuts_of(c);
    auto same = [&](const Slice& x, const Slice& y, const std::string& law) {
      out.expect(cuts_of(x) == cuts_of(y), describe(seed, law));
    };
    out.expect(cuts_of(compose_meet(a, b)) == set_intersection(ca, cb), describe(seed, "meet is intersection"));
    out.expect(cuts_of(compose_join(a, b)) == oracle::reg_closure(set_union(ca, cb)), describe(seed, "join is closure of union"));
    std::vector<Slice> three{a, b, c};
    out.expect(cuts_of(compose_meet(three)) == set_intersection(set_intersection(ca, cb), cc), describe(seed, "n-ary meet"));
    out.expect(cuts_of(compose_join(comp, three)) == oracle::reg_closure(set_union(set_union(ca, cb), cc)),
               describe(seed, "n-ary join"));
    same(compose_meet(a, a), a, "meet idempotent");
    same(compose_join(a, a), a, "join idempotent");
    same(compose_meet(a, b), compose_meet(b, a), "meet commutative");
    same(compose_join(a, b), compose_join(b, a), "join commutative");
    same(compose_meet(compose_meet(a, b), c), compose_meet(a, compose_meet(b, c)), "meet associative");
    same(compose_join(compose_join(a, b), c), compose_join(a, compose_join(b, c)), "join associative");
    same(compose_meet(a, identity_slice(comp)), a, "meet identity");
    same(compose_join(a, empty_slice(comp)), a, "join identity");
  });
}

Outcome criterion5() {
  return over_instances(5, [](const Computation& comp, std::mt19937_64& rng, std::uint64_t seed, Outcome& out) {
    const int n = comp.process_count();
    std::string text = random_regular(rng, n);
    Predicate b = parse_predicate(text, comp);
    out.expect(cuts_of(slice_coregular(comp, b)) == oracle::brute_slice(comp, Predicate::negation(b)),
               describe(seed, "co-regular: " + text));
    for (int r = 0; r < 2; ++r) {
      std::string local = random_two_local(rng, n);
      Predicate k = parse_predicate(local, comp);
      out.expect(cuts_of(slice_klocal_general(comp, k)) == oracle::brute_slice(comp, k), describe(seed, "2-local: " + local));
    }
  });
}

Outcome criterion6() {
  return over_instances(6, [](const Computation& comp, std::mt19937_64& rng, std::uint64_t seed, Outcome& out) {
    std::string text = random_expression(rng, comp.process_count());
    Predicate b = parse_predicate(text, comp);
    auto sat = oracle::satisfying_cuts(comp, b);
    out.expect(subset(sat, cuts_of(approximate_slice(comp, b))), describe(seed, "soundness: " + text));
    DetectionResult r = detect_possibly(comp, b);
    out.expect(r.found == !sat.empty(), describe(seed, "detection: " + text));
    if (r.found) out.expect(r.witness && sat.count(*r.witness), describe(seed, "witness: " + text));
  });
}

Outcome criterion7() {
  return over_instances(7, [](const Computation& comp, std::mt19937_64& rng, std::uint64_t seed, Outcome& out) {
    auto lattice = oracle::enumerate_cuts(comp);
    for (int r = 0; r < 3; ++r) {
      std::string text = r == 0 && uniform(rng, 0, 4) == 0 ? "true" : random_regular(rng, comp.process_count());
      Predicate b = parse_predicate(text, comp);
      auto sat = oracle::filter(lattice, comp, b);
      out.expect(monitor_regular(comp, b, Modality::Possibly) == !sat.empty(), describe(seed, "possibly: " + text));
      out.expect(monitor_regular(comp, b, Modality::Invariant) == (sat == lattice), describe(seed, "invariant: " + text));
      out.expect(monitor_regular(comp, b, Modality::Controllable) == oracle::spanning_chain(comp, lattice, sat),
                 describe(seed, "controllable: " + text));
    }
  });
}

Outcome criterion8() {
  Outcome out;
  Computation lat28 = load_trace(kLattice28);
  Predicate b1 = parse_predicate("p1.x >= 1 && p3.x <= 3", lat28);
  std::size_t all1 = oracle::enumerate_cuts(lat28).size();
  std::size_t slice1 = count_slice_cuts(slice_regular(lat28, b1));
  out.expect(all1 == 28, "28-cut fixture has " + std::to_string(all1) + " cuts, want 28");
  out.expect(slice1 == 6, "28-cut fixture slice has " + std::to_string(slice1) + " cuts, want 6");
  out.expect(count_slice_cuts(slice_conjunctive(lat28, b1)) == 6, "28-cut fixture conjunctive slice");

  Computation chans = load_trace(kChannels);
  auto lattice = oracle::enumerate_cuts(chans);
  std::size_t ji = oracle::join_irreducibles(lattice).size();
  out.expect(ji == 8, "channel fixture lattice has " + std::to_string(ji) + " join-irreducibles, want 8");
  Predicate empty_channels = parse_predicate("intransit(1,2) <= 0 && intransit(2,3) <= 0", chans);
  auto sub = oracle::filter(lattice, chans, empty_channels);
  std::size_t sub_ji = oracle::join_irreducibles(sub).size();
  out.expect(sub_ji == 6, "channel fixture sublattice has " + std::to_string(sub_ji) + " join-irreducibles, want 6");
  out.expect(slice_regular(chans, empty_channels).nontrivial_scc_count() == 6, "channel fixture slice meta-events");
  return out;
}

Outcome criterion9() {
  Outcome out;
  for (int n = 1; n <= 10; ++n)
    for (int k = 1; k <= n; ++k) {
      std::int64_t want = 1;
      int top = n - k + 1;
      if (k > top) want = 0;
      else
        for (int i = 1; i <= k; ++i) want = want * (top - k + i) / i;
      std::int64_t got = ksubset_count_nonconsecutive(n, k);
      out.expect(got == want, "n=" + std::to_string(n) + " k=" + std::to_string(k) + ": " + std::to_string(got) +
                                  " vs " + std::to_string(want));
    }
  return out;
}

struct TrendReport {
  Outcome outcome;
  std::string detail;
};

TrendReport criterion10() {
  TrendReport rep;
  Outcome& out = rep.outcome;
  constexpr int kRuns = 5, kEvents = 6;
  std::vector<double> naive_mean;
  std::size_t slice_max = 0;
  double slowest_ms = 0;
  int empty_slices = 0, total = 0;
  for (int n = 4; n <= 7; ++n) {
    double sum = 0;
    for (int run = 1; run <= kRuns; ++run) {
      SimConfig cfg;
      cfg.processes = n;
      cfg.max_events_per_process = kEvents;
      cfg.seed = static_cast<std::uint64_t>(run);
      Computation comp(simulate_trace(cfg));
      Predicate b = builtin_fault_predicate(Protocol::PrimarySecondary, comp);
      auto t0 = std::chrono::steady_clock::now();
      DetectionResult fast = detect_possibly(comp, b, 5'000'000);
      double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      DetectionResult naive = search_lattice(comp.graph(), comp, b, 5'000'000);
      out.expect(fast.found == naive.found, "slice and naive disagree at n=" + std::to_string(n));
      out.expect(fast.cuts_explored <= 16, "slice explored " + std::to_string(fast.cuts_explored) + " cuts");
      out.expect(ms < 5000, "slice pipeline took " + std::to_string(ms) + " ms");
      slice_max = std::max(slice_max, fast.cuts_explored);
      slowest_ms = std::max(slowest_ms, ms);
      empty_slices += fast.slice_scc_count < 2;
      ++total;
      sum += static_cast<double>(naive.cuts_explored);
    }
    naive_mean.push_back(sum / kRuns);
  }
  double growth = 0;
  for (std::size_t i = 1; i < naive_mean.size(); ++i) growth += naive_mean[i] / naive_mean[i - 1];
  growth /= static_cast<double>(naive_mean.size() - 1);
  out.expect(growth >= 4.0, "naive growth " + std::to_string(growth) + " per process");

  // Minimal consistent checkpoint against the oracle.
  int sets = 0;
  for (int i = 0; i < kInstances; ++i) {
    std::uint64_t seed = 10 * 100003 + i;
    std::mt19937_64 rng(seed);
    RandomSpec spec;
    spec.checkpoint_rate = 0.5;
    Computation comp = random_computation(rng, spec);
    std::vector<EventId> flagged;
    for (int p = 0; p < comp.process_count(); ++p)
      for (int k : comp.checkpoints(p)) flagged.push_back({p, k});
    if (flagged.empty()) continue;
    auto lattice = oracle::enumerate_cuts(comp);
    oracle::CutSet checkpointed;
    for (const auto& c : lattice) {
      bool ok = true;
      for (int p = 0; p < comp.process_count(); ++p) ok &= c[p] == 0 || comp.is_checkpoint({p, c[p]});
      if (ok) checkpointed.insert(c);
    }
    for (int r = 0; r < 3; ++r) {
      std::vector<EventId> s{flagged[uniform(rng, 0, static_cast<int>(flagged.size()) - 1)]};
      if (uniform(rng, 0, 1)) s.push_back(flagged[uniform(rng, 0, static_cast<int>(flagged.size()) - 1)]);
      std::vector<Cut> through;
      for (const auto& c : checkpointed) {
        bool ok = true;
        for (const auto& e : s) ok &= c[e.process] == e.index;
        if (ok) through.push_back(c);
      }
      std::string what = describe(seed, "checkpoints " + to_string(s[0]) + (s.size() > 1 ? "," + to_string(s[1]) : ""));
      try {
        bool consistent = zigzag_consistent(comp, s);
        out.expect(consistent == !through.empty(), what + " consistency");
        if (!consistent) continue;
        ++sets;
        Cut lo = min_consistent_checkpoint(comp, s), hi = max_consistent_checkpoint(comp, s);
        out.expect(std::find(through.begin(), through.end(), lo) != through.end(), what + " min not a checkpoint cut");
        out.expect(std::find(through.begin(), through.end(), hi) != through.end(), what + " max not a checkpoint cut");
        for (const auto& c : through) {
          bool below = true, above = true;
          for (std::size_t p = 0; p < c.size(); ++p) {
            below &= lo[p] <= c[p];
            above &= c[p] <= hi[p];
          }
          out.expect(below, what + " min not minimal");
          out.expect(above, what + " max not maximal");
        }
      } catch (const std::exception& e) {
        out.error(what + ": " + e.what());
      }
    }
  }
  std::ostringstream d;
  d.precision(3);
  d << "naive growth " << growth << "x/process (means";
  for (double m : naive_mean) d << " " << static_cast<long long>(m);
  d << "), slice explored max " << slice_max << ", empty slices " << empty_slices << "/" << total << ", slowest "
    << slowest_ms << " ms, " << sets << " checkpoint sets";
  rep.detail = d.str();
  return rep;
}

}  // namespace

int main() {
  struct Row {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  std::string trend_detail;
  std::vector<Row> rows{
      {1, "regular slices equal satisfying cuts", criterion1},
      {2, "meta-events match join-irreducibles", criterion2},
      {3, "special-case slicers agree", criterion3},
      {4, "meet and join composition", criterion4},
      {5, "co-regular and k-local slices", criterion5},
      {6, "approximate slices are sound", criterion6},
      {7, "monitoring modalities", criterion7},
      {8, "fixture counts", criterion8},
      {9, "non-consecutive subset counts", criterion9},
      {10, "performance trend and checkpoints",
       [&] {
         TrendReport r = criterion10();
         trend_detail = r.detail;
         return r.outcome;
       }},
  };
  int failures = 0;
  for (const auto& row : rows) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = row.run();
    } catch (const std::exception& e) {
      o.error(std::string("exception: ") + e.what());
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = o.failed == 0 && o.checked > 0;
    failures += !pass;
    std::printf("criterion %2d: %s  %s (%d checks, %d failed, %.1f s)", row.id, pass ? "PASS" : "FAIL", row.name, o.checked,
                o.failed, s);
    if (row.id == 10 && !trend_detail.empty()) std::printf(" [%s]", trend_detail.c_str());
    if (!pass) std::printf("\n    first failure: %s", o.first_failure.c_str());
    std::printf("\n");
  }
  return failures == 0 ? 0 : 1;
}
