#include <doctest.h>

#include "slicing/errors.hpp"
#include "test_support.hpp"

using namespace slicing;
using namespace testing_support;

namespace {

// Path between two checkpoints in the checkpoint slice.
bool slice_reaches(const Computation& comp, const Slice& s, const EventId& a, const EventId& b) {
  return s.graph().reaches(comp.layout().vertex(a), comp.layout().vertex(b));
}

void flag_last_events(TraceData& t) {
  for (int p = 0; p < t.process_count; ++p) {
    EventId last{p, static_cast<int>(t.events[p].size())};
    if (std::find(t.checkpoints.begin(), t.checkpoints.end(), last) == t.checkpoints.end()) t.checkpoints.push_back(last);
  }
}

}  // namespace

TEST_CASE("detection") {
  Computation t1 = load_trace(kT1);
  DetectionResult r = search_lattice(t1.graph(), t1, parse_predicate("p1.x >= 2 && p2.y >= 3", t1));
  CHECK(r.found);
  CHECK(*r.witness == Cut{2, 2});
  CHECK(r.cuts_explored <= 4);
  CHECK_FALSE(search_lattice(t1.graph(), t1, parse_predicate("false", t1)).found);
  CHECK_THROWS_AS(search_lattice(load_trace(kLattice28).graph(), load_trace(kLattice28), parse_predicate("false", load_trace(kLattice28)), 3),
                  BudgetExceeded);

  std::mt19937_64 rng(61);
  for (int i = 0; i < 150; ++i) {
    Computation comp = random_computation(rng);
    Predicate b = parse_predicate(random_expression(rng, comp.process_count()), comp);
    auto sat = oracle::satisfying_cuts(comp, b);
    DetectionResult d = detect_possibly(comp, b);
    CHECK(d.found == !sat.empty());
    if (d.found) CHECK(sat.count(*d.witness));
  }
}

TEST_CASE("regular monitoring") {
  Computation t1 = load_trace(kT1);
  Predicate b = parse_predicate("p1.x >= 2 && p2.y >= 3", t1);
  CHECK(monitor_regular(t1, b, Modality::Possibly));
  CHECK_FALSE(monitor_regular(t1, b, Modality::Invariant));
  CHECK_FALSE(monitor_regular(t1, b, Modality::Controllable));
  Predicate yes = parse_predicate("true", t1);
  for (Modality m : {Modality::Possibly, Modality::Invariant, Modality::Controllable}) CHECK(monitor_regular(t1, yes, m));
  CHECK_THROWS(monitor_regular(t1, b, Modality::Definitely));
  CHECK_THROWS_AS(monitor_regular(t1, parse_predicate("p1.x != p2.y", t1), Modality::Possibly), ClassError);
  CHECK(parse_modality("controllable") == Modality::Controllable);
  CHECK_THROWS(parse_modality("eventually"));

  std::mt19937_64 rng(62);
  for (int i = 0; i < 150; ++i) {
    Computation comp = random_computation(rng);
    Predicate r = parse_predicate(random_regular(rng, comp.process_count()), comp);
    auto lattice = oracle::enumerate_cuts(comp);
    auto sat = oracle::filter(lattice, comp, r);
    CHECK(monitor_regular(comp, r, Modality::Possibly) == !sat.empty());
    CHECK(monitor_regular(comp, r, Modality::Invariant) == (sat == lattice));
    CHECK(monitor_regular(comp, r, Modality::Controllable) == oracle::spanning_chain(comp, lattice, sat));
  }
}

TEST_CASE("counting") {
  Computation t1 = load_trace(kT1);
  CHECK(count_slice_cuts(empty_slice(t1)) == 0);
  CHECK(count_slice_cuts(identity_slice(t1)) == 4);
  Computation lat28 = load_trace(kLattice28);
  CHECK(count_slice_cuts(slice_regular(lat28, parse_predicate("p1.x >= 1 && p3.x <= 3", lat28))) == 6);
  CHECK(count_cuts(lat28.graph()) == 28);
  CHECK_THROWS_AS(count_cuts(lat28.graph(), 5), BudgetExceeded);
}

TEST_CASE("checkpoints") {
  SUBCASE("no messages") {
    Computation c = load_trace("header n=2\nevent p1 1\nevent p1 2\nevent p2 1\nevent p2 2\ncheckpoint p1 1\ncheckpoint p2 2\n");
    CHECK(zigzag_consistent(c, EventId{0, 1}, EventId{1, 2}));
    CHECK(min_consistent_checkpoint(c, {{0, 1}}) == Cut{1, 0});
    CHECK(max_consistent_checkpoint(c, {{0, 1}}) == Cut{1, 2});
    CHECK_THROWS(zigzag_consistent(c, EventId{0, 2}, EventId{1, 2}));
    RGraph r = build_rgraph(c);
    CHECK(r.nodes.size() == 3);  // two checkpoints and p1's virtual final
  }
  SUBCASE("a message after the checkpoint") {
    // p2:2 records a message p1 sent after p1:1.
    Computation c = load_trace(
        "header n=2\nevent p1 1\nevent p1 2\nevent p2 1\nevent p2 2\nmsg p1:2 -> p2:2\n"
        "checkpoint p1 1\ncheckpoint p1 2\ncheckpoint p2 1\ncheckpoint p2 2\n");
    CHECK(zigzag_consistent(c, EventId{0, 1}, EventId{1, 1}));
    CHECK_FALSE(zigzag_consistent(c, EventId{0, 1}, EventId{1, 2}));
    CHECK_FALSE(zigzag_consistent(c, EventId{0, 1}, EventId{0, 2}));
    RGraph r = build_rgraph(c);
    CHECK(r.nodes.size() == 4);
    int cross = 0;
    for (std::size_t a = 0; a < r.nodes.size(); ++a)
      for (int b : r.edges[a])
        if (r.nodes[a].process != r.nodes[b].process) ++cross;
    CHECK(cross == 1);
  }
  SUBCASE("agreement with zigzag paths") {
    // Message chains agree with the slice once no event is forced into every
    // cut and no process ends past its last checkpoint.
    std::mt19937_64 rng(63);
    RandomSpec spec;
    spec.checkpoint_rate = 0.5;
    spec.allow_init = false;
    int inconsistent = 0;
    for (int i = 0; i < 200; ++i) {
      TraceData t = random_trace(rng, spec);
      flag_last_events(t);
      Computation comp{t};
      std::vector<EventId> flagged;
      for (int p = 0; p < comp.process_count(); ++p)
        for (int k : comp.checkpoints(p)) flagged.push_back({p, k});
      for (const auto& a : flagged)
        for (const auto& b : flagged) {
          bool want = !oracle::zigzag_path(comp, a, b) && !oracle::zigzag_path(comp, b, a) &&
                      !oracle::zigzag_path(comp, a, a) && !oracle::zigzag_path(comp, b, b);
          if (a.process == b.process && a.index != b.index) want = false;
          CHECK(zigzag_consistent(comp, a, b) == want);
          if (!want) ++inconsistent;
        }
    }
    CHECK(inconsistent > 0);
  }
  SUBCASE("R-graph paths match the checkpoint slice") {
    std::mt19937_64 rng(64);
    RandomSpec spec;
    spec.allow_init = false;
    for (int i = 0; i < 150; ++i) {
      TraceData t = random_trace(rng, spec);
      flag_last_events(t);
      Computation comp{t};
      RGraph r = build_rgraph(comp);
      Slice s = checkpoint_slice(comp);
      for (std::size_t a = 0; a < r.nodes.size(); ++a)
        for (std::size_t b = 0; b < r.nodes.size(); ++b) {
          if (a == b) continue;
          CHECK(r.reaches(static_cast<int>(a), static_cast<int>(b)) == slice_reaches(comp, s, r.nodes[a], r.nodes[b]));
        }
    }
  }
}

TEST_CASE("non-consecutive subsets") {
  CHECK(ksubset_count_nonconsecutive(6, 3) == 4);
  CHECK(ksubset_count_nonconsecutive(5, 2) == 6);
  CHECK(ksubset_count_nonconsecutive(4, 4) == 0);
  CHECK(ksubset_count_nonconsecutive(1, 1) == 1);
  CHECK_THROWS(ksubset_count_nonconsecutive(3, 0));
  CHECK_THROWS(ksubset_count_nonconsecutive(-1, 2));
  for (int n = 1; n <= 9; ++n)
    for (int k = 1; k <= std::min(n, 4); ++k) {
      // C(n-k+1, k)
      std::int64_t want = 1;
      int top = n - k + 1;
      if (top < k) want = 0;
      else
        for (int i = 1; i <= k; ++i) want = want * (top - k + i) / i;
      CHECK(ksubset_count_nonconsecutive(n, k) == want);
    }
}
