#include <doctest.h>

#include <numeric>

#include "slicing/errors.hpp"
#include "test_support.hpp"

using namespace slicing;
using namespace testing_support;

namespace {

Cut join_all(const std::vector<Cut>& cuts, std::size_t n) {
  Cut out(n, 0);
  for (const auto& c : cuts)
    for (std::size_t i = 0; i < n; ++i) out[i] = std::max(out[i], c[i]);
  return out;
}

bool below(const Cut& a, const Cut& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

}  // namespace

TEST_CASE("cut enumeration") {
  Computation t1 = load_trace(kT1);
  CHECK(oracle::enumerate_cuts(t1) == oracle::CutSet{{1, 1}, {1, 2}, {2, 1}, {2, 2}});

  Computation chain = load_trace("header n=1\nevent p1 1 init\nevent p1 2\nevent p1 3\nevent p1 4\n");
  CHECK(oracle::enumerate_cuts(chain).size() == 4);

  CHECK(oracle::enumerate_cuts(load_trace(kLattice28)).size() == 28);
  CHECK_THROWS_AS(oracle::enumerate_cuts(load_trace(kLattice28), 5), BudgetExceeded);
}

TEST_CASE("satisfying cuts") {
  Computation t1 = load_trace(kT1);
  CHECK(oracle::satisfying_cuts(t1, parse_predicate("p1.x >= 2 && p2.y >= 3", t1)) == oracle::CutSet{{2, 2}});
  CHECK(oracle::satisfying_cuts(t1, parse_predicate("true", t1)) == oracle::enumerate_cuts(t1));
  CHECK(oracle::satisfying_cuts(t1, parse_predicate("false", t1)).empty());
}

TEST_CASE("reg closure") {
  SUBCASE("a sublattice is its own closure") {
    oracle::CutSet fam{{1, 1}, {1, 2}, {2, 2}};
    CHECK(oracle::reg_closure(fam) == fam);
  }
  SUBCASE("incomparable pair") {
    auto c = oracle::reg_closure({{1, 2}, {2, 1}});
    CHECK(c == oracle::CutSet{{1, 1}, {1, 2}, {2, 1}, {2, 2}});
  }
  SUBCASE("disjunction of locals needs closing") {
    Computation disj = load_trace(kDisjunct);
    Predicate b = parse_predicate("p1.x || p2.x", disj);
    auto sat = oracle::satisfying_cuts(disj, b);
    auto closed = oracle::reg_closure(sat);
    CHECK_FALSE(oracle::closed_under_meet_and_join(sat));
    CHECK(oracle::closed_under_meet_and_join(closed));
    CHECK(subset(sat, closed));
    CHECK(closed.size() > sat.size());
    // x1 holds only at a=2, x2 only at b=2; closing adds (0,0), (0,1),
    // (1,0), (1,1), (3,3) and leaves out (1,3), (3,1).
    CHECK(sat.size() == 7);
    CHECK(closed == oracle::CutSet{{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {1, 2},
                                   {2, 0}, {2, 1}, {2, 2}, {2, 3}, {3, 2}, {3, 3}});
    CHECK(oracle::enumerate_cuts(disj).size() == 14);
  }
  SUBCASE("closure operator laws") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 60; ++i) {
      Computation comp = random_computation(rng);
      auto lattice = oracle::enumerate_cuts(comp);
      oracle::CutSet a, b;
      for (const auto& c : lattice) {
        if (chance(rng, 0.3)) a.insert(c);
        if (chance(rng, 0.3)) b.insert(c);
      }
      auto ra = oracle::reg_closure(a);
      CHECK(subset(a, ra));
      CHECK(oracle::reg_closure(ra) == ra);
      CHECK(subset(ra, oracle::reg_closure(set_union(a, b))));
      CHECK(subset(ra, lattice));
    }
  }
}

TEST_CASE("join-irreducibles") {
  Computation chans = load_trace(kChannels);
  auto lattice = oracle::enumerate_cuts(chans);
  CHECK(lattice.size() == 26);
  CHECK(oracle::join_irreducibles(lattice).size() == 8);
  auto sub = oracle::satisfying_cuts(chans, parse_predicate("intransit(1,2) <= 0 && intransit(2,3) <= 0", chans));
  CHECK(sub.size() == 14);
  CHECK(oracle::join_irreducibles(sub).size() == 6);

  Computation chain = load_trace("header n=1\nevent p1 1\nevent p1 2\nevent p1 3\n");
  CHECK(oracle::join_irreducibles(oracle::enumerate_cuts(chain)) == oracle::CutSet{{1}, {2}, {3}});

  SUBCASE("every element is the join of the irreducibles below it") {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 60; ++i) {
      Computation comp = random_computation(rng);
      auto lat = oracle::enumerate_cuts(comp);
      auto ji = oracle::join_irreducibles(lat);
      CHECK(static_cast<int>(ji.size()) == comp.graph().nontrivial_scc_count());
      const Cut& least = *std::min_element(lat.begin(), lat.end(), [](const Cut& a, const Cut& b) {
        return std::accumulate(a.begin(), a.end(), 0) < std::accumulate(b.begin(), b.end(), 0);
      });
      for (const auto& c : lat) {
        std::vector<Cut> parts{least};
        for (const auto& j : ji)
          if (below(j, c)) parts.push_back(j);
        CHECK(join_all(parts, c.size()) == c);
      }
    }
  }
}

TEST_CASE("brute-force slices") {
  Computation lat28 = load_trace(kLattice28);
  CHECK(oracle::brute_slice(lat28, parse_predicate("p1.x >= 1 && p3.x <= 3", lat28)).size() == 6);

  Computation t1 = load_trace(kT1);
  Predicate b = parse_predicate("p1.x = 1 || p2.y = 3", t1);
  auto s = oracle::brute_slice(t1, b);
  CHECK(s == oracle::reg_closure(oracle::satisfying_cuts(t1, b)));
  CHECK(s.count({2, 2}));

  std::mt19937_64 rng(12);
  for (int i = 0; i < 60; ++i) {
    Computation comp = random_computation(rng);
    Predicate r = parse_predicate(random_regular(rng, comp.process_count()), comp);
    CHECK(oracle::brute_slice(comp, r) == oracle::satisfying_cuts(comp, r));
  }
}

TEST_CASE("spanning chains") {
  Computation t1 = load_trace(kT1);
  auto lat = oracle::enumerate_cuts(t1);
  CHECK(oracle::spanning_chain(t1, lat, lat));
  CHECK(oracle::spanning_chain(t1, lat, {{1, 1}, {2, 1}, {2, 2}}));
  CHECK_FALSE(oracle::spanning_chain(t1, lat, {{1, 1}, {2, 2}}));
  CHECK_FALSE(oracle::spanning_chain(t1, lat, {{1, 2}, {2, 1}, {2, 2}}));
}
