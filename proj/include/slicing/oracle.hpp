#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <vector>

#include "slicing/computation.hpp"
#include "slicing/predicate.hpp"

namespace slicing::oracle {

// Brute-force ground truth. Works from the raw edge lists only, never from
// the precomputed reachability vectors, so it is an independent check.

constexpr std::size_t kDefaultBudget = 1'000'000;

// Nontrivial cuts, sorted lexicographically. The two trivial cuts are
// implicit members of every lattice and family here; they never change the
// result of closing nontrivial cuts under min/max.
using CutSet = std::set<Cut>;

// Least cut containing counts under edge closure; nullopt if it reaches top.
std::optional<Cut> closure(const EventGraph& g, Cut counts);

CutSet enumerate_cuts(const EventGraph& g, std::size_t budget = kDefaultBudget);
CutSet enumerate_cuts(const Computation& comp, std::size_t budget = kDefaultBudget);

CutSet satisfying_cuts(const Computation& comp, const Predicate& b, std::size_t budget = kDefaultBudget);
CutSet filter(const CutSet& cuts, const Computation& comp, const Predicate& b);

// Smallest family containing `family` closed under componentwise min/max.
CutSet reg_closure(const CutSet& family);

// Elements with exactly one lower cover; the least element is excluded.
CutSet join_irreducibles(const CutSet& lattice);

CutSet brute_slice(const Computation& comp, const Predicate& b, std::size_t budget = kDefaultBudget);

bool closed_under_meet_and_join(const CutSet& s);

// A chain of covers of the computation lattice, running from its least to
// its greatest nontrivial cut, that stays inside `good`.
bool spanning_chain(const Computation& comp, const CutSet& lattice, const CutSet& good);

// Netzer-Xu zigzag path from checkpoint a to checkpoint b (both real events).
// Checkpoint intervals: interval(e) counts checkpoints of proc(e) strictly
// before e, with bottom acting as the initial checkpoint.
bool zigzag_path(const Computation& comp, const EventId& a, const EventId& b);

}  // namespace slicing::oracle
