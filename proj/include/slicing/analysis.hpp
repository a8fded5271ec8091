#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "slicing/slicer_core.hpp"

namespace slicing {

constexpr std::size_t kDefaultSearchBudget = 1'000'000;

struct DetectionResult {
  bool found = false;
  std::optional<Cut> witness;
  std::size_t cuts_explored = 0;  // cuts at which the predicate was evaluated
  int slice_scc_count = 0;
  std::size_t peak_nodes = 0;  // largest number of cuts held by the search
};

// Breadth-first search of the lattice of g's cuts, stopping at the first cut
// satisfying b. g must be over comp's events.
DetectionResult search_lattice(const EventGraph& g, const Computation& comp, const Predicate& b,
                               std::size_t budget = kDefaultSearchBudget);

// Searches the (approximate) slice, which keeps every satisfying cut.
DetectionResult detect_possibly(const Computation& comp, const Predicate& b, std::size_t budget = kDefaultSearchBudget);

enum class Modality { Possibly, Invariant, Controllable, Definitely };

Modality parse_modality(std::string_view s);

bool monitor_regular(const Computation& comp, const Predicate& b, Modality m);

std::size_t count_slice_cuts(const Slice& s, std::size_t budget = kDefaultSearchBudget);
std::size_t count_cuts(const EventGraph& g, std::size_t budget = kDefaultSearchBudget);

// Checkpointing. Checkpoints are the flagged events of the computation;
// bottom acts as every process's initial checkpoint.
Slice checkpoint_slice(const Computation& comp);
bool zigzag_consistent(const Computation& comp, const EventId& c, const EventId& c2);
bool zigzag_consistent(const Computation& comp, const std::vector<EventId>& set);
Cut min_consistent_checkpoint(const Computation& comp, const std::vector<EventId>& set);
Cut max_consistent_checkpoint(const Computation& comp, const std::vector<EventId>& set);

struct RGraph {
  std::vector<EventId> nodes;           // checkpoints, then virtual finals
  std::vector<std::vector<int>> edges;  // successor lists over node positions
  bool reaches(int a, int b) const;
};

// Rollback-dependency graph. A process whose last event is not a
// checkpoint gets a virtual final checkpoint at that event.
RGraph build_rgraph(const Computation& comp);

// Counts k-subsets of {1..n} without consecutive numbers as the cuts of a
// slice over a k-process computation.
std::int64_t ksubset_count_nonconsecutive(int n, int k);
Computation nonconsecutive_computation(int n, int k);

}  // namespace slicing
