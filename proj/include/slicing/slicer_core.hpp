#pragma once

#include <functional>
#include <span>
#include <vector>

#include "slicing/computation.hpp"
#include "slicing/predicate.hpp"

namespace slicing {

// A computation-shaped graph over the base computation's events whose
// consistent cuts are the slice's cuts.
class Slice {
 public:
  Slice(Computation base, EventGraph graph);

  const Computation& base() const { return base_; }
  const EventGraph& graph() const { return graph_; }
  bool empty() const { return graph_.empty(); }
  int scc_count() const { return graph_.scc_count(); }
  int nontrivial_scc_count() const { return graph_.nontrivial_scc_count(); }
  // Edges of the slice graph that are not edges of the base computation.
  std::vector<std::pair<EventId, EventId>> added_edges() const;

 private:
  Computation base_;
  EventGraph graph_;
};

// Everything the base permits: the slice for `true`.
Slice identity_slice(const Computation& comp);
Slice empty_slice(const Computation& comp);

// Least satisfying cut containing each vertex; full marks the sentinel E.
struct JCut {
  Cut counts;
  bool full = false;
};
using JMap = std::vector<JCut>;  // indexed by vertex

// Flattened vertex_count x n table: F[v*n + j] = index on p_j.
using FMap = std::vector<int>;

inline int f_entry(const FMap& f, const Layout& l, int v, int j) {
  return f[static_cast<std::size_t>(v) * l.process_count() + j];
}

// Satisfaction test and forbidden process (or kAnyProcess) on count vectors
// of the graph being scanned.
struct ScanTarget {
  std::function<bool(std::span<const int>)> satisfied;
  std::function<int(std::span<const int>)> forbidden;
};

JMap compute_j(const EventGraph& g, const ScanTarget& target);
FMap compute_f(const EventGraph& g, const JMap& j);

JMap compute_j(const Computation& comp, const Predicate& b);
FMap compute_f(const Computation& comp, const JMap& j);

Slice slice_regular(const Computation& comp, const Predicate& b);
Slice slice_postlinear(const Computation& comp, const Predicate& b);

EventGraph::Condensation condense(const Slice& s);
FMap reach_vectors(const Slice& s);

}  // namespace slicing
