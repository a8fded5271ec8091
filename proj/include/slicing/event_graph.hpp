#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace slicing {

// Processes are 0-based internally; traces and printed output use p1..pn.
struct EventId {
  int process = 0;
  int index = 0;  // 0 = bottom, m+1 = top
  auto operator<=>(const EventId&) const = default;
};

std::string to_string(const EventId& e);

// A cut as a count vector: cut[i] real events of process i are included.
using Cut = std::vector<int>;

// Vertex numbering for per-process event sequences including bottom/top.
class Layout {
 public:
  Layout() = default;
  explicit Layout(std::vector<int> events_per_process);

  int process_count() const { return static_cast<int>(sizes_.size()); }
  int events(int p) const { return sizes_[p]; }
  const std::vector<int>& sizes() const { return sizes_; }
  int vertex_count() const { return offset_.empty() ? 0 : offset_.back(); }
  int real_event_count() const;

  int vertex(int p, int index) const { return offset_[p] + index; }
  int vertex(const EventId& e) const { return vertex(e.process, e.index); }
  EventId event(int v) const { return {proc_[v], v - offset_[proc_[v]]}; }
  int process_of(int v) const { return proc_[v]; }
  int index_of(int v) const { return v - offset_[proc_[v]]; }
  int bottom(int p) const { return offset_[p]; }
  int top(int p) const { return offset_[p] + sizes_[p] + 1; }
  bool is_top(int v) const { return index_of(v) == sizes_[proc_[v]] + 1; }

  // Count vector of the full event set.
  Cut full() const { return sizes_; }
  bool in_range(std::span<const int> counts) const;

  bool operator==(const Layout& o) const { return sizes_ == o.sizes_; }

 private:
  std::vector<int> sizes_;
  std::vector<int> offset_;
  std::vector<int> proc_;
};

using Edge = std::pair<int, int>;

// Directed graph over a layout. Construction always adds the process-order
// edges and the cycles joining all bottoms and all tops, so every instance
// is a computation-shaped graph. Reachability summaries are precomputed:
//   reach(v)[j] = smallest index on p_j reachable from v
//   down(v)[j]  = largest index on p_j with a path to v
class EventGraph {
 public:
  EventGraph() = default;
  EventGraph(Layout layout, const std::vector<Edge>& extra);

  const Layout& layout() const { return layout_; }
  int process_count() const { return layout_.process_count(); }
  int vertex_count() const { return layout_.vertex_count(); }

  const std::vector<std::vector<int>>& successors() const { return adj_; }
  // Edges passed at construction, deduplicated, minus process-order edges.
  const std::vector<Edge>& extra_edges() const { return extra_; }
  std::size_t edge_count() const;

  int scc_of(int v) const { return scc_[v]; }
  int scc_count() const { return scc_count_; }
  // Components other than the bottom and top ones.
  int nontrivial_scc_count() const;
  // No nontrivial cut: bottom and top fall into one component.
  bool empty() const { return scc_[layout_.bottom(0)] == scc_[layout_.top(0)]; }

  std::span<const int> reach(int v) const {
    return {reach_.data() + static_cast<std::size_t>(v) * n(), static_cast<std::size_t>(n())};
  }
  std::span<const int> down(int v) const {
    return {down_.data() + static_cast<std::size_t>(v) * n(), static_cast<std::size_t>(n())};
  }
  const std::vector<int>& reach_table() const { return reach_; }
  const std::vector<int>& down_table() const { return down_; }

  bool reaches(int u, int v) const {
    return layout_.index_of(u) <= down(v)[layout_.process_of(u)];
  }

  // Count vector closed under incoming edges; counts must be in range.
  bool is_consistent(std::span<const int> counts) const;
  // Smallest consistent cut containing counts; false when it includes a top.
  bool close(Cut& counts) const;
  // Least nontrivial cut; the graph must not be empty.
  Cut least_cut() const;
  Cut greatest_cut() const;

  // Same layout with vertex (i,k) renamed (i, m_i+1-k) and edges flipped.
  EventGraph reversed() const;
  int mirror(int v) const;

  // Transitive projection onto the listed processes (renumbered 0..q-1).
  EventGraph project(const std::vector<int>& processes) const;

  // Condensation DAG: components in topological order (sources first).
  struct Condensation {
    std::vector<int> component;             // vertex -> position in order
    std::vector<std::vector<int>> members;  // per component
    std::vector<std::vector<int>> edges;    // deduplicated DAG successors
  };
  Condensation condense() const;

  std::string to_dot(const std::string& name = "slice") const;

 private:
  int n() const { return layout_.process_count(); }
  void analyze();

  Layout layout_;
  std::vector<std::vector<int>> adj_;
  std::vector<Edge> extra_;
  std::vector<int> scc_;
  std::vector<int> scc_order_;  // components in topological order
  int scc_count_ = 0;
  std::vector<int> reach_;
  std::vector<int> down_;
};

// Same vertex set and same reachability.
bool cut_equivalent(const EventGraph& g, const EventGraph& h);

// Graph whose edges are e -> succ(e) and e -> (j, f[e][j]) for every vertex;
// f is a flattened vertex_count x n table of indices.
EventGraph skeleton(const Layout& layout, const std::vector<int>& f);

}  // namespace slicing
