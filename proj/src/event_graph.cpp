#include "slicing/event_graph.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "slicing/errors.hpp"

namespace slicing {

std::string to_string(const EventId& e) {
  return "p" + std::to_string(e.process + 1) + ":" + std::to_string(e.index);
}

Layout::Layout(std::vector<int> events_per_process) : sizes_(std::move(events_per_process)) {
  if (sizes_.empty()) throw ModelError("a computation needs at least one process");
  offset_.reserve(sizes_.size() + 1);
  offset_.push_back(0);
  for (std::size_t p = 0; p < sizes_.size(); ++p) {
    if (sizes_[p] < 0) throw ModelError("negative event count");
    offset_.push_back(offset_.back() + sizes_[p] + 2);
    proc_.insert(proc_.end(), sizes_[p] + 2, static_cast<int>(p));
  }
}

int Layout::real_event_count() const { return std::accumulate(sizes_.begin(), sizes_.end(), 0); }

bool Layout::in_range(std::span<const int> counts) const {
  if (counts.size() != sizes_.size()) return false;
  for (std::size_t p = 0; p < sizes_.size(); ++p)
    if (counts[p] < 0 || counts[p] > sizes_[p]) return false;
  return true;
}

EventGraph::EventGraph(Layout layout, const std::vector<Edge>& extra) : layout_(std::move(layout)) {
  const int nv = layout_.vertex_count();
  const int np = layout_.process_count();
  adj_.assign(nv, {});
  for (int p = 0; p < np; ++p) {
    for (int k = 0; k <= layout_.events(p); ++k) adj_[layout_.vertex(p, k)].push_back(layout_.vertex(p, k + 1));
    if (np > 1) {
      adj_[layout_.bottom(p)].push_back(layout_.bottom((p + 1) % np));
      adj_[layout_.top(p)].push_back(layout_.top((p + 1) % np));
    }
  }
  extra_.reserve(extra.size());
  for (const auto& [u, v] : extra) {
    if (u < 0 || v < 0 || u >= nv || v >= nv) throw ModelError("edge endpoint out of range");
    if (u == v) continue;
    if (layout_.process_of(u) == layout_.process_of(v) && layout_.index_of(v) == layout_.index_of(u) + 1) continue;
    extra_.push_back({u, v});
  }
  std::sort(extra_.begin(), extra_.end());
  extra_.erase(std::unique(extra_.begin(), extra_.end()), extra_.end());
  for (const auto& [u, v] : extra_) adj_[u].push_back(v);
  for (auto& a : adj_) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  analyze();
}

std::size_t EventGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& a : adj_) total += a.size();
  return total;
}

int EventGraph::nontrivial_scc_count() const {
  if (empty()) return 0;
  return scc_count_ - 2;
}

void EventGraph::analyze() {
  const int nv = vertex_count();
  const int np = n();
  // Iterative Tarjan; component ids come out sinks first.
  scc_.assign(nv, -1);
  std::vector<int> index(nv, -1), low(nv, 0), stack;
  std::vector<char> on_stack(nv, 0);
  std::vector<std::pair<int, std::size_t>> call;
  int counter = 0;
  scc_count_ = 0;
  for (int root = 0; root < nv; ++root) {
    if (index[root] >= 0) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, next] = call.back();
      if (next < adj_[v].size()) {
        int w = adj_[v][next++];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          scc_[w] = scc_count_;
        } while (w != v);
        ++scc_count_;
      }
      int done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }

  std::vector<std::vector<int>> members(scc_count_);
  for (int v = 0; v < nv; ++v) members[scc_[v]].push_back(v);

  std::vector<int> creach(static_cast<std::size_t>(scc_count_) * np);
  std::vector<int> cdown(static_cast<std::size_t>(scc_count_) * np);
  for (int c = 0; c < scc_count_; ++c)
    for (int j = 0; j < np; ++j) {
      creach[c * np + j] = layout_.events(j) + 1;
      cdown[c * np + j] = 0;
    }
  for (int v = 0; v < nv; ++v) {
    int c = scc_[v], p = layout_.process_of(v), k = layout_.index_of(v);
    creach[c * np + p] = std::min(creach[c * np + p], k);
    cdown[c * np + p] = std::max(cdown[c * np + p], k);
  }
  // Successor components have smaller ids.
  for (int c = 0; c < scc_count_; ++c)
    for (int v : members[c])
      for (int w : adj_[v]) {
        int d = scc_[w];
        if (d == c) continue;
        for (int j = 0; j < np; ++j) creach[c * np + j] = std::min(creach[c * np + j], creach[d * np + j]);
      }
  for (int c = scc_count_ - 1; c >= 0; --c)
    for (int v : members[c])
      for (int w : adj_[v]) {
        int d = scc_[w];
        if (d == c) continue;
        for (int j = 0; j < np; ++j) cdown[d * np + j] = std::max(cdown[d * np + j], cdown[c * np + j]);
      }
  reach_.resize(static_cast<std::size_t>(nv) * np);
  down_.resize(static_cast<std::size_t>(nv) * np);
  for (int v = 0; v < nv; ++v)
    for (int j = 0; j < np; ++j) {
      reach_[v * np + j] = creach[scc_[v] * np + j];
      down_[v * np + j] = cdown[scc_[v] * np + j];
    }
}

bool EventGraph::is_consistent(std::span<const int> counts) const {
  if (!layout_.in_range(counts)) return false;
  for (int p = 0; p < n(); ++p) {
    auto d = down(layout_.vertex(p, counts[p]));
    for (int j = 0; j < n(); ++j)
      if (d[j] > counts[j]) return false;
  }
  return true;
}

bool EventGraph::close(Cut& counts) const {
  Cut out(n(), 0);
  for (int p = 0; p < n(); ++p) {
    auto d = down(layout_.vertex(p, counts[p]));
    for (int j = 0; j < n(); ++j) out[j] = std::max(out[j], d[j]);
  }
  counts = std::move(out);
  for (int j = 0; j < n(); ++j)
    if (counts[j] > layout_.events(j)) return false;
  return true;
}

Cut EventGraph::least_cut() const {
  if (empty()) throw ModelError("graph has no nontrivial cut");
  auto d = down(layout_.bottom(0));
  return Cut(d.begin(), d.end());
}

Cut EventGraph::greatest_cut() const {
  if (empty()) throw ModelError("graph has no nontrivial cut");
  auto r = reach(layout_.top(0));
  Cut c(r.begin(), r.end());
  for (int& x : c) --x;
  return c;
}

int EventGraph::mirror(int v) const {
  int p = layout_.process_of(v);
  return layout_.vertex(p, layout_.events(p) + 1 - layout_.index_of(v));
}

EventGraph EventGraph::reversed() const {
  std::vector<Edge> flipped;
  flipped.reserve(extra_.size());
  for (const auto& [u, v] : extra_) flipped.push_back({mirror(v), mirror(u)});
  return EventGraph(layout_, flipped);
}

EventGraph EventGraph::project(const std::vector<int>& processes) const {
  std::vector<int> sizes;
  for (int p : processes) sizes.push_back(layout_.events(p));
  Layout sub(sizes);
  std::vector<Edge> edges;
  const int q = static_cast<int>(processes.size());
  for (int a = 0; a < q; ++a) {
    int p = processes[a];
    for (int k = 0; k <= layout_.events(p) + 1; ++k) {
      auto d = down(layout_.vertex(p, k));
      for (int b = 0; b < q; ++b) {
        int src = d[processes[b]];
        if (src == 0) continue;
        if (b == a && src <= k) continue;
        edges.push_back({sub.vertex(b, src), sub.vertex(a, k)});
      }
    }
  }
  return EventGraph(std::move(sub), edges);
}

EventGraph::Condensation EventGraph::condense() const {
  Condensation c;
  c.component.resize(vertex_count());
  c.members.assign(scc_count_, {});
  c.edges.assign(scc_count_, {});
  for (int v = 0; v < vertex_count(); ++v) {
    c.component[v] = scc_count_ - 1 - scc_[v];
    c.members[c.component[v]].push_back(v);
  }
  for (int v = 0; v < vertex_count(); ++v)
    for (int w : adj_[v])
      if (c.component[v] != c.component[w]) c.edges[c.component[v]].push_back(c.component[w]);
  for (auto& e : c.edges) {
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
  }
  return c;
}

namespace {

std::string vertex_label(const Layout& l, int v) {
  EventId e = l.event(v);
  std::string p = "p" + std::to_string(e.process + 1);
  if (e.index == 0) return p + ":bot";
  if (l.is_top(v)) return p + ":top";
  return p + ":" + std::to_string(e.index);
}

}  // namespace

std::string EventGraph::to_dot(const std::string& name) const {
  std::ostringstream out;
  out << "digraph \"" << name << "\" {\n  rankdir=LR;\n";
  Condensation c = condense();
  for (std::size_t k = 0; k < c.members.size(); ++k) {
    const auto& m = c.members[k];
    bool cluster = m.size() > 1;
    if (cluster) out << "  subgraph cluster_" << k << " {\n    style=dashed;\n";
    for (int v : m) out << (cluster ? "    " : "  ") << "v" << v << " [label=\"" << vertex_label(layout_, v) << "\"];\n";
    if (cluster) out << "  }\n";
  }
  for (int v = 0; v < vertex_count(); ++v)
    for (int w : adj_[v]) out << "  v" << v << " -> v" << w << ";\n";
  out << "}\n";
  return out.str();
}

bool cut_equivalent(const EventGraph& g, const EventGraph& h) {
  if (!(g.layout() == h.layout())) throw MismatchError("graphs have different vertex sets");
  return g.down_table() == h.down_table();
}

EventGraph skeleton(const Layout& layout, const std::vector<int>& f) {
  const int np = layout.process_count();
  std::vector<Edge> edges;
  edges.reserve(f.size());
  for (int v = 0; v < layout.vertex_count(); ++v)
    for (int j = 0; j < np; ++j) edges.push_back({v, layout.vertex(j, f[static_cast<std::size_t>(v) * np + j])});
  return EventGraph(layout, edges);
}

}  // namespace slicing
