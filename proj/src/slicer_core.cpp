#include "slicing/slicer_core.hpp"

#include <algorithm>
#include <set>

#include "slicing/errors.hpp"

namespace slicing {

Slice::Slice(Computation base, EventGraph graph) : base_(std::move(base)), graph_(std::move(graph)) {
  if (!(graph_.layout() == base_.layout())) throw MismatchError("slice graph does not match its base computation");
}

std::vector<std::pair<EventId, EventId>> Slice::added_edges() const {
  const auto& base = base_.graph().extra_edges();
  std::set<Edge> known(base.begin(), base.end());
  std::vector<std::pair<EventId, EventId>> out;
  const Layout& l = graph_.layout();
  for (const auto& e : graph_.extra_edges())
    if (!known.count(e)) out.push_back({l.event(e.first), l.event(e.second)});
  return out;
}

Slice identity_slice(const Computation& comp) { return Slice(comp, comp.graph()); }

Slice empty_slice(const Computation& comp) {
  auto edges = comp.graph().extra_edges();
  edges.push_back({comp.layout().top(0), comp.layout().bottom(0)});
  return Slice(comp, EventGraph(comp.layout(), edges));
}

JMap compute_j(const EventGraph& g, const ScanTarget& target) {
  const Layout& l = g.layout();
  const int n = l.process_count();
  JMap out(l.vertex_count());
  Cut least = g.empty() ? l.full() : g.least_cut();
  for (int i = 0; i < n; ++i) {
    JCut c{least, g.empty()};
    for (int k = 0; k <= l.events(i) + 1; ++k) {
      if (k == l.events(i) + 1) c.full = true;
      // Resume from the previous event's cut: J is order-preserving.
      while (!c.full) {
        if (!g.close(c.counts)) {
          c.full = true;
          break;
        }
        int p;
        if (c.counts[i] < k) {
          p = i;
        } else if (target.satisfied(c.counts)) {
          break;
        } else {
          p = target.forbidden(c.counts);
          if (p == kAnyProcess) {
            c.full = true;
            break;
          }
        }
        if (c.counts[p] == l.events(p)) {
          c.full = true;
          break;
        }
        ++c.counts[p];
      }
      if (c.full) c.counts = l.full();
      out[l.vertex(i, k)] = c;
    }
  }
  return out;
}

FMap compute_f(const EventGraph& g, const JMap& j) {
  const Layout& l = g.layout();
  const int n = l.process_count();
  FMap f(static_cast<std::size_t>(l.vertex_count()) * n);
  auto contains = [&](const JCut& c, int v) {
    if (c.full) return true;
    if (l.is_top(v)) return false;
    return l.index_of(v) <= c.counts[l.process_of(v)];
  };
  for (int i = 0; i < n; ++i)
    for (int q = 0; q < n; ++q) {
      int ptr = 0;
      for (int k = 0; k <= l.events(i) + 1; ++k) {
        int v = l.vertex(i, k);
        while (!contains(j[l.vertex(q, ptr)], v)) ++ptr;
        f[static_cast<std::size_t>(v) * n + q] = ptr;
      }
    }
  return f;
}

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ClassError(what);
}

ScanTarget forward_target(const Computation& comp, const Predicate& b) {
  return {[&comp, b](std::span<const int> c) { return eval(b, comp, c); },
          [&comp, b](std::span<const int> c) { return forbidden_process(b, comp, c, Direction::Advance); }};
}

}  // namespace

JMap compute_j(const Computation& comp, const Predicate& b) {
  require(classify(b).linear, "compute_j needs a linear predicate");
  return compute_j(comp.graph(), forward_target(comp, b));
}

FMap compute_f(const Computation& comp, const JMap& j) { return compute_f(comp.graph(), j); }

Slice slice_regular(const Computation& comp, const Predicate& b) {
  require(classify(b).linear, "slice_regular needs a regular or linear predicate");
  const EventGraph& g = comp.graph();
  FMap f = compute_f(g, compute_j(g, forward_target(comp, b)));
  return Slice(comp, skeleton(comp.layout(), f));
}

Slice slice_postlinear(const Computation& comp, const Predicate& b) {
  require(classify(b).postlinear, "slice_postlinear needs a post-linear predicate");
  const Layout& l = comp.layout();
  EventGraph rev = comp.graph().reversed();
  auto original = [&l](std::span<const int> c) {
    Cut o(c.size());
    for (std::size_t p = 0; p < c.size(); ++p) o[p] = l.events(static_cast<int>(p)) - c[p];
    return o;
  };
  ScanTarget t{[&](std::span<const int> c) { return eval(b, comp, original(c)); },
               [&](std::span<const int> c) { return forbidden_process(b, comp, original(c), Direction::Retreat); }};
  FMap f = compute_f(rev, compute_j(rev, t));
  return Slice(comp, skeleton(l, f).reversed());
}

EventGraph::Condensation condense(const Slice& s) { return s.graph().condense(); }

FMap reach_vectors(const Slice& s) { return s.graph().reach_table(); }

}  // namespace slicing
