#include "slicing/analysis.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_set>

#include "slicing/errors.hpp"
#include "slicing/slice_algebra.hpp"
#include "slicing/slicer_fast.hpp"

namespace slicing {

namespace {

// Set of cuts keyed by a mixed-radix code when the lattice box fits in 64
// bits, by the vector otherwise.
class CutSetIndex {
 public:
  explicit CutSetIndex(const Layout& l) : layout_(l) {
    unsigned __int128 box = 1;
    for (int p = 0; p < l.process_count(); ++p) {
      box *= static_cast<unsigned>(l.events(p) + 1);
      if (box > (static_cast<unsigned __int128>(1) << 63)) {
        packed_ = false;
        break;
      }
    }
  }

  bool insert(const Cut& c) {
    if (!packed_) return wide_.insert(c).second;
    std::uint64_t code = 0;
    for (int p = 0; p < layout_.process_count(); ++p) code = code * static_cast<unsigned>(layout_.events(p) + 1) + c[p];
    return narrow_.insert(code).second;
  }

  void clear() {
    narrow_.clear();
    wide_.clear();
  }

 private:
  const Layout& layout_;
  bool packed_ = true;
  std::unordered_set<std::uint64_t> narrow_;
  std::set<Cut> wide_;
};

int cardinality(const Cut& c) {
  int s = 0;
  for (int x : c) s += x;
  return s;
}

// Visits every cut of g in order of cardinality; visit returns false to stop.
template <class Visit>
std::size_t traverse(const EventGraph& g, std::size_t budget, Visit visit, std::size_t* peak) {
  std::size_t visited = 0;
  if (peak) *peak = 0;
  if (g.empty()) return 0;
  const Layout& l = g.layout();
  // Pending cuts bucketed by cardinality; duplicates share a bucket.
  std::map<int, std::pair<std::vector<Cut>, CutSetIndex>> pending;
  std::size_t live = 0;
  auto push = [&](Cut c) {
    int key = cardinality(c);
    auto it = pending.find(key);
    if (it == pending.end()) it = pending.emplace(key, std::make_pair(std::vector<Cut>{}, CutSetIndex(l))).first;
    if (it->second.second.insert(c)) {
      it->second.first.push_back(std::move(c));
      ++live;
      if (peak) *peak = std::max(*peak, live);
    }
  };
  push(g.least_cut());
  while (!pending.empty()) {
    auto node = pending.extract(pending.begin());
    auto& cuts = node.mapped().first;
    for (std::size_t idx = 0; idx < cuts.size(); ++idx) {
      const Cut& c = cuts[idx];
      if (visited >= budget) throw BudgetExceeded("lattice search exceeded budget of " + std::to_string(budget));
      ++visited;
      if (!visit(c)) return visited;
      for (int p = 0; p < l.process_count(); ++p) {
        if (c[p] == l.events(p)) continue;
        Cut d = c;
        ++d[p];
        if (g.close(d)) push(std::move(d));
      }
      --live;
    }
  }
  return visited;
}

}  // namespace

DetectionResult search_lattice(const EventGraph& g, const Computation& comp, const Predicate& b, std::size_t budget) {
  DetectionResult r;
  r.slice_scc_count = g.scc_count();
  r.cuts_explored = traverse(
      g, budget,
      [&](const Cut& c) {
        if (!eval(b, comp, c)) return true;
        r.found = true;
        r.witness = c;
        return false;
      },
      &r.peak_nodes);
  return r;
}

DetectionResult detect_possibly(const Computation& comp, const Predicate& b, std::size_t budget) {
  Slice s = approximate_slice(comp, b);
  return search_lattice(s.graph(), comp, b, budget);
}

Modality parse_modality(std::string_view s) {
  if (s == "possibly") return Modality::Possibly;
  if (s == "invariant") return Modality::Invariant;
  if (s == "controllable") return Modality::Controllable;
  if (s == "definitely") return Modality::Definitely;
  throw Error("unknown modality '" + std::string(s) + "'");
}

bool monitor_regular(const Computation& comp, const Predicate& b, Modality m) {
  if (m == Modality::Definitely)
    throw Error("the definitely modality is an open problem for regular predicates and is not supported");
  if (!classify(b).regular) throw ClassError("monitoring needs a regular predicate");
  Slice s = slice_regular(comp, b);
  switch (m) {
    case Modality::Possibly: return s.scc_count() >= 2;
    case Modality::Invariant: return cut_equivalent(s.graph(), comp.graph());
    case Modality::Controllable: return s.scc_count() == comp.graph().scc_count();
    default: break;
  }
  return false;
}

std::size_t count_cuts(const EventGraph& g, std::size_t budget) {
  return traverse(g, budget, [](const Cut&) { return true; }, nullptr);
}

std::size_t count_slice_cuts(const Slice& s, std::size_t budget) { return count_cuts(s.graph(), budget); }

// ---------------------------------------------------------------------------
// Checkpoints

Slice checkpoint_slice(const Computation& comp) {
  LocalTruth truth(comp.process_count());
  for (int p = 0; p < comp.process_count(); ++p) {
    truth[p].assign(comp.events(p) + 1, 0);
    truth[p][0] = 1;
    for (int k : comp.checkpoints(p)) truth[p][k] = 1;
  }
  return slice_from_truth(comp, truth);
}

namespace {

void require_checkpoint(const Computation& comp, const EventId& c) {
  if (c.process < 0 || c.process >= comp.process_count() || !comp.is_checkpoint(c))
    throw Error(to_string(c) + " is not a checkpoint");
}

bool zigzag_between(const Computation& comp, const EventGraph& g, const EventId& a, const EventId& b) {
  const Layout& l = comp.layout();
  return g.reaches(l.vertex(a.process, a.index + 1), l.vertex(b));
}

}  // namespace

bool zigzag_consistent(const Computation& comp, const std::vector<EventId>& set) {
  for (const auto& c : set) require_checkpoint(comp, c);
  Slice s = checkpoint_slice(comp);
  for (const auto& a : set)
    for (const auto& b : set)
      if (zigzag_between(comp, s.graph(), a, b)) return false;
  return true;
}

bool zigzag_consistent(const Computation& comp, const EventId& c, const EventId& c2) {
  return zigzag_consistent(comp, std::vector<EventId>{c, c2});
}

Cut min_consistent_checkpoint(const Computation& comp, const std::vector<EventId>& set) {
  if (!zigzag_consistent(comp, set)) throw Error("checkpoints are not mutually consistent");
  Slice s = checkpoint_slice(comp);
  const Layout& l = comp.layout();
  Cut out(comp.process_count(), 0);
  auto d = s.graph().down(l.bottom(0));
  for (int p = 0; p < comp.process_count(); ++p) out[p] = d[p];
  for (const auto& c : set) {
    auto dc = s.graph().down(l.vertex(c));
    for (int p = 0; p < comp.process_count(); ++p) out[p] = std::max(out[p], dc[p]);
  }
  return out;
}

Cut max_consistent_checkpoint(const Computation& comp, const std::vector<EventId>& set) {
  if (!zigzag_consistent(comp, set)) throw Error("checkpoints are not mutually consistent");
  Slice s = checkpoint_slice(comp);
  const Layout& l = comp.layout();
  Cut out(comp.process_count());
  auto r = s.graph().reach(l.top(0));
  for (int p = 0; p < comp.process_count(); ++p) out[p] = r[p] - 1;
  for (const auto& c : set) {
    auto rc = s.graph().reach(l.vertex(c.process, c.index + 1));
    for (int p = 0; p < comp.process_count(); ++p) out[p] = std::min(out[p], rc[p] - 1);
  }
  return out;
}

bool RGraph::reaches(int a, int b) const {
  std::vector<char> seen(nodes.size(), 0);
  std::vector<int> stack{a};
  seen[a] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (v == b) return true;
    for (int w : edges[v])
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
  }
  return false;
}

RGraph build_rgraph(const Computation& comp) {
  RGraph r;
  const int n = comp.process_count();
  std::vector<std::vector<int>> ids(n);  // node positions per process
  for (int p = 0; p < n; ++p)
    for (int k : comp.checkpoints(p)) {
      ids[p].push_back(static_cast<int>(r.nodes.size()));
      r.nodes.push_back({p, k});
    }
  for (int p = 0; p < n; ++p) {
    int m = comp.events(p);
    if (m >= 1 && !comp.is_checkpoint({p, m})) {
      ids[p].push_back(static_cast<int>(r.nodes.size()));
      r.nodes.push_back({p, m});
    }
  }
  r.edges.assign(r.nodes.size(), {});
  // Interval of event k on p: the first node at or after k.
  auto node_of = [&](const EventId& e) {
    for (int id : ids[e.process])
      if (r.nodes[id].index >= e.index) return id;
    return -1;
  };
  for (int p = 0; p < n; ++p)
    for (std::size_t x = 1; x < ids[p].size(); ++x) r.edges[ids[p][x - 1]].push_back(ids[p][x]);
  for (const auto& m : comp.messages()) {
    int a = node_of(m.send), b = node_of(m.recv);
    if (a >= 0 && b >= 0) r.edges[a].push_back(b);
  }
  for (auto& e : r.edges) {
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
  }
  return r;
}

// ---------------------------------------------------------------------------
// Combinatorics

Computation nonconsecutive_computation(int n, int k) {
  if (k < 1 || n < k) throw Error("need 1 <= k <= n");
  TraceData t;
  t.process_count = k;
  t.vars.assign(k, {VarDecl{"e", Monotonicity::NonDecreasing, std::int64_t{0}}});
  t.events.resize(k);
  // p_i holds the i-th smallest element; its j-th step moves it from i+j-1
  // to i+j.
  for (int i = 0; i < k; ++i)
    for (int idx = 1; idx <= n - k + 1; ++idx) {
      TraceData::Event ev;
      ev.init = idx == 1;
      ev.assignments.push_back({"e", std::int64_t{idx - 1 + i + 1}});
      t.events[i].push_back(std::move(ev));
    }
  for (int i = 0; i + 1 < k; ++i)
    for (int j = 1; j <= n - k; ++j) t.messages.push_back({{i + 1, j + 1}, {i, j + 1}});
  return Computation(std::move(t));
}

std::int64_t ksubset_count_nonconsecutive(int n, int k) {
  Computation comp = nonconsecutive_computation(n, k);
  std::vector<LocalConjunct> conjuncts;
  for (int i = 1; i < k; ++i) {
    std::string text = "p" + std::to_string(i + 1) + ".e - p" + std::to_string(i) + ".e >= 2";
    conjuncts.push_back({parse_predicate(text, comp), {i - 1, i}});
  }
  return static_cast<std::int64_t>(count_slice_cuts(slice_decomposable(comp, conjuncts)));
}

}  // namespace slicing
