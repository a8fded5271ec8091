#include "slicing/oracle.hpp"

#include <algorithm>
#include <deque>

#include "slicing/errors.hpp"

namespace slicing::oracle {

std::optional<Cut> closure(const EventGraph& g, Cut counts) {
  const Layout& l = g.layout();
  const auto& adj = g.successors();
  for (bool changed = true; changed;) {
    changed = false;
    for (int u = 0; u < l.vertex_count(); ++u)
      for (int v : adj[u]) {
        if (l.index_of(v) > counts[l.process_of(v)]) continue;
        int p = l.process_of(u), k = l.index_of(u);
        if (k > counts[p]) {
          counts[p] = k;
          changed = true;
        }
      }
    for (int p = 0; p < l.process_count(); ++p)
      if (counts[p] > l.events(p)) return std::nullopt;
  }
  return counts;
}

CutSet enumerate_cuts(const EventGraph& g, std::size_t budget) {
  CutSet seen;
  auto start = closure(g, Cut(g.process_count(), 0));
  if (!start) return seen;
  std::deque<Cut> queue{*start};
  seen.insert(*start);
  while (!queue.empty()) {
    Cut c = std::move(queue.front());
    queue.pop_front();
    for (int p = 0; p < g.process_count(); ++p) {
      if (c[p] == g.layout().events(p)) continue;
      Cut d = c;
      ++d[p];
      auto e = closure(g, std::move(d));
      if (!e || seen.count(*e)) continue;
      if (seen.size() >= budget) throw BudgetExceeded("cut enumeration exceeded budget of " + std::to_string(budget));
      seen.insert(*e);
      queue.push_back(std::move(*e));
    }
  }
  return seen;
}

CutSet enumerate_cuts(const Computation& comp, std::size_t budget) { return enumerate_cuts(comp.graph(), budget); }

CutSet filter(const CutSet& cuts, const Computation& comp, const Predicate& b) {
  CutSet out;
  for (const auto& c : cuts)
    if (eval(b, comp, c)) out.insert(c);
  return out;
}

CutSet satisfying_cuts(const Computation& comp, const Predicate& b, std::size_t budget) {
  return filter(enumerate_cuts(comp, budget), comp, b);
}

namespace {

Cut meet(const Cut& a, const Cut& b) {
  Cut c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = std::min(a[i], b[i]);
  return c;
}

Cut join(const Cut& a, const Cut& b) {
  Cut c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = std::max(a[i], b[i]);
  return c;
}

bool leq(const Cut& a, const Cut& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

}  // namespace

CutSet reg_closure(const CutSet& family) {
  CutSet out = family;
  std::vector<Cut> work(family.begin(), family.end());
  while (!work.empty()) {
    Cut c = std::move(work.back());
    work.pop_back();
    std::vector<Cut> fresh;
    for (const auto& d : out) {
      for (Cut x : {meet(c, d), join(c, d)})
        if (!out.count(x)) fresh.push_back(std::move(x));
    }
    for (auto& x : fresh)
      if (out.insert(x).second) work.push_back(std::move(x));
  }
  return out;
}

CutSet join_irreducibles(const CutSet& lattice) {
  CutSet out;
  for (const auto& x : lattice) {
    std::optional<Cut> below;
    for (const auto& y : lattice) {
      if (y == x || !leq(y, x)) continue;
      below = below ? join(*below, y) : y;
    }
    if (below && *below != x) out.insert(x);
  }
  return out;
}

CutSet brute_slice(const Computation& comp, const Predicate& b, std::size_t budget) {
  return reg_closure(satisfying_cuts(comp, b, budget));
}

bool closed_under_meet_and_join(const CutSet& s) {
  for (const auto& a : s)
    for (const auto& b : s)
      if (!s.count(meet(a, b)) || !s.count(join(a, b))) return false;
  return true;
}

bool spanning_chain(const Computation& comp, const CutSet& lattice, const CutSet& good) {
  if (lattice.empty()) return true;
  Cut lo = *lattice.begin(), hi = *lattice.begin();
  for (const auto& c : lattice) {
    lo = meet(lo, c);
    hi = join(hi, c);
  }
  if (!good.count(lo)) return false;
  CutSet seen{lo};
  std::vector<Cut> stack{lo};
  while (!stack.empty()) {
    Cut c = std::move(stack.back());
    stack.pop_back();
    if (c == hi) return true;
    std::vector<Cut> next;
    for (int p = 0; p < comp.process_count(); ++p) {
      if (c[p] == comp.events(p)) continue;
      Cut d = c;
      ++d[p];
      if (auto e = closure(comp.graph(), std::move(d))) next.push_back(std::move(*e));
    }
    for (const auto& d : next) {
      bool cover = std::none_of(next.begin(), next.end(), [&](const Cut& o) { return o != d && leq(o, d); });
      if (cover && good.count(d) && seen.insert(d).second) stack.push_back(d);
    }
  }
  return false;
}

bool zigzag_path(const Computation& comp, const EventId& a, const EventId& b) {
  auto interval = [&](const EventId& e) {
    const auto& cps = comp.checkpoints(e.process);
    return static_cast<int>(std::lower_bound(cps.begin(), cps.end(), e.index) - cps.begin());
  };
  const auto& msgs = comp.messages();
  // Depth-first over messages; a message may follow another when it leaves
  // the receiver in the same or a later checkpoint interval.
  std::vector<char> seen(msgs.size(), 0);
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < msgs.size(); ++i)
    if (msgs[i].send.process == a.process && msgs[i].send.index > a.index) {
      seen[i] = 1;
      stack.push_back(i);
    }
  while (!stack.empty()) {
    const Message& m = msgs[stack.back()];
    stack.pop_back();
    if (m.recv.process == b.process && m.recv.index <= b.index) return true;
    for (std::size_t j = 0; j < msgs.size(); ++j) {
      if (seen[j] || msgs[j].send.process != m.recv.process) continue;
      if (interval(msgs[j].send) < interval(m.recv)) continue;
      seen[j] = 1;
      stack.push_back(j);
    }
  }
  return false;
}

}  // namespace slicing::oracle
