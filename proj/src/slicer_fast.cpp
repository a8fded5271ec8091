#include "slicing/slicer_fast.hpp"

#include <algorithm>

#include "slicing/errors.hpp"

namespace slicing {

Slice slice_from_truth(const Computation& comp, const LocalTruth& truth) {
  const Layout& l = comp.layout();
  auto edges = comp.graph().extra_edges();
  for (int p = 0; p < comp.process_count(); ++p)
    for (int k = 0; k <= comp.events(p); ++k)
      if (!truth[p][k]) edges.push_back({l.vertex(p, k + 1), l.vertex(p, k)});
  return Slice(comp, EventGraph(l, edges));
}

namespace {

void flatten(const Predicate& b, std::vector<Predicate>& out) {
  if (b.kind() == Predicate::Kind::And) {
    for (const auto& c : b.children()) flatten(c, out);
    return;
  }
  if (b.kind() == Predicate::Kind::Not) {
    Predicate pushed = push_negation(b);
    if (pushed.kind() != Predicate::Kind::Not) {
      flatten(pushed, out);
      return;
    }
  }
  if (support(b).size() > 1) throw ClassError("predicate is not conjunctive");
  out.push_back(b);
}

}  // namespace

Slice slice_conjunctive(const Computation& comp, const Predicate& b) {
  if (!classify(b).conjunctive) throw ClassError("slice_conjunctive needs a conjunction of local predicates");
  std::vector<Predicate> locals;
  flatten(b, locals);
  const int n = comp.process_count();
  LocalTruth truth(n);
  for (int p = 0; p < n; ++p) truth[p].assign(comp.events(p) + 1, 1);
  Cut probe(n, 0);
  for (const auto& c : locals) {
    auto sup = support(c);
    if (sup.empty()) {
      if (!eval(c, comp, probe)) return empty_slice(comp);
      continue;
    }
    int p = sup[0];
    for (int k = 0; k <= comp.events(p); ++k) {
      probe[p] = k;
      if (truth[p][k] && !eval(c, comp, probe)) truth[p][k] = 0;
    }
    probe[p] = 0;
  }
  return slice_from_truth(comp, truth);
}

namespace {

void check_channel(const Computation& comp, int i, int j) {
  int n = comp.process_count();
  if (i < 0 || j < 0 || i >= n || j >= n || i == j) throw ClassError("invalid channel");
}

}  // namespace

Slice slice_channel_atmost(const Computation& comp, int i, int j, int k) {
  check_channel(comp, i, j);
  if (k < 0) return empty_slice(comp);
  const Layout& l = comp.layout();
  auto edges = comp.graph().extra_edges();
  int total = comp.sent(i, j, comp.events(i));
  // The (x+k)-th send needs the x-th receive.
  for (int x = 1; x + k <= total; ++x) {
    int r = comp.nth_receive(j, i, x);
    int s = comp.nth_send(i, j, x + k);
    edges.push_back({l.vertex(j, r), l.vertex(i, s)});
  }
  return Slice(comp, EventGraph(l, edges));
}

Slice slice_channel_atleast(const Computation& comp, int i, int j, int k) {
  check_channel(comp, i, j);
  if (k <= 0) return identity_slice(comp);
  const Layout& l = comp.layout();
  auto edges = comp.graph().extra_edges();
  int total = comp.sent(i, j, comp.events(i));
  auto send_or_top = [&](int x) { return x <= total ? l.vertex(i, comp.nth_send(i, j, x)) : l.top(i); };
  // Every nontrivial cut holds k sends; the x-th receive needs x+k sends.
  edges.push_back({send_or_top(k), l.bottom(j)});
  int received = comp.received(j, i, comp.events(j));
  for (int x = 1; x <= received; ++x) edges.push_back({send_or_top(x + k), l.vertex(j, comp.nth_receive(j, i, x))});
  return Slice(comp, EventGraph(l, edges));
}

Slice slice_klocal_regular(const Computation& comp, const Predicate& b, const std::vector<int>& q) {
  return slice_decomposable(comp, {LocalConjunct{b, q}});
}

Slice slice_decomposable(const Computation& comp, const std::vector<LocalConjunct>& conjuncts) {
  const Layout& l = comp.layout();
  const int n = comp.process_count();
  FMap k = comp.graph().reach_table();
  for (const auto& c : conjuncts) {
    if (!classify(c.predicate).regular) throw ClassError("decomposable conjunct is not regular: " + c.predicate.to_string());
    std::vector<int> q = c.processes;
    std::sort(q.begin(), q.end());
    q.erase(std::unique(q.begin(), q.end()), q.end());
    if (q.empty()) throw ClassError("empty process set");
    for (int p : q)
      if (p < 0 || p >= n) throw ClassError("process out of range");
    std::vector<int> local(n, -1);
    for (std::size_t a = 0; a < q.size(); ++a) local[q[a]] = static_cast<int>(a);
    for (int p : support(c.predicate))
      if (local[p] < 0) throw ClassError("predicate support exceeds the process set");

    EventGraph proj = comp.graph().project(q);
    auto full = [&](std::span<const int> cq) {
      Cut out(n, 0);
      for (std::size_t a = 0; a < q.size(); ++a) out[q[a]] = cq[a];
      return out;
    };
    ScanTarget t{[&](std::span<const int> cq) { return eval(c.predicate, comp, full(cq)); },
                 [&](std::span<const int> cq) {
                   int p = forbidden_process(c.predicate, comp, full(cq), Direction::Advance);
                   return p == kAnyProcess ? kAnyProcess : local[p];
                 }};
    FMap fq = compute_f(proj, compute_j(proj, t));
    const Layout& pl = proj.layout();
    const int qn = static_cast<int>(q.size());
    for (int a = 0; a < qn; ++a)
      for (int idx = 0; idx <= l.events(q[a]) + 1; ++idx) {
        int v = l.vertex(q[a], idx), pv = pl.vertex(a, idx);
        for (int bq = 0; bq < qn; ++bq) {
          int& entry = k[static_cast<std::size_t>(v) * n + q[bq]];
          entry = std::min(entry, fq[static_cast<std::size_t>(pv) * qn + bq]);
        }
      }
  }
  return Slice(comp, skeleton(l, k));
}

}  // namespace slicing
