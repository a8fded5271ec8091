#include "slicing/slice_algebra.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "slicing/errors.hpp"
#include "slicing/slicer_fast.hpp"

namespace slicing {

namespace {

void same_base(const Computation& comp, std::span<const Slice> slices) {
  for (const auto& s : slices)
    if (!s.base().same_as(comp)) throw MismatchError("slices are over different computations");
}

}  // namespace

Slice compose_meet(std::span<const Slice> slices) {
  if (slices.empty()) throw Error("meet of no slices");
  const Computation& comp = slices[0].base();
  same_base(comp, slices);
  FMap f = slices[0].graph().reach_table();
  for (const auto& s : slices.subspan(1)) {
    const auto& r = s.graph().reach_table();
    for (std::size_t x = 0; x < f.size(); ++x) f[x] = std::min(f[x], r[x]);
  }
  return Slice(comp, skeleton(comp.layout(), f));
}

Slice compose_meet(const Slice& a, const Slice& b) {
  std::vector<Slice> v{a, b};
  return compose_meet(v);
}

Slice compose_join(const Computation& comp, std::span<const Slice> slices) {
  same_base(comp, slices);
  if (slices.empty()) return empty_slice(comp);
  FMap f = slices[0].graph().reach_table();
  for (const auto& s : slices.subspan(1)) {
    const auto& r = s.graph().reach_table();
    for (std::size_t x = 0; x < f.size(); ++x) f[x] = std::max(f[x], r[x]);
  }
  return Slice(comp, skeleton(comp.layout(), f));
}

Slice compose_join(const Slice& a, const Slice& b) {
  std::vector<Slice> v{a, b};
  return compose_join(a.base(), v);
}

Slice slice_coregular(const Computation& comp, const Predicate& b) {
  if (!classify(b).regular) throw ClassError("slice_coregular needs a regular predicate");
  const Layout& l = comp.layout();
  const int n = comp.process_count();
  Slice s = slice_regular(comp, b);
  const FMap& f = s.graph().reach_table();
  std::set<std::pair<int, int>> pairs;
  for (int v = 0; v < l.vertex_count(); ++v)
    for (int i = 0; i < n; ++i) {
      int w = l.vertex(i, f_entry(f, l, v, i));
      if (!comp.graph().reaches(v, w)) pairs.insert({v, w});
    }
  // Cuts that hold w but not v violate b.
  std::vector<Slice> parts;
  for (auto [v, w] : pairs) {
    EventId e = l.event(v), g = l.event(w);
    if (e.index == 0 || l.is_top(w)) continue;
    LocalTruth truth(n);
    for (int p = 0; p < n; ++p) truth[p].assign(comp.events(p) + 1, 1);
    for (int k = 0; k <= comp.events(e.process); ++k)
      if (k >= e.index) truth[e.process][k] = 0;
    for (int k = 0; k <= comp.events(g.process); ++k)
      if (k < g.index) truth[g.process][k] = 0;
    parts.push_back(slice_from_truth(comp, truth));
  }
  return compose_join(comp, parts);
}

namespace {

using QuantityKey = std::tuple<Quantity, int, int>;  // kind, slot, peer

void collect_terms(const Predicate& b, std::map<int, std::set<QuantityKey>>& out) {
  if (b.kind() == Predicate::Kind::Atom) {
    for (const Expr* e : {&b.atom().lhs, &b.atom().rhs})
      for (const auto& t : e->terms) out[t.process].insert({t.kind, t.slot, t.peer});
    return;
  }
  for (const auto& c : b.children()) collect_terms(c, out);
}

std::vector<Value> state_key(const Computation& comp, int p, int k, const std::set<QuantityKey>& terms) {
  std::vector<Value> key;
  for (const auto& [kind, slot, peer] : terms) {
    switch (kind) {
      case Quantity::Variable: key.push_back(comp.value(p, slot, k)); break;
      case Quantity::Sent: key.push_back(std::int64_t{comp.sent(p, peer, k)}); break;
      case Quantity::Received: key.push_back(std::int64_t{comp.received(p, peer, k)}); break;
    }
  }
  return key;
}

}  // namespace

Slice slice_klocal_general(const Computation& comp, const Predicate& b, int cap) {
  auto sup = support(b);
  if (static_cast<int>(sup.size()) > cap)
    throw ClassError("predicate spans " + std::to_string(sup.size()) + " processes, above the cap of " + std::to_string(cap));
  const int n = comp.process_count();
  if (sup.empty()) return eval(b, comp, Cut(n, 0)) ? identity_slice(comp) : empty_slice(comp);

  std::map<int, std::set<QuantityKey>> terms;
  collect_terms(b, terms);
  const int last = sup.back();
  std::vector<int> fixed(sup.begin(), sup.end() - 1);

  // Distinct observable local states of each fixed process, with one
  // representative index and the indices sharing it.
  struct State {
    int representative;
    std::vector<int> indices;
  };
  std::vector<std::vector<State>> states;
  for (int p : fixed) {
    std::map<std::vector<Value>, State> by_key;
    for (int k = comp.is_init(p) ? 1 : 0; k <= comp.events(p); ++k) {
      auto key = state_key(comp, p, k, terms[p]);
      auto it = by_key.find(key);
      if (it == by_key.end()) by_key.emplace(std::move(key), State{k, {k}});
      else it->second.indices.push_back(k);
    }
    std::vector<State> v;
    for (auto& kv : by_key) v.push_back(std::move(kv.second));
    states.push_back(std::move(v));
  }

  std::vector<Slice> clauses;
  std::vector<std::size_t> pick(fixed.size(), 0);
  for (;;) {
    LocalTruth truth(n);
    for (int p = 0; p < n; ++p) truth[p].assign(comp.events(p) + 1, 1);
    Cut probe(n, 0);
    for (std::size_t a = 0; a < fixed.size(); ++a) {
      int p = fixed[a];
      const State& st = states[a][pick[a]];
      probe[p] = st.representative;
      std::fill(truth[p].begin(), truth[p].end(), 0);
      for (int k : st.indices) truth[p][k] = 1;
    }
    bool any = false;
    for (int k = 0; k <= comp.events(last); ++k) {
      probe[last] = k;
      truth[last][k] = eval(b, comp, probe);
      any |= truth[last][k] != 0;
    }
    if (any) clauses.push_back(slice_from_truth(comp, truth));
    std::size_t a = 0;
    while (a < fixed.size() && ++pick[a] == states[a].size()) pick[a++] = 0;
    if (a == fixed.size()) break;
  }
  return compose_join(comp, clauses);
}

namespace {

Slice approximate(const Computation& comp, const Predicate& b, int cap, std::vector<std::string>* explain, int depth) {
  auto note = [&](const std::string& what) {
    if (explain) explain->push_back(std::string(2 * depth, ' ') + what + ": " + b.to_string());
  };
  PredicateClass c = classify(b, cap);
  if (c.conjunctive) {
    note(std::string(to_string(c.tag)) + " -> conjunctive slicer");
    return slice_conjunctive(comp, b);
  }
  if (c.linear) {
    note(std::string(to_string(c.tag)) + " -> regular slicer");
    return slice_regular(comp, b);
  }
  if (c.postlinear) {
    note("post-linear -> dual slicer");
    return slice_postlinear(comp, b);
  }
  if (c.tag == ClassTag::CoRegular) {
    note("co-regular -> join of prevents slices");
    return slice_coregular(comp, b.children()[0]);
  }
  if (c.tag == ClassTag::KLocal) {
    note(std::to_string(c.k) + "-local -> clause join");
    return slice_klocal_general(comp, b, cap);
  }
  switch (b.kind()) {
    case Predicate::Kind::And:
    case Predicate::Kind::Or: {
      note(b.kind() == Predicate::Kind::And ? "and -> meet" : "or -> join");
      std::vector<Slice> parts;
      for (const auto& x : b.children()) parts.push_back(approximate(comp, x, cap, explain, depth + 1));
      return b.kind() == Predicate::Kind::And ? compose_meet(parts) : compose_join(comp, parts);
    }
    case Predicate::Kind::Not: {
      Predicate pushed = push_negation(b);
      if (pushed.kind() != Predicate::Kind::Not) {
        note("not -> pushed inward");
        return approximate(comp, pushed, cap, explain, depth + 1);
      }
      break;
    }
    default: break;
  }
  throw ClassError("no slicer applies to " + b.to_string());
}

}  // namespace

Slice approximate_slice(const Computation& comp, const Predicate& b, int cap, std::vector<std::string>* explain) {
  return approximate(comp, b, cap, explain, 0);
}

}  // namespace slicing
