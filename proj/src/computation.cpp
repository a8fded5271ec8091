#include "slicing/computation.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "slicing/errors.hpp"

namespace slicing {

std::string to_string(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  std::string out = "\"";
  for (char c : std::get<std::string>(v)) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string_view to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::NonDecreasing: return "nondec";
    case Monotonicity::NonIncreasing: return "noninc";
    default: return "none";
  }
}

namespace {

std::vector<std::string> tokenize(std::string_view line, int lineno) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '#') break;
    std::string tok;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) {
      if (line[i] == '"') {
        tok += '"';
        ++i;
        for (;;) {
          if (i >= line.size()) throw ParseError(lineno, "unterminated string");
          char c = line[i++];
          if (c == '\\' && i < line.size()) {
            tok += line[i++];
            continue;
          }
          if (c == '"') break;
          tok += c;
        }
        tok += '"';
        continue;
      }
      tok += line[i++];
    }
    out.push_back(std::move(tok));
  }
  return out;
}

bool parse_int(std::string_view s, std::int64_t& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

Value parse_value(std::string_view s, int lineno) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return std::string(s.substr(1, s.size() - 2));
  if (s == "true") return std::int64_t{1};
  if (s == "false") return std::int64_t{0};
  std::int64_t v;
  if (!parse_int(s, v)) throw ParseError(lineno, "bad value '" + std::string(s) + "'");
  return v;
}

int parse_process(std::string_view s, int n, int lineno) {
  std::int64_t p;
  if (s.size() < 2 || s[0] != 'p' || !parse_int(s.substr(1), p)) throw ParseError(lineno, "bad process '" + std::string(s) + "'");
  if (p < 1 || p > n) throw ParseError(lineno, "process out of range '" + std::string(s) + "'");
  return static_cast<int>(p) - 1;
}

int parse_index(std::string_view s, int lineno) {
  std::int64_t k;
  if (!parse_int(s, k) || k < 1) throw ParseError(lineno, "bad event index '" + std::string(s) + "'");
  return static_cast<int>(k);
}

EventId parse_endpoint(std::string_view s, int n, int lineno) {
  auto colon = s.find(':');
  if (colon == std::string_view::npos) throw ParseError(lineno, "bad message endpoint '" + std::string(s) + "'");
  return {parse_process(s.substr(0, colon), n, lineno), parse_index(s.substr(colon + 1), lineno)};
}

}  // namespace

TraceData parse_trace(std::string_view text) {
  TraceData t;
  std::vector<std::vector<std::pair<int, TraceData::Event>>> raw;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto tok = tokenize(line, lineno);
    if (tok.empty()) continue;
    const std::string& kw = tok[0];
    if (!header) {
      std::int64_t n;
      if (kw != "header" || tok.size() != 2 || tok[1].rfind("n=", 0) != 0 || !parse_int(std::string_view(tok[1]).substr(2), n) || n < 1)
        throw ParseError(lineno, "expected 'header n=<int>'");
      t.process_count = static_cast<int>(n);
      t.vars.resize(n);
      raw.resize(n);
      header = true;
      continue;
    }
    const int n = t.process_count;
    if (kw == "var") {
      if (tok.size() != 4 && tok.size() != 5) throw ParseError(lineno, "expected 'var p<i> <name> none|nondec|noninc [initial]'");
      VarDecl d;
      int p = parse_process(tok[1], n, lineno);
      d.name = tok[2];
      if (tok[3] == "none") d.mono = Monotonicity::None;
      else if (tok[3] == "nondec") d.mono = Monotonicity::NonDecreasing;
      else if (tok[3] == "noninc") d.mono = Monotonicity::NonIncreasing;
      else throw ParseError(lineno, "bad monotonicity '" + tok[3] + "'");
      if (tok.size() == 5) d.initial = parse_value(tok[4], lineno);
      for (const auto& e : t.vars[p])
        if (e.name == d.name) throw ParseError(lineno, "duplicate variable " + d.name);
      t.vars[p].push_back(std::move(d));
    } else if (kw == "event") {
      if (tok.size() < 3) throw ParseError(lineno, "expected 'event p<i> <index> ...'");
      int p = parse_process(tok[1], n, lineno);
      int k = parse_index(tok[2], lineno);
      TraceData::Event ev;
      for (std::size_t i = 3; i < tok.size(); ++i) {
        if (tok[i] == "init") {
          ev.init = true;
          continue;
        }
        auto eq = tok[i].find('=');
        if (eq == std::string::npos || eq == 0) throw ParseError(lineno, "expected name=value, got '" + tok[i] + "'");
        std::string name = tok[i].substr(0, eq);
        bool declared = std::any_of(t.vars[p].begin(), t.vars[p].end(), [&](const VarDecl& d) { return d.name == name; });
        if (!declared) throw ParseError(lineno, "undeclared variable " + name + " on " + tok[1]);
        ev.assignments.push_back({name, parse_value(std::string_view(tok[i]).substr(eq + 1), lineno)});
      }
      if (ev.init && k != 1) throw ParseError(lineno, "only the first event may be marked init");
      raw[p].push_back({k, std::move(ev)});
    } else if (kw == "msg") {
      if (tok.size() != 4 || tok[2] != "->") throw ParseError(lineno, "expected 'msg p<i>:<s> -> p<j>:<r>'");
      t.messages.push_back({parse_endpoint(tok[1], n, lineno), parse_endpoint(tok[3], n, lineno)});
    } else if (kw == "checkpoint") {
      if (tok.size() != 3) throw ParseError(lineno, "expected 'checkpoint p<i> <index>'");
      t.checkpoints.push_back({parse_process(tok[1], n, lineno), parse_index(tok[2], lineno)});
    } else if (kw == "header") {
      throw ParseError(lineno, "duplicate header");
    } else {
      throw ParseError(lineno, "unknown record '" + kw + "'");
    }
  }
  if (!header) throw ParseError(0, "missing header");
  t.events.resize(t.process_count);
  for (int p = 0; p < t.process_count; ++p) {
    auto& r = raw[p];
    std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r[i].first != static_cast<int>(i) + 1)
        throw ParseError(0, "event indices of p" + std::to_string(p + 1) + " are not dense (missing or duplicate " +
                                std::to_string(i + 1) + ")");
      t.events[p].push_back(std::move(r[i].second));
    }
  }
  return t;
}

std::string write_trace(const TraceData& t) {
  std::ostringstream out;
  out << "header n=" << t.process_count << "\n";
  for (int p = 0; p < t.process_count; ++p)
    for (const auto& d : t.vars[p]) {
      out << "var p" << p + 1 << " " << d.name << " " << to_string(d.mono);
      if (d.initial != Value{std::int64_t{0}}) out << " " << to_string(d.initial);
      out << "\n";
    }
  for (int p = 0; p < t.process_count; ++p)
    for (std::size_t k = 0; k < t.events[p].size(); ++k) {
      const auto& ev = t.events[p][k];
      out << "event p" << p + 1 << " " << k + 1;
      if (ev.init) out << " init";
      for (const auto& [name, v] : ev.assignments) out << " " << name << "=" << to_string(v);
      out << "\n";
    }
  for (const auto& m : t.messages)
    out << "msg p" << m.send.process + 1 << ":" << m.send.index << " -> p" << m.recv.process + 1 << ":" << m.recv.index << "\n";
  for (const auto& c : t.checkpoints) out << "checkpoint p" << c.process + 1 << " " << c.index << "\n";
  return out.str();
}

Computation::Computation(TraceData trace) {
  auto impl = std::make_shared<Impl>();
  const int n = trace.process_count;
  if (n < 1) throw ModelError("a computation needs at least one process");
  trace.vars.resize(n);
  trace.events.resize(n);
  std::vector<int> sizes;
  for (int p = 0; p < n; ++p) sizes.push_back(static_cast<int>(trace.events[p].size()));
  Layout layout(sizes);
  auto real = [&](const EventId& e) {
    return e.process >= 0 && e.process < n && e.index >= 1 && e.index <= sizes[e.process];
  };

  std::vector<Edge> edges;
  for (const auto& m : trace.messages) {
    if (!real(m.send) || !real(m.recv))
      throw ModelError("dangling message endpoint " + to_string(real(m.send) ? m.recv : m.send));
    if (m.send.process == m.recv.process) throw ModelError("message within one process at " + to_string(m.send));
    edges.push_back({layout.vertex(m.send), layout.vertex(m.recv)});
  }
  impl->hb = EventGraph(layout, edges);
  if (impl->hb.scc_count() != layout.real_event_count() + 2) throw ModelError("messages induce a cycle");
  impl->init.assign(n, false);
  for (int p = 0; p < n; ++p)
    if (sizes[p] > 0 && trace.events[p][0].init) {
      impl->init[p] = true;
      edges.push_back({layout.vertex(p, 1), layout.bottom(p)});
    }
  impl->graph = EventGraph(layout, edges);

  impl->values.resize(n);
  for (int p = 0; p < n; ++p) {
    const auto& decls = trace.vars[p];
    impl->values[p].resize(decls.size());
    for (std::size_t s = 0; s < decls.size(); ++s) {
      auto& hist = impl->values[p][s];
      hist.push_back(decls[s].initial);
      for (int k = 1; k <= sizes[p]; ++k) {
        Value v = hist.back();
        for (const auto& [name, val] : trace.events[p][k - 1].assignments)
          if (name == decls[s].name) v = val;
        hist.push_back(std::move(v));
      }
      if (decls[s].mono == Monotonicity::None) continue;
      int first = impl->init[p] ? 1 : 0;
      for (int k = first; k <= sizes[p]; ++k) {
        const auto* cur = std::get_if<std::int64_t>(&hist[k]);
        if (!cur) throw ModelError("monotonic variable " + decls[s].name + " holds a string at p" + std::to_string(p + 1) + " event " + std::to_string(k));
        if (k == first) continue;
        std::int64_t prev = std::get<std::int64_t>(hist[k - 1]);
        bool ok = decls[s].mono == Monotonicity::NonDecreasing ? *cur >= prev : *cur <= prev;
        if (!ok) throw ModelError("monotonicity violated at p" + std::to_string(p + 1) + " event " + std::to_string(k));
      }
    }
  }

  impl->sent.assign(n, std::vector<std::vector<int>>(n));
  impl->received.assign(n, std::vector<std::vector<int>>(n));
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      impl->sent[p][q].assign(sizes[p] + 1, 0);
      impl->received[p][q].assign(sizes[p] + 1, 0);
    }
  for (const auto& m : trace.messages) {
    ++impl->sent[m.send.process][m.recv.process][m.send.index];
    ++impl->received[m.recv.process][m.send.process][m.recv.index];
  }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int k = 1; k <= sizes[p]; ++k) {
        impl->sent[p][q][k] += impl->sent[p][q][k - 1];
        impl->received[p][q][k] += impl->received[p][q][k - 1];
      }

  impl->checkpoints.assign(n, {});
  for (const auto& c : trace.checkpoints) {
    if (!real(c)) throw ModelError("checkpoint on missing event " + to_string(c));
    impl->checkpoints[c.process].push_back(c.index);
  }
  for (auto& c : impl->checkpoints) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
  impl->layout = std::move(layout);
  impl->trace = std::move(trace);
  impl_ = std::move(impl);
}

std::optional<int> Computation::var_slot(int p, std::string_view name) const {
  const auto& d = impl_->trace.vars[p];
  for (std::size_t s = 0; s < d.size(); ++s)
    if (d[s].name == name) return static_cast<int>(s);
  return std::nullopt;
}

int Computation::nth_send(int p, int q, int x) const {
  const auto& s = impl_->sent[p][q];
  auto it = std::lower_bound(s.begin(), s.end(), x);
  return it == s.end() || x <= 0 ? 0 : static_cast<int>(it - s.begin());
}

int Computation::nth_receive(int p, int q, int x) const {
  const auto& r = impl_->received[p][q];
  auto it = std::lower_bound(r.begin(), r.end(), x);
  return it == r.end() || x <= 0 ? 0 : static_cast<int>(it - r.begin());
}

bool Computation::is_checkpoint(const EventId& e) const {
  const auto& c = impl_->checkpoints[e.process];
  return std::binary_search(c.begin(), c.end(), e.index);
}

Computation load_trace(std::string_view text) { return Computation(parse_trace(text)); }

bool is_consistent(const EventGraph& g, std::span<const int> counts) { return g.is_consistent(counts); }

bool is_consistent(const Computation& comp, std::span<const int> counts) { return comp.graph().is_consistent(counts); }

std::vector<EventId> frontier(std::span<const int> counts) {
  std::vector<EventId> out;
  for (std::size_t p = 0; p < counts.size(); ++p) out.push_back({static_cast<int>(p), counts[p]});
  return out;
}

std::map<EventId, std::vector<int>> vector_timestamps(const Computation& comp) {
  std::map<EventId, std::vector<int>> ts;
  const auto& l = comp.layout();
  for (int p = 0; p < comp.process_count(); ++p)
    for (int k = 1; k <= comp.events(p); ++k) {
      auto d = comp.happened_before().down(l.vertex(p, k));
      ts[{p, k}] = std::vector<int>(d.begin(), d.end());
    }
  return ts;
}

}  // namespace slicing
