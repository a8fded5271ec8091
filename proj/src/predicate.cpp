#include "slicing/predicate.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "slicing/errors.hpp"

namespace slicing {

std::string_view to_string(Relop op) {
  switch (op) {
    case Relop::Lt: return "<";
    case Relop::Le: return "<=";
    case Relop::Gt: return ">";
    case Relop::Ge: return ">=";
    case Relop::Eq: return "=";
    case Relop::Ne: return "!=";
  }
  return "?";
}

Relop negate(Relop op) {
  switch (op) {
    case Relop::Lt: return Relop::Ge;
    case Relop::Le: return Relop::Gt;
    case Relop::Gt: return Relop::Le;
    case Relop::Ge: return Relop::Lt;
    case Relop::Eq: return Relop::Ne;
    case Relop::Ne: return Relop::Eq;
  }
  return op;
}

std::string_view to_string(AtomKind k) {
  switch (k) {
    case AtomKind::Local: return "local";
    case AtomKind::Cross: return "cross-comparison";
    case AtomKind::ChannelAtMost: return "channel-atmost";
    case AtomKind::ChannelAtLeast: return "channel-atleast";
    case AtomKind::ChannelExact: return "channel-exact";
    case AtomKind::MonotoneRelop: return "monotone-relop";
    case AtomKind::Linear: return "linear-sum";
    case AtomKind::PostLinear: return "post-linear-sum";
  }
  return "?";
}

std::string_view to_string(ClassTag t) {
  switch (t) {
    case ClassTag::Local: return "local";
    case ClassTag::Conjunctive: return "conjunctive";
    case ClassTag::Regular: return "regular";
    case ClassTag::Linear: return "linear";
    case ClassTag::PostLinear: return "post-linear";
    case ClassTag::CoRegular: return "co-regular";
    case ClassTag::KLocal: return "k-local";
    case ClassTag::General: return "general";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Atom structure

namespace {

using TermKey = std::tuple<int, Quantity, int, int>;

std::map<TermKey, std::pair<std::int64_t, int>> merged_terms(const Atom& a) {
  std::map<TermKey, std::pair<std::int64_t, int>> m;
  for (const auto& t : a.lhs.terms) {
    auto& e = m[{t.process, t.kind, t.slot, t.peer}];
    e.first += t.coef;
    e.second = t.growth;
  }
  for (const auto& t : a.rhs.terms) {
    auto& e = m[{t.process, t.kind, t.slot, t.peer}];
    e.first -= t.coef;
    e.second = t.growth;
  }
  std::erase_if(m, [](const auto& kv) { return kv.second.first == 0; });
  return m;
}

int sign(std::int64_t x) { return (x > 0) - (x < 0); }

bool may_be_string(const Expr& e) {
  if (e.text) return true;
  return e.plain_variable() && e.terms[0].growth == 0;
}

}  // namespace

std::vector<int> support(const Atom& a) {
  std::set<int> s;
  for (const auto& t : a.lhs.terms) s.insert(t.process);
  for (const auto& t : a.rhs.terms) s.insert(t.process);
  return {s.begin(), s.end()};
}

std::vector<Growth> growth(const Atom& a) {
  std::map<int, int> g;
  for (const auto& [key, cg] : merged_terms(a)) {
    int p = std::get<0>(key);
    int s = sign(cg.first) * cg.second;
    auto it = g.find(p);
    if (it == g.end()) g[p] = s;
    else if (it->second != s) it->second = 0;
  }
  std::vector<Growth> out;
  for (auto [p, s] : g) out.push_back({p, s});
  return out;
}

std::optional<ChannelBound> channel_bound(const Atom& a) {
  if (a.lhs.text || a.rhs.text || a.op == Relop::Ne) return std::nullopt;
  auto m = merged_terms(a);
  if (m.size() != 2) return std::nullopt;
  const std::pair<const TermKey, std::pair<std::int64_t, int>>* s = nullptr;
  const std::pair<const TermKey, std::pair<std::int64_t, int>>* r = nullptr;
  for (const auto& kv : m) {
    if (std::get<1>(kv.first) == Quantity::Sent) s = &kv;
    if (std::get<1>(kv.first) == Quantity::Received) r = &kv;
  }
  if (!s || !r) return std::nullopt;
  int from = std::get<0>(s->first), to = std::get<3>(s->first);
  if (std::get<0>(r->first) != to || std::get<3>(r->first) != from) return std::nullopt;
  std::int64_t c = s->second.first;
  if ((c != 1 && c != -1) || r->second.first != -c) return std::nullopt;
  std::int64_t k = a.rhs.constant - a.lhs.constant;
  Relop op = a.op;
  if (c == -1) {
    k = -k;
    op = op == Relop::Lt ? Relop::Gt : op == Relop::Le ? Relop::Ge : op == Relop::Gt ? Relop::Lt : op == Relop::Ge ? Relop::Le : op;
  }
  if (op == Relop::Lt) k -= 1;
  if (op == Relop::Gt) k += 1;
  return ChannelBound{from, to, k};
}

namespace {

// Relop of the channel bound in intransit(from,to) orientation.
std::optional<Relop> channel_relop(const Atom& a) {
  auto m = merged_terms(a);
  for (const auto& [key, cg] : m)
    if (std::get<1>(key) == Quantity::Sent) {
      if (cg.first > 0 || a.op == Relop::Eq) return a.op;
      return a.op == Relop::Lt ? Relop::Gt : a.op == Relop::Le ? Relop::Ge : a.op == Relop::Gt ? Relop::Lt : Relop::Le;
    }
  return std::nullopt;
}

}  // namespace

AtomKind kind(const Atom& a) {
  auto sup = support(a);
  if (sup.size() <= 1) return AtomKind::Local;
  if (a.lhs.text || a.rhs.text || a.op == Relop::Ne) return AtomKind::Cross;
  if (channel_bound(a)) {
    Relop op = *channel_relop(a);
    if (op == Relop::Eq) return AtomKind::ChannelExact;
    return (op == Relop::Lt || op == Relop::Le) ? AtomKind::ChannelAtMost : AtomKind::ChannelAtLeast;
  }
  auto g = growth(a);
  if (g.size() < 2) return AtomKind::Cross;
  for (auto& x : g) {
    if (x.sign == 0) return AtomKind::Cross;
    if (a.op == Relop::Ge || a.op == Relop::Gt) x.sign = -x.sign;
  }
  if (g.size() == 2 && g[0].sign != g[1].sign) return AtomKind::MonotoneRelop;
  if (a.op == Relop::Eq) return AtomKind::Cross;
  bool up = std::all_of(g.begin(), g.end(), [](const Growth& x) { return x.sign > 0; });
  bool dn = std::all_of(g.begin(), g.end(), [](const Growth& x) { return x.sign < 0; });
  if (up) return AtomKind::Linear;
  if (dn) return AtomKind::PostLinear;
  return AtomKind::Cross;
}

// ---------------------------------------------------------------------------
// Tree

struct Predicate::Node {
  Kind kind;
  bool value = true;
  Atom atom;
  std::vector<Predicate> children;
};

Predicate Predicate::constant(bool value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->value = value;
  return Predicate(std::move(n));
}

Predicate Predicate::atom(Atom a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->atom = std::move(a);
  return Predicate(std::move(n));
}

Predicate Predicate::all(std::vector<Predicate> children) {
  if (children.size() == 1) return children[0];
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  n->children = std::move(children);
  return Predicate(std::move(n));
}

Predicate Predicate::any(std::vector<Predicate> children) {
  if (children.size() == 1) return children[0];
  auto n = std::make_shared<Node>();
  n->kind = Kind::Or;
  n->children = std::move(children);
  return Predicate(std::move(n));
}

Predicate Predicate::negation(Predicate child) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->children.push_back(std::move(child));
  return Predicate(std::move(n));
}

Predicate::Kind Predicate::kind() const { return node_->kind; }
bool Predicate::value() const { return node_->value; }
const Atom& Predicate::atom() const { return node_->atom; }
const std::vector<Predicate>& Predicate::children() const { return node_->children; }

namespace {

std::string term_text(const Term& t) {
  switch (t.kind) {
    case Quantity::Variable: return "p" + std::to_string(t.process + 1) + "." + t.name;
    case Quantity::Sent: return "sent(" + std::to_string(t.process + 1) + "," + std::to_string(t.peer + 1) + ")";
    case Quantity::Received: return "received(" + std::to_string(t.process + 1) + "," + std::to_string(t.peer + 1) + ")";
  }
  return "?";
}

std::string expr_text(const Expr& e) {
  if (e.text) return to_string(Value{*e.text});
  std::string out;
  for (const auto& t : e.terms) {
    std::int64_t c = t.coef;
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    std::int64_t a = c < 0 ? -c : c;
    if (a != 1) out += std::to_string(a) + "*";
    out += term_text(t);
  }
  if (out.empty()) return std::to_string(e.constant);
  if (e.constant > 0) out += " + " + std::to_string(e.constant);
  if (e.constant < 0) out += " - " + std::to_string(-e.constant);
  return out;
}

}  // namespace

std::string Predicate::to_string() const {
  switch (kind()) {
    case Kind::Constant: return value() ? "true" : "false";
    case Kind::Atom: {
      const Atom& a = atom();
      return expr_text(a.lhs) + " " + std::string(slicing::to_string(a.op)) + " " + expr_text(a.rhs);
    }
    case Kind::Not: return "!(" + children()[0].to_string() + ")";
    case Kind::And:
    case Kind::Or: {
      std::string out = "(";
      for (std::size_t i = 0; i < children().size(); ++i) {
        if (i) out += kind() == Kind::And ? " && " : " || ";
        out += children()[i].to_string();
      }
      return out + ")";
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { Ident, Int, String, Op, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({Tok::Ident, std::string(s.substr(start, i - start)), start});
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      out.push_back({Tok::Int, std::string(s.substr(start, i - start)), start});
    } else if (c == '"') {
      std::string text;
      ++i;
      for (;;) {
        if (i >= s.size()) throw ParseError(0, "unterminated string at column " + std::to_string(start + 1));
        char d = s[i++];
        if (d == '\\' && i < s.size()) {
          text += s[i++];
          continue;
        }
        if (d == '"') break;
        text += d;
      }
      out.push_back({Tok::String, text, start});
    } else {
      static const char* ops[] = {"&&", "||", "<=", ">=", "==", "!=", "<", ">", "=", "!", "(", ")", ",", "+", "-", "*", "."};
      bool found = false;
      for (const char* op : ops) {
        std::string_view o(op);
        if (s.substr(i, o.size()) == o) {
          out.push_back({Tok::Op, std::string(o), start});
          i += o.size();
          found = true;
          break;
        }
      }
      if (!found) throw ParseError(0, std::string("unexpected character '") + c + "' at column " + std::to_string(i + 1));
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, const Computation& comp) : toks_(lex(text)), comp_(comp) {}

  Predicate run() {
    Predicate p = parse_or();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return p;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  bool is_op(std::string_view o, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Op && peek(ahead).text == o;
  }
  bool accept(std::string_view o) {
    if (!is_op(o)) return false;
    ++pos_;
    return true;
  }
  void expect(std::string_view o) {
    if (!accept(o)) fail("expected '" + std::string(o) + "'");
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(0, what + " at column " + std::to_string(peek().pos + 1));
  }

  Predicate parse_or() {
    std::vector<Predicate> c{parse_and()};
    while (accept("||")) c.push_back(parse_and());
    return Predicate::any(std::move(c));
  }

  Predicate parse_and() {
    std::vector<Predicate> c{parse_unary()};
    while (accept("&&")) c.push_back(parse_unary());
    return Predicate::all(std::move(c));
  }

  std::optional<Relop> relop() {
    static const std::pair<const char*, Relop> table[] = {{"<=", Relop::Le}, {">=", Relop::Ge}, {"==", Relop::Eq},
                                                          {"!=", Relop::Ne}, {"<", Relop::Lt},  {">", Relop::Gt},
                                                          {"=", Relop::Eq}};
    for (auto [t, op] : table)
      if (accept(t)) return op;
    return std::nullopt;
  }

  Predicate parse_unary() {
    if (accept("!")) return Predicate::negation(parse_unary());
    if (peek().kind == Tok::Ident && (peek().text == "true" || peek().text == "false") && !is_op(".", 1)) {
      bool v = peek().text == "true";
      ++pos_;
      return Predicate::constant(v);
    }
    std::size_t save = pos_;
    std::optional<ParseError> arith_error;
    try {
      Expr lhs = parse_sum();
      if (auto op = relop()) {
        Expr rhs = parse_sum();
        return Predicate::atom(Atom{std::move(lhs), *op, std::move(rhs)});
      }
      if (lhs.plain_variable()) return Predicate::atom(Atom{std::move(lhs), Relop::Ne, Expr{}});
      arith_error = ParseError(0, "expected comparison at column " + std::to_string(peek().pos + 1));
    } catch (const ParseError& e) {
      arith_error = e;
    }
    pos_ = save;
    if (accept("(")) {
      Predicate p = parse_or();
      expect(")");
      return p;
    }
    throw *arith_error;
  }

  Expr parse_sum() {
    Expr e = parse_product();
    for (;;) {
      if (accept("+")) e = combine(std::move(e), parse_product(), 1);
      else if (accept("-")) e = combine(std::move(e), parse_product(), -1);
      else return e;
    }
  }

  Expr combine(Expr a, Expr b, std::int64_t s) {
    if (a.text || b.text) fail("string in arithmetic");
    for (auto& t : b.terms) {
      t.coef *= s;
      a.terms.push_back(std::move(t));
    }
    a.constant += s * b.constant;
    return a;
  }

  Expr parse_product() {
    Expr e = parse_factor();
    while (accept("*")) {
      Expr f = parse_factor();
      if (e.text || f.text) fail("string in arithmetic");
      if (!e.terms.empty() && !f.terms.empty()) fail("non-linear product");
      if (e.terms.empty()) std::swap(e, f);
      for (auto& t : e.terms) t.coef *= f.constant;
      e.constant *= f.constant;
    }
    return e;
  }

  int process_number(const Token& t) {
    int p = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), p);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size() || p < 1 || p > comp_.process_count())
      fail("unknown process " + t.text);
    return p - 1;
  }

  std::pair<int, int> process_pair() {
    expect("(");
    if (peek().kind != Tok::Int) fail("expected process number");
    int a = process_number(toks_[pos_++]);
    expect(",");
    if (peek().kind != Tok::Int) fail("expected process number");
    int b = process_number(toks_[pos_++]);
    expect(")");
    if (a == b) fail("channel needs two distinct processes");
    return {a, b};
  }

  Expr parse_factor() {
    const Token& t = peek();
    if (accept("-")) {
      Expr e = parse_factor();
      if (e.text) fail("string in arithmetic");
      for (auto& term : e.terms) term.coef = -term.coef;
      e.constant = -e.constant;
      return e;
    }
    if (accept("(")) {
      Expr e = parse_sum();
      expect(")");
      return e;
    }
    if (t.kind == Tok::Int) {
      Expr e;
      auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), e.constant);
      if (ec != std::errc()) fail("integer out of range");
      ++pos_;
      return e;
    }
    if (t.kind == Tok::String) {
      Expr e;
      e.text = t.text;
      ++pos_;
      return e;
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "intransit" || t.text == "sent" || t.text == "received") {
        std::string fn = t.text;
        ++pos_;
        auto [a, b] = process_pair();
        Expr e;
        if (fn == "intransit" || fn == "sent") e.terms.push_back({1, a, Quantity::Sent, -1, b, 1, ""});
        if (fn == "intransit") e.terms.push_back({-1, b, Quantity::Received, -1, a, 1, ""});
        if (fn == "received") e.terms.push_back({1, a, Quantity::Received, -1, b, 1, ""});
        return e;
      }
      if (t.text.size() >= 2 && t.text[0] == 'p' && is_op(".", 1)) {
        Token num{Tok::Int, t.text.substr(1), t.pos};
        int p = process_number(num);
        pos_ += 2;
        if (peek().kind != Tok::Ident) fail("expected variable name");
        std::string name = peek().text;
        ++pos_;
        auto slot = comp_.var_slot(p, name);
        if (!slot) fail("unknown variable p" + std::to_string(p + 1) + "." + name);
        Monotonicity m = comp_.vars(p)[*slot].mono;
        int g = m == Monotonicity::NonDecreasing ? 1 : m == Monotonicity::NonIncreasing ? -1 : 0;
        Expr e;
        e.terms.push_back({1, p, Quantity::Variable, *slot, -1, g, name});
        return e;
      }
      fail("unknown identifier '" + t.text + "'");
    }
    fail("unexpected '" + t.text + "'");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Computation& comp_;
};

}  // namespace

Predicate parse_predicate(std::string_view text, const Computation& comp) {
  return Parser(text, comp).run();
}

std::vector<int> support(const Predicate& b) {
  std::set<int> s;
  auto walk = [&](auto&& self, const Predicate& x) -> void {
    if (x.kind() == Predicate::Kind::Atom) {
      for (int p : support(x.atom())) s.insert(p);
      return;
    }
    for (const auto& c : x.children()) self(self, c);
  };
  walk(walk, b);
  return {s.begin(), s.end()};
}

Predicate push_negation(const Predicate& b) {
  if (b.kind() != Predicate::Kind::Not) return b;
  const Predicate& c = b.children()[0];
  switch (c.kind()) {
    case Predicate::Kind::Constant: return Predicate::constant(!c.value());
    case Predicate::Kind::Not: return c.children()[0];
    case Predicate::Kind::Atom: {
      const Atom& a = c.atom();
      bool exact = a.op == Relop::Eq || a.op == Relop::Ne || (!may_be_string(a.lhs) && !may_be_string(a.rhs));
      if (!exact) return b;
      Atom flipped = a;
      flipped.op = negate(a.op);
      return Predicate::atom(std::move(flipped));
    }
    case Predicate::Kind::And:
    case Predicate::Kind::Or: {
      std::vector<Predicate> out;
      for (const auto& x : c.children()) out.push_back(Predicate::negation(x));
      return c.kind() == Predicate::Kind::And ? Predicate::any(std::move(out)) : Predicate::all(std::move(out));
    }
  }
  return b;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

std::int64_t quantity(const Term& t, const Computation& comp, std::span<const int> counts) {
  int k = counts[t.process];
  switch (t.kind) {
    case Quantity::Variable: {
      const Value& v = comp.value(t.process, t.slot, k);
      if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
      throw EvalError("string variable p" + std::to_string(t.process + 1) + "." + t.name + " used in arithmetic");
    }
    case Quantity::Sent: return comp.sent(t.process, t.peer, k);
    case Quantity::Received: return comp.received(t.process, t.peer, k);
  }
  return 0;
}

std::int64_t numeric(const Expr& e, const Computation& comp, std::span<const int> counts) {
  std::int64_t s = e.constant;
  for (const auto& t : e.terms) s += t.coef * quantity(t, comp, counts);
  return s;
}

Value operand(const Expr& e, const Computation& comp, std::span<const int> counts) {
  if (e.text) return *e.text;
  if (e.plain_variable()) return comp.value(e.terms[0].process, e.terms[0].slot, counts[e.terms[0].process]);
  return numeric(e, comp, counts);
}

template <class T>
bool compare(const T& a, const T& b, Relop op) {
  switch (op) {
    case Relop::Lt: return a < b;
    case Relop::Le: return a <= b;
    case Relop::Gt: return a > b;
    case Relop::Ge: return a >= b;
    case Relop::Eq: return a == b;
    case Relop::Ne: return a != b;
  }
  return false;
}

bool eval_atom(const Atom& a, const Computation& comp, std::span<const int> counts) {
  Value l = operand(a.lhs, comp, counts);
  Value r = operand(a.rhs, comp, counts);
  if (l.index() != r.index()) return a.op == Relop::Ne;
  if (l.index() == 0) return compare(std::get<0>(l), std::get<0>(r), a.op);
  return compare(std::get<1>(l), std::get<1>(r), a.op);
}

bool eval_node(const Predicate& b, const Computation& comp, std::span<const int> counts) {
  switch (b.kind()) {
    case Predicate::Kind::Constant: return b.value();
    case Predicate::Kind::Atom: return eval_atom(b.atom(), comp, counts);
    case Predicate::Kind::Not: return !eval_node(b.children()[0], comp, counts);
    case Predicate::Kind::And:
      for (const auto& c : b.children())
        if (!eval_node(c, comp, counts)) return false;
      return true;
    case Predicate::Kind::Or:
      for (const auto& c : b.children())
        if (eval_node(c, comp, counts)) return true;
      return false;
  }
  return false;
}

}  // namespace

bool eval(const Predicate& b, const Computation& comp, std::span<const int> counts) {
  if (!comp.layout().in_range(counts)) throw EvalError("predicate evaluated outside the nontrivial cuts");
  return eval_node(b, comp, counts);
}

// ---------------------------------------------------------------------------
// Classification

namespace {

struct Flags {
  bool local = false, conjunctive = false, regular = false, linear = false, postlinear = false;
};

Flags flags(const Predicate& b) {
  Flags f;
  switch (b.kind()) {
    case Predicate::Kind::Constant:
      return {true, true, true, true, true};
    case Predicate::Kind::Atom: {
      switch (kind(b.atom())) {
        case AtomKind::Local: return {true, true, true, true, true};
        case AtomKind::ChannelAtMost:
        case AtomKind::ChannelAtLeast:
        case AtomKind::ChannelExact:
        case AtomKind::MonotoneRelop: return {false, false, true, true, true};
        case AtomKind::Linear: return {false, false, false, true, false};
        case AtomKind::PostLinear: return {false, false, false, false, true};
        case AtomKind::Cross: return {};
      }
      return f;
    }
    case Predicate::Kind::And: {
      f = {true, true, true, true, true};
      for (const auto& c : b.children()) {
        Flags g = flags(c);
        f.local &= g.local;
        f.conjunctive &= g.conjunctive;
        f.regular &= g.regular;
        f.linear &= g.linear;
        f.postlinear &= g.postlinear;
      }
      if (support(b).size() > 1) f.local = false;
      return f;
    }
    case Predicate::Kind::Or: {
      bool all_local = true;
      for (const auto& c : b.children()) all_local &= flags(c).local;
      if (all_local && support(b).size() <= 1) return {true, true, true, true, true};
      return {};
    }
    case Predicate::Kind::Not: {
      Predicate pushed = push_negation(b);
      if (pushed.kind() != Predicate::Kind::Not) return flags(pushed);
      if (support(b).size() <= 1) return {true, true, true, true, true};
      return {};
    }
  }
  return f;
}

}  // namespace

PredicateClass classify(const Predicate& b, int k_cap) {
  PredicateClass c;
  Flags f = flags(b);
  c.support = support(b);
  c.k = static_cast<int>(c.support.size());
  c.local = f.local;
  c.conjunctive = f.conjunctive;
  c.regular = f.regular;
  c.linear = f.linear;
  c.postlinear = f.postlinear;
  if (f.local) c.tag = ClassTag::Local;
  else if (f.conjunctive) c.tag = ClassTag::Conjunctive;
  else if (f.regular) c.tag = ClassTag::Regular;
  else if (f.linear) c.tag = ClassTag::Linear;
  else if (f.postlinear) c.tag = ClassTag::PostLinear;
  else if (b.kind() == Predicate::Kind::Not && flags(b.children()[0]).regular) c.tag = ClassTag::CoRegular;
  else if (c.k <= k_cap) c.tag = ClassTag::KLocal;
  else c.tag = ClassTag::General;
  return c;
}

// ---------------------------------------------------------------------------
// Forbidden events

namespace {

int atom_forbidden(const Atom& a, const Computation& comp, std::span<const int> counts, Direction dir) {
  auto sup = support(a);
  if (sup.size() <= 1) return sup.empty() ? kAnyProcess : sup[0];
  auto g = growth(a);
  bool flip = a.op == Relop::Ge || a.op == Relop::Gt;
  if (a.op == Relop::Eq) flip = numeric(a.lhs, comp, counts) < numeric(a.rhs, comp, counts);
  // In "lhs - rhs <= c" form, advancing a process with sign -1 helps, and
  // retreating one with sign +1 helps.
  int want = dir == Direction::Advance ? -1 : 1;
  for (const auto& x : g)
    if ((flip ? -x.sign : x.sign) == want) return x.process;
  return kAnyProcess;
}

int node_forbidden(const Predicate& b, const Computation& comp, std::span<const int> counts, Direction dir) {
  switch (b.kind()) {
    case Predicate::Kind::Constant: return kAnyProcess;
    case Predicate::Kind::Atom: return atom_forbidden(b.atom(), comp, counts, dir);
    case Predicate::Kind::And: {
      int best = kAnyProcess;
      for (const auto& c : b.children()) {
        if (eval_node(c, comp, counts)) continue;
        int r = node_forbidden(c, comp, counts, dir);
        if (r != kAnyProcess && (best == kAnyProcess || r < best)) best = r;
      }
      return best;
    }
    case Predicate::Kind::Or:
    case Predicate::Kind::Not: {
      if (b.kind() == Predicate::Kind::Not) {
        Predicate pushed = push_negation(b);
        if (pushed.kind() != Predicate::Kind::Not) return node_forbidden(pushed, comp, counts, dir);
      }
      auto sup = support(b);
      if (sup.size() > 1) throw ClassError("forbidden event requested for a non-local disjunction");
      return sup.empty() ? kAnyProcess : sup[0];
    }
  }
  return kAnyProcess;
}

}  // namespace

int forbidden_process(const Predicate& b, const Computation& comp, std::span<const int> counts, Direction dir) {
  Flags f = flags(b);
  if (dir == Direction::Advance ? !f.linear : !f.postlinear)
    throw ClassError(dir == Direction::Advance ? "predicate is not linear" : "predicate is not post-linear");
  if (eval(b, comp, counts)) throw Error("cut satisfies the predicate; nothing is forbidden");
  return node_forbidden(b, comp, counts, dir);
}

EventId forbidden_event(const Predicate& b, const Computation& comp, std::span<const int> counts) {
  int p = forbidden_process(b, comp, counts, Direction::Advance);
  if (p == kAnyProcess) {
    auto sup = support(b);
    p = sup.empty() ? 0 : sup[0];
  }
  return {p, counts[p]};
}

}  // namespace slicing
