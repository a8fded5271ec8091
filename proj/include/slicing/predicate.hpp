#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slicing/computation.hpp"

namespace slicing {

enum class Relop { Lt, Le, Gt, Ge, Eq, Ne };

std::string_view to_string(Relop op);
Relop negate(Relop op);

enum class Quantity { Variable, Sent, Received };

// coef * quantity, where quantity lives on `process`.
struct Term {
  std::int64_t coef = 1;
  int process = 0;
  Quantity kind = Quantity::Variable;
  int slot = -1;   // variable slot on process
  int peer = -1;   // channel counterpart for Sent/Received
  int growth = 0;  // +1 grows with the cut, -1 shrinks, 0 unknown
  std::string name;
};

struct Expr {
  std::vector<Term> terms;
  std::int64_t constant = 0;
  std::optional<std::string> text;  // string literal

  // A lone variable, compared by value rather than arithmetically.
  bool plain_variable() const {
    return !text && constant == 0 && terms.size() == 1 && terms[0].coef == 1 && terms[0].kind == Quantity::Variable;
  }
};

enum class AtomKind {
  Local,
  Cross,           // spans processes, no monotone structure
  ChannelAtMost,   // intransit(i,j) <= k
  ChannelAtLeast,  // intransit(i,j) >= k
  ChannelExact,
  MonotoneRelop,   // two opposite-growth sides: regular
  Linear,          // every side grows the left-hand side
  PostLinear,
};

std::string_view to_string(AtomKind k);

struct Atom {
  Expr lhs;
  Relop op = Relop::Eq;
  Expr rhs;
};

// Per-process growth of lhs - rhs; sign 0 when the process's terms are not
// jointly monotone.
struct Growth {
  int process;
  int sign;
};

std::vector<int> support(const Atom& a);
std::vector<Growth> growth(const Atom& a);
AtomKind kind(const Atom& a);
// Channel atoms: sender, receiver, and the bound k with <, > folded in.
struct ChannelBound {
  int from, to;
  std::int64_t k;
};
std::optional<ChannelBound> channel_bound(const Atom& a);

class Predicate {
 public:
  enum class Kind { Constant, Atom, And, Or, Not };

  Predicate() : Predicate(constant(true)) {}
  static Predicate constant(bool value);
  static Predicate atom(Atom a);
  static Predicate all(std::vector<Predicate> children);
  static Predicate any(std::vector<Predicate> children);
  static Predicate negation(Predicate child);

  Kind kind() const;
  bool value() const;
  const Atom& atom() const;
  const std::vector<Predicate>& children() const;

  std::string to_string() const;

 private:
  struct Node;
  explicit Predicate(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Variables and processes are resolved against comp.
Predicate parse_predicate(std::string_view text, const Computation& comp);

std::vector<int> support(const Predicate& b);

// Negation pushed one level: atoms flip their relop where that is exact,
// connectives swap by De Morgan.
Predicate push_negation(const Predicate& b);

// Counts must be in range (no top events); trivial cuts are rejected.
bool eval(const Predicate& b, const Computation& comp, std::span<const int> counts);

enum class ClassTag { Local, Conjunctive, Regular, Linear, PostLinear, CoRegular, KLocal, General };

std::string_view to_string(ClassTag t);

struct PredicateClass {
  ClassTag tag = ClassTag::General;
  int k = 0;  // support size
  std::vector<int> support;
  bool local = false;
  bool conjunctive = false;
  bool regular = false;
  bool linear = false;
  bool postlinear = false;
};

constexpr int kDefaultLocalityCap = 3;

PredicateClass classify(const Predicate& b, int k_cap = kDefaultLocalityCap);

enum class Direction { Advance, Retreat };

constexpr int kAnyProcess = -1;

// For a linear b (Advance) or post-linear b (Retreat) that fails at counts:
// the process whose frontier event must be passed (Advance) or undone
// (Retreat) by every satisfying cut beyond counts. kAnyProcess when no
// satisfying cut exists in that direction at all.
int forbidden_process(const Predicate& b, const Computation& comp, std::span<const int> counts,
                      Direction dir = Direction::Advance);

// Frontier event form of the above; vacuous cases resolve to the lowest
// supporting process.
EventId forbidden_event(const Predicate& b, const Computation& comp, std::span<const int> counts);

}  // namespace slicing
