#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "slicing/event_graph.hpp"

namespace slicing {

// Booleans are stored as 1/0.
using Value = std::variant<std::int64_t, std::string>;

std::string to_string(const Value& v);

enum class Monotonicity { None, NonDecreasing, NonIncreasing };

std::string_view to_string(Monotonicity m);

struct Message {
  EventId send;
  EventId recv;
};

struct VarDecl {
  std::string name;
  Monotonicity mono = Monotonicity::None;
  Value initial = std::int64_t{0};  // state before the first event
};

// Raw trace content, before validation.
struct TraceData {
  struct Event {
    bool init = false;
    std::vector<std::pair<std::string, Value>> assignments;
  };
  int process_count = 0;
  std::vector<std::vector<VarDecl>> vars;       // per process
  std::vector<std::vector<Event>> events;       // per process, index 1.. at [0]..
  std::vector<Message> messages;
  std::vector<EventId> checkpoints;
};

TraceData parse_trace(std::string_view text);
std::string write_trace(const TraceData& trace);

// Immutable, validated computation. Copies share state.
class Computation {
 public:
  Computation() = default;
  explicit Computation(TraceData trace);

  int process_count() const { return impl_->layout.process_count(); }
  int events(int p) const { return impl_->layout.events(p); }
  const Layout& layout() const { return impl_->layout; }
  // Process order, messages, and the edges merging init events into bottom.
  const EventGraph& graph() const { return impl_->graph; }
  // Process order and messages only (no init merging).
  const EventGraph& happened_before() const { return impl_->hb; }
  const std::vector<Message>& messages() const { return impl_->trace.messages; }
  const TraceData& trace() const { return impl_->trace; }
  bool is_init(int p) const { return impl_->init[p]; }

  const std::vector<VarDecl>& vars(int p) const { return impl_->trace.vars[p]; }
  std::optional<int> var_slot(int p, std::string_view name) const;
  // Value after the index-th event of p (index 0 = initial state).
  const Value& value(int p, int slot, int index) const {
    return impl_->values[p][slot][index];
  }

  // Messages p->q sent among p's first `count` events.
  int sent(int p, int q, int count) const { return impl_->sent[p][q][count]; }
  // Messages from q received among p's first `count` events.
  int received(int p, int q, int count) const { return impl_->received[p][q][count]; }
  // Index of the x-th send p->q (1-based x); 0 when absent.
  int nth_send(int p, int q, int x) const;
  int nth_receive(int p, int q, int x) const;

  // Checkpoint-flagged event indices per process, ascending.
  const std::vector<int>& checkpoints(int p) const { return impl_->checkpoints[p]; }
  bool is_checkpoint(const EventId& e) const;

  bool same_as(const Computation& o) const { return impl_ == o.impl_; }

 private:
  struct Impl {
    TraceData trace;
    Layout layout;
    EventGraph graph;
    EventGraph hb;
    std::vector<bool> init;
    std::vector<std::vector<std::vector<Value>>> values;
    std::vector<std::vector<std::vector<int>>> sent, received;
    std::vector<std::vector<int>> checkpoints;
  };
  std::shared_ptr<const Impl> impl_;
};

Computation load_trace(std::string_view text);

bool is_consistent(const EventGraph& g, std::span<const int> counts);
bool is_consistent(const Computation& comp, std::span<const int> counts);

std::vector<EventId> frontier(std::span<const int> counts);

// ts(e)[i] = index of the latest event of p_i with a path to e.
std::map<EventId, std::vector<int>> vector_timestamps(const Computation& comp);

}  // namespace slicing
