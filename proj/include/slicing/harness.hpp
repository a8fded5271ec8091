#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "slicing/analysis.hpp"

namespace slicing {

enum class Protocol { PrimarySecondary, DbPartition, Random };

Protocol parse_protocol(std::string_view s);
std::string_view to_string(Protocol p);

struct SimConfig {
  Protocol protocol = Protocol::PrimarySecondary;
  int processes = 4;
  int max_events_per_process = 8;
  double delay_mean = 1.0;  // delays are 1 + Exp(mean)
  std::uint64_t seed = 1;
  bool inject_fault = false;
};

// Trace document text; identical configs give identical text.
std::string simulate(const SimConfig& cfg);
TraceData simulate_trace(const SimConfig& cfg);

// Negated protocol invariant over the computation's protocol variables.
Predicate builtin_fault_predicate(Protocol protocol, const Computation& comp);

struct BenchRow {
  Protocol protocol;
  int n;
  std::uint64_t seed;
  bool fault;
  std::string method;  // "slice" or "naive"
  std::string found;   // "true", "false", or "budget"
  std::size_t cuts_explored = 0;
  int scc = 0;
  double time_ms = 0;
  std::size_t peak_nodes = 0;
};

struct BenchConfig {
  Protocol protocol = Protocol::PrimarySecondary;
  int n_min = 4;
  int n_max = 7;
  int runs = 3;
  int events = 6;
  bool with_faults = false;
  std::size_t budget = 5'000'000;
};

std::vector<BenchRow> bench(const BenchConfig& cfg);
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace slicing
