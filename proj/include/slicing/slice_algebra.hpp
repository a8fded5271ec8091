#pragma once

#include <span>
#include <string>
#include <vector>

#include "slicing/slicer_core.hpp"

namespace slicing {

// Cuts common to all operands. At least one operand.
Slice compose_meet(std::span<const Slice> slices);
Slice compose_meet(const Slice& a, const Slice& b);

// Smallest sublattice containing every operand's cuts. No operands gives
// the empty slice.
Slice compose_join(const Computation& comp, std::span<const Slice> slices);
Slice compose_join(const Slice& a, const Slice& b);

// Slice for the negation of a regular predicate.
Slice slice_coregular(const Computation& comp, const Predicate& b);

// Exact slice of a predicate over at most `cap` processes, rewritten as a
// disjunction of conjunctive clauses over observed local states.
Slice slice_klocal_general(const Computation& comp, const Predicate& b, int cap = kDefaultLocalityCap);

// Parse-tree composition; the result contains every satisfying cut.
// `explain`, when given, receives one line per decision.
Slice approximate_slice(const Computation& comp, const Predicate& b, int cap = kDefaultLocalityCap,
                        std::vector<std::string>* explain = nullptr);

}  // namespace slicing
