#pragma once

#include <vector>

#include "slicing/slicer_core.hpp"

namespace slicing {

// truth[p][k] for k = 0..m_p; top events count as true. The slice keeps a
// cut iff every frontier state is true.
using LocalTruth = std::vector<std::vector<char>>;

Slice slice_from_truth(const Computation& comp, const LocalTruth& truth);

Slice slice_conjunctive(const Computation& comp, const Predicate& b);

// Processes are 0-based. k below zero (at-most) gives the empty slice.
Slice slice_channel_atmost(const Computation& comp, int i, int j, int k);
Slice slice_channel_atleast(const Computation& comp, int i, int j, int k);

struct LocalConjunct {
  Predicate predicate;
  std::vector<int> processes;  // Q, 0-based
};

Slice slice_klocal_regular(const Computation& comp, const Predicate& b, const std::vector<int>& q);
Slice slice_decomposable(const Computation& comp, const std::vector<LocalConjunct>& conjuncts);

}  // namespace slicing
