#pragma once

#include <vector>

#include "emach/axioms.hpp"
#include "emach/machine.hpp"

namespace emach {

struct QuotientMap {
    Machine source;
    StatePartition partition;
    Machine target;
    /// Source state -> target state.
    std::vector<StateIndex> class_of;
};

/// Merges the blocks of the distinctness partition. Each block takes the edge
/// probabilities of its lowest-index member; blocks are numbered by their
/// lowest member. Throws NotUnifilar, NotIrreducible, or InconsistentBlock
/// when block members disagree by more than the tolerance.
QuotientMap minimize_unifilar(const Machine& machine, double tolerance = kDistinctTolerance);

}  // namespace emach
