#pragma once

#include <optional>
#include <vector>

#include "emach/machine.hpp"

namespace emach {

inline constexpr double kIsomorphismTolerance = 1e-9;

struct Isomorphism {
    /// State i of the first machine corresponds to mapping[i] of the second.
    std::vector<StateIndex> mapping;
};

/// Decides whether two unifilar, irreducible machines are the same up to a
/// relabeling of states. Symbols are matched by name. State 0 of a is
/// anchored against each state of b in ascending order and the map is
/// propagated along the transition function; the first anchor that closes
/// into a consistent bijection wins. A transition present in only one machine
/// is tolerated when its probability is within tolerance of zero. Throws
/// NotUnifilar or NotIrreducible.
std::optional<Isomorphism> are_isomorphic(const Machine& a, const Machine& b,
                                          double tolerance = kIsomorphismTolerance);

}  // namespace emach
