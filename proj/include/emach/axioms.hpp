#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "emach/machine.hpp"

namespace emach {

inline constexpr double kDistinctTolerance = 1e-9;

struct IrreducibilityResult {
    bool irreducible = false;
    std::vector<std::vector<StateIndex>> components;
};

IrreducibilityResult is_irreducible(const Machine& machine);

struct UnifilarityResult {
    bool unifilar = false;
    /// (state, symbol) pairs with more than one outgoing edge.
    std::vector<std::pair<StateIndex, Symbol>> violations;
};

UnifilarityResult is_unifilar(const Machine& machine);

/// Disjoint blocks covering 0..n-1. Blocks are ordered by their lowest
/// member and each block is sorted.
class StatePartition {
public:
    explicit StatePartition(std::vector<std::vector<StateIndex>> blocks);

    std::size_t size() const noexcept { return blocks_.size(); }
    std::size_t n_states() const noexcept { return block_of_.size(); }
    const std::vector<std::vector<StateIndex>>& blocks() const noexcept { return blocks_; }
    const std::vector<StateIndex>& block(std::size_t b) const { return blocks_.at(b); }
    std::size_t block_of(StateIndex s) const { return block_of_.at(s); }
    bool all_singletons() const noexcept { return blocks_.size() == block_of_.size(); }

    bool operator==(const StatePartition& other) const { return blocks_ == other.blocks_; }

private:
    std::vector<std::vector<StateIndex>> blocks_;
    std::vector<std::size_t> block_of_;
};

/// Coarsest partition whose blocks agree on every word probability. Starts
/// from next-symbol probability vectors (entrywise within tolerance) and
/// refines by successor-block signatures to a fixpoint. Throws NotUnifilar.
StatePartition distinctness_partition(const Machine& machine, double tolerance = kDistinctTolerance);

/// One refinement pass sequence starting from an existing partition; the
/// result of distinctness_partition is a fixpoint of this.
StatePartition refine_partition(const Machine& machine, const StatePartition& start);

/// Shortest (then lexicographically least) word whose probabilities from i
/// and j differ by more than tolerance, as produced by the refinement
/// rounds. Nullopt when the states are not separated.
std::optional<Word> separating_word(const Machine& machine, StateIndex i, StateIndex j,
                                    double tolerance = kDistinctTolerance);

struct AxiomReport {
    bool irreducible = false;
    bool unifilar = false;
    /// Only decided for unifilar machines.
    std::optional<bool> probabilistically_distinct;

    std::vector<std::vector<StateIndex>> components;
    std::vector<std::pair<StateIndex, Symbol>> unifilar_violations;
    std::optional<std::pair<StateIndex, StateIndex>> indistinct_pair;

    bool is_generator() const noexcept {
        return irreducible && unifilar && probabilistically_distinct.value_or(false);
    }
};

AxiomReport is_generator_em(const Machine& machine, double tolerance = kDistinctTolerance);

/// Breadth-first search over the observer's consistent-state sets, starting
/// from the set of all states. Returns the shortest, lexicographically least
/// word that leaves a single consistent state; the empty word for one-state
/// machines. Throws NotUnifilar.
std::optional<Word> find_sync_word(const Machine& machine, std::size_t max_len);

}  // namespace emach
