#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "emach/machine.hpp"

namespace emach {

/// Entries below this are zeroed after each update.
inline constexpr double kBeliefSnap = 1e-14;

/// normalize(phi T^(x)). Throws ImpossibleSymbol when phi cannot emit x.
RowVector belief_update(const Machine& machine, const RowVector& phi, Symbol x);

/// Folds belief_update over the word from the stationary distribution. Words
/// outside the process language yield the stationary distribution itself.
RowVector belief_of_word(const Machine& machine, std::span<const Symbol> word);

struct SyncQuantities {
    StateIndex best_state = 0;
    double p_best = 0.0;
    double doubt = 0.0;
};

/// Most likely state (lowest index on ties), its probability and the
/// remaining mass.
SyncQuantities sync_quantities(const RowVector& phi);

struct DecayOptions {
    std::size_t horizon = 64;
    std::size_t n_chains = 10000;
    std::uint64_t seed = 0;
    double alpha = 0.9;
};

struct DecayPoint {
    std::size_t t = 0;
    double mean_doubt = 0.0;
    /// Fraction of chains with Q_t > alpha^t.
    double frac_exceed = 0.0;
    /// Fraction of chains with Q_t > 0.
    double frac_unsynced = 0.0;
};

struct DecayEstimate {
    std::size_t horizon = 0;
    std::size_t n_chains = 0;
    double alpha = 0.0;
    /// t = 0 .. horizon.
    std::vector<DecayPoint> points;
    /// Least-squares slope of log E[Q_t] over t with E[Q_t] > 0; needs two
    /// such points.
    std::optional<double> decay_rate;
    std::optional<double> alpha_hat;
};

/// Monte Carlo doubt profile over stationary runs. Chain c uses substream c
/// of the seed; results do not depend on the thread count. Throws
/// NotGenerator unless the machine is a generator epsilon-machine.
DecayEstimate estimate_decay(const Machine& machine, const DecayOptions& options);

}  // namespace emach
