#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <unordered_map>
#include <variant>
#include <vector>

#include "emach/machine.hpp"

namespace emach {

/// SplitMix64 finalizer. Used to derive engine seeds and per-chain
/// substreams.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of substream `stream` under a master seed.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// std::mt19937_64 seeded with splitmix64(seed). uniform() takes the top 53
/// bits, so it lies in [0, 1).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

struct StationaryStart {};
using Start = std::variant<StationaryStart, StateIndex, RowVector>;

struct SampleRun {
    Word symbols;
    /// symbols.size() + 1 entries; states[0] is the initial state.
    std::vector<StateIndex> states;
    std::uint64_t seed = 0;
    RowVector start;
};

/// Resolves a start specification to a distribution. Throws NotIrreducible
/// for a stationary start on a reducible machine, IndexError for a bad state
/// and DomainError for a malformed distribution.
RowVector start_distribution(const Machine& machine, const Start& start);

/// Weighted random walk. Edges are drawn by cumulative inversion over the
/// state's outgoing edges in machine edge order.
SampleRun sample_path(const Machine& machine, const Start& start, std::size_t length, std::uint64_t seed);

/// True when every (state, symbol, state) step of the run is a positive edge.
bool edge_consistent(const Machine& machine, const SampleRun& run);

/// Sliding-window word counts for every length 1..max_len.
class EmpiricalWordTable {
public:
    EmpiricalWordTable(std::span<const Symbol> symbols, std::size_t n_symbols, std::size_t max_len);

    std::size_t length() const noexcept { return length_; }
    std::size_t max_len() const noexcept { return max_len_; }
    std::size_t n_symbols() const noexcept { return n_symbols_; }

    std::uint64_t count(std::span<const Symbol> word) const;
    /// count / (length - |w| + 1).
    double frequency(std::span<const Symbol> word) const;

    /// Observed words of the given length with their counts, in
    /// lexicographic order.
    std::vector<std::pair<Word, std::uint64_t>> observed(std::size_t word_length) const;

private:
    std::size_t length_;
    std::size_t n_symbols_;
    std::size_t max_len_;
    std::vector<std::unordered_map<std::uint64_t, std::uint64_t>> counts_;
};

/// Throws DomainError when max_len exceeds the sample length.
EmpiricalWordTable empirical_word_probs(std::span<const Symbol> symbols, std::size_t n_symbols, std::size_t max_len);

}  // namespace emach
