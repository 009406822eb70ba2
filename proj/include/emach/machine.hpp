#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "emach/errors.hpp"

namespace emach {

using Symbol = std::size_t;
using StateIndex = std::size_t;
using Word = std::vector<Symbol>;
using Matrix = Eigen::MatrixXd;
using RowVector = Eigen::RowVectorXd;

inline constexpr double kStochasticTolerance = 1e-9;
inline constexpr double kSolveTolerance = 1e-12;

/// Ordered set of output symbols. Symbols are referred to by index; names
/// are only used for text I/O.
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> names);

    std::size_t size() const noexcept { return names_.size(); }
    const std::string& name(Symbol x) const { return names_.at(x); }
    const std::vector<std::string>& names() const noexcept { return names_; }
    std::optional<Symbol> find(std::string_view name) const;

    /// True when every name is one character, so words can be written packed.
    bool single_char() const noexcept;

    bool operator==(const Alphabet&) const = default;

private:
    std::vector<std::string> names_;
};

struct Edge {
    StateIndex from = 0;
    Symbol symbol = 0;
    double probability = 0.0;
    StateIndex to = 0;
};

/// Edge-emitting hidden Markov model with one labeled transition matrix per
/// symbol. Immutable after construction. Zero-probability edges are dropped;
/// the remaining edges keep their construction order, which fixes sampling
/// order.
class Machine {
public:
    Machine(std::size_t n_states, Alphabet alphabet, std::vector<Edge> edges);

    std::size_t n_states() const noexcept { return n_states_; }
    std::size_t n_symbols() const noexcept { return alphabet_.size(); }
    const Alphabet& alphabet() const noexcept { return alphabet_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    const Matrix& symbol_matrix(Symbol x) const { return matrices_.at(x); }

    /// Indices into edges() of the outgoing edges of a state, in edge order.
    std::span<const std::size_t> outgoing(StateIndex i) const;

    /// P_{sigma_i}(x): total probability that state i emits x.
    double symbol_prob(StateIndex i, Symbol x) const { return symbol_prob_[i * n_symbols() + x]; }

    bool unifilar() const noexcept { return unifilar_; }

    /// Number of explicit zero-probability edges dropped at construction.
    std::size_t dropped_zero_edges() const noexcept { return dropped_zero_edges_; }

    /// Unique successor of (i, x) on a unifilar machine, nullopt when the
    /// state cannot emit x. Undefined on nonunifilar (state, symbol) pairs.
    std::optional<StateIndex> successor(StateIndex i, Symbol x) const {
        const long s = successor_[i * n_symbols() + x];
        if (s < 0) return std::nullopt;
        return static_cast<StateIndex>(s);
    }

    /// Adjacency of the positive-edge digraph (deduplicated targets).
    std::vector<std::vector<StateIndex>> adjacency() const;

private:
    std::size_t n_states_;
    Alphabet alphabet_;
    std::vector<Edge> edges_;
    std::vector<Matrix> matrices_;
    std::vector<std::size_t> outgoing_offsets_;
    std::vector<std::size_t> outgoing_edges_;
    std::vector<double> symbol_prob_;
    // -1: no edge, -2: several edges, otherwise the target.
    std::vector<long> successor_;
    bool unifilar_ = true;
    std::size_t dropped_zero_edges_ = 0;
};

enum class ViolationKind { Negative, RowSum, UselessSymbol, ZeroEdge };

struct Violation {
    ViolationKind kind;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    std::vector<std::string> warnings;
    bool accepted() const noexcept { return violations.empty(); }
};

ValidationReport validate(const Machine& machine, double tolerance = kStochasticTolerance);

/// Throws InvalidMachine with the first violation when validation fails.
void require_valid(const Machine& machine, double tolerance = kStochasticTolerance);

Matrix overall_matrix(const Machine& machine);

/// Ordered product T^(w0) ... T^(w_{l-1}).
Matrix word_matrix(const Machine& machine, std::span<const Symbol> word);

/// Row vector times T^(w), applied one symbol at a time.
RowVector propagate(const Machine& machine, RowVector row, std::span<const Symbol> word);

/// Left fixed vector of the overall matrix. Throws NotIrreducible when the
/// positive-edge graph is not strongly connected.
RowVector stationary_distribution(const Machine& machine);

/// ||e_i T^(w)||_1. The empty word has probability 1.
double word_prob_from_state(const Machine& machine, StateIndex i, std::span<const Symbol> word);

/// ||rho T^(w)||_1 for an arbitrary start distribution.
double word_prob_from(const Machine& machine, const RowVector& rho, std::span<const Symbol> word);

/// ||pi T^(w)||_1 with pi the stationary distribution.
double word_prob_stationary(const Machine& machine, std::span<const Symbol> word);

struct UnifilarWordProb {
    double probability = 0.0;
    /// States s_1 .. s_l visited; nullopt when some step has zero probability.
    std::optional<std::vector<StateIndex>> path;
};

/// Word probability by following the transition function step by step.
/// Throws NotUnifilar.
UnifilarWordProb unifilar_word_prob(const Machine& machine, StateIndex i, std::span<const Symbol> word);

/// delta(sigma_i, x). Throws NotUnifilar on nonunifilar machines.
std::optional<StateIndex> transition_function(const Machine& machine, StateIndex i, Symbol x);

/// All words of exactly the given length in lexicographic (alphabet) order.
std::vector<Word> words_of_length(std::size_t n_symbols, std::size_t length);

}  // namespace emach
