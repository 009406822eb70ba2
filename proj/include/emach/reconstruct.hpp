#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "emach/machine.hpp"

namespace emach {

enum class Provenance { Analytic, Empirical };

struct ReconstructedMachine {
    Machine machine;
    /// Stationary class probabilities mu.
    RowVector class_probability;
    Provenance provenance;
    /// Human-readable diagnostics (class sizes, merge statistics, caveats).
    std::vector<std::string> report;
};

// Analytic reconstruction ---------------------------------------------------

struct AnalyticOptions {
    /// Maximum word depth explored from each seed belief.
    std::size_t depth = 64;
    /// Future word length compared when merging; 0 means 2N+2.
    std::size_t l_fut = 0;
    double tolerance = 1e-9;
    std::size_t class_cap = 4096;
};

/// Words whose future-probability functionals span every word of length at
/// most l_fut: phi and phi' give equal probabilities to all such words iff
/// they agree on these. Built by prepending symbols to previously kept words,
/// shortest first, lexicographic within a length.
std::vector<Word> spanning_future_words(const Machine& machine, std::size_t l_fut);

struct BeliefClass {
    RowVector belief;
    /// Shortest word from the seed reaching this class.
    Word word;
    /// Seed the class was first reached from: 0 is pi, s+1 is vertex e_s.
    std::size_t seed = 0;
    std::size_t depth = 0;
    /// Probabilities of the spanning future words.
    std::vector<double> signature;
    /// Per-symbol successor class; nullopt when the symbol is impossible.
    std::vector<std::optional<std::size_t>> successors;
    bool expanded = false;
};

struct BeliefAtlas {
    std::vector<Word> future_words;
    std::vector<BeliefClass> classes;
    std::size_t depth_reached = 0;
};

/// Level-synchronous exploration of beliefs from pi and from every vertex
/// e_i, merging beliefs whose future signatures agree within tolerance.
/// Stops early once a closed, fully expanded class set reproduces the
/// stationary process. Throws ClassExplosion above the class cap.
BeliefAtlas explore_beliefs(const Machine& machine, const AnalyticOptions& options);

/// History machine on the recurrent classes of the belief atlas. Class order
/// follows discovery order. Throws NotIrreducible for reducible inputs and
/// ClassExplosion when the cap is exceeded or no finite recurrent class set
/// is found within the depth.
ReconstructedMachine reconstruct_analytic(const Machine& machine, const AnalyticOptions& options = {});

/// Same as reconstruct_analytic, also returning the beliefs of the kept
/// classes in machine state order.
struct AnalyticResult {
    ReconstructedMachine result;
    std::vector<RowVector> class_beliefs;
    std::vector<Word> class_words;
};
AnalyticResult reconstruct_analytic_detailed(const Machine& machine, const AnalyticOptions& options = {});

/// Probability that the simple nonunifilar source emits 0 after the past
/// 0 1^n. Throws DomainError outside p, q in (0,1), n >= 1.
double sns_belief_closed_form(double p, double q, std::size_t n);

// Empirical reconstruction --------------------------------------------------

struct EmpiricalOptions {
    std::size_t l_ctx = 8;
    std::size_t l_fut = 4;
    double significance = 1e-3;
    std::size_t min_count = 50;
    /// Lower bound of the clustering threshold.
    double min_threshold = 1e-6;
    /// Prefix length used to rank candidate topologies; 0 means the whole
    /// sample.
    std::size_t selection_prefix = 50000;
    /// Candidate small topologies enumerated at most.
    std::size_t topology_budget = 5000;
};

/// Empirical conditional futures of every past context of length l_ctx.
class ContextModel {
public:
    ContextModel(std::span<const Symbol> symbols, std::size_t n_symbols, std::size_t l_ctx, std::size_t l_fut);

    std::size_t n_symbols() const noexcept { return n_symbols_; }
    std::size_t l_ctx() const noexcept { return l_ctx_; }
    std::size_t l_fut() const noexcept { return l_fut_; }

    struct Entry {
        Word context;
        /// Positions where the context is followed by a full future window.
        std::uint64_t occurrences = 0;
        /// Indexed by the base-|X| code of the future word.
        std::vector<std::uint64_t> future_counts;
        /// Next-symbol counts.
        std::vector<std::uint64_t> next_counts;
    };

    /// Contexts in lexicographic order.
    const std::vector<Entry>& entries() const noexcept { return entries_; }
    std::optional<std::size_t> find(std::span<const Symbol> context) const;

private:
    std::size_t n_symbols_;
    std::size_t l_ctx_;
    std::size_t l_fut_;
    std::vector<Entry> entries_;
};

/// Clusters contexts by their future distributions (single linkage on the L-inf
/// distance), assembles a unifilar machine from suffix extensions, then
/// compares it by BIC against small enumerated unifilar topologies and
/// re-estimates the winner along its deterministic path. Throws
/// InsufficientData when no context reaches min_count.
ReconstructedMachine reconstruct_empirical(const Alphabet& alphabet, std::span<const Symbol> symbols,
                                           const EmpiricalOptions& options = {});

}  // namespace emach
