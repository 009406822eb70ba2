#include "emach/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <set>

#include "emach/graph.hpp"

namespace emach {

IrreducibilityResult is_irreducible(const Machine& machine) {
    IrreducibilityResult result;
    result.components = graph::strongly_connected_components(machine.adjacency());
    std::sort(result.components.begin(), result.components.end());
    result.irreducible = result.components.size() == 1;
    return result;
}

UnifilarityResult is_unifilar(const Machine& machine) {
    UnifilarityResult result;
    const std::size_t k = machine.n_symbols();
    std::vector<int> count(machine.n_states() * k, 0);
    for (const Edge& e : machine.edges())
        if (e.probability > 0.0) ++count[e.from * k + e.symbol];
    for (StateIndex i = 0; i < machine.n_states(); ++i)
        for (Symbol x = 0; x < k; ++x)
            if (count[i * k + x] > 1) result.violations.emplace_back(i, x);
    result.unifilar = result.violations.empty();
    return result;
}

StatePartition::StatePartition(std::vector<std::vector<StateIndex>> blocks) : blocks_(std::move(blocks)) {
    std::size_t n = 0;
    for (auto& b : blocks_) {
        if (b.empty()) throw Error("partition block is empty");
        std::sort(b.begin(), b.end());
        n += b.size();
    }
    std::sort(blocks_.begin(), blocks_.end());
    constexpr auto unset = std::numeric_limits<std::size_t>::max();
    block_of_.assign(n, unset);
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        for (StateIndex s : blocks_[b]) {
            if (s >= n || block_of_[s] != unset) throw Error("partition blocks overlap or skip a state");
            block_of_[s] = b;
        }
    }
}

namespace {

constexpr std::size_t kNoSuccessor = std::numeric_limits<std::size_t>::max();

/// Groups states by a key, numbering groups by first appearance.
template <typename Key>
std::vector<std::vector<StateIndex>> group_by(std::size_t n, const std::vector<Key>& keys) {
    std::map<Key, std::size_t> index;
    std::vector<std::vector<StateIndex>> blocks;
    for (StateIndex s = 0; s < n; ++s) {
        auto [it, inserted] = index.try_emplace(keys[s], blocks.size());
        if (inserted) blocks.emplace_back();
        blocks[it->second].push_back(s);
    }
    return blocks;
}

bool close_rows(const Machine& m, StateIndex a, StateIndex b, double tolerance) {
    for (Symbol x = 0; x < m.n_symbols(); ++x)
        if (std::abs(m.symbol_prob(a, x) - m.symbol_prob(b, x)) > tolerance) return false;
    return true;
}

}  // namespace

StatePartition refine_partition(const Machine& machine, const StatePartition& start) {
    if (!machine.unifilar()) throw NotUnifilar("distinctness refinement needs a unifilar machine");
    const std::size_t n = machine.n_states();
    const std::size_t k = machine.n_symbols();
    StatePartition current = start;
    // Moore bound: at most n-1 productive rounds.
    for (std::size_t round = 0; round < n; ++round) {
        std::vector<std::vector<std::size_t>> signature(n);
        for (StateIndex s = 0; s < n; ++s) {
            auto& sig = signature[s];
            sig.reserve(k + 1);
            sig.push_back(current.block_of(s));
            for (Symbol x = 0; x < k; ++x) {
                const auto next = machine.successor(s, x);
                sig.push_back(next ? current.block_of(*next) : kNoSuccessor);
            }
        }
        StatePartition next(group_by(n, signature));
        if (next.size() == current.size()) return next;
        current = std::move(next);
    }
    return current;
}

StatePartition distinctness_partition(const Machine& machine, double tolerance) {
    if (!machine.unifilar()) throw NotUnifilar("distinctness partition needs a unifilar machine");
    const std::size_t n = machine.n_states();
    // Greedy grouping against each block's lowest member.
    std::vector<std::vector<StateIndex>> blocks;
    for (StateIndex s = 0; s < n; ++s) {
        auto it = std::find_if(blocks.begin(), blocks.end(),
                               [&](const auto& b) { return close_rows(machine, b.front(), s, tolerance); });
        if (it == blocks.end())
            blocks.push_back({s});
        else
            it->push_back(s);
    }
    return refine_partition(machine, StatePartition(std::move(blocks)));
}

std::optional<Word> separating_word(const Machine& machine, StateIndex i, StateIndex j, double tolerance) {
    if (!machine.unifilar()) throw NotUnifilar("separating words need a unifilar machine");
    const std::size_t n = machine.n_states();
    const std::size_t k = machine.n_symbols();
    if (i >= n || j >= n) throw IndexError("state index out of range");
    if (i == j) return std::nullopt;

    auto key = [n](StateIndex a, StateIndex b) { return a < b ? a * n + b : b * n + a; };
    std::vector<std::optional<Word>> witness(n * n);
    for (StateIndex a = 0; a < n; ++a)
        for (StateIndex b = a + 1; b < n; ++b)
            for (Symbol x = 0; x < k; ++x)
                if (std::abs(machine.symbol_prob(a, x) - machine.symbol_prob(b, x)) > tolerance) {
                    witness[key(a, b)] = Word{x};
                    break;
                }

    for (std::size_t length = 2; length <= n; ++length) {
        if (witness[key(i, j)]) break;
        std::vector<std::optional<Word>> next = witness;
        bool changed = false;
        for (StateIndex a = 0; a < n; ++a) {
            for (StateIndex b = a + 1; b < n; ++b) {
                if (witness[key(a, b)]) continue;
                for (Symbol x = 0; x < k; ++x) {
                    const auto sa = machine.successor(a, x);
                    const auto sb = machine.successor(b, x);
                    if (!sa || !sb || *sa == *sb) continue;
                    const auto& tail = witness[key(*sa, *sb)];
                    if (!tail) continue;
                    Word w{x};
                    w.insert(w.end(), tail->begin(), tail->end());
                    next[key(a, b)] = std::move(w);
                    changed = true;
                    break;
                }
            }
        }
        witness = std::move(next);
        if (!changed) break;
    }
    return witness[key(i, j)];
}

AxiomReport is_generator_em(const Machine& machine, double tolerance) {
    AxiomReport report;
    auto irr = is_irreducible(machine);
    report.irreducible = irr.irreducible;
    report.components = std::move(irr.components);
    auto uni = is_unifilar(machine);
    report.unifilar = uni.unifilar;
    report.unifilar_violations = std::move(uni.violations);
    if (report.unifilar) {
        const auto partition = distinctness_partition(machine, tolerance);
        report.probabilistically_distinct = partition.all_singletons();
        for (const auto& block : partition.blocks()) {
            if (block.size() > 1) {
                report.indistinct_pair = std::make_pair(block[0], block[1]);
                break;
            }
        }
    }
    return report;
}

std::optional<Word> find_sync_word(const Machine& machine, std::size_t max_len) {
    if (!machine.unifilar()) throw NotUnifilar("synchronizing-word search needs a unifilar machine");
    const std::size_t n = machine.n_states();
    const std::size_t k = machine.n_symbols();
    using Subset = std::vector<bool>;

    Subset all(n, true);
    if (n == 1) return Word{};

    const std::size_t cap = n >= 22 ? (std::size_t{1} << 22) : (std::size_t{1} << n);
    std::set<Subset> seen{all};
    std::deque<std::pair<Subset, Word>> queue;
    queue.emplace_back(all, Word{});

    while (!queue.empty()) {
        auto [subset, word] = std::move(queue.front());
        queue.pop_front();
        if (word.size() >= max_len) continue;
        for (Symbol x = 0; x < k; ++x) {
            Subset next(n, false);
            std::size_t count = 0;
            for (StateIndex s = 0; s < n; ++s) {
                if (!subset[s]) continue;
                if (const auto t = machine.successor(s, x)) {
                    if (!next[*t]) ++count;
                    next[*t] = true;
                }
            }
            if (count == 0) continue;
            Word extended = word;
            extended.push_back(x);
            if (count == 1) return extended;
            if (seen.size() >= cap || !seen.insert(next).second) continue;
            queue.emplace_back(std::move(next), std::move(extended));
        }
    }
    return std::nullopt;
}

}  // namespace emach
