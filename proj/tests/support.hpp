#pragma once

// Independent oracles for the tests. None of these use the library's matrix
// code: they walk edge lists directly.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "emach/axioms.hpp"
#include "emach/machine.hpp"

namespace testing_support {

using namespace emach;

/// P_i(w) by depth-first enumeration of state paths over the edge list.
inline double path_sum_prob(const Machine& m, StateIndex i, const Word& w, std::size_t pos = 0) {
    if (pos == w.size()) return 1.0;
    double total = 0.0;
    for (const Edge& e : m.edges())
        if (e.from == i && e.symbol == w[pos]) total += e.probability * path_sum_prob(m, e.to, w, pos + 1);
    return total;
}

/// Stationary distribution by iterating the lazy chain built from the edge
/// list.
inline std::vector<double> lazy_power_stationary(const Machine& m, std::size_t iterations = 200000) {
    const std::size_t n = m.n_states();
    std::vector<double> pi(n, 1.0 / static_cast<double>(n)), next(n);
    for (std::size_t it = 0; it < iterations; ++it) {
        for (std::size_t j = 0; j < n; ++j) next[j] = 0.5 * pi[j];
        for (const Edge& e : m.edges()) next[e.to] += 0.5 * pi[e.from] * e.probability;
        double delta = 0.0;
        for (std::size_t j = 0; j < n; ++j) delta = std::max(delta, std::abs(next[j] - pi[j]));
        pi.swap(next);
        if (delta < 1e-16) break;
    }
    return pi;
}

inline double oracle_stationary_prob(const Machine& m, const Word& w) {
    const auto pi = lazy_power_stationary(m);
    double total = 0.0;
    for (StateIndex i = 0; i < m.n_states(); ++i) total += pi[i] * path_sum_prob(m, i, w);
    return total;
}

/// All words of length 0..max_len, shortest first.
inline std::vector<Word> all_words(std::size_t k, std::size_t max_len) {
    std::vector<Word> out{Word{}};
    std::vector<Word> level{Word{}};
    for (std::size_t l = 1; l <= max_len; ++l) {
        std::vector<Word> next;
        for (const Word& w : level)
            for (Symbol x = 0; x < k; ++x) {
                Word v = w;
                v.push_back(x);
                next.push_back(v);
            }
        out.insert(out.end(), next.begin(), next.end());
        level = std::move(next);
    }
    return out;
}

inline Alphabet alphabet_of_size(std::size_t k) {
    std::vector<std::string> names;
    for (std::size_t x = 0; x < k; ++x) names.push_back(std::string(1, static_cast<char>('a' + x)));
    return Alphabet(names);
}

/// Random irreducible unifilar machine with every symbol used.
inline Machine random_irreducible(std::mt19937_64& rng, std::size_t n, std::size_t k) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> state(0, n - 1);
    for (;;) {
        // A random Hamiltonian cycle on the first used symbol of each state
        // keeps large machines irreducible.
        std::vector<StateIndex> cycle(n);
        for (StateIndex s = 0; s < n; ++s) cycle[s] = s;
        std::shuffle(cycle.begin(), cycle.end(), rng);
        std::vector<StateIndex> cycle_next(n);
        for (std::size_t i = 0; i < n; ++i) cycle_next[cycle[i]] = cycle[(i + 1) % n];
        std::vector<Edge> edges;
        for (StateIndex s = 0; s < n; ++s) {
            std::vector<Symbol> used;
            for (Symbol x = 0; x < k; ++x)
                if (unit(rng) < 0.7) used.push_back(x);
            if (used.empty()) used.push_back(std::uniform_int_distribution<Symbol>(0, k - 1)(rng));
            std::vector<double> weights;
            double sum = 0.0;
            for (std::size_t i = 0; i < used.size(); ++i) {
                weights.push_back(0.1 + unit(rng));
                sum += weights.back();
            }
            for (std::size_t i = 0; i < used.size(); ++i)
                edges.push_back({s, used[i], weights[i] / sum, i == 0 ? cycle_next[s] : state(rng)});
        }
        Machine m(n, alphabet_of_size(k), edges);
        if (validate(m).accepted()) return m;
    }
}

/// Random generator epsilon-machine whose states stay distinct at tolerance
/// 1e-3. Practical for n up to about 8.
inline Machine random_generator(std::mt19937_64& rng, std::size_t n, std::size_t k) {
    for (;;) {
        Machine m = random_irreducible(rng, n, k);
        if (distinctness_partition(m, 1e-3).all_singletons()) return m;
    }
}

/// Same machine with states relabeled: new index of old state s is perm[s].
inline Machine relabel(const Machine& m, const std::vector<StateIndex>& perm) {
    std::vector<Edge> edges;
    for (const Edge& e : m.edges()) edges.push_back({perm[e.from], e.symbol, e.probability, perm[e.to]});
    return Machine(m.n_states(), m.alphabet(), edges);
}

}  // namespace testing_support
