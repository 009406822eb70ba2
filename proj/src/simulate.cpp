#include "emach/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace emach {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

RowVector start_distribution(const Machine& machine, const Start& start) {
    const std::size_t n = machine.n_states();
    if (std::holds_alternative<StationaryStart>(start)) return stationary_distribution(machine);
    if (const auto* state = std::get_if<StateIndex>(&start)) {
        if (*state >= n) throw IndexError("start state " + std::to_string(*state) + " out of range");
        RowVector rho = RowVector::Zero(static_cast<Eigen::Index>(n));
        rho(static_cast<Eigen::Index>(*state)) = 1.0;
        return rho;
    }
    const RowVector& rho = std::get<RowVector>(start);
    if (static_cast<std::size_t>(rho.size()) != n) throw DomainError("start distribution has the wrong length");
    if ((rho.array() < 0.0).any() || std::abs(rho.sum() - 1.0) > kStochasticTolerance)
        throw DomainError("start distribution must be nonnegative and sum to 1");
    return rho;
}

namespace {

std::size_t draw_index(const RowVector& weights, double u) {
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
        if (weights(i) <= 0.0) continue;
        cumulative += weights(i);
        last_positive = static_cast<std::size_t>(i);
        if (u < cumulative) return last_positive;
    }
    return last_positive;
}

}  // namespace

SampleRun sample_path(const Machine& machine, const Start& start, std::size_t length, std::uint64_t seed) {
    SampleRun run;
    run.seed = seed;
    run.start = start_distribution(machine, start);
    Rng rng(seed);
    run.symbols.reserve(length);
    run.states.reserve(length + 1);

    StateIndex state = draw_index(run.start, rng.uniform());
    run.states.push_back(state);
    const auto& edges = machine.edges();
    for (std::size_t t = 0; t < length; ++t) {
        const auto out = machine.outgoing(state);
        if (out.empty()) throw InvalidMachine("state " + std::to_string(state) + " has no outgoing edge");
        const double u = rng.uniform();
        double cumulative = 0.0;
        std::size_t chosen = out.back();
        for (std::size_t idx : out) {
            cumulative += edges[idx].probability;
            if (u < cumulative) {
                chosen = idx;
                break;
            }
        }
        run.symbols.push_back(edges[chosen].symbol);
        state = edges[chosen].to;
        run.states.push_back(state);
    }
    return run;
}

bool edge_consistent(const Machine& machine, const SampleRun& run) {
    if (run.states.size() != run.symbols.size() + 1) return false;
    for (std::size_t t = 0; t < run.symbols.size(); ++t) {
        const auto i = static_cast<Eigen::Index>(run.states[t]);
        const auto j = static_cast<Eigen::Index>(run.states[t + 1]);
        if (run.symbols[t] >= machine.n_symbols() || !(machine.symbol_matrix(run.symbols[t])(i, j) > 0.0))
            return false;
    }
    return true;
}

EmpiricalWordTable::EmpiricalWordTable(std::span<const Symbol> symbols, std::size_t n_symbols, std::size_t max_len)
    : length_(symbols.size()), n_symbols_(n_symbols), max_len_(max_len), counts_(max_len + 1) {
    if (n_symbols == 0) throw DomainError("alphabet is empty");
    if (max_len > length_) throw DomainError("max_len exceeds the sample length");
    if (max_len * std::log2(static_cast<double>(n_symbols)) >= 63.0) throw DomainError("max_len too large for alphabet");
    for (std::size_t start = 0; start < length_; ++start) {
        std::uint64_t code = 0;
        const std::size_t span = std::min(max_len, length_ - start);
        for (std::size_t l = 1; l <= span; ++l) {
            const Symbol x = symbols[start + l - 1];
            if (x >= n_symbols) throw DomainError("symbol outside the alphabet");
            code = code * n_symbols + x;
            ++counts_[l][code];
        }
    }
}

std::uint64_t EmpiricalWordTable::count(std::span<const Symbol> word) const {
    if (word.empty() || word.size() > max_len_) throw DomainError("word length outside 1..max_len");
    std::uint64_t code = 0;
    for (Symbol x : word) {
        if (x >= n_symbols_) return 0;
        code = code * n_symbols_ + x;
    }
    const auto& table = counts_[word.size()];
    const auto it = table.find(code);
    return it == table.end() ? 0 : it->second;
}

double EmpiricalWordTable::frequency(std::span<const Symbol> word) const {
    return static_cast<double>(count(word)) / static_cast<double>(length_ - word.size() + 1);
}

std::vector<std::pair<Word, std::uint64_t>> EmpiricalWordTable::observed(std::size_t word_length) const {
    if (word_length == 0 || word_length > max_len_) throw DomainError("word length outside 1..max_len");
    std::vector<std::pair<std::uint64_t, std::uint64_t>> entries(counts_[word_length].begin(),
                                                                  counts_[word_length].end());
    std::sort(entries.begin(), entries.end());
    std::vector<std::pair<Word, std::uint64_t>> out;
    out.reserve(entries.size());
    for (auto [code, c] : entries) {
        Word w(word_length);
        for (std::size_t l = word_length; l-- > 0;) {
            w[l] = code % n_symbols_;
            code /= n_symbols_;
        }
        out.emplace_back(std::move(w), c);
    }
    return out;
}

EmpiricalWordTable empirical_word_probs(std::span<const Symbol> symbols, std::size_t n_symbols, std::size_t max_len) {
    return EmpiricalWordTable(symbols, n_symbols, max_len);
}

}  // namespace emach
