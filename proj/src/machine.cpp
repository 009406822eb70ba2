#include "emach/machine.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "emach/graph.hpp"

namespace emach {

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) throw InvalidMachine("alphabet is empty");
    std::set<std::string> seen;
    for (const auto& name : names_) {
        if (name.empty()) throw InvalidMachine("alphabet contains an empty symbol name");
        if (!seen.insert(name).second) throw InvalidMachine("duplicate symbol '" + name + "'");
    }
}

std::optional<Symbol> Alphabet::find(std::string_view name) const {
    for (Symbol x = 0; x < names_.size(); ++x)
        if (names_[x] == name) return x;
    return std::nullopt;
}

bool Alphabet::single_char() const noexcept {
    return std::all_of(names_.begin(), names_.end(), [](const std::string& s) { return s.size() == 1; });
}

Machine::Machine(std::size_t n_states, Alphabet alphabet, std::vector<Edge> edges)
    : n_states_(n_states), alphabet_(std::move(alphabet)) {
    if (n_states_ == 0) throw InvalidMachine("machine needs at least one state");
    if (alphabet_.size() == 0) throw InvalidMachine("alphabet is empty");
    const std::size_t k = alphabet_.size();

    edges_.reserve(edges.size());
    for (const Edge& e : edges) {
        if (e.from >= n_states_ || e.to >= n_states_)
            throw InvalidMachine("edge references state out of range");
        if (e.symbol >= k) throw InvalidMachine("edge references symbol out of range");
        if (e.probability == 0.0) {
            ++dropped_zero_edges_;
            continue;
        }
        edges_.push_back(e);
    }

    matrices_.assign(k, Matrix::Zero(static_cast<Eigen::Index>(n_states_), static_cast<Eigen::Index>(n_states_)));
    symbol_prob_.assign(n_states_ * k, 0.0);
    successor_.assign(n_states_ * k, -1);
    for (const Edge& e : edges_) {
        matrices_[e.symbol](static_cast<Eigen::Index>(e.from), static_cast<Eigen::Index>(e.to)) += e.probability;
        symbol_prob_[e.from * k + e.symbol] += e.probability;
        if (e.probability > 0.0) {
            long& slot = successor_[e.from * k + e.symbol];
            if (slot == -1) {
                slot = static_cast<long>(e.to);
            } else {
                // A second positive edge on the same (state, symbol) breaks
                // unifilarity even when it repeats the target.
                slot = -2;
                unifilar_ = false;
            }
        }
    }

    outgoing_offsets_.assign(n_states_ + 1, 0);
    for (const Edge& e : edges_) ++outgoing_offsets_[e.from + 1];
    for (std::size_t i = 0; i < n_states_; ++i) outgoing_offsets_[i + 1] += outgoing_offsets_[i];
    outgoing_edges_.resize(edges_.size());
    std::vector<std::size_t> fill(outgoing_offsets_.begin(), outgoing_offsets_.end() - 1);
    for (std::size_t idx = 0; idx < edges_.size(); ++idx) outgoing_edges_[fill[edges_[idx].from]++] = idx;
}

std::span<const std::size_t> Machine::outgoing(StateIndex i) const {
    if (i >= n_states_) throw IndexError("state index out of range");
    return {outgoing_edges_.data() + outgoing_offsets_[i], outgoing_offsets_[i + 1] - outgoing_offsets_[i]};
}

std::vector<std::vector<StateIndex>> Machine::adjacency() const {
    std::vector<std::vector<StateIndex>> adj(n_states_);
    for (const Edge& e : edges_)
        if (e.probability > 0.0) adj[e.from].push_back(e.to);
    for (auto& row : adj) {
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }
    return adj;
}

ValidationReport validate(const Machine& machine, double tolerance) {
    ValidationReport report;
    const std::size_t n = machine.n_states();
    const std::size_t k = machine.n_symbols();

    for (const Edge& e : machine.edges()) {
        if (!(e.probability > 0.0) || !std::isfinite(e.probability)) {
            std::ostringstream msg;
            msg << "edge " << e.from << " " << machine.alphabet().name(e.symbol) << " " << e.to
                << " has invalid probability " << e.probability;
            report.violations.push_back({ViolationKind::Negative, msg.str()});
        }
    }
    for (StateIndex i = 0; i < n; ++i) {
        double row = 0.0;
        for (Symbol x = 0; x < k; ++x) row += machine.symbol_prob(i, x);
        if (!(std::abs(row - 1.0) <= tolerance)) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "state " << i << " outgoing probabilities sum to " << row;
            report.violations.push_back({ViolationKind::RowSum, msg.str()});
        }
    }
    for (Symbol x = 0; x < k; ++x) {
        bool used = false;
        for (const Edge& e : machine.edges())
            if (e.symbol == x && e.probability > 0.0) used = true;
        if (!used)
            report.violations.push_back(
                {ViolationKind::UselessSymbol, "symbol '" + machine.alphabet().name(x) + "' labels no edge"});
    }
    if (machine.dropped_zero_edges() > 0)
        report.warnings.push_back(std::to_string(machine.dropped_zero_edges()) +
                                  " zero-probability edge(s) dropped");
    return report;
}

void require_valid(const Machine& machine, double tolerance) {
    const auto report = validate(machine, tolerance);
    if (!report.accepted()) throw InvalidMachine(report.violations.front().message);
}

Matrix overall_matrix(const Machine& machine) {
    Matrix total = Matrix::Zero(static_cast<Eigen::Index>(machine.n_states()),
                                static_cast<Eigen::Index>(machine.n_states()));
    for (Symbol x = 0; x < machine.n_symbols(); ++x) total += machine.symbol_matrix(x);
    return total;
}

Matrix word_matrix(const Machine& machine, std::span<const Symbol> word) {
    if (word.empty()) throw EmptyWord("word_matrix of the empty word");
    Matrix product = machine.symbol_matrix(word.front());
    for (std::size_t t = 1; t < word.size(); ++t) product = product * machine.symbol_matrix(word[t]);
    return product;
}

RowVector propagate(const Machine& machine, RowVector row, std::span<const Symbol> word) {
    for (Symbol x : word) {
        if (x >= machine.n_symbols()) throw IndexError("symbol out of range");
        row = row * machine.symbol_matrix(x);
    }
    return row;
}

namespace {

bool strongly_connected(const Machine& machine) {
    return graph::strongly_connected_components(machine.adjacency()).size() == 1;
}

RowVector power_iteration(const Matrix& t) {
    const Eigen::Index n = t.rows();
    // Lazy chain: same fixed vector, aperiodic.
    const Matrix lazy = 0.5 * (t + Matrix::Identity(n, n));
    RowVector pi = RowVector::Constant(n, 1.0 / static_cast<double>(n));
    for (int iter = 0; iter < 1'000'000; ++iter) {
        RowVector next = pi * lazy;
        next /= next.sum();
        const double change = (next - pi).cwiseAbs().maxCoeff();
        pi = std::move(next);
        if (change <= kSolveTolerance * 1e-2) break;
    }
    return pi;
}

}  // namespace

RowVector stationary_distribution(const Machine& machine) {
    if (!strongly_connected(machine))
        throw NotIrreducible("stationary distribution requires a strongly connected machine");
    const Matrix t = overall_matrix(machine);
    const Eigen::Index n = t.rows();
    if (n == 1) return RowVector::Ones(1);
    if (n > 64) return power_iteration(t);

    // (T^T - I) pi^T = 0 with the last equation replaced by sum(pi) = 1.
    Matrix a = t.transpose() - Matrix::Identity(n, n);
    a.row(n - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(n - 1) = 1.0;
    Eigen::VectorXd pi = a.fullPivLu().solve(b);
    for (Eigen::Index i = 0; i < n; ++i)
        if (pi(i) < 0.0 && pi(i) > -kSolveTolerance) pi(i) = 0.0;
    pi /= pi.sum();
    return pi.transpose();
}

double word_prob_from(const Machine& machine, const RowVector& rho, std::span<const Symbol> word) {
    if (word.empty()) return 1.0;
    return propagate(machine, rho, word).sum();
}

double word_prob_from_state(const Machine& machine, StateIndex i, std::span<const Symbol> word) {
    if (i >= machine.n_states()) throw IndexError("state index " + std::to_string(i) + " out of range");
    if (word.empty()) return 1.0;
    RowVector e = RowVector::Zero(static_cast<Eigen::Index>(machine.n_states()));
    e(static_cast<Eigen::Index>(i)) = 1.0;
    return word_prob_from(machine, e, word);
}

double word_prob_stationary(const Machine& machine, std::span<const Symbol> word) {
    return word_prob_from(machine, stationary_distribution(machine), word);
}

UnifilarWordProb unifilar_word_prob(const Machine& machine, StateIndex i, std::span<const Symbol> word) {
    if (!machine.unifilar()) throw NotUnifilar("unifilar_word_prob on a nonunifilar machine");
    if (i >= machine.n_states()) throw IndexError("state index " + std::to_string(i) + " out of range");
    UnifilarWordProb result{1.0, std::vector<StateIndex>{}};
    result.path->reserve(word.size());
    StateIndex state = i;
    for (Symbol x : word) {
        if (x >= machine.n_symbols()) throw IndexError("symbol out of range");
        const auto next = machine.successor(state, x);
        if (!next) return {0.0, std::nullopt};
        result.probability *= machine.symbol_prob(state, x);
        state = *next;
        result.path->push_back(state);
    }
    return result;
}

std::optional<StateIndex> transition_function(const Machine& machine, StateIndex i, Symbol x) {
    if (!machine.unifilar()) throw NotUnifilar("transition function undefined on a nonunifilar machine");
    if (i >= machine.n_states()) throw IndexError("state index out of range");
    if (x >= machine.n_symbols()) throw IndexError("symbol out of range");
    return machine.successor(i, x);
}

std::vector<Word> words_of_length(std::size_t n_symbols, std::size_t length) {
    std::vector<Word> out;
    Word w(length, 0);
    while (true) {
        out.push_back(w);
        std::size_t pos = length;
        for (;;) {
            if (pos == 0) return out;
            --pos;
            if (++w[pos] < n_symbols) break;
            w[pos] = 0;
        }
    }
}

}  // namespace emach
