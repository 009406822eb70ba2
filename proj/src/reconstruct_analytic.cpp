#include <algorithm>
#include <cmath>
#include <sstream>

#include "emach/axioms.hpp"
#include "emach/graph.hpp"
#include "emach/io.hpp"
#include "emach/mixed_state.hpp"
#include "emach/reconstruct.hpp"

namespace emach {

namespace {

// Symbol probabilities below this are treated as impossible transitions.
constexpr double kImpossible = 1e-13;
constexpr double kIndependence = 1e-9;

struct FutureBasis {
    std::vector<Word> words;
    // Column b holds T^(words[b]) 1.
    Matrix vectors;
};

FutureBasis build_future_basis(const Machine& machine, std::size_t l_fut) {
    const auto n = static_cast<Eigen::Index>(machine.n_states());
    std::vector<Eigen::VectorXd> orthonormal{Eigen::VectorXd::Ones(n).normalized()};
    std::vector<std::pair<Word, Eigen::VectorXd>> level{{Word{}, Eigen::VectorXd::Ones(n)}};
    FutureBasis basis;
    std::vector<Eigen::VectorXd> kept;
    for (std::size_t length = 1; length <= l_fut && !level.empty(); ++length) {
        // Lexicographic order within a length: first symbol outermost.
        std::vector<std::pair<Word, Eigen::VectorXd>> next;
        for (Symbol x = 0; x < machine.n_symbols(); ++x) {
            for (const auto& [w, v] : level) {
                Eigen::VectorXd candidate = machine.symbol_matrix(x) * v;
                const double norm = candidate.norm();
                if (norm == 0.0) continue;
                Eigen::VectorXd residual = candidate;
                for (const auto& q : orthonormal) residual -= q.dot(residual) * q;
                if (residual.norm() <= kIndependence * norm) continue;
                orthonormal.push_back(residual.normalized());
                Word xw{x};
                xw.insert(xw.end(), w.begin(), w.end());
                basis.words.push_back(xw);
                kept.push_back(candidate);
                next.emplace_back(std::move(xw), std::move(candidate));
            }
        }
        level = std::move(next);
    }
    basis.vectors = Matrix(n, static_cast<Eigen::Index>(kept.size()));
    for (std::size_t b = 0; b < kept.size(); ++b) basis.vectors.col(static_cast<Eigen::Index>(b)) = kept[b];
    return basis;
}

std::vector<double> signature_of(const RowVector& phi, const Matrix& vectors) {
    const RowVector s = phi * vectors;
    return std::vector<double>(s.data(), s.data() + s.size());
}

double linf(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

struct Candidate {
    std::vector<std::size_t> classes;
    Machine machine;
    RowVector mu;
};

Machine class_machine(const Machine& source, const BeliefAtlas& atlas, const std::vector<std::size_t>& members) {
    std::vector<std::size_t> index(atlas.classes.size(), 0);
    for (std::size_t i = 0; i < members.size(); ++i) index[members[i]] = i;
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < members.size(); ++i) {
        const BeliefClass& c = atlas.classes[members[i]];
        for (Symbol x = 0; x < source.n_symbols(); ++x) {
            if (!c.successors[x]) continue;
            const double p = (c.belief * source.symbol_matrix(x)).sum();
            edges.push_back({i, x, p, index[*c.successors[x]]});
        }
    }
    return Machine(members.size(), source.alphabet(), std::move(edges));
}

/// First closed, fully expanded class set (by lowest discovery index) whose
/// stationary mixture reproduces the source's future signature.
std::optional<Candidate> recurrent_candidate(const Machine& source, const BeliefAtlas& atlas,
                                             const std::vector<double>& pi_signature, double tolerance) {
    const std::size_t m = atlas.classes.size();
    graph::Adjacency adjacency(m);
    for (std::size_t c = 0; c < m; ++c)
        for (const auto& s : atlas.classes[c].successors)
            if (s) adjacency[c].push_back(*s);

    auto components = graph::strongly_connected_components(adjacency);
    std::sort(components.begin(), components.end());
    const double consistency = std::max(1e-8, 100.0 * tolerance);
    for (const auto& component : components) {
        std::vector<bool> inside(m, false);
        for (std::size_t c : component) inside[c] = true;
        bool closed = true;
        for (std::size_t c : component) {
            if (!atlas.classes[c].expanded) closed = false;
            for (std::size_t s : adjacency[c])
                if (!inside[s]) closed = false;
        }
        if (!closed) continue;
        Machine machine = class_machine(source, atlas, component);
        RowVector mu = stationary_distribution(machine);
        std::vector<double> mixture(pi_signature.size(), 0.0);
        for (std::size_t i = 0; i < component.size(); ++i) {
            const auto& sig = atlas.classes[component[i]].signature;
            for (std::size_t b = 0; b < sig.size(); ++b) mixture[b] += mu(static_cast<Eigen::Index>(i)) * sig[b];
        }
        if (linf(mixture, pi_signature) <= consistency) return Candidate{component, std::move(machine), std::move(mu)};
    }
    return std::nullopt;
}

struct Exploration {
    BeliefAtlas atlas;
    std::optional<Candidate> candidate;
};

Exploration explore(const Machine& machine, const AnalyticOptions& options) {
    if (!is_irreducible(machine).irreducible) throw NotIrreducible("analytic reconstruction needs an irreducible machine");
    const std::size_t n = machine.n_states();
    const std::size_t k = machine.n_symbols();
    const std::size_t l_fut = options.l_fut == 0 ? 2 * n + 2 : options.l_fut;
    const FutureBasis basis = build_future_basis(machine, l_fut);
    const RowVector pi = stationary_distribution(machine);

    Exploration out;
    BeliefAtlas& atlas = out.atlas;
    atlas.future_words = basis.words;

    auto find_or_add = [&](const RowVector& phi, Word word, std::size_t seed, std::size_t depth,
                           std::vector<std::size_t>& frontier) -> std::size_t {
        auto sig = signature_of(phi, basis.vectors);
        for (std::size_t c = 0; c < atlas.classes.size(); ++c)
            if (linf(atlas.classes[c].signature, sig) <= options.tolerance) return c;
        if (atlas.classes.size() >= options.class_cap)
            throw ClassExplosion("more than " + std::to_string(options.class_cap) +
                                 " distinct belief classes; the history machine looks infinite");
        atlas.classes.push_back(BeliefClass{phi, std::move(word), seed, depth, std::move(sig), {}, false});
        frontier.push_back(atlas.classes.size() - 1);
        return atlas.classes.size() - 1;
    };

    std::vector<std::size_t> frontier;
    find_or_add(pi, {}, 0, 0, frontier);
    for (StateIndex s = 0; s < n; ++s) {
        RowVector vertex = RowVector::Zero(static_cast<Eigen::Index>(n));
        vertex(static_cast<Eigen::Index>(s)) = 1.0;
        find_or_add(vertex, {}, s + 1, 0, frontier);
    }
    const std::vector<double> pi_signature = atlas.classes.front().signature;

    for (std::size_t depth = 0; depth < options.depth && !frontier.empty(); ++depth) {
        std::vector<std::size_t> next;
        for (std::size_t c : frontier) {
            std::vector<std::optional<std::size_t>> successors(k);
            for (Symbol x = 0; x < k; ++x) {
                const RowVector phi = atlas.classes[c].belief;
                if ((phi * machine.symbol_matrix(x)).sum() <= kImpossible) continue;
                Word word = atlas.classes[c].word;
                word.push_back(x);
                successors[x] = find_or_add(belief_update(machine, phi, x), std::move(word),
                                            atlas.classes[c].seed, depth + 1, next);
            }
            atlas.classes[c].successors = std::move(successors);
            atlas.classes[c].expanded = true;
        }
        frontier = std::move(next);
        atlas.depth_reached = depth + 1;
        out.candidate = recurrent_candidate(machine, atlas, pi_signature, options.tolerance);
        if (out.candidate) break;
    }
    if (!out.candidate) out.candidate = recurrent_candidate(machine, atlas, pi_signature, options.tolerance);
    return out;
}

}  // namespace

std::vector<Word> spanning_future_words(const Machine& machine, std::size_t l_fut) {
    return build_future_basis(machine, l_fut).words;
}

BeliefAtlas explore_beliefs(const Machine& machine, const AnalyticOptions& options) {
    return explore(machine, options).atlas;
}

AnalyticResult reconstruct_analytic_detailed(const Machine& machine, const AnalyticOptions& options) {
    Exploration ex = explore(machine, options);
    if (!ex.candidate)
        throw ClassExplosion("no finite recurrent class set within depth " + std::to_string(options.depth) + " (" +
                             std::to_string(ex.atlas.classes.size()) + " classes explored)");
    Candidate& cand = *ex.candidate;
    AnalyticResult out{ReconstructedMachine{cand.machine, cand.mu, Provenance::Analytic, {}}, {}, {}};
    for (std::size_t c : cand.classes) {
        out.class_beliefs.push_back(ex.atlas.classes[c].belief);
        out.class_words.push_back(ex.atlas.classes[c].word);
    }
    auto& report = out.result.report;
    const std::size_t l_fut = options.l_fut == 0 ? 2 * machine.n_states() + 2 : options.l_fut;
    report.push_back("provenance: analytic");
    report.push_back("depth explored: " + std::to_string(ex.atlas.depth_reached) + " of " +
                     std::to_string(options.depth));
    report.push_back("future length: " + std::to_string(l_fut) + " (" + std::to_string(ex.atlas.future_words.size()) +
                     " spanning words)");
    report.push_back("merge tolerance: " + io::format_double(options.tolerance, 6));
    report.push_back("belief classes discovered: " + std::to_string(ex.atlas.classes.size()));
    report.push_back("recurrent classes kept: " + std::to_string(cand.classes.size()));
    report.push_back("transient classes dropped: " + std::to_string(ex.atlas.classes.size() - cand.classes.size()));
    for (std::size_t i = 0; i < cand.classes.size(); ++i) {
        const BeliefClass& c = ex.atlas.classes[cand.classes[i]];
        std::ostringstream line;
        line << "class " << i << ": mu=" << io::format_double(cand.mu(static_cast<Eigen::Index>(i)), 12)
             << " seed=" << (c.seed == 0 ? std::string("pi") : "e" + std::to_string(c.seed - 1))
             << " word=" << (c.word.empty() ? std::string("-") : io::format_word(machine.alphabet(), c.word));
        report.push_back(line.str());
    }
    return out;
}

ReconstructedMachine reconstruct_analytic(const Machine& machine, const AnalyticOptions& options) {
    return reconstruct_analytic_detailed(machine, options).result;
}

double sns_belief_closed_form(double p, double q, std::size_t n) {
    if (!(p > 0.0 && p < 1.0) || !(q > 0.0 && q < 1.0)) throw DomainError("p and q must lie in (0,1)");
    if (n < 1) throw DomainError("n must be at least 1");
    double mixed = 0.0;
    for (std::size_t m = 0; m < n; ++m)
        mixed += std::pow(p, static_cast<double>(m)) * std::pow(q, static_cast<double>(n - 1 - m));
    mixed *= 1.0 - p;
    return (1.0 - q) * mixed / (std::pow(p, static_cast<double>(n)) + mixed);
}

}  // namespace emach
