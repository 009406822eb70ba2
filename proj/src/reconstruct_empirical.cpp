#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>

#include "emach/graph.hpp"
#include "emach/io.hpp"
#include "emach/parallel.hpp"
#include "emach/reconstruct.hpp"

namespace emach {

namespace {

std::uint64_t power(std::size_t base, std::size_t exponent) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < exponent; ++i) {
        if (r > (std::uint64_t{1} << 62) / base) throw DomainError("context or future length too large for alphabet");
        r *= base;
    }
    return r;
}

Word decode(std::uint64_t code, std::size_t base, std::size_t length) {
    Word w(length);
    for (std::size_t l = length; l-- > 0;) {
        w[l] = code % base;
        code /= base;
    }
    return w;
}

}  // namespace

ContextModel::ContextModel(std::span<const Symbol> symbols, std::size_t n_symbols, std::size_t l_ctx,
                           std::size_t l_fut)
    : n_symbols_(n_symbols), l_ctx_(l_ctx), l_fut_(l_fut) {
    if (n_symbols == 0) throw DomainError("alphabet is empty");
    if (l_fut == 0) throw DomainError("future length must be positive");
    const std::uint64_t n_futures = power(n_symbols, l_fut);
    if (n_futures > (1u << 20)) throw DomainError("future length too large for alphabet");
    const std::uint64_t ctx_modulus = power(n_symbols, l_ctx);
    (void)ctx_modulus;

    std::unordered_map<std::uint64_t, std::size_t> index;
    std::vector<std::uint64_t> codes;
    const std::size_t length = symbols.size();
    if (length < l_ctx + l_fut) return;
    for (Symbol x : symbols)
        if (x >= n_symbols) throw DomainError("symbol outside the alphabet");

    for (std::size_t t = l_ctx; t + l_fut <= length; ++t) {
        std::uint64_t ctx = 0;
        for (std::size_t i = t - l_ctx; i < t; ++i) ctx = ctx * n_symbols + symbols[i];
        std::uint64_t fut = 0;
        for (std::size_t i = t; i < t + l_fut; ++i) fut = fut * n_symbols + symbols[i];
        auto [it, inserted] = index.try_emplace(ctx, entries_.size());
        if (inserted) {
            entries_.push_back(Entry{{}, 0, std::vector<std::uint64_t>(n_futures, 0),
                                     std::vector<std::uint64_t>(n_symbols, 0)});
            codes.push_back(ctx);
        }
        Entry& e = entries_[it->second];
        ++e.occurrences;
        ++e.future_counts[fut];
        ++e.next_counts[symbols[t]];
    }
    std::vector<std::size_t> order(entries_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return codes[a] < codes[b]; });
    std::vector<Entry> sorted;
    sorted.reserve(entries_.size());
    for (std::size_t i : order) {
        sorted.push_back(std::move(entries_[i]));
        sorted.back().context = decode(codes[i], n_symbols, l_ctx);
    }
    entries_ = std::move(sorted);
}

std::optional<std::size_t> ContextModel::find(std::span<const Symbol> context) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), context, [](const Entry& e, std::span<const Symbol> c) {
        return std::lexicographical_compare(e.context.begin(), e.context.end(), c.begin(), c.end());
    });
    if (it == entries_.end() || !std::equal(it->context.begin(), it->context.end(), context.begin(), context.end()))
        return std::nullopt;
    return static_cast<std::size_t>(it - entries_.begin());
}

namespace {

constexpr long kNone = -1;

/// Deterministic transition structure: delta[s * k + x] is the successor or
/// kNone.
struct Topology {
    std::size_t n_states = 0;
    std::vector<long> delta;
};

struct PathFit {
    bool feasible = false;
    double log_likelihood = 0.0;
    std::size_t parameters = 0;
    std::size_t visited = 0;
    std::size_t start = 0;
};

PathFit fit_path(const Topology& top, std::size_t k, std::span<const Symbol> data, std::size_t start) {
    PathFit fit;
    fit.start = start;
    std::vector<std::uint64_t> counts(top.n_states * k, 0);
    long state = static_cast<long>(start);
    for (Symbol x : data) {
        const long next = top.delta[static_cast<std::size_t>(state) * k + x];
        if (next == kNone) return fit;
        ++counts[static_cast<std::size_t>(state) * k + x];
        state = next;
    }
    fit.feasible = true;
    for (std::size_t s = 0; s < top.n_states; ++s) {
        std::uint64_t total = 0;
        std::size_t used = 0;
        for (std::size_t x = 0; x < k; ++x) {
            total += counts[s * k + x];
            if (counts[s * k + x] > 0) ++used;
        }
        if (total == 0) continue;
        ++fit.visited;
        fit.parameters += used - 1;
        for (std::size_t x = 0; x < k; ++x) {
            const double c = static_cast<double>(counts[s * k + x]);
            if (c > 0) fit.log_likelihood += c * std::log(c / static_cast<double>(total));
        }
    }
    return fit;
}

struct Scored {
    PathFit fit;
    double bic = std::numeric_limits<double>::infinity();
    std::size_t order = 0;
};

/// Best start state of a topology by BIC.
Scored score_topology(const Topology& top, std::size_t k, std::span<const Symbol> data, std::size_t order,
                      std::size_t max_starts) {
    Scored best;
    best.order = order;
    const double log_n = std::log(static_cast<double>(std::max<std::size_t>(data.size(), 2)));
    for (std::size_t s = 0; s < std::min(top.n_states, max_starts); ++s) {
        PathFit fit = fit_path(top, k, data, s);
        if (!fit.feasible) continue;
        const double bic = -2.0 * fit.log_likelihood + static_cast<double>(fit.parameters) * log_n;
        if (bic < best.bic) {
            best.fit = fit;
            best.bic = bic;
        }
    }
    return best;
}

bool better(const Scored& a, const Scored& b) {
    constexpr double kTie = 1e-6;
    if (a.bic < b.bic - kTie) return true;
    if (a.bic > b.bic + kTie) return false;
    if (a.fit.visited != b.fit.visited) return a.fit.visited < b.fit.visited;
    return a.order < b.order;
}

std::vector<Topology> enumerate_topologies(std::size_t k, std::size_t budget) {
    std::vector<Topology> out;
    for (std::size_t n = 1;; ++n) {
        const std::size_t slots = n * k;
        double count = std::pow(static_cast<double>(n + 1), static_cast<double>(slots));
        if (static_cast<double>(out.size()) + count > static_cast<double>(budget)) break;
        std::vector<long> digits(slots, 0);
        for (std::uint64_t code = 0; code < static_cast<std::uint64_t>(count); ++code) {
            std::uint64_t c = code;
            for (std::size_t i = slots; i-- > 0;) {
                digits[i] = static_cast<long>(c % (n + 1)) - 1;
                c /= n + 1;
            }
            bool every_state_emits = true;
            for (std::size_t s = 0; s < n && every_state_emits; ++s)
                every_state_emits = std::any_of(digits.begin() + static_cast<long>(s * k),
                                                digits.begin() + static_cast<long>((s + 1) * k),
                                                [](long d) { return d != kNone; });
            if (every_state_emits) out.push_back(Topology{n, digits});
        }
    }
    return out;
}

struct Clustering {
    std::vector<std::size_t> retained;               // indices into entries
    std::vector<std::size_t> cluster_of;             // per retained context
    std::size_t n_clusters = 0;
    Topology topology;
    std::vector<std::string> notes;
};

Clustering cluster_contexts(const ContextModel& model, const EmpiricalOptions& options) {
    Clustering cl;
    const auto& entries = model.entries();
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (entries[i].occurrences >= options.min_count) cl.retained.push_back(i);
    if (cl.retained.empty())
        throw InsufficientData("no context of length " + std::to_string(model.l_ctx()) + " occurs " +
                               std::to_string(options.min_count) + " times");

    const std::size_t m = cl.retained.size();
    const double log_term = std::log(1.0 / options.significance);
    std::vector<std::vector<std::size_t>> links(m);
    parallel_for(m, [&](std::size_t a) {
        const auto& ea = entries[cl.retained[a]];
        for (std::size_t b = a + 1; b < m; ++b) {
            const auto& eb = entries[cl.retained[b]];
            const double n_min = static_cast<double>(std::min(ea.occurrences, eb.occurrences));
            const double threshold = std::max(options.min_threshold, 2.0 * std::sqrt(log_term / n_min));
            double d = 0.0;
            for (std::size_t f = 0; f < ea.future_counts.size() && d <= threshold; ++f)
                d = std::max(d, std::abs(static_cast<double>(ea.future_counts[f]) / ea.occurrences -
                                         static_cast<double>(eb.future_counts[f]) / eb.occurrences));
            if (d <= threshold) links[a].push_back(b);
        }
    });
    std::vector<std::size_t> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    auto root = [&](std::size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b : links[a]) {
            const std::size_t ra = root(a), rb = root(b);
            if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
        }
    std::map<std::size_t, std::size_t> number;
    cl.cluster_of.resize(m);
    for (std::size_t a = 0; a < m; ++a) {
        auto [it, inserted] = number.try_emplace(root(a), number.size());
        cl.cluster_of[a] = it->second;
    }
    cl.n_clusters = number.size();

    // Successor cluster by majority of suffix-extension counts.
    const std::size_t k = model.n_symbols();
    std::vector<std::map<std::size_t, std::uint64_t>> votes(cl.n_clusters * k);
    for (std::size_t a = 0; a < m; ++a) {
        const auto& e = entries[cl.retained[a]];
        for (Symbol x = 0; x < k; ++x) {
            if (e.next_counts[x] == 0) continue;
            Word extended(e.context.begin() + (e.context.empty() ? 0 : 1), e.context.end());
            extended.push_back(x);
            if (model.l_ctx() == 0) extended.clear();
            const auto target = model.find(extended);
            if (!target) continue;
            const auto pos = std::lower_bound(cl.retained.begin(), cl.retained.end(), *target);
            if (pos == cl.retained.end() || *pos != *target) continue;
            votes[cl.cluster_of[a] * k + x][cl.cluster_of[static_cast<std::size_t>(pos - cl.retained.begin())]] +=
                e.next_counts[x];
        }
    }
    cl.topology.n_states = cl.n_clusters;
    cl.topology.delta.assign(cl.n_clusters * k, kNone);
    std::size_t inconsistent = 0;
    for (std::size_t slot = 0; slot < votes.size(); ++slot) {
        if (votes[slot].empty()) continue;
        auto best = std::max_element(votes[slot].begin(), votes[slot].end(),
                                     [](const auto& a, const auto& b) { return a.second < b.second; });
        cl.topology.delta[slot] = static_cast<long>(best->first);
        if (votes[slot].size() > 1) {
            ++inconsistent;
            std::uint64_t minority = 0;
            for (const auto& [c, w] : votes[slot])
                if (c != best->first) minority += w;
            cl.notes.push_back("inconsistent transition: cluster " + std::to_string(slot / k) + " symbol " +
                               std::to_string(slot % k) + " resolved to cluster " + std::to_string(best->first) +
                               " (minority weight " + std::to_string(minority) + ")");
        }
    }
    cl.notes.insert(cl.notes.begin(), "inconsistent transitions: " + std::to_string(inconsistent));
    return cl;
}

}  // namespace

ReconstructedMachine reconstruct_empirical(const Alphabet& alphabet, std::span<const Symbol> symbols,
                                           const EmpiricalOptions& options) {
    const std::size_t k = alphabet.size();
    if (!(options.significance > 0.0 && options.significance < 1.0))
        throw DomainError("significance must lie in (0,1)");
    if (options.min_count == 0) throw DomainError("min_count must be positive");

    std::vector<std::string> report{"provenance: empirical"};
    report.push_back("sample length: " + std::to_string(symbols.size()));
    const double recommended = 10.0 * std::pow(static_cast<double>(k), static_cast<double>(options.l_ctx + options.l_fut));
    if (static_cast<double>(symbols.size()) < recommended)
        report.push_back("warning: sample shorter than 10*|X|^(L_ctx+L_fut); estimates may be unreliable");

    const ContextModel model(symbols, k, options.l_ctx, options.l_fut);
    Clustering clustering = cluster_contexts(model, options);
    report.push_back("contexts observed: " + std::to_string(model.entries().size()) + ", retained: " +
                     std::to_string(clustering.retained.size()));
    report.push_back("context clusters: " + std::to_string(clustering.n_clusters));
    report.insert(report.end(), clustering.notes.begin(), clustering.notes.end());

    const std::size_t prefix_len =
        options.selection_prefix == 0 ? symbols.size() : std::min(options.selection_prefix, symbols.size());
    const auto prefix = symbols.first(prefix_len);

    std::vector<Topology> candidates{clustering.topology};
    auto enumerated = enumerate_topologies(k, options.topology_budget);
    candidates.insert(candidates.end(), std::make_move_iterator(enumerated.begin()),
                      std::make_move_iterator(enumerated.end()));
    constexpr std::size_t kMaxStarts = 64;
    std::vector<Scored> scores(candidates.size());
    parallel_for(candidates.size(),
                 [&](std::size_t i) { scores[i] = score_topology(candidates[i], k, prefix, i, kMaxStarts); });
    std::size_t winner = 0;
    for (std::size_t i = 1; i < scores.size(); ++i)
        if (better(scores[i], scores[winner])) winner = i;
    if (!std::isfinite(scores[winner].bic))
        throw InsufficientData("no candidate topology explains the sample");
    report.push_back("topologies compared: " + std::to_string(candidates.size()) + " on a prefix of " +
                     std::to_string(prefix_len) + " symbols");
    report.push_back(std::string("selected: ") + (winner == 0 ? "context clusters" : "enumerated topology") +
                     " with " + std::to_string(scores[winner].fit.visited) + " visited states, BIC " +
                     io::format_double(scores[winner].bic, 10));

    // Re-estimate on the full sample along the winner's path.
    const Topology& top = candidates[winner];
    std::vector<std::size_t> path;
    path.reserve(symbols.size() + 1);
    std::size_t state = scores[winner].fit.start;
    path.push_back(state);
    for (Symbol x : symbols) {
        const long next = top.delta[state * k + x];
        if (next == kNone) throw InsufficientData("selected topology cannot follow the full sample");
        state = static_cast<std::size_t>(next);
        path.push_back(state);
    }
    graph::Adjacency adjacency(top.n_states);
    for (std::size_t t = 0; t < symbols.size(); ++t) adjacency[path[t]].push_back(path[t + 1]);
    for (auto& row : adjacency) {
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }
    // The path ends in the closed component it eventually enters.
    std::vector<std::size_t> component;
    for (auto& c : graph::strongly_connected_components(adjacency))
        if (std::find(c.begin(), c.end(), path.back()) != c.end()) component = c;
    std::vector<long> index(top.n_states, kNone);
    for (std::size_t i = 0; i < component.size(); ++i) index[component[i]] = static_cast<long>(i);
    std::size_t entry = 0;
    while (index[path[entry]] == kNone) ++entry;

    std::vector<std::uint64_t> counts(component.size() * k, 0);
    std::vector<std::uint64_t> departures(component.size(), 0);
    for (std::size_t t = entry; t < symbols.size(); ++t) {
        const auto s = static_cast<std::size_t>(index[path[t]]);
        ++counts[s * k + symbols[t]];
        ++departures[s];
    }
    const double total = static_cast<double>(symbols.size() - entry);
    if (total <= 0) throw InsufficientData("sample too short to estimate transitions");
    std::vector<Edge> edges;
    RowVector mu(static_cast<Eigen::Index>(component.size()));
    for (std::size_t s = 0; s < component.size(); ++s) {
        mu(static_cast<Eigen::Index>(s)) = static_cast<double>(departures[s]) / total;
        for (Symbol x = 0; x < k; ++x) {
            if (counts[s * k + x] == 0) continue;
            const auto to = static_cast<std::size_t>(index[static_cast<std::size_t>(top.delta[component[s] * k + x])]);
            edges.push_back({s, x, static_cast<double>(counts[s * k + x]) / static_cast<double>(departures[s]), to});
        }
    }
    report.push_back("states: " + std::to_string(component.size()) + " (transient prefix of " +
                     std::to_string(entry) + " symbols dropped)");
    for (std::size_t s = 0; s < component.size(); ++s)
        report.push_back("state " + std::to_string(s) + ": mu=" + io::format_double(mu(static_cast<Eigen::Index>(s)), 8) +
                         " visits=" + std::to_string(departures[s]));
    return ReconstructedMachine{Machine(component.size(), alphabet, std::move(edges)), std::move(mu),
                                Provenance::Empirical, std::move(report)};
}

}  // namespace emach
