#include "emach/topology.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "emach/graph.hpp"

namespace emach {

namespace {

graph::Adjacency adjacency_of(const LabeledGraph& g) {
    graph::Adjacency adj(g.n_vertices);
    for (const Arc& a : g.arcs) adj[a.from].push_back(a.to);
    for (auto& row : adj) {
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }
    return adj;
}

LabeledGraph induced(const LabeledGraph& g, const std::vector<std::size_t>& keep) {
    std::vector<std::size_t> index(g.n_vertices, g.n_vertices);
    for (std::size_t i = 0; i < keep.size(); ++i) index[keep[i]] = i;
    std::vector<Arc> arcs;
    for (const Arc& a : g.arcs)
        if (index[a.from] < g.n_vertices && index[a.to] < g.n_vertices) arcs.push_back({index[a.from], a.symbol, index[a.to]});
    return make_graph(keep.size(), g.alphabet, std::move(arcs));
}

std::vector<bool> on_cycle(const graph::Adjacency& adj) {
    std::vector<bool> cyclic(adj.size(), false);
    for (const auto& c : graph::strongly_connected_components(adj))
        if (graph::has_cycle(adj, c))
            for (std::size_t v : c) cyclic[v] = true;
    return cyclic;
}

std::vector<std::size_t> indices_of(const std::vector<bool>& mask) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i]) out.push_back(i);
    return out;
}

}  // namespace

LabeledGraph make_graph(std::size_t n_vertices, Alphabet alphabet, std::vector<Arc> arcs) {
    for (const Arc& a : arcs)
        if (a.from >= n_vertices || a.to >= n_vertices || a.symbol >= alphabet.size())
            throw IndexError("arc refers to a missing vertex or symbol");
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
    return LabeledGraph{n_vertices, std::move(alphabet), std::move(arcs)};
}

LabeledGraph strip_probabilities(const Machine& machine) {
    std::vector<Arc> arcs;
    for (const Edge& e : machine.edges())
        if (e.probability > 0.0) arcs.push_back({e.from, e.symbol, e.to});
    return make_graph(machine.n_states(), machine.alphabet(), std::move(arcs));
}

LabeledGraph trim_essential(const LabeledGraph& g) {
    const auto adj = adjacency_of(g);
    const auto cyclic = indices_of(on_cycle(adj));
    const auto forward = graph::reachable_from(adj, cyclic);
    const auto backward = graph::reachable_from(graph::reversed(adj), cyclic);
    std::vector<bool> keep(g.n_vertices);
    for (std::size_t v = 0; v < g.n_vertices; ++v) keep[v] = forward[v] && backward[v];
    return induced(g, indices_of(keep));
}

std::vector<std::vector<std::size_t>> dfa_state_classes(const Dfa& dfa) {
    const std::size_t n = dfa.n_states;
    const std::size_t k = dfa.alphabet.size();
    constexpr std::size_t missing = static_cast<std::size_t>(-1);
    std::vector<std::size_t> block(n, 0);
    std::size_t n_blocks = n == 0 ? 0 : 1;
    for (;;) {
        std::map<std::vector<std::size_t>, std::size_t> number;
        std::vector<std::size_t> next(n);
        for (std::size_t s = 0; s < n; ++s) {
            std::vector<std::size_t> sig{block[s]};
            for (Symbol x = 0; x < k; ++x) sig.push_back(dfa.next[s][x] ? block[*dfa.next[s][x]] : missing);
            next[s] = number.try_emplace(std::move(sig), number.size()).first->second;
        }
        block = std::move(next);
        if (number.size() == n_blocks) break;
        n_blocks = number.size();
    }
    std::vector<std::vector<std::size_t>> classes(n_blocks);
    for (std::size_t s = 0; s < n; ++s) classes[block[s]].push_back(s);
    return classes;
}

Dfa minimal_dfa(const LabeledGraph& g) {
    const std::size_t k = g.alphabet.size();
    Dfa raw;
    raw.alphabet = g.alphabet;
    if (g.n_vertices == 0) return raw;

    std::vector<std::vector<std::vector<std::size_t>>> moves(g.n_vertices, std::vector<std::vector<std::size_t>>(k));
    for (const Arc& a : g.arcs) moves[a.from][a.symbol].push_back(a.to);

    std::vector<std::size_t> all(g.n_vertices);
    for (std::size_t v = 0; v < g.n_vertices; ++v) all[v] = v;
    std::map<std::vector<std::size_t>, std::size_t> seen{{all, 0}};
    raw.subsets.push_back(all);
    raw.next.emplace_back(k);
    for (std::size_t s = 0; s < raw.subsets.size(); ++s) {
        for (Symbol x = 0; x < k; ++x) {
            std::vector<std::size_t> target;
            for (std::size_t v : raw.subsets[s]) target.insert(target.end(), moves[v][x].begin(), moves[v][x].end());
            std::sort(target.begin(), target.end());
            target.erase(std::unique(target.begin(), target.end()), target.end());
            if (target.empty()) continue;
            auto [it, inserted] = seen.try_emplace(target, raw.subsets.size());
            if (inserted) {
                raw.subsets.push_back(target);
                raw.next.emplace_back(k);
            }
            raw.next[s][x] = it->second;
        }
    }
    raw.n_states = raw.subsets.size();

    const auto classes = dfa_state_classes(raw);
    std::vector<std::size_t> class_of(raw.n_states);
    for (std::size_t c = 0; c < classes.size(); ++c)
        for (std::size_t s : classes[c]) class_of[s] = c;

    // Renumber minimized states breadth-first from the start.
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> order(classes.size(), unset);
    std::vector<std::size_t> representative;
    std::deque<std::size_t> queue{0};
    order[class_of[0]] = 0;
    representative.push_back(0);
    while (!queue.empty()) {
        const std::size_t s = queue.front();
        queue.pop_front();
        for (Symbol x = 0; x < k; ++x) {
            if (!raw.next[s][x]) continue;
            const std::size_t t = *raw.next[s][x];
            if (order[class_of[t]] != unset) continue;
            order[class_of[t]] = representative.size();
            representative.push_back(t);
            queue.push_back(t);
        }
    }
    Dfa dfa;
    dfa.alphabet = g.alphabet;
    dfa.n_states = representative.size();
    dfa.start = 0;
    for (std::size_t rep : representative) {
        dfa.subsets.push_back(raw.subsets[rep]);
        std::vector<std::optional<std::size_t>> row(k);
        for (Symbol x = 0; x < k; ++x)
            if (raw.next[rep][x]) row[x] = order[class_of[*raw.next[rep][x]]];
        dfa.next.push_back(std::move(row));
    }
    return dfa;
}

bool accepts(const Dfa& dfa, std::span<const Symbol> word) {
    if (dfa.n_states == 0) return false;
    std::size_t s = dfa.start;
    for (Symbol x : word) {
        if (x >= dfa.alphabet.size() || !dfa.next[s][x]) return false;
        s = *dfa.next[s][x];
    }
    return true;
}

LabeledGraph dfa_graph(const Dfa& dfa) {
    std::vector<Arc> arcs;
    for (std::size_t s = 0; s < dfa.n_states; ++s)
        for (Symbol x = 0; x < dfa.alphabet.size(); ++x)
            if (dfa.next[s][x]) arcs.push_back({s, x, *dfa.next[s][x]});
    return make_graph(dfa.n_states, dfa.alphabet, std::move(arcs));
}

LabeledGraph fischer_cover(const Dfa& dfa) {
    const LabeledGraph g = dfa_graph(dfa);
    auto closed = graph::closed_components(adjacency_of(g));
    if (closed.size() != 1)
        throw NotIrreducibleShift("automaton has " + std::to_string(closed.size()) + " terminal components");
    return induced(g, closed.front());
}

KriegerStates krieger_states(const Dfa& dfa) {
    const LabeledGraph g = dfa_graph(dfa);
    const auto adj = adjacency_of(g);
    const auto from_start = graph::reachable_from(adj, {dfa.start});
    const auto below_cycle = graph::reachable_from(adj, indices_of(on_cycle(adj)));
    std::vector<bool> keep(dfa.n_states);
    for (std::size_t s = 0; s < dfa.n_states; ++s) keep[s] = from_start[s] && below_cycle[s];
    KriegerStates out;
    out.states = indices_of(keep);
    out.graph = induced(g, out.states);
    return out;
}

Machine as_unit_machine(const LabeledGraph& g) {
    std::vector<Edge> edges;
    edges.reserve(g.arcs.size());
    for (const Arc& a : g.arcs) edges.push_back({a.from, a.symbol, 1.0, a.to});
    return Machine(g.n_vertices, g.alphabet, std::move(edges));
}

std::optional<Isomorphism> label_isomorphic(const LabeledGraph& a, const LabeledGraph& b) {
    return are_isomorphic(as_unit_machine(a), as_unit_machine(b), 0.0);
}

}  // namespace emach
