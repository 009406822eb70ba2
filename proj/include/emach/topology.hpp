#pragma once

#include <optional>
#include <span>
#include <vector>

#include "emach/isomorphism.hpp"
#include "emach/machine.hpp"

namespace emach {

struct Arc {
    std::size_t from = 0;
    Symbol symbol = 0;
    std::size_t to = 0;
    bool operator==(const Arc&) const = default;
    auto operator<=>(const Arc&) const = default;
};

/// Symbol-labeled directed graph without probabilities. Arcs are kept
/// sorted and deduplicated.
struct LabeledGraph {
    std::size_t n_vertices = 0;
    Alphabet alphabet;
    std::vector<Arc> arcs;
};

LabeledGraph make_graph(std::size_t n_vertices, Alphabet alphabet, std::vector<Arc> arcs);

/// One arc per positive-probability edge.
LabeledGraph strip_probabilities(const Machine& machine);

/// Keeps vertices that can be reached from a cycle and can reach a cycle,
/// renumbered in ascending order, with their induced arcs.
LabeledGraph trim_essential(const LabeledGraph& graph);

/// Deterministic automaton; every state accepts and missing transitions
/// reject.
struct Dfa {
    std::size_t n_states = 0;
    Alphabet alphabet;
    std::size_t start = 0;
    /// next[s][x], nullopt for a missing transition.
    std::vector<std::vector<std::optional<std::size_t>>> next;
    /// Graph vertices of the subset each state was built from.
    std::vector<std::vector<std::size_t>> subsets;
};

/// Subset construction from the set of all vertices followed by Moore
/// minimization. States are numbered in breadth-first order from the start.
Dfa minimal_dfa(const LabeledGraph& graph);

bool accepts(const Dfa& dfa, std::span<const Symbol> word);

/// Moore refinement of the DFA's own states; minimal iff all blocks are
/// singletons.
std::vector<std::vector<std::size_t>> dfa_state_classes(const Dfa& dfa);

LabeledGraph dfa_graph(const Dfa& dfa);

/// Unique closed strongly connected component of the DFA, with induced arcs.
/// Throws NotIrreducibleShift when there are several.
LabeledGraph fischer_cover(const Dfa& dfa);

struct KriegerStates {
    /// DFA states reachable from the start that lie on or below a cycle.
    std::vector<std::size_t> states;
    LabeledGraph graph;
};

KriegerStates krieger_states(const Dfa& dfa);

/// Machine with every arc at probability 1, for reuse of machine algorithms.
Machine as_unit_machine(const LabeledGraph& graph);

/// Label-preserving isomorphism of right-resolving, strongly connected
/// graphs.
std::optional<Isomorphism> label_isomorphic(const LabeledGraph& a, const LabeledGraph& b);

}  // namespace emach
