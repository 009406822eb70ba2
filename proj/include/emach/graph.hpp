#pragma once

#include <cstddef>
#include <vector>

namespace emach::graph {

using Adjacency = std::vector<std::vector<std::size_t>>;

/// Tarjan's algorithm, iterative. Components come out in reverse
/// topological order of the condensation (sinks first); vertices inside a
/// component are sorted ascending.
std::vector<std::vector<std::size_t>> strongly_connected_components(const Adjacency& graph);

/// Components with no edge leaving them.
std::vector<std::vector<std::size_t>> closed_components(const Adjacency& graph);

/// Vertices reachable from any of the seeds (seeds included).
std::vector<bool> reachable_from(const Adjacency& graph, const std::vector<std::size_t>& seeds);

Adjacency reversed(const Adjacency& graph);

/// True when the component has an internal edge (size > 1 or a self-loop).
bool has_cycle(const Adjacency& graph, const std::vector<std::size_t>& component);

}  // namespace emach::graph
