#include "emach/graph.hpp"

#include <algorithm>
#include <limits>

namespace emach::graph {

std::vector<std::vector<std::size_t>> strongly_connected_components(const Adjacency& graph) {
    constexpr std::size_t unvisited = std::numeric_limits<std::size_t>::max();
    const std::size_t n = graph.size();
    std::vector<std::size_t> index(n, unvisited), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> components;
    std::size_t counter = 0;

    struct Frame {
        std::size_t vertex;
        std::size_t next_child;
    };
    std::vector<Frame> call;

    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unvisited) continue;
        call.push_back({root, 0});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;

        while (!call.empty()) {
            Frame& frame = call.back();
            const std::size_t v = frame.vertex;
            if (frame.next_child < graph[v].size()) {
                const std::size_t w = graph[v][frame.next_child++];
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                std::vector<std::size_t> component;
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    component.push_back(w);
                } while (w != v);
                std::sort(component.begin(), component.end());
                components.push_back(std::move(component));
            }
            call.pop_back();
            if (!call.empty()) {
                const std::size_t parent = call.back().vertex;
                low[parent] = std::min(low[parent], low[v]);
            }
        }
    }
    return components;
}

std::vector<std::vector<std::size_t>> closed_components(const Adjacency& graph) {
    auto components = strongly_connected_components(graph);
    std::vector<std::size_t> component_of(graph.size());
    for (std::size_t c = 0; c < components.size(); ++c)
        for (std::size_t v : components[c]) component_of[v] = c;

    std::vector<std::vector<std::size_t>> closed;
    for (std::size_t c = 0; c < components.size(); ++c) {
        bool leaves = false;
        for (std::size_t v : components[c])
            for (std::size_t w : graph[v])
                if (component_of[w] != c) leaves = true;
        if (!leaves) closed.push_back(components[c]);
    }
    std::sort(closed.begin(), closed.end());
    return closed;
}

std::vector<bool> reachable_from(const Adjacency& graph, const std::vector<std::size_t>& seeds) {
    std::vector<bool> seen(graph.size(), false);
    std::vector<std::size_t> todo;
    for (std::size_t s : seeds) {
        if (!seen[s]) {
            seen[s] = true;
            todo.push_back(s);
        }
    }
    while (!todo.empty()) {
        const std::size_t v = todo.back();
        todo.pop_back();
        for (std::size_t w : graph[v]) {
            if (!seen[w]) {
                seen[w] = true;
                todo.push_back(w);
            }
        }
    }
    return seen;
}

Adjacency reversed(const Adjacency& graph) {
    Adjacency out(graph.size());
    for (std::size_t v = 0; v < graph.size(); ++v)
        for (std::size_t w : graph[v]) out[w].push_back(v);
    return out;
}

bool has_cycle(const Adjacency& graph, const std::vector<std::size_t>& component) {
    if (component.size() > 1) return true;
    if (component.empty()) return false;
    const std::size_t v = component.front();
    return std::find(graph[v].begin(), graph[v].end(), v) != graph[v].end();
}

}  // namespace emach::graph
