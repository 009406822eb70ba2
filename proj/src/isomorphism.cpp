#include "emach/isomorphism.hpp"

#include <cmath>
#include <deque>
#include <limits>

#include "emach/axioms.hpp"

namespace emach {

namespace {

constexpr std::size_t kUnmapped = std::numeric_limits<std::size_t>::max();

void require_contract(const Machine& m, const char* which) {
    if (!m.unifilar()) throw NotUnifilar(std::string("isomorphism needs unifilar machines (") + which + ")");
    if (!is_irreducible(m).irreducible)
        throw NotIrreducible(std::string("isomorphism needs irreducible machines (") + which + ")");
}

std::optional<std::vector<StateIndex>> try_anchor(const Machine& a, const Machine& b,
                                                  const std::vector<Symbol>& symbol_map, StateIndex anchor,
                                                  double tolerance) {
    const std::size_t n = a.n_states();
    std::vector<StateIndex> forward(n, kUnmapped), backward(n, kUnmapped);
    std::deque<StateIndex> queue;
    forward[0] = anchor;
    backward[anchor] = 0;
    queue.push_back(0);
    while (!queue.empty()) {
        const StateIndex i = queue.front();
        queue.pop_front();
        const StateIndex j = forward[i];
        for (Symbol x = 0; x < a.n_symbols(); ++x) {
            const Symbol y = symbol_map[x];
            const double pa = a.symbol_prob(i, x);
            const double pb = b.symbol_prob(j, y);
            if (std::abs(pa - pb) > tolerance) return std::nullopt;
            const auto na = a.successor(i, x);
            const auto nb = b.successor(j, y);
            if (!na || !nb) continue;
            if (forward[*na] == kUnmapped && backward[*nb] == kUnmapped) {
                forward[*na] = *nb;
                backward[*nb] = *na;
                queue.push_back(*na);
            } else if (forward[*na] != *nb || backward[*nb] != *na) {
                return std::nullopt;
            }
        }
    }
    for (StateIndex i = 0; i < n; ++i)
        if (forward[i] == kUnmapped) return std::nullopt;
    return forward;
}

}  // namespace

std::optional<Isomorphism> are_isomorphic(const Machine& a, const Machine& b, double tolerance) {
    require_contract(a, "first");
    require_contract(b, "second");
    if (a.n_states() != b.n_states() || a.n_symbols() != b.n_symbols()) return std::nullopt;

    std::vector<Symbol> symbol_map(a.n_symbols());
    for (Symbol x = 0; x < a.n_symbols(); ++x) {
        const auto y = b.alphabet().find(a.alphabet().name(x));
        if (!y) return std::nullopt;
        symbol_map[x] = *y;
    }
    for (StateIndex anchor = 0; anchor < b.n_states(); ++anchor) {
        if (auto mapping = try_anchor(a, b, symbol_map, anchor, tolerance)) return Isomorphism{std::move(*mapping)};
    }
    return std::nullopt;
}

}  // namespace emach
