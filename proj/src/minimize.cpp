#include "emach/minimize.hpp"

#include <cmath>
#include <string>

namespace emach {

QuotientMap minimize_unifilar(const Machine& machine, double tolerance) {
    if (!machine.unifilar()) throw NotUnifilar("minimization needs a unifilar machine");
    if (!is_irreducible(machine).irreducible) throw NotIrreducible("minimization needs an irreducible machine");

    StatePartition partition = distinctness_partition(machine, tolerance);
    const std::size_t k = machine.n_symbols();
    std::vector<StateIndex> class_of(machine.n_states());
    for (StateIndex s = 0; s < machine.n_states(); ++s) class_of[s] = partition.block_of(s);

    std::vector<Edge> edges;
    for (std::size_t b = 0; b < partition.size(); ++b) {
        const auto& block = partition.block(b);
        const StateIndex rep = block.front();
        for (StateIndex s : block) {
            for (Symbol x = 0; x < k; ++x) {
                const auto ns = machine.successor(s, x);
                const auto nr = machine.successor(rep, x);
                const bool probs_agree = std::abs(machine.symbol_prob(s, x) - machine.symbol_prob(rep, x)) <= tolerance;
                const bool heads_agree = ns.has_value() == nr.has_value() && (!ns || class_of[*ns] == class_of[*nr]);
                if (!probs_agree || !heads_agree)
                    throw InconsistentBlock("states " + std::to_string(rep) + " and " + std::to_string(s) +
                                            " share a block but disagree on symbol " + machine.alphabet().name(x));
            }
        }
        for (std::size_t idx : machine.outgoing(rep)) {
            const Edge& e = machine.edges()[idx];
            edges.push_back({b, e.symbol, e.probability, class_of[e.to]});
        }
    }
    Machine target(partition.size(), machine.alphabet(), std::move(edges));
    return QuotientMap{machine, std::move(partition), std::move(target), std::move(class_of)};
}

}  // namespace emach
