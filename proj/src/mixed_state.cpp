#include "emach/mixed_state.hpp"

#include <algorithm>
#include <cmath>

#include "emach/axioms.hpp"
#include "emach/parallel.hpp"
#include "emach/simulate.hpp"

namespace emach {

RowVector belief_update(const Machine& machine, const RowVector& phi, Symbol x) {
    if (x >= machine.n_symbols()) throw DomainError("symbol outside the alphabet");
    RowVector next = phi * machine.symbol_matrix(x);
    double total = next.sum();
    if (!(total > 0.0)) throw ImpossibleSymbol("symbol " + machine.alphabet().name(x) + " has probability 0");
    next /= total;
    bool snapped = false;
    for (Eigen::Index i = 0; i < next.size(); ++i) {
        if (next(i) != 0.0 && next(i) < kBeliefSnap) {
            next(i) = 0.0;
            snapped = true;
        }
    }
    if (snapped) next /= next.sum();
    return next;
}

RowVector belief_of_word(const Machine& machine, std::span<const Symbol> word) {
    const RowVector pi = stationary_distribution(machine);
    RowVector phi = pi;
    try {
        for (Symbol x : word) phi = belief_update(machine, phi, x);
    } catch (const ImpossibleSymbol&) {
        return pi;
    }
    return phi;
}

SyncQuantities sync_quantities(const RowVector& phi) {
    if (phi.size() == 0) throw DomainError("empty belief state");
    SyncQuantities q;
    q.p_best = phi(0);
    for (Eigen::Index i = 1; i < phi.size(); ++i) {
        if (phi(i) > q.p_best) {
            q.p_best = phi(i);
            q.best_state = static_cast<StateIndex>(i);
        }
    }
    double rest = 0.0;
    for (Eigen::Index i = 0; i < phi.size(); ++i)
        if (static_cast<StateIndex>(i) != q.best_state) rest += phi(i);
    q.doubt = std::clamp(rest, 0.0, 1.0);
    return q;
}

namespace {

double pairwise_sum(const double* data, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += data[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

}  // namespace

DecayEstimate estimate_decay(const Machine& machine, const DecayOptions& options) {
    if (options.n_chains == 0) throw DomainError("n_chains must be positive");
    if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
    if (!is_generator_em(machine).is_generator()) throw NotGenerator("decay estimate needs a generator epsilon-machine");

    const std::size_t width = options.horizon + 1;
    const RowVector pi = stationary_distribution(machine);
    // doubts[t * n_chains + c]
    std::vector<double> doubts(width * options.n_chains, 0.0);
    parallel_for(options.n_chains, [&](std::size_t c) {
        const SampleRun run = sample_path(machine, StationaryStart{}, options.horizon,
                                          substream_seed(options.seed, c));
        RowVector phi = pi;
        doubts[c] = sync_quantities(phi).doubt;
        for (std::size_t t = 1; t < width; ++t) {
            phi = belief_update(machine, phi, run.symbols[t - 1]);
            doubts[t * options.n_chains + c] = sync_quantities(phi).doubt;
        }
    });

    DecayEstimate estimate;
    estimate.horizon = options.horizon;
    estimate.n_chains = options.n_chains;
    estimate.alpha = options.alpha;
    const double chains = static_cast<double>(options.n_chains);
    std::vector<double> xs, ys;
    for (std::size_t t = 0; t < width; ++t) {
        const double* column = doubts.data() + t * options.n_chains;
        const double threshold = std::pow(options.alpha, static_cast<double>(t));
        std::size_t exceed = 0, unsynced = 0;
        for (std::size_t c = 0; c < options.n_chains; ++c) {
            if (column[c] > threshold) ++exceed;
            if (column[c] > 0.0) ++unsynced;
        }
        DecayPoint point{t, pairwise_sum(column, options.n_chains) / chains, exceed / chains, unsynced / chains};
        if (point.mean_doubt > 0.0) {
            xs.push_back(static_cast<double>(t));
            ys.push_back(std::log(point.mean_doubt));
        }
        estimate.points.push_back(point);
    }
    if (xs.size() >= 2) {
        const double n = static_cast<double>(xs.size());
        double sx = 0, sy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sx += xs[i];
            sy += ys[i];
        }
        const double mx = sx / n, my = sy / n;
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxy += (xs[i] - mx) * (ys[i] - my);
            sxx += (xs[i] - mx) * (xs[i] - mx);
        }
        estimate.decay_rate = sxy / sxx;
        estimate.alpha_hat = std::exp(*estimate.decay_rate);
    }
    return estimate;
}

}  // namespace emach
