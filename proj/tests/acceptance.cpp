// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Every criterion also enforces its wall-clock budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "emach/axioms.hpp"
#include "emach/examples.hpp"
#include "emach/isomorphism.hpp"
#include "emach/minimize.hpp"
#include "emach/mixed_state.hpp"
#include "emach/reconstruct.hpp"
#include "emach/simulate.hpp"
#include "emach/topology.hpp"
#include "invariants.hpp"
#include "support.hpp"

using namespace emach;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool condition, const std::string& what) {
        if (!condition && ok) {
            ok = false;
            detail = what;
        }
    }
};

// Shared between the closure criterion and the criteria producing machines.
std::vector<ReconstructedMachine> g_analytic_outputs;
std::vector<ReconstructedMachine> g_empirical_outputs;

bool is_exactly(const Machine& m, bool irreducible, bool unifilar, std::optional<bool> distinct) {
    const auto r = is_generator_em(m);
    return r.irreducible == irreducible && r.unifilar == unifilar && r.probabilistically_distinct == distinct;
}

Outcome axiom_classification() {
    Outcome o;
    o.require(is_exactly(examples::even(0.5), true, true, true) && is_generator_em(examples::even(0.5)).is_generator(),
              "Even is not a generator");
    o.require(is_exactly(examples::abc(0.4, 0.6), true, true, true), "ABC is not a generator");
    const auto np2 = is_generator_em(examples::np2(0.5));
    o.require(np2.irreducible && np2.unifilar && np2.probabilistically_distinct == false, "NP2 flags wrong");
    const bool pair_ok = np2.indistinct_pair == std::pair<StateIndex, StateIndex>{0, 2} ||
                         np2.indistinct_pair == std::pair<StateIndex, StateIndex>{1, 3};
    o.require(pair_ok, "NP2 witness pair is not {s1,s3} or {s2,s4}");
    const auto sns = is_generator_em(examples::sns(0.5, 0.5));
    o.require(!sns.unifilar && !sns.is_generator(), "SNS reported unifilar");
    return o;
}

Outcome minimization() {
    Outcome o;
    for (double p : {0.3, 0.5, 0.7}) {
        const auto q = minimize_unifilar(examples::np2(p));
        o.require(q.target.n_states() == 2, "NP2 quotient does not have 2 states");
        o.require(are_isomorphic(q.target, examples::np2_minimal(p), 1e-12).has_value(),
                  "NP2 quotient not isomorphic to the two-state machine at p=" + std::to_string(p));
    }
    for (const Machine& m : {examples::even(0.5), examples::abc(0.4, 0.6)}) {
        const auto q = minimize_unifilar(m);
        o.require(are_isomorphic(q.target, m, 1e-12).has_value() && q.target.n_states() == m.n_states(),
                  "minimize changed a generator");
    }
    return o;
}

Outcome round_trip() {
    Outcome o;
    std::vector<Machine> inputs{examples::even(0.5), examples::abc(0.4, 0.6),
                                minimize_unifilar(examples::np2(0.5)).target};
    std::mt19937_64 rng(20240601);
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = 1 + static_cast<std::size_t>(i) % 6;
        const std::size_t k = 2 + static_cast<std::size_t>(i / 6) % 2;
        inputs.push_back(testing_support::random_generator(rng, n, k));
    }
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        auto r = reconstruct_analytic(inputs[i]);
        o.require(are_isomorphic(r.machine, inputs[i], 1e-6).has_value(),
                  "reconstruction of input " + std::to_string(i) + " is not isomorphic");
        g_analytic_outputs.push_back(std::move(r));
    }
    o.detail = o.ok ? std::to_string(inputs.size()) + " machines" : o.detail;
    return o;
}

Outcome empirical() {
    Outcome o;
    const std::size_t len = 1000000;
    const Alphabet bin({"0", "1"});
    const auto even_run = sample_path(examples::even(0.5), StationaryStart{}, len, 20240602);
    const auto table = empirical_word_probs(even_run.symbols, 2, 3);
    // The shortest forbidden Even word is 010; 101 has probability 1/12.
    o.require(table.count(Word{0, 1, 0}) == 0, "forbidden word 010 observed");
    auto even = reconstruct_empirical(bin, even_run.symbols);
    o.require(even.machine.n_states() == 2, "Even: " + std::to_string(even.machine.n_states()) + " states");
    if (even.machine.n_states() == 2)
        o.require(are_isomorphic(even.machine, examples::even(0.5), 0.01).has_value(),
                  "Even: edge probabilities off by more than 0.01");

    const auto abc_run = sample_path(examples::abc(0.4, 0.6), StationaryStart{}, len, 20240603);
    auto abc = reconstruct_empirical(bin, abc_run.symbols);
    o.require(abc.machine.n_states() == 2, "ABC: " + std::to_string(abc.machine.n_states()) + " states");
    if (abc.machine.n_states() == 2) {
        double lo = abc.machine.symbol_prob(0, 1), hi = abc.machine.symbol_prob(1, 1);
        if (lo > hi) std::swap(lo, hi);
        o.require(std::abs(lo - 0.4) <= 0.02 && std::abs(hi - 0.6) <= 0.02, "ABC: 1-probabilities off");
        o.require(abc.machine.successor(0, 0) == StateIndex{1} && abc.machine.successor(0, 1) == StateIndex{1} &&
                      abc.machine.successor(1, 0) == StateIndex{0} && abc.machine.successor(1, 1) == StateIndex{0},
                  "ABC: states do not alternate");
    }
    g_empirical_outputs.push_back(std::move(even));
    g_empirical_outputs.push_back(std::move(abc));
    return o;
}

Outcome closure() {
    Outcome o;
    o.require(!g_analytic_outputs.empty() && !g_empirical_outputs.empty(), "no reconstructions to check");
    auto check = [&](const ReconstructedMachine& r, double tol, const std::string& label) {
        o.require(is_generator_em(r.machine).is_generator(), label + " output is not a generator");
        const RowVector& mu = r.class_probability;
        const double residual = (mu * overall_matrix(r.machine) - mu).cwiseAbs().maxCoeff();
        o.require(residual <= tol && std::abs(mu.sum() - 1.0) <= 1e-9 && (mu.array() >= 0).all(),
                  label + " mu not stationary (residual " + std::to_string(residual) + ")");
    };
    for (const auto& r : g_analytic_outputs) check(r, 1e-9, "analytic");
    for (const auto& r : g_empirical_outputs) check(r, 1e-2, "empirical");
    return o;
}

Outcome synchronization() {
    Outcome o;
    const Machine even = examples::even(0.5);
    DecayOptions opt;
    opt.horizon = 20;
    opt.n_chains = 10000;
    opt.seed = 20240604;
    const auto est = estimate_decay(even, opt);
    const RowVector pi = stationary_distribution(even);
    for (std::size_t t = 0; t <= 20; ++t) {
        const double exact = word_prob_from(even, pi, Word(t, 1));
        const double se = std::sqrt(exact * (1.0 - exact) / static_cast<double>(opt.n_chains));
        const double observed = est.points[t].frac_unsynced;
        o.require(std::abs(observed - exact) <= 5.0 * se + 1e-15,
                  "t=" + std::to_string(t) + ": unsynced fraction " + std::to_string(observed) + " vs " +
                      std::to_string(exact));
    }
    o.require(est.decay_rate && *est.decay_rate < 0.0, "Even decay rate not negative");
    opt.horizon = 64;
    const auto abc = estimate_decay(examples::abc(0.4, 0.6), opt);
    o.require(abc.decay_rate && *abc.decay_rate < 0.0, "ABC decay rate not negative");
    return o;
}

Outcome sns_oracle() {
    Outcome o;
    for (double p : {0.3, 0.5, 0.7})
        for (double q : {0.3, 0.5, 0.7}) {
            const Machine sns = examples::sns(p, q);
            double previous = -1.0;
            for (std::size_t n = 1; n <= 30; ++n) {
                Word past{0};
                past.insert(past.end(), n, 1);
                const double qn = sns_belief_closed_form(p, q, n);
                const double from_belief = word_prob_from(sns, belief_of_word(sns, past), Word{0});
                o.require(std::abs(qn - from_belief) <= 1e-12, "q_n mismatch at n=" + std::to_string(n));
                o.require(qn > previous, "q_n not increasing at n=" + std::to_string(n));
                previous = qn;
            }
        }
    AnalyticOptions opt;
    opt.class_cap = 20;
    bool exploded = false;
    try {
        reconstruct_analytic(examples::sns(0.5, 0.5), opt);
    } catch (const ClassExplosion&) {
        exploded = true;
    }
    o.require(exploded, "SNS reconstruction did not report ClassExplosion");
    return o;
}

Outcome topology() {
    Outcome o;
    auto dfa_of = [](const Machine& m) { return minimal_dfa(trim_essential(strip_probabilities(m))); };
    const Dfa even = dfa_of(examples::even(0.5));
    o.require(even.n_states == 3, "Even DFA has " + std::to_string(even.n_states) + " states");
    o.require(label_isomorphic(fischer_cover(even), strip_probabilities(examples::even(0.5))).has_value(),
              "Even Fischer cover differs from the stripped machine");
    o.require(fischer_cover(dfa_of(examples::abc(0.4, 0.6))).n_vertices == 1, "ABC Fischer cover not one state");
    for (const Machine& m : {examples::even(0.5), examples::abc(0.4, 0.6), examples::np2(0.5)}) {
        const Dfa dfa = dfa_of(m);
        for (const Word& w : testing_support::all_words(2, 8))
            o.require(accepts(dfa, w) == (word_prob_stationary(m, w) > 0.0), "DFA language mismatch");
    }
    return o;
}

Outcome invariants() {
    Outcome o;
    testing_support::InvariantTally tally;
    std::vector<Machine> machines;
    for (const auto& name : examples::names()) {
        const bool two = name == "abc" || name == "sns";
        machines.push_back(examples::by_name(name, two ? std::vector<double>{0.4, 0.6} : std::vector<double>{0.5}));
        machines.push_back(examples::by_name(name, two ? std::vector<double>{0.3, 0.8} : std::vector<double>{0.3}));
    }
    for (const Machine& m : machines) {
        testing_support::check_word_facts(m, 8, tally);
        if (!m.unifilar()) continue;  // SNS has no finite history machine.
        testing_support::check_reconstruction(m, reconstruct_analytic_detailed(m), 8, tally);
    }
    o.require(tally.failures == 0, tally.first_failure);
    o.detail = o.ok ? std::to_string(tally.checks) + " checks" : o.detail;
    return o;
}

struct Criterion {
    const char* id;
    const char* name;
    double budget_seconds;
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"AC1", "axiom classification of the four examples", 1.0, axiom_classification},
        {"AC2", "minimization of NP2 and identity on generators", 1.0, minimization},
        {"AC3", "analytic round trip on examples and 200 random generators", 60.0, round_trip},
        {"AC6", "empirical reconstruction of Even and ABC", 60.0, empirical},
        {"AC4", "closure of analytic and empirical outputs", 1.0, closure},
        {"AC5", "synchronization profile at desk scale", 30.0, synchronization},
        {"AC7", "SNS belief oracle and class explosion", 5.0, sns_oracle},
        {"AC8", "minimal DFA, Fischer cover and DFA language", 5.0, topology},
        {"AC9", "word-probability invariants to length 8", 30.0, invariants},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (o.ok && seconds > c.budget_seconds) {
            o.ok = false;
            o.detail = "over time budget of " + std::to_string(c.budget_seconds) + " s";
        }
        if (!o.ok) ++failures;
        std::printf("%s %s  %s (%.2f s)%s%s\n", c.id, o.ok ? "PASS" : "FAIL", c.name, seconds,
                    o.detail.empty() ? "" : ": ", o.detail.c_str());
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
