#include <doctest.h>

#include <random>

#include "emach/axioms.hpp"
#include "emach/examples.hpp"
#include "emach/isomorphism.hpp"
#include "emach/minimize.hpp"
#include "emach/mixed_state.hpp"
#include "emach/reconstruct.hpp"
#include "emach/simulate.hpp"
#include "invariants.hpp"
#include "support.hpp"

using namespace emach;

namespace {

/// Nonunifilar three-state presentation of Even(0.5): states 0 and 1 both
/// behave like the Even machine's first state.
Machine nonunifilar_even() {
    return Machine(3, Alphabet({"0", "1"}),
                   {{0, 0, 0.25, 0}, {0, 0, 0.25, 1}, {0, 1, 0.5, 2}, {1, 0, 0.25, 0}, {1, 0, 0.25, 1},
                    {1, 1, 0.5, 2}, {2, 1, 1.0, 0}});
}

Word sns_past(std::size_t n) {
    Word w{0};
    w.insert(w.end(), n, 1);
    return w;
}

}  // namespace

TEST_CASE("analytic reconstruction of the examples") {
    AnalyticOptions opt;
    opt.depth = 12;
    opt.l_fut = 6;
    const auto even = reconstruct_analytic(examples::even(0.5), opt);
    CHECK(even.machine.n_states() == 2);
    CHECK(even.provenance == Provenance::Analytic);
    CHECK(are_isomorphic(even.machine, examples::even(0.5), 1e-12));

    const auto np2 = reconstruct_analytic(examples::np2(0.5));
    CHECK(are_isomorphic(np2.machine, examples::np2_minimal(0.5), 1e-12));

    const auto abc = reconstruct_analytic(examples::abc(0.4, 0.6));
    CHECK(are_isomorphic(abc.machine, examples::abc(0.4, 0.6), 1e-12));

    const auto nu = reconstruct_analytic(nonunifilar_even());
    CHECK(are_isomorphic(nu.machine, examples::even(0.5), 1e-12));

    const auto coin = reconstruct_analytic(examples::biased_coin(0.3));
    CHECK(coin.machine.n_states() == 1);
}

TEST_CASE("SNS has no finite history machine") {
    AnalyticOptions opt;
    opt.class_cap = 20;
    CHECK_THROWS_AS(reconstruct_analytic(examples::sns(0.5, 0.5), opt), ClassExplosion);
    opt.class_cap = 4096;
    opt.depth = 10;
    CHECK_THROWS_AS(reconstruct_analytic(examples::sns(0.5, 0.5), opt), ClassExplosion);
    Machine split(2, Alphabet({"a"}), {{0, 0, 1.0, 0}, {1, 0, 1.0, 1}});
    CHECK_THROWS_AS(reconstruct_analytic(split), NotIrreducible);
}

TEST_CASE("SNS closed form") {
    CHECK(sns_belief_closed_form(0.5, 0.5, 1) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK_THROWS_AS(sns_belief_closed_form(0.0, 0.5, 1), DomainError);
    CHECK_THROWS_AS(sns_belief_closed_form(0.5, 0.5, 0), DomainError);
    // Far from p = q the sequence reaches 1 - q to double precision, so strict
    // growth is only checked where it is representable.
    for (double p : {0.2, 0.3, 0.5, 0.7, 0.8})
        for (double q : {0.2, 0.3, 0.5, 0.7, 0.8}) {
            const bool strict = p >= 0.3 && p <= 0.7 && q >= 0.3 && q <= 0.7;
            const Machine sns = examples::sns(p, q);
            double previous = -1.0;
            for (std::size_t n = 1; n <= 30; ++n) {
                const double qn = sns_belief_closed_form(p, q, n);
                if (strict)
                    CHECK(qn > previous);
                else
                    CHECK(qn >= previous - 1e-15);
                previous = qn;
                const RowVector phi = belief_of_word(sns, sns_past(n));
                CHECK(std::abs(word_prob_from(sns, phi, Word{0}) - qn) <= 1e-12);
            }
        }
}

TEST_CASE("belief atlas exploration from SNS follows the 0 1^n chain") {
    AnalyticOptions opt;
    opt.depth = 8;
    const auto atlas = explore_beliefs(examples::sns(0.4, 0.7), opt);
    const Machine sns = examples::sns(0.4, 0.7);
    for (const auto& c : atlas.classes) {
        CHECK(std::abs(c.belief.sum() - 1.0) <= 1e-12);
        CHECK((c.belief.array() >= 0.0).all());
        for (Symbol x = 0; x < 2; ++x) {
            if (!c.expanded || !c.successors[x]) continue;
            const RowVector next = belief_update(sns, c.belief, x);
            CHECK((next - atlas.classes[*c.successors[x]].belief).cwiseAbs().maxCoeff() <= 1e-9);
        }
    }
    CHECK(atlas.classes.size() >= opt.depth);
}

TEST_CASE("spanning future words separate exactly the indistinct states") {
    const Machine np2 = examples::np2(0.3);
    const auto words = spanning_future_words(np2, 10);
    CHECK(words.size() == 1);
    std::mt19937_64 rng(43);
    const Machine m = testing_support::random_generator(rng, 5, 2);
    CHECK(spanning_future_words(m, 12).size() == 4);
}

TEST_CASE("round trip and closure on random generators") {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 30; ++trial) {
        const Machine m = testing_support::random_generator(rng, 2 + trial % 5, 2 + trial % 2);
        const auto r = reconstruct_analytic_detailed(m);
        CHECK(are_isomorphic(r.result.machine, m, 1e-6));
        CHECK(is_generator_em(r.result.machine).is_generator());
        testing_support::InvariantTally tally;
        testing_support::check_reconstruction(m, r, 4, tally);
        CHECK_MESSAGE(tally.failures == 0, tally.first_failure);
    }
}

TEST_CASE("reconstruction invariants on nonunifilar and nonminimal sources") {
    for (const Machine& m : {nonunifilar_even(), examples::np2(0.4), examples::abc(0.3, 0.9)}) {
        const auto r = reconstruct_analytic_detailed(m);
        CHECK(is_generator_em(r.result.machine).is_generator());
        testing_support::InvariantTally tally;
        testing_support::check_reconstruction(m, r, 6, tally);
        CHECK_MESSAGE(tally.failures == 0, tally.first_failure);
    }
}

TEST_CASE("context model bookkeeping") {
    const auto run = sample_path(examples::even(0.5), StationaryStart{}, 20000, 3);
    const ContextModel model(run.symbols, 2, 3, 2);
    std::uint64_t total = 0;
    for (const auto& e : model.entries()) {
        std::uint64_t futures = 0, next = 0;
        for (auto c : e.future_counts) futures += c;
        for (auto c : e.next_counts) next += c;
        CHECK(futures == e.occurrences);
        CHECK(next == e.occurrences);
        total += e.occurrences;
        CHECK(model.find(e.context).has_value());
    }
    CHECK(total == run.symbols.size() - 3 - 2 + 1);
    // Contexts containing 0 1 0 never occur in the Even process.
    CHECK_FALSE(model.find(Word{0, 1, 0}).has_value());
}

TEST_CASE("empirical reconstruction at moderate sample sizes") {
    const std::size_t len = 200000;
    const auto even_run = sample_path(examples::even(0.5), StationaryStart{}, len, 11);
    const auto even = reconstruct_empirical(Alphabet({"0", "1"}), even_run.symbols);
    CHECK(even.provenance == Provenance::Empirical);
    CHECK(even.machine.n_states() == 2);
    CHECK(is_generator_em(even.machine).is_generator());
    CHECK(are_isomorphic(even.machine, examples::even(0.5), 0.02));
    CHECK((even.class_probability * overall_matrix(even.machine) - even.class_probability).cwiseAbs().maxCoeff() <=
          1e-2);

    const auto coin_run = sample_path(examples::biased_coin(0.5), StationaryStart{}, len, 12);
    const auto coin = reconstruct_empirical(Alphabet({"0", "1"}), coin_run.symbols);
    CHECK(coin.machine.n_states() == 1);
    CHECK(std::abs(coin.machine.symbol_prob(0, 1) - 0.5) < 0.01);

    // Sources inside the enumerated topology range: up to 3 states on two
    // symbols, up to 2 states on three symbols.
    std::mt19937_64 rng(53);
    for (const auto& [n, k] : {std::pair<std::size_t, std::size_t>{3, 2}, {2, 3}, {3, 2}, {2, 3}}) {
        const Machine source = testing_support::random_generator(rng, n, k);
        const auto run = sample_path(source, StationaryStart{}, len, 13 + n * k);
        EmpiricalOptions opt;
        opt.l_ctx = 4;
        opt.l_fut = 2;
        const auto r = reconstruct_empirical(source.alphabet(), run.symbols, opt);
        CHECK(is_generator_em(r.machine).is_generator());
        CHECK(are_isomorphic(r.machine, source, 0.03));
    }
}

TEST_CASE("empirical reconstruction errors") {
    const Word tiny{0, 1, 0, 1, 1};
    CHECK_THROWS_AS(reconstruct_empirical(Alphabet({"0", "1"}), tiny), InsufficientData);
    EmpiricalOptions bad;
    bad.significance = 0.0;
    CHECK_THROWS_AS(reconstruct_empirical(Alphabet({"0", "1"}), tiny, bad), DomainError);
}
