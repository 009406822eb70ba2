#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "emach/examples.hpp"
#include "emach/isomorphism.hpp"
#include "emach/minimize.hpp"
#include "support.hpp"

using namespace emach;

namespace {

/// Nonminimal copy: state s + n mirrors s; 0-edges of originals go to copies.
Machine doubled(const Machine& base) {
    const std::size_t n = base.n_states();
    std::vector<Edge> edges;
    for (const Edge& e : base.edges()) {
        edges.push_back({e.from, e.symbol, e.probability, e.to + (e.symbol == 0 ? n : 0)});
        edges.push_back({e.from + n, e.symbol, e.probability, e.to});
    }
    return Machine(2 * n, base.alphabet(), edges);
}

}  // namespace

TEST_CASE("NP2 minimizes to the two-state machine") {
    for (double p : {0.3, 0.5, 0.7}) {
        const auto q = minimize_unifilar(examples::np2(p));
        CHECK(q.target.n_states() == 2);
        CHECK(q.class_of == std::vector<StateIndex>{0, 1, 0, 1});
        CHECK(are_isomorphic(q.target, examples::np2_minimal(p), 1e-12));
        CHECK(is_generator_em(q.target).is_generator());
    }
}

TEST_CASE("minimize is the identity on generators") {
    for (const Machine& m : {examples::even(0.5), examples::abc(0.4, 0.6), examples::biased_coin(0.2)}) {
        const auto q = minimize_unifilar(m);
        CHECK(q.target.n_states() == m.n_states());
        std::vector<StateIndex> identity(m.n_states());
        std::iota(identity.begin(), identity.end(), 0);
        CHECK(q.class_of == identity);
        const auto iso = are_isomorphic(q.target, m, 0.0);
        REQUIRE(iso);
        CHECK(iso->mapping == identity);
    }
}

TEST_CASE("minimize preconditions") {
    CHECK_THROWS_AS(minimize_unifilar(examples::sns(0.5, 0.5)), NotUnifilar);
    CHECK_THROWS_AS(minimize_unifilar(Machine(2, Alphabet({"a"}), {{0, 0, 1.0, 0}, {1, 0, 1.0, 1}})),
                    NotIrreducible);
}

TEST_CASE("minimize properties on random nonminimal machines") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 30; ++trial) {
        const Machine base = testing_support::random_generator(rng, 2 + trial % 4, 2 + trial % 2);
        const Machine m = doubled(base);
        if (!is_irreducible(m).irreducible) continue;
        const auto q = minimize_unifilar(m);
        CHECK(q.target.n_states() == base.n_states());
        CHECK(is_generator_em(q.target).is_generator());
        CHECK(are_isomorphic(minimize_unifilar(q.target).target, q.target, 1e-12));

        const std::size_t l_test = std::min<std::size_t>(m.n_states() + 2, 6);
        for (const Word& w : testing_support::all_words(m.n_symbols(), l_test))
            for (StateIndex s = 0; s < m.n_states(); ++s)
                CHECK(std::abs(word_prob_from_state(m, s, w) - word_prob_from_state(q.target, q.class_of[s], w)) <=
                      static_cast<double>(std::max<std::size_t>(w.size(), 1)) * kDistinctTolerance);

        const RowVector pi = stationary_distribution(m);
        const RowVector target_pi = stationary_distribution(q.target);
        for (std::size_t b = 0; b < q.partition.size(); ++b) {
            double mass = 0.0;
            for (StateIndex s : q.partition.block(b)) mass += pi(static_cast<Eigen::Index>(s));
            CHECK(std::abs(mass - target_pi(static_cast<Eigen::Index>(b))) <= kSolveTolerance);
        }
    }
}

TEST_CASE("isomorphism examples") {
    const Machine even = examples::even(0.5);
    const auto self = are_isomorphic(even, even);
    REQUIRE(self);
    CHECK(self->mapping == std::vector<StateIndex>{0, 1});

    const Machine swapped(2, Alphabet({"0", "1"}), {{1, 0, 0.5, 1}, {1, 1, 0.5, 0}, {0, 1, 1.0, 1}});
    const auto swap = are_isomorphic(even, swapped);
    REQUIRE(swap);
    CHECK(swap->mapping == std::vector<StateIndex>{1, 0});

    CHECK_FALSE(are_isomorphic(even, examples::abc(0.4, 0.6)));
    CHECK_FALSE(are_isomorphic(even, examples::biased_coin(0.5)));
    CHECK_FALSE(are_isomorphic(even, Machine(2, Alphabet({"a", "b"}), {{0, 0, 0.5, 0}, {0, 1, 0.5, 1}, {1, 1, 1.0, 0}})));
    CHECK_THROWS_AS(are_isomorphic(even, examples::sns(0.5, 0.5)), NotUnifilar);
}

TEST_CASE("isomorphism tolerance") {
    const Machine a = examples::even(0.5);
    const Machine b = examples::even(0.505);
    CHECK_FALSE(are_isomorphic(a, b));
    CHECK(are_isomorphic(a, b, 1e-2));
}

TEST_CASE("isomorphism is an equivalence on random relabelings") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 2 + trial % 5;
        const Machine a = testing_support::random_generator(rng, n, 2 + trial % 2);
        std::vector<StateIndex> p1(n), p2(n);
        std::iota(p1.begin(), p1.end(), 0);
        std::iota(p2.begin(), p2.end(), 0);
        std::shuffle(p1.begin(), p1.end(), rng);
        std::shuffle(p2.begin(), p2.end(), rng);
        const Machine b = testing_support::relabel(a, p1);
        const Machine c = testing_support::relabel(b, p2);

        const auto ab = are_isomorphic(a, b);
        const auto ba = are_isomorphic(b, a);
        const auto bc = are_isomorphic(b, c);
        const auto ac = are_isomorphic(a, c);
        REQUIRE(ab);
        REQUIRE(ba);
        REQUIRE(bc);
        REQUIRE(ac);
        CHECK(are_isomorphic(a, a));
        for (StateIndex i = 0; i < n; ++i) {
            CHECK(ab->mapping[i] == p1[i]);
            CHECK(ba->mapping[ab->mapping[i]] == i);
            CHECK(ac->mapping[i] == bc->mapping[ab->mapping[i]]);
        }
        for (const Word& w : testing_support::all_words(a.n_symbols(), 5))
            CHECK(std::abs(word_prob_stationary(a, w) - word_prob_stationary(c, w)) <=
                  static_cast<double>(std::max<std::size_t>(w.size(), 1)) * kIsomorphismTolerance);
    }
}
