#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "polyq/closure.hpp"
#include "polyq/csp.hpp"
#include "polyq/error.hpp"

using namespace polyq;

namespace {

CensusOptions exhaustive(std::size_t max_n, std::size_t max_tuples) {
    CensusOptions o;
    o.mode = CensusOptions::Mode::exhaustive;
    o.max_n = max_n;
    o.max_tuples = max_tuples;
    return o;
}

CensusOptions random_census(std::size_t max_n, std::size_t count, std::uint64_t seed) {
    CensusOptions o;
    o.mode = CensusOptions::Mode::random;
    o.max_n = max_n;
    o.count = count;
    o.seed = seed;
    return o;
}

}  // namespace

TEST_CASE("class selectors") {
    CHECK(parse_class("csp:c3").vocab == parity_vocab(3));
    CHECK(parse_class("csp:h:3:3").vocab.size() == 1);
    CHECK(parse_class("csp:h:3:3:2")(Structure(Vocabulary({{"R", 3}}), 3, {{{0, 0, 1}}})));
    CHECK_FALSE(parse_class("csp:h:3:3")(Structure(Vocabulary({{"R", 3}}), 3, {{{0, 0, 1}}})));
    CHECK(parse_class("empty:2")(Structure::empty(Vocabulary({{"P", 2}}), 2)));
    CHECK_THROWS_AS(parse_class("csp:x"), PreconditionError);
    CHECK_THROWS_AS(parse_class("empty:"), PreconditionError);
}

TEST_CASE("class membership is isomorphism invariant") {
    std::mt19937_64 rng(31);
    std::vector<StructureClass> classes = {parse_class("csp:c3"), parse_class("csp:h:3:3"),
                                           parse_class("nonempty:2")};
    for (const auto& k : classes) {
        for (int it = 0; it < 60; ++it) {
            const std::size_t n = 1 + rng() % 5;
            auto a = fixture::random_structure(k.vocab, n, 0.08, rng);
            std::vector<Element> perm(n);
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            CHECK(k(a) == k(relabel(a, perm, n)));
        }
    }
}

TEST_CASE("census generation") {
    auto k = nonempty_relation_class(1);
    // Unary relation on n <= 3 up to isomorphism: n + 1 structures for each n.
    auto c = make_census(k, exhaustive(3, 3));
    CHECK(c.size() == 2 + 3 + 4);
    auto r1 = make_census(parse_class("csp:c3"), random_census(4, 50, 9));
    auto r2 = make_census(parse_class("csp:c3"), random_census(4, 50, 9));
    CHECK(r1 == r2);
    CHECK(r1.size() == 50);
    CHECK_THROWS_AS(make_census(k, exhaustive(0, 1)), PreconditionError);
}

TEST_CASE("below enumerates substructures") {
    auto v = fixture::binary();
    Structure x(v, 3, {{{0, 1}, {1, 2}, {2, 0}}});
    bool ex = false;
    auto all = below(x, &ex);
    CHECK(ex);
    CHECK(all.size() == 8);
    for (const auto& a : all) CHECK(leq(a, x));
}

TEST_CASE("p-closed verdicts") {
    auto c3 = parse_class("csp:c3");
    auto v = is_p_closed(c3, PartialFunctionFamily::near_unanimity(4), exhaustive(3, 2));
    CHECK(v.holds);
    CHECK(v.members > 0);

    auto h33 = parse_class("csp:h:3:3");
    CHECK(is_p_closed(h33, PartialFunctionFamily::near_unanimity(3), exhaustive(3, 3)).holds);

    for (const auto& p : {PartialFunctionFamily::maltsev(), PartialFunctionFamily::near_unanimity(3),
                          PartialFunctionFamily::nowhere(3)})
        CHECK(is_p_closed(empty_relation_class(2), p, exhaustive(3, 3)).holds);
}

TEST_CASE("R nonempty is not downwards monotone") {
    auto k = nonempty_relation_class(2);
    auto v = is_downwards_monotone(k, exhaustive(2, 2));
    CHECK_FALSE(v.holds);
    REQUIRE(v.counterexample);
    CHECK(k(v.counterexample->b));
    CHECK_FALSE(k(v.counterexample->a));
    CHECK(leq(v.counterexample->a, v.counterexample->b));
}

TEST_CASE("csp classes are downwards monotone") {
    CHECK(is_downwards_monotone(parse_class("csp:c3"), exhaustive(3, 2)).holds);
    CHECK(is_downwards_monotone(parse_class("csp:h:3:3"), random_census(4, 100, 1)).holds);
}

TEST_CASE("p-closed implies downwards monotone on the same census") {
    std::vector<StructureClass> classes = {parse_class("csp:h:2:2"), parse_class("csp:h:3:3"),
                                           nonempty_relation_class(2), empty_relation_class(2)};
    for (const auto& k : classes) {
        auto census = make_census(k, exhaustive(3, 2));
        for (const auto& p : {PartialFunctionFamily::maltsev(), PartialFunctionFamily::near_unanimity(3)}) {
            if (is_p_closed(k, p, census).holds) CHECK(is_downwards_monotone(k, census).holds);
        }
    }
}

TEST_CASE("imhof star") {
    auto base = nonempty_relation_class(1);
    auto star = imhof_star(base);
    REQUIRE(star.vocab.size() == 2);
    CHECK(star.vocab[1].name == "R_c");
    // complementary pair with the reduct in K
    CHECK(star(Structure(star.vocab, 2, {{{0}}, {{1}}})));
    // complementary pair with the reduct outside K
    CHECK_FALSE(star(Structure(star.vocab, 2, fixture::Rels{{}, {{0}, {1}}})));
    // overlap
    CHECK_FALSE(star(Structure(star.vocab, 2, {{{0}}, {{0}, {1}}})));
    // S empty and R not everything
    CHECK(star(Structure(star.vocab, 2, fixture::Rels{{}, {}})));

    CHECK_THROWS_AS(imhof_star(predicate_class(Vocabulary({{"R", 1}, {"S", 2}}), [](const Structure&) { return true; }, "mixed")),
                    PreconditionError);
}

TEST_CASE("imhof star is downwards monotone whatever the base class") {
    std::vector<StructureClass> bases = {nonempty_relation_class(1), nonempty_relation_class(2),
                                         parse_class("csp:h:2:2")};
    for (const auto& k : bases) {
        auto star = imhof_star(k);
        CHECK(is_downwards_monotone(star, exhaustive(2, 3)).holds);
        CHECK(is_downwards_monotone(star, random_census(3, 80, 4)).holds);
    }
}

TEST_CASE("gamma characterisation agrees") {
    auto eq = gamma_equivalence_check(parse_class("csp:c3"), PartialFunctionFamily::near_unanimity(4), exhaustive(3, 2));
    CHECK(eq.one_step.holds);
    CHECK(eq.omega.holds);
    CHECK(eq.agree());

    auto eq2 = gamma_equivalence_check(nonempty_relation_class(2), PartialFunctionFamily::near_unanimity(3),
                                       exhaustive(2, 2));
    CHECK_FALSE(eq2.one_step.holds);
    CHECK_FALSE(eq2.omega.holds);
    CHECK(eq2.agree());

    // A class closed under the closure by construction: structures whose
    // relation is already closed under majority.
    auto closed = predicate_class(Vocabulary({{"R", 3}}),
                                  [](const Structure& a) {
                                      return a.relation(0).size() <= 1;
                                  },
                                  "at most one tuple");
    auto eq3 = gamma_equivalence_check(closed, PartialFunctionFamily::near_unanimity(3), exhaustive(2, 2));
    CHECK(eq3.agree());
    CHECK(eq3.one_step.holds);
}

TEST_CASE("projective family with a partial polymorphism of the target gives a closed csp") {
    std::vector<Structure> targets = {build_c_ell(2), build_c_ell(3), build_hypergraph_target(2, 2),
                                      build_hypergraph_target(2, 3), build_hypergraph_target(3, 3),
                                      build_hypergraph_target(3, 3, 2)};
    std::vector<PartialFunctionFamily> families = {PartialFunctionFamily::maltsev(),
                                                   PartialFunctionFamily::near_unanimity(3),
                                                   PartialFunctionFamily::near_unanimity(4)};
    std::size_t pairs = 0;
    for (const auto& p : families) {
        REQUIRE(check_invariance(p, 3).projective);
        for (const auto& c : targets) {
            if (!is_partial_polymorphism(p, c)) continue;
            ++pairs;
            CAPTURE(p.name());
            CHECK(is_p_closed(csp_class(c), p, exhaustive(2, 2)).holds);
            CHECK(is_p_closed(csp_class(c), p, random_census(3, 60, pairs)).holds);
        }
    }
    CHECK(pairs >= 4);
}

TEST_CASE("downwards monotone classes of small arity are closed") {
    // Partial-choice families close every unary downwards monotone class;
    // N_ell closes every downwards monotone class of arity below ell.
    auto at_most = [](std::size_t c) {
        return [c](const Structure& a) { return a.tuple_count() <= c; };
    };
    auto no_constant = [](const Structure& a) {
        for (const auto& r : a.relations())
            for (const auto& t : r)
                if (std::all_of(t.begin(), t.end(), [&](Element x) { return x == t[0]; })) return false;
        return true;
    };
    for (std::size_t c = 0; c <= 2; ++c) {
        auto k = predicate_class(Vocabulary({{"P", 1}, {"Q", 1}}), at_most(c), "unary count");
        REQUIRE(is_downwards_monotone(k, exhaustive(3, 3)).holds);
        CHECK(is_p_closed(k, PartialFunctionFamily::maltsev(), exhaustive(3, 3)).holds);
        CHECK(is_p_closed(k, PartialFunctionFamily::near_unanimity(4), exhaustive(3, 3)).holds);
    }
    for (std::size_t ell : {3u, 4u})
        for (std::size_t r = 1; r < ell; ++r) {
            auto k1 = predicate_class(Vocabulary({{"R", r}}), no_constant, "no constant tuple");
            auto k2 = predicate_class(Vocabulary({{"R", r}}), at_most(2), "at most two tuples");
            for (const auto& k : {k1, k2}) {
                REQUIRE(is_downwards_monotone(k, exhaustive(3, 3)).holds);
                CHECK(is_p_closed(k, PartialFunctionFamily::near_unanimity(ell), exhaustive(3, 3)).holds);
            }
        }
    // Arity ell is not covered: at most two ternary tuples is not N_3-closed.
    auto k = predicate_class(Vocabulary({{"R", 3}}), at_most(3), "at most three tuples");
    CHECK_FALSE(is_p_closed(k, PartialFunctionFamily::near_unanimity(3), exhaustive(3, 3)).holds);
}
