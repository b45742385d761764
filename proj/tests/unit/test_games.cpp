#include <doctest.h>

#include <algorithm>
#include <memory>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "polyq/color_refinement.hpp"
#include "polyq/cops_robber.hpp"
#include "polyq/duplicator.hpp"
#include "polyq/error.hpp"
#include "polyq/graph.hpp"
#include "polyq/pebble_game.hpp"

using namespace polyq;

namespace {

PGConfig unary_nowhere() {
    PGConfig cfg;
    cfg.k = 2;
    cfg.family = PartialFunctionFamily::nowhere();
    cfg.move_arities = {1};
    return cfg;
}

Structure gs(const OrderedGraph& g) { return graph_to_structure(g); }

}  // namespace

TEST_CASE("color refinement") {
    auto empty = gs(OrderedGraph(4, {}));
    auto c = color_refinement(empty);
    CHECK(std::all_of(c.begin(), c.end(), [&](auto x) { return x == c[0]; }));

    auto star = gs(complete_bipartite(1, 3));
    auto s = color_refinement(star);
    CHECK(s[0] != s[1]);
    CHECK(s[1] == s[2]);
    CHECK(s[2] == s[3]);

    auto c6 = gs(cycle_graph(6));
    auto two_c3 = gs(disjoint_union(cycle_graph(3), cycle_graph(3)));
    CHECK_FALSE(refinement_distinguishes(c6, two_c3));
    CHECK(refinement_distinguishes(gs(complete_bipartite(1, 3)), gs(cycle_graph(4))));
    CHECK_THROWS_AS(color_refinement(Structure::empty(fixture::unary(), 2), "P"), PreconditionError);
    CHECK_THROWS_AS(color_refinement(c6, "F"), PreconditionError);
}

TEST_CASE("pebble game examples") {
    auto c6 = gs(cycle_graph(6));
    auto two_c3 = gs(disjoint_union(cycle_graph(3), cycle_graph(3)));
    CHECK(solve_pebble_game(c6, c6, unary_nowhere()).winner() == Winner::duplicator);
    CHECK(solve_pebble_game(c6, two_c3, unary_nowhere()).winner() == Winner::duplicator);
    auto lost = solve_pebble_game(gs(complete_bipartite(1, 3)), gs(cycle_graph(4)), unary_nowhere());
    CHECK(lost.winner() == Winner::spoiler);
    CHECK(lost.depth(lost.start()) != PGSolution::kForever);
    CHECK(lost.depth(lost.start()) >= 1);
    CHECK(lost.killing_choice(lost.start()));

    auto mismatch = solve_pebble_game(c6, gs(cycle_graph(5)), unary_nowhere());
    CHECK(mismatch.winner() == Winner::spoiler);
    CHECK(mismatch.reason() == "no bijection");

    // A 1-element structure against itself: the identity survives forever.
    auto one = Structure::empty(fixture::unary(), 1);
    PGConfig cfg;
    cfg.k = 1;
    CHECK(solve_pebble_game(one, one, cfg).winner() == Winner::duplicator);
}

TEST_CASE("pebble game guards") {
    auto c6 = gs(cycle_graph(6));
    auto cfg = unary_nowhere();
    cfg.k = 0;
    CHECK_THROWS_AS(solve_pebble_game(c6, c6, cfg), PreconditionError);
    cfg = unary_nowhere();
    cfg.move_arities = {3};
    CHECK_THROWS_AS(solve_pebble_game(c6, c6, cfg), PreconditionError);
    auto c7 = gs(cycle_graph(7));
    CHECK_THROWS_AS(solve_pebble_game(c7, c7, unary_nowhere()), BudgetExceeded);
    CHECK_THROWS_AS(solve_pebble_game(c6, Structure::empty(fixture::unary(), 6), unary_nowhere()),
                    PreconditionError);
}

TEST_CASE("position encoding round trips") {
    auto c4 = gs(cycle_graph(4));
    auto sol = solve_pebble_game(c4, c4, unary_nowhere());
    for (std::uint64_t code = 0; code < sol.position_count(); ++code) CHECK(sol.encode(sol.decode(code)) == code);
    auto start = sol.decode(sol.start());
    CHECK(std::none_of(start.alpha.begin(), start.alpha.end(), [](auto x) { return x.has_value(); }));
}

TEST_CASE("winning region is a fixpoint with legal witnesses") {
    std::mt19937_64 rng(61);
    auto v = fixture::binary();
    for (int it = 0; it < 20; ++it) {
        auto a = fixture::random_structure(v, 3, 0.4, rng);
        auto b = (it % 2) ? a : fixture::random_structure(v, 3, 0.4, rng);
        for (const auto& fam : {PartialFunctionFamily::nowhere(), PartialFunctionFamily::near_unanimity(3)}) {
            PGConfig cfg;
            cfg.k = 2;
            cfg.family = fam;
            auto sol = solve_pebble_game(a, b, cfg);
            for (std::uint64_t code = 0; code < sol.position_count(); ++code) {
                auto pos = sol.decode(code);
                if (!sol.in_region(code)) {
                    if (sol.depth(code) == 0) CHECK_FALSE(position_is_partial_isomorphism(a, b, pos));
                    else CHECK(sol.killing_choice(code));
                    continue;
                }
                CHECK(position_is_partial_isomorphism(a, b, pos));
                for (std::size_t c = 0; c < sol.choices().size(); ++c) {
                    const auto& ch = sol.choices()[c];
                    const auto& f = sol.witness(code, c);
                    const std::size_t r = ch.vars.size();
                    std::uint64_t total = 1;
                    for (std::size_t i = 0; i < r; ++i) total *= 3;
                    for (std::uint64_t sc = 0; sc < total; ++sc) {
                        auto s = decode_tuple(sc, r, 3);
                        auto served = sol.response(code, c, s);
                        Tuple fs;
                        for (auto x : s) fs.push_back(f[x]);
                        auto closed = gamma_closure(fam, 3, Relation(r, 3, served));
                        CHECK(closed.contains(fs));
                        for (const auto& t : served) CHECK(sol.in_region(sol.advance(code, c, s, t)));
                    }
                }
            }
        }
    }
}

TEST_CASE("pebble solver agrees with the naive solver") {
    std::mt19937_64 rng(67);
    for (int it = 0; it < 40; ++it) {
        auto v = (it % 3 == 0) ? fixture::unary() : fixture::binary();
        const std::size_t n = 1 + rng() % 3;
        auto a = fixture::random_structure(v, n, 0.4, rng);
        auto b = (it % 4 == 0) ? a : fixture::random_structure(v, n, 0.4, rng);
        for (const auto& fam : {PartialFunctionFamily::nowhere(), PartialFunctionFamily::near_unanimity(3)})
            for (std::size_t k = 1; k <= 2; ++k) {
                PGConfig cfg;
                cfg.k = k;
                cfg.family = fam;
                const bool got = solve_pebble_game(a, b, cfg).winner() == Winner::duplicator;
                CHECK(got == oracle::pebble_duplicator_wins(a, b, fam, k));
            }
    }
}

TEST_CASE("round bound gives a bounded verdict") {
    auto cfg = unary_nowhere();
    cfg.round_bound = 1;
    auto sol = solve_pebble_game(gs(complete_bipartite(1, 3)), gs(cycle_graph(4)), cfg);
    CHECK(sol.bounded());
    CHECK(sol.rounds() <= 1);
    cfg.round_bound = 0;
    auto none = solve_pebble_game(gs(complete_bipartite(1, 3)), gs(cycle_graph(4)), cfg);
    CHECK(none.winner() == Winner::duplicator);
    CHECK(none.bounded());
}

TEST_CASE("restricted Duplicator wins imply full wins") {
    std::mt19937_64 rng(71);
    auto v = fixture::binary();
    std::vector<std::vector<Element>> perms = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
    for (int it = 0; it < 30; ++it) {
        auto a = fixture::random_structure(v, 3, 0.4, rng);
        auto b = (it % 2) ? relabel(a, perms[it % 3], 3) : fixture::random_structure(v, 3, 0.4, rng);
        PGConfig cfg;
        cfg.k = 2;
        cfg.family = PartialFunctionFamily::near_unanimity(3);
        auto full = solve_pebble_game(a, b, cfg).winner();
        cfg.bijections = perms;
        if (solve_pebble_game(a, b, cfg).winner() == Winner::duplicator) CHECK(full == Winner::duplicator);
    }
}

TEST_CASE("switch set bijections") {
    auto bs = switch_set_bijections(3);
    CHECK(bs.size() == 8);
    for (const auto& f : bs) {
        CHECK(f.size() == 6);
        for (Element x = 0; x < 6; ++x) CHECK(f[f[x]] == x);
    }
    CHECK_THROWS_AS(switch_set_bijections(21), BudgetExceeded);
}

TEST_CASE("cops and robber basics") {
    auto k4 = complete_graph(4);
    auto zero = solve_cr_game(k4, 0, 3);
    for (Vertex u = 0; u < 4; ++u) CHECK(zero.safe(0, u));

    auto sol = solve_cr_game(k4, 2, 3);
    for (EdgeMask f : sol.edge_sets())
        for (Vertex u = 0; u < 4; ++u)
            if (f & incident_mask(k4, u)) {
                CHECK_FALSE(sol.safe(f, u));
                CHECK(sol.cop_depth(f, u) == 0);
            }
    CHECK(sol.edge_sets().front() == 0);
    CHECK(sol.edge_sets().size() == 1 + 6 + 15);
    CHECK_THROWS_AS(sol.safe(0b111, 0), PreconditionError);
    CHECK_THROWS_AS(solve_cr_game(complete_graph(12), 1, 3), BudgetExceeded);
    CHECK_THROWS_AS(solve_cr_game(petersen_graph(), 3, 3, 100), BudgetExceeded);
}

TEST_CASE("cops and robber agrees with minimax") {
    std::vector<OrderedGraph> graphs = all_regular_graphs(3, 6);
    graphs.push_back(complete_graph(4));
    graphs.push_back(cycle_graph(5));
    for (const auto& g : graphs) {
        const auto ell = *g.regular_degree();
        for (std::size_t k = 0; k <= 2; ++k) {
            auto sol = solve_cr_game(g, k, ell);
            auto ref = oracle::cr_minimax(g, k, ell);
            REQUIRE(ref.sets == sol.edge_sets());
            for (std::size_t s = 0; s < ref.sets.size(); ++s)
                for (Vertex u = 0; u < g.vertex_count(); ++u)
                    CHECK(static_cast<bool>(ref.safe[s][u]) == sol.safe(ref.sets[s], u));
        }
    }
}

TEST_CASE("cops and robber safety is monotone in k") {
    for (const auto& g : all_regular_graphs(3, 6)) {
        auto hi = solve_cr_game(g, 2, 3);
        auto lo = solve_cr_game(g, 1, 3);
        for (EdgeMask f : lo.edge_sets())
            for (Vertex u = 0; u < g.vertex_count(); ++u)
                if (hi.safe(f, u)) CHECK(lo.safe(f, u));
    }
}

TEST_CASE("cops and robber strategies are consistent") {
    auto g = complete_bipartite(3, 3);
    auto sol = solve_cr_game(g, 1, 3);
    for (EdgeMask f : sol.edge_sets())
        for (Vertex u = 0; u < g.vertex_count(); ++u) {
            if (sol.safe(f, u)) {
                for (EdgeMask f2 : sol.edge_sets()) {
                    auto sys = sol.robber_move(f, u, f2);
                    CHECK(is_valid_path_system(g, u, from_mask(f & f2, g.edge_count()), 3, sys));
                    for (const auto& p : sys) CHECK(sol.safe(f2, p.end()));
                }
                continue;
            }
            const auto d = sol.cop_depth(f, u);
            if (d == 0) continue;
            auto f2 = sol.cop_move(f, u);
            REQUIRE(f2);
            // every Robber answer lands closer to capture
            for_each_path_system(g, u, from_mask(f & *f2, g.edge_count()), 3, [&](const PathSystem& sys) {
                bool some = false;
                for (const auto& p : sys)
                    if (!sol.safe(*f2, p.end()) && sol.cop_depth(*f2, p.end()) < d) some = true;
                CHECK(some);
                return true;
            });
        }
}

TEST_CASE("girth strategy") {
    auto g = generate_regular(3, 30, 7, {3, 5000});
    REQUIRE(g);
    REQUIRE(*girth(*g) >= 7);
    for (Vertex u = 0; u < g->vertex_count(); ++u) {
        auto sys = robber_girth_move(*g, 1, {}, u, {});
        CHECK(sys.size() == 3);
        CHECK(is_valid_path_system(*g, u, std::vector<char>(g->edge_count(), 0), 3, sys));
        for (const auto& p : sys) CHECK(far_from_edges(*g, p.end(), {}, 1));
    }
    // Cop edges far from u: the move still works while F' stays empty.
    std::vector<EdgeId> far;
    auto dist = bfs_distances(*g, 0);
    for (EdgeId e = 0; e < g->edge_count() && far.size() < 2; ++e)
        if (dist[g->edge(e).u] > 1 && dist[g->edge(e).v] > 1) far.push_back(e);
    CHECK(far_from_edges(*g, 0, far, 1));
    auto sys = robber_girth_move(*g, 1, far, 0, {});
    CHECK(sys.size() == 3);
}

TEST_CASE("girth strategy guards") {
    auto g = *generate_regular(3, 30, 7, {3, 5000});
    auto at0 = g.incident(0)[0];
    CHECK_THROWS_AS(robber_girth_move(g, 1, {at0}, 0, {}), PreconditionError);   // (*) fails
    CHECK_THROWS_AS(robber_girth_move(g, 1, {}, 0, {at0}), PreconditionError);   // too many new edges
    CHECK_THROWS_AS(robber_girth_move(g, 2, {}, 0, {}), PreconditionError);      // girth <= 12
    CHECK_THROWS_AS(robber_girth_move(petersen_graph(), 1, {}, 0, {}), PreconditionError);
    CHECK_THROWS_AS(robber_girth_move(cycle_graph(9), 1, {}, 0, {}), PreconditionError);
    CHECK_THROWS_AS(robber_girth_move(g, 0, {}, 0, {}), PreconditionError);
}

TEST_CASE("duplicator engine on K4") {
    auto k4 = complete_graph(4);
    auto cr = std::make_shared<const CRSolution>(solve_cr_game(k4, 1, 3));
    REQUIRE(cr->safe(0, 0));
    DuplicatorEngine eng(k4, 1, std::make_shared<ExactRobber>(cr));
    auto st = eng.initial();
    CHECK_FALSE(eng.check_invariant(st));
    CHECK(st.f == SwitchSet(k4.edge_count()));

    SpoilerChoice ch{false, {0}};
    const auto& f = eng.serve(st, ch);
    CHECK(f == st.f);
    // b on the edge {1,2}, away from v0
    const Element b = cfi_element(*k4.find_edge(1, 2), 1);
    auto resp = eng.respond(st, ch, Tuple{b});
    CHECK(resp.paths.size() == 3);
    CHECK(resp.tuples.size() == 3);
    CHECK(resp.f_next == touched_edges(k4.edge_count(), {b}));
    for (std::size_t i = 0; i < 3; ++i) {
        auto next = eng.complete(st, ch, Tuple{b}, resp, i);
        CHECK_FALSE(eng.check_invariant(next));
        CHECK(eng.pebbled_edges(next) == resp.f_next);
        CHECK(twist(k4, next.f) == resp.paths[i].end());
    }
    CHECK_THROWS_AS(eng.complete(st, ch, Tuple{b}, resp, 3), PreconditionError);
    CHECK_THROWS_AS(eng.serve(st, SpoilerChoice{false, {1}}), PreconditionError);
}

TEST_CASE("adversarial verification") {
    auto k4 = complete_graph(4);
    auto cr = std::make_shared<const CRSolution>(solve_cr_game(k4, 1, 3));
    DuplicatorEngine eng(k4, 1, std::make_shared<ExactRobber>(cr));
    auto zero = adversarial_verify(eng, 0);
    CHECK(zero.ok);
    CHECK(zero.transitions == 0);
    auto two = adversarial_verify(eng, 2);
    CHECK(two.ok);
    CHECK(two.transitions > 0);
    CHECK(two.failure.empty());
}

TEST_CASE("duplicator refuses an uncertified start") {
    auto k4 = complete_graph(4);
    for (std::size_t k = 1; k <= 3; ++k) {
        auto cr = std::make_shared<const CRSolution>(solve_cr_game(k4, k, 3));
        DuplicatorEngine eng(k4, k, std::make_shared<ExactRobber>(cr));
        if (cr->safe(0, 0)) CHECK_NOTHROW(eng.initial());
        else CHECK_THROWS_AS(eng.initial(), PreconditionError);
    }
    // a Cop who holds all of E(v0) wins at once
    auto cr = std::make_shared<const CRSolution>(solve_cr_game(k4, 3, 3));
    CHECK_FALSE(cr->safe(incident_mask(k4, 0), 0));
}
