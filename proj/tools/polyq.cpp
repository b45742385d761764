#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polyq/cfi.hpp"
#include "polyq/closure.hpp"
#include "polyq/cops_robber.hpp"
#include "polyq/csp.hpp"
#include "polyq/duplicator.hpp"
#include "polyq/error.hpp"
#include "polyq/graph.hpp"
#include "polyq/io.hpp"
#include "polyq/partial_functions.hpp"
#include "polyq/pebble_game.hpp"

#ifndef POLYQ_VERSION
#define POLYQ_VERSION "0.0.0"
#endif

using namespace polyq;

namespace {

struct Common {
    std::uint64_t seed = 0;
    unsigned threads = 1;  // solvers are sequential; accepted for scripting
    std::string out;
};

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex(std::uint64_t x) {
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << x;
    return os.str();
}

std::string slurp(const std::string& path) {
    if (path.empty() || path == "-") {
        std::stringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Json parse_json(const std::string& text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const Json::exception& e) {
        throw PreconditionError("malformed JSON in " + what + ": " + e.what());
    }
}

Structure load_structure(const std::string& path) {
    return structure_from_json(parse_json(slurp(path), path.empty() ? "stdin" : path));
}

OrderedGraph load_graph(const std::string& path) {
    std::istringstream in(slurp(path));
    return read_graph(in);
}

/// "c<ell>", "h:<n>:<m>[:<k>]" or a structure file.
Structure parse_target(const std::string& t) {
    if (t.size() > 1 && t[0] == 'c' && t.find_first_not_of("0123456789", 1) == std::string::npos)
        return build_c_ell(std::stoul(t.substr(1)));
    if (t.rfind("h:", 0) == 0) {
        std::vector<std::size_t> xs;
        std::istringstream is(t.substr(2));
        std::string part;
        while (std::getline(is, part, ':')) {
            if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
                throw PreconditionError("bad target '" + t + "'");
            xs.push_back(std::stoul(part));
        }
        if (xs.size() < 2 || xs.size() > 3) throw PreconditionError("bad target '" + t + "'");
        return build_hypergraph_target(xs[0], xs[1], xs.size() == 3 ? xs[2] : 1);
    }
    return load_structure(t);
}

/// Writes the result and its manifest. The result never contains the wall
/// time, so equal inputs give byte-identical output.
void emit_text(const Common& c, const std::string& command, const Json& params, const std::string& text,
               std::chrono::steady_clock::time_point t0) {
    if (c.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(c.out);
        if (!f) throw PreconditionError("cannot write '" + c.out + "'");
        f << text;
    }
    Json manifest = {
        {"command", command},
        {"parameters", params},
        {"seed", c.seed},
        {"version", POLYQ_VERSION},
        {"wall_time_s", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()},
        {"result_digest", hex(fnv1a(text))},
    };
    std::cerr << manifest.dump() << "\n";
    if (!c.out.empty()) std::ofstream(c.out + ".manifest.json") << manifest.dump(2) << "\n";
}

void emit(const Common& c, const std::string& command, const Json& params, const Json& result,
          std::chrono::steady_clock::time_point t0) {
    emit_text(c, command, params, result.dump(2) + "\n", t0);
}

Json report_json(const InvarianceReport& r) {
    Json ces = Json::array();
    for (const auto& ce : r.counterexamples) {
        Json j = {{"property", ce.property}, {"size_a", ce.size_a}, {"size_b", ce.size_b},
                  {"map", ce.map}, {"args", ce.args}};
        j["lhs"] = ce.lhs ? Json(*ce.lhs) : Json(nullptr);
        j["rhs"] = ce.rhs ? Json(*ce.rhs) : Json(nullptr);
        ces.push_back(std::move(j));
    }
    return {{"max_n", r.max_n},
            {"invariant", r.invariant},
            {"strongly_invariant", r.strongly_invariant},
            {"projective", r.projective},
            {"partial_choice", r.partial_choice},
            {"counterexamples", ces}};
}

Json verdict_json(const Verdict& v) {
    Json j = {{"holds", v.holds},
              {"census_size", v.census_size},
              {"members", v.members},
              {"pairs_checked", v.pairs_checked},
              {"exhaustive_below", v.exhaustive_below}};
    if (v.counterexample)
        j["counterexample"] = {{"member", structure_to_json(v.counterexample->b)},
                               {"non_member", structure_to_json(v.counterexample->a)}};
    return j;
}

Json path_json(const Path& p) { return {{"vertices", p.vertices}, {"edges", p.edges}}; }

Json position_json(const std::vector<std::optional<Element>>& xs) {
    Json j = Json::array();
    for (const auto& x : xs) j.push_back(x ? Json(*x) : Json(nullptr));
    return j;
}

std::vector<Element> parse_elements(std::istream& in) {
    std::vector<Element> out;
    long long x;
    while (in >> x) {
        if (x < 0) throw PreconditionError("negative element");
        out.push_back(static_cast<Element>(x));
    }
    return out;
}

// play-pg: the user is Spoiler against the Duplicator engine.
int play(const OrderedGraph& g, std::size_t k, std::istream& in, std::ostream& out) {
    auto cr = std::make_shared<const CRSolution>(solve_cr_game(g, k, *g.regular_degree()));
    DuplicatorEngine eng(g, k, std::make_shared<ExactRobber>(cr));
    auto st = eng.initial();
    out << "CFI pair on " << g.vertex_count() << " vertices, " << g.edge_count() << " edges, ell=" << eng.ell()
        << ", k=" << k << ". Elements (e,i) are numbered 2e+i-1.\n"
        << "Commands: left|right <vars> : <elements>, state, help, quit\n";
    std::string line;
    while (out << "> " << std::flush, std::getline(in, line)) {
        std::istringstream ls(line);
        std::string cmd;
        if (!(ls >> cmd)) continue;
        if (cmd == "quit" || cmd == "exit") break;
        if (cmd == "help") {
            out << "  left 0 1 : 4 9   Spoiler picks b = (4, 9) in the odd structure for variables 0 and 1\n"
                   "  right 0 : 3      Spoiler picks a = (3) in the even structure\n"
                   "  After Duplicator serves P, answer with: pick <i>\n";
            continue;
        }
        if (cmd == "state") {
            out << Json{{"switch_set", switch_set_to_json(st.f)},
                        {"twist", twist(g, st.f)},
                        {"alpha", position_json(st.alpha)},
                        {"beta", position_json(st.beta)}}
                       .dump()
                << "\n";
            continue;
        }
        if (cmd != "left" && cmd != "right") {
            out << "unknown command '" << cmd << "'\n";
            continue;
        }
        try {
            SpoilerChoice ch;
            ch.right = cmd == "right";
            std::string tok;
            while (ls >> tok && tok != ":") ch.vars.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
            auto elems = parse_elements(ls);
            const auto& f = eng.serve(st, ch);
            out << "Duplicator plays the switch set " << switch_set_to_json(f).dump() << "\n";
            auto resp = eng.respond(st, ch, Tuple(elems.begin(), elems.end()));
            Json served = Json::array();
            for (std::size_t i = 0; i < resp.tuples.size(); ++i)
                served.push_back({{"index", i}, {"tuple", resp.tuples[i]}, {"path", path_json(resp.paths[i])}});
            out << "Duplicator serves P = " << served.dump() << "\n";
            std::size_t pick = resp.tuples.size();
            while (pick >= resp.tuples.size()) {
                out << "pick> " << std::flush;
                if (!std::getline(in, line)) return 0;
                std::istringstream ps(line);
                std::string w;
                ps >> w;
                if (w == "pick") ps >> pick;
                else pick = resp.tuples.size();
                if (pick >= resp.tuples.size()) out << "answer with pick <0.." << resp.tuples.size() - 1 << ">\n";
            }
            st = eng.complete(st, ch, Tuple(elems.begin(), elems.end()), resp, pick);
            auto bad = eng.check_invariant(st);
            PGPosition pos{st.alpha, st.beta};
            out << "invariant: " << (bad ? *bad : "holds") << "; position is a partial isomorphism: "
                << (position_is_partial_isomorphism(eng.even().structure, eng.odd().structure, pos) ? "yes" : "no")
                << "\n";
        } catch (const PreconditionError& e) {
            out << "rejected: " << e.what() << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Partial-polymorphism quantifiers: generators, solvers and games"};
    app.require_subcommand(1);
    app.set_version_flag("--version", POLYQ_VERSION);
    Common c;
    auto common = [&](CLI::App* s) {
        s->add_option("--seed", c.seed, "random seed")->capture_default_str();
        s->add_option("--threads", c.threads, "parallelism cap")->capture_default_str();
        s->add_option("--out", c.out, "result file (default stdout)");
    };
    Json params = Json::object();
    auto t0 = std::chrono::steady_clock::now();

    // gen-graph
    auto* gg = app.add_subcommand("gen-graph", "generate a graph");
    std::string kind = "regular", gformat = "json";
    std::size_t gn = 10, gm = 3, gdeg = 3, ggirth = 3, gattempts = 1000;
    gg->add_option("--kind", kind, "complete|bipartite|cycle|petersen|regular")
        ->check(CLI::IsMember({"complete", "bipartite", "cycle", "petersen", "regular"}))
        ->capture_default_str();
    gg->add_option("--n", gn, "vertices (first side for bipartite)")->capture_default_str();
    gg->add_option("--m", gm, "second side for bipartite")->capture_default_str();
    gg->add_option("--degree", gdeg, "degree for regular")->capture_default_str();
    gg->add_option("--girth", ggirth, "minimum girth for regular")->capture_default_str();
    gg->add_option("--attempts", gattempts, "attempt budget for regular")->capture_default_str();
    gg->add_option("--format", gformat, "json|edges")->check(CLI::IsMember({"json", "edges"}))->capture_default_str();
    common(gg);

    // gen-cfi
    auto* gc = app.add_subcommand("gen-cfi", "build a CFI structure");
    std::string graph_path, parity = "even";
    std::vector<Vertex> cfi_u;
    gc->add_option("--graph", graph_path, "graph file (JSON or edge list; default stdin)");
    auto* par = gc->add_option("--parity", parity, "even|odd")->check(CLI::IsMember({"even", "odd"}));
    gc->add_option("--u", cfi_u, "explicit set U of odd gadgets")->excludes(par);
    common(gc);

    // solve-csp
    auto* sc = app.add_subcommand("solve-csp", "decide A -> target");
    std::string target = "c3", input;
    sc->add_option("--target", target, "c<ell>, h:<n>:<m>[:<k>] or a structure file")->capture_default_str();
    sc->add_option("--input", input, "structure file (default stdin)");
    common(sc);

    // solve-xor
    auto* sx = app.add_subcommand("solve-xor", "solve a system of XOR equations");
    sx->add_option("--input", input, "equation file (default stdin)");
    common(sx);

    // check-family
    auto* cf = app.add_subcommand("check-family", "invariance properties of a family");
    std::string family = "maltsev";
    std::size_t max_n = 4;
    cf->add_option("--family", family, "maltsev|majority|nu:<ell>|nowhere")->capture_default_str();
    cf->add_option("--max-n", max_n, "largest universe")->capture_default_str();
    common(cf);

    // check-closure
    auto* cc = app.add_subcommand("check-closure", "closure and monotonicity on a census");
    std::string cls = "csp:c3", census = "exhaustive", check = "p-closed";
    std::size_t cmax_n = 3, max_tuples = 3, count = 1000;
    cc->add_option("--class", cls, "csp:c<ell>|csp:h:<n>:<m>[:<k>]|empty:<r>|nonempty:<r>")->capture_default_str();
    cc->add_option("--family", family, "family")->capture_default_str();
    cc->add_option("--check", check, "p-closed|monotone|gamma")
        ->check(CLI::IsMember({"p-closed", "monotone", "gamma"}))
        ->capture_default_str();
    cc->add_option("--census", census, "exhaustive|random")
        ->check(CLI::IsMember({"exhaustive", "random"}))
        ->capture_default_str();
    cc->add_option("--max-n", cmax_n, "largest universe")->capture_default_str();
    cc->add_option("--max-tuples", max_tuples, "tuple cap (exhaustive)")->capture_default_str();
    cc->add_option("--count", count, "samples (random)")->capture_default_str();
    common(cc);

    // solve-pg
    auto* pg = app.add_subcommand("solve-pg", "solve the pebble game");
    std::string a_path, b_path, bij = "full", strategy_out;
    std::size_t k = 2;
    std::optional<std::size_t> round_bound;
    std::vector<std::size_t> arities;
    pg->add_option("--a", a_path, "left structure")->required();
    pg->add_option("--b", b_path, "right structure")->required();
    pg->add_option("--k", k, "pebbles")->capture_default_str();
    pg->add_option("--family", family, "family")->capture_default_str();
    pg->add_option("--arities", arities, "allowed tuple lengths (default 1..k)")->delimiter(',');
    pg->add_option("--round-bound", round_bound, "stop after this many rounds");
    pg->add_option("--bijections", bij, "full|switchsets")->check(CLI::IsMember({"full", "switchsets"}))->capture_default_str();
    pg->add_option("--strategy-out", strategy_out, "write Duplicator's strategy here");
    common(pg);

    // solve-cr
    auto* cr = app.add_subcommand("solve-cr", "solve the Cops and Robber game");
    std::size_t ell = 0;
    cr->add_option("--graph", graph_path, "graph file (default stdin)");
    cr->add_option("--k", k, "Cop edges")->capture_default_str();
    cr->add_option("--ell", ell, "paths per Robber move (default: the degree)");
    cr->add_option("--strategy-out", strategy_out, "write both strategies here");
    common(cr);

    // verify-duplicator
    auto* vd = app.add_subcommand("verify-duplicator", "exhaustive Spoiler against the Duplicator engine");
    std::size_t rounds = 3, radius = 1;
    std::string robber = "exact";
    vd->add_option("--graph", graph_path, "graph file (default stdin)");
    vd->add_option("--k", k, "pebbles")->capture_default_str();
    vd->add_option("--rounds", rounds, "rounds")->capture_default_str();
    vd->add_option("--robber", robber, "exact|girth")->check(CLI::IsMember({"exact", "girth"}))->capture_default_str();
    vd->add_option("--d", radius, "radius for the girth Robber")->capture_default_str();
    common(vd);

    // play-pg
    auto* pp = app.add_subcommand("play-pg", "play Spoiler against the Duplicator engine");
    std::string graph_for_play;
    pp->add_option("--graph", graph_for_play, "graph file")->required();
    pp->add_option("--k", k, "pebbles")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return 64;
    }

    try {
        if (*gg) {
            params = {{"kind", kind}, {"n", gn}, {"m", gm}, {"degree", gdeg}, {"girth", ggirth}, {"format", gformat}};
            OrderedGraph g;
            if (kind == "complete") g = complete_graph(gn);
            else if (kind == "bipartite") g = complete_bipartite(gn, gm);
            else if (kind == "cycle") g = cycle_graph(gn);
            else if (kind == "petersen") g = petersen_graph();
            else {
                auto r = generate_regular(gdeg, gn, ggirth, {c.seed, gattempts});
                if (!r) throw BudgetExceeded("no graph found within the attempt budget");
                g = *r;
            }
            if (gformat == "edges") {
                std::ostringstream os;
                write_edge_list(os, g);
                emit_text(c, "gen-graph", params, os.str(), t0);
            } else {
                emit(c, "gen-graph", params, graph_to_json(g), t0);
            }
        } else if (*gc) {
            auto g = load_graph(graph_path);
            params = {{"graph", graph_path}, {"parity", parity}, {"u", cfi_u}};
            std::vector<Vertex> u = cfi_u;
            if (gc->count("--u") == 0 && parity == "odd") u = {0};
            emit(c, "gen-cfi", params, structure_to_json(build_cfi(g, u).structure), t0);
        } else if (*sc) {
            params = {{"target", target}, {"input", input}};
            auto a = load_structure(input);
            auto t = parse_target(target);
            Json res;
            std::optional<std::vector<Element>> witness;
            const auto r = t.vocab().uniform_arity();
            if (a.vocab() == t.vocab() && r && *r >= 2 && t.vocab() == parity_vocab(*r) && t == build_c_ell(*r)) {
                if (auto w = solve_xor(structure_to_xor(a))) witness = std::vector<Element>(w->begin(), w->end());
                res["method"] = "xor";
            } else {
                if (auto h = find_homomorphism(a, t)) witness = h->to_vector(a.universe_size());
                res["method"] = "search";
            }
            res["result"] = witness ? "satisfiable" : "unsatisfiable";
            res["witness"] = witness ? Json(*witness) : Json(nullptr);
            emit(c, "solve-csp", params, res, t0);
        } else if (*sx) {
            params = {{"input", input}};
            std::istringstream in(slurp(input));
            auto sys = read_xor(in);
            auto w = solve_xor(sys);
            Json res = {{"result", w ? "satisfiable" : "unsatisfiable"},
                        {"variables", sys.variable_count()},
                        {"equations", sys.equations().size()}};
            res["assignment"] = w ? Json(*w) : Json(nullptr);
            emit(c, "solve-xor", params, res, t0);
        } else if (*cf) {
            params = {{"family", family}, {"max_n", max_n}};
            auto p = parse_family(family);
            auto r = report_json(check_invariance(p, max_n));
            r["family"] = p.name();
            emit(c, "check-family", params, r, t0);
        } else if (*cc) {
            params = {{"class", cls}, {"family", family}, {"check", check}, {"census", census},
                      {"max_n", cmax_n}, {"max_tuples", max_tuples}, {"count", count}};
            auto klass = parse_class(cls);
            auto p = parse_family(family);
            CensusOptions opts;
            opts.mode = census == "random" ? CensusOptions::Mode::random : CensusOptions::Mode::exhaustive;
            opts.max_n = cmax_n;
            opts.max_tuples = max_tuples;
            opts.count = count;
            opts.seed = c.seed;
            Json res = {{"class", klass.description}, {"check", check}};
            if (check == "p-closed") {
                res["family"] = p.name();
                res["verdict"] = verdict_json(is_p_closed(klass, p, opts));
            } else if (check == "monotone") {
                res["verdict"] = verdict_json(is_downwards_monotone(klass, opts));
            } else {
                res["family"] = p.name();
                auto eq = gamma_equivalence_check(klass, p, opts);
                res["one_step"] = verdict_json(eq.one_step);
                res["omega"] = verdict_json(eq.omega);
                res["agree"] = eq.agree();
            }
            emit(c, "check-closure", params, res, t0);
        } else if (*pg) {
            params = {{"a", a_path}, {"b", b_path}, {"k", k}, {"family", family}, {"arities", arities},
                      {"bijections", bij}};
            if (round_bound) params["round_bound"] = *round_bound;
            auto a = load_structure(a_path);
            auto b = load_structure(b_path);
            PGConfig cfg;
            cfg.k = k;
            cfg.family = parse_family(family);
            cfg.move_arities = arities;
            cfg.round_bound = round_bound;
            if (bij == "switchsets") {
                if (a.universe_size() % 2 != 0) throw PreconditionError("switch sets need a CFI universe");
                cfg.bijections = switch_set_bijections(a.universe_size() / 2);
            }
            auto sol = solve_pebble_game(a, b, cfg);
            const bool dup = sol.winner() == Winner::duplicator;
            Json res = {{"winner", dup ? "Duplicator" : "Spoiler"},
                        {"bounded", sol.bounded()},
                        {"rounds", sol.rounds()},
                        {"positions", sol.position_count()}};
            if (!sol.reason().empty()) res["reason"] = sol.reason();
            if (!dup && sol.position_count() > 0) res["spoiler_depth"] = sol.depth(sol.start());
            if (!strategy_out.empty() && sol.position_count() > 0) {
                Json choices = Json::array();
                for (const auto& ch : sol.choices()) choices.push_back({{"right", ch.right}, {"vars", ch.vars}});
                Json region = Json::array();
                for (std::uint64_t code = 0; code < sol.position_count(); ++code) {
                    if (!sol.in_region(code)) continue;
                    auto pos = sol.decode(code);
                    Json bs = Json::array();
                    for (std::size_t ch = 0; ch < sol.choices().size(); ++ch) bs.push_back(sol.witness(code, ch));
                    region.push_back({{"alpha", position_json(pos.alpha)}, {"beta", position_json(pos.beta)},
                                      {"bijections", bs}});
                }
                std::ofstream(strategy_out) << Json{{"winner", res["winner"]}, {"choices", choices},
                                                    {"region", region}}
                                                   .dump()
                                            << "\n";
            }
            emit(c, "solve-pg", params, res, t0);
        } else if (*cr) {
            auto g = load_graph(graph_path);
            if (ell == 0) {
                auto d = g.regular_degree();
                if (!d) throw PreconditionError("--ell is required for irregular graphs");
                ell = *d;
            }
            params = {{"graph", graph_path}, {"k", k}, {"ell", ell}};
            auto sol = solve_cr_game(g, k, ell);
            std::vector<Vertex> safe;
            for (Vertex u = 0; u < g.vertex_count(); ++u)
                if (sol.safe(0, u)) safe.push_back(u);
            Json res = {{"v0_safe", sol.safe(0, 0)}, {"safe_vertices", safe},
                        {"positions", sol.position_count()}, {"passes", sol.passes()}};
            if (!strategy_out.empty()) {
                Json pos = Json::array();
                for (EdgeMask f : sol.edge_sets())
                    for (Vertex u = 0; u < g.vertex_count(); ++u) {
                        Json p = {{"F", from_mask(f, g.edge_count())}, {"u", u}, {"safe", sol.safe(f, u)}};
                        if (!sol.safe(f, u)) {
                            p["cop_depth"] = sol.cop_depth(f, u);
                            if (auto m = sol.cop_move(f, u)) p["cop_move"] = from_mask(*m, g.edge_count());
                        }
                        pos.push_back(std::move(p));
                    }
                std::ofstream(strategy_out) << Json{{"k", k}, {"ell", ell}, {"positions", pos}}.dump() << "\n";
            }
            emit(c, "solve-cr", params, res, t0);
        } else if (*vd) {
            auto g = load_graph(graph_path);
            params = {{"graph", graph_path}, {"k", k}, {"rounds", rounds}, {"robber", robber}, {"d", radius}};
            std::shared_ptr<const RobberOracle> oracle;
            if (robber == "exact") {
                auto d = g.regular_degree();
                if (!d) throw PreconditionError("CFI needs a regular graph");
                oracle = std::make_shared<ExactRobber>(std::make_shared<const CRSolution>(solve_cr_game(g, k, *d)));
            } else {
                oracle = std::make_shared<GirthRobber>(g, radius);
            }
            DuplicatorEngine eng(g, k, oracle);
            auto rep = adversarial_verify(eng, rounds);
            Json res = {{"ok", rep.ok}, {"states", rep.states}, {"transitions", rep.transitions}};
            if (!rep.ok) {
                res["failure"] = rep.failure;
                res["trace"] = rep.trace;
            }
            emit(c, "verify-duplicator", params, res, t0);
            if (!rep.ok) return 1;
        } else if (*pp) {
            auto g = load_graph(graph_for_play);
            if (!g.regular_degree()) throw PreconditionError("CFI needs a regular graph");
            return play(g, k, std::cin, std::cout);
        }
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 2;
    } catch (const InvariantViolation& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
