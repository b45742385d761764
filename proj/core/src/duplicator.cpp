#include "polyq/duplicator.hpp"

#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "polyq/error.hpp"

namespace polyq {

namespace {

std::vector<EdgeId> mask_edges(const std::vector<char>& m) {
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < m.size(); ++e)
        if (m[e]) out.push_back(e);
    return out;
}

std::string tuple_str(const Tuple& t) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
    os << ')';
    return os.str();
}

}  // namespace

bool ExactRobber::certifies(const std::vector<char>& f, Vertex u) const {
    if (mask_edges(f).size() > sol_->k()) return false;
    return sol_->safe(to_mask(f), u);
}

PathSystem ExactRobber::respond(const std::vector<char>& f, Vertex u, const std::vector<char>& f_next) const {
    return sol_->robber_move(to_mask(f), u, to_mask(f_next));
}

bool GirthRobber::certifies(const std::vector<char>& f, Vertex u) const {
    return far_from_edges(g_, u, mask_edges(f), d_);
}

PathSystem GirthRobber::respond(const std::vector<char>& f, Vertex u, const std::vector<char>& f_next) const {
    return robber_girth_move(g_, d_, mask_edges(f), u, mask_edges(f_next));
}

DuplicatorEngine::DuplicatorEngine(const OrderedGraph& g, std::size_t k, std::shared_ptr<const RobberOracle> robber)
    : even_(cfi_even(g)),
      odd_(cfi_odd(g)),
      k_(k),
      ell_(even_.ell),
      family_(PartialFunctionFamily::near_unanimity(even_.ell)),
      robber_(std::move(robber)) {
    if (k_ == 0) throw PreconditionError("k must be positive");
    if (!robber_) throw PreconditionError("missing Robber oracle");
}

DuplicatorState DuplicatorEngine::initial() const {
    const auto m = even_.graph.edge_count();
    if (!robber_->certifies(std::vector<char>(m, 0), 0))
        throw PreconditionError("v0 is not certified safe for the empty set");
    return DuplicatorState{SwitchSet(m), std::vector<std::optional<Element>>(k_),
                           std::vector<std::optional<Element>>(k_)};
}

std::vector<char> DuplicatorEngine::pebbled_edges(const DuplicatorState& st) const {
    std::vector<Element> rng;
    for (const auto& a : st.alpha)
        if (a) rng.push_back(*a);
    return touched_edges(even_.graph.edge_count(), rng);
}

std::optional<std::string> DuplicatorEngine::check_invariant(const DuplicatorState& st) const {
    const auto& g = even_.graph;
    if (st.alpha.size() != k_ || st.beta.size() != k_) return "assignment has the wrong length";
    const auto f_alpha = pebbled_edges(st);
    if (!is_good_for(g, st.f, f_alpha)) return "bijection is not good for F_alpha";
    for (std::size_t i = 0; i < k_; ++i) {
        if (st.alpha[i].has_value() != st.beta[i].has_value()) return "alpha and beta differ in domain";
        if (st.alpha[i] && st.f(*st.alpha[i]) != *st.beta[i]) return "alpha -> beta is not contained in f";
    }
    if (!robber_->certifies(f_alpha, twist(g, st.f))) return "twist is not certified safe for F_alpha";
    if (!position_is_partial_isomorphism(even_.structure, odd_.structure, PGPosition{st.alpha, st.beta}))
        return "alpha -> beta is not a partial isomorphism";
    if (!is_partial_isomorphism(even_.structure, odd_.structure, restrict(st.f, f_alpha)))
        return "f restricted to F_alpha is not a partial isomorphism";
    return std::nullopt;
}

void DuplicatorEngine::require(const DuplicatorState& st) const {
    if (auto bad = check_invariant(st)) throw InvariantViolation("invariant fails on entry: " + *bad);
}

const SwitchSet& DuplicatorEngine::serve(const DuplicatorState& st, const SpoilerChoice& ch) const {
    require(st);
    if (ch.vars.empty() || ch.vars.size() > k_) throw PreconditionError("move arity must lie in 1..k");
    std::set<std::uint32_t> distinct(ch.vars.begin(), ch.vars.end());
    if (distinct.size() != ch.vars.size() || *distinct.rbegin() >= k_)
        throw PreconditionError("variables must be distinct and below k");
    return st.f;
}

DuplicatorResponse DuplicatorEngine::respond(const DuplicatorState& st, const SpoilerChoice& ch,
                                             const Tuple& spoiler) const {
    serve(st, ch);
    const auto& g = even_.graph;
    const auto n = even_.structure.universe_size();
    if (spoiler.size() != ch.vars.size()) throw PreconditionError("tuple length does not match the variables");
    for (Element x : spoiler)
        if (x >= n) throw PreconditionError("element off the universe");

    // F' from the side Spoiler moved on; both sides touch the same edges.
    auto moved = ch.right ? st.alpha : st.beta;
    for (std::size_t j = 0; j < ch.vars.size(); ++j) moved[ch.vars[j]] = spoiler[j];
    std::vector<Element> rng;
    for (const auto& x : moved)
        if (x) rng.push_back(*x);

    DuplicatorResponse resp;
    resp.f_next = touched_edges(g.edge_count(), rng);
    const auto f_alpha = pebbled_edges(st);
    const Vertex tw = twist(g, st.f);
    resp.paths = robber_->respond(f_alpha, tw, resp.f_next);
    std::vector<char> forbidden(g.edge_count(), 0);
    for (EdgeId e = 0; e < g.edge_count(); ++e) forbidden[e] = f_alpha[e] && resp.f_next[e];
    POLYQ_ENSURE(is_valid_path_system(g, tw, forbidden, ell_, resp.paths),
                 "Robber answer is not a legal path system");

    for (const auto& p : resp.paths) {
        resp.switched.push_back(switch_along_path(g, st.f, p));
        Tuple t(spoiler.size());
        // Switch sets are involutions, so f_P and its inverse agree.
        for (std::size_t j = 0; j < spoiler.size(); ++j) t[j] = resp.switched.back()(spoiler[j]);
        resp.tuples.push_back(std::move(t));
    }

    // Legality: coordinatewise N_ell of the served tuples is f^{-1}(b) (or f(a)).
    Tuple expect(spoiler.size());
    for (std::size_t j = 0; j < spoiler.size(); ++j) expect[j] = st.f(spoiler[j]);
    Tuple column(ell_);
    for (std::size_t j = 0; j < spoiler.size(); ++j) {
        for (std::size_t i = 0; i < ell_; ++i) column[i] = resp.tuples[i][j];
        auto v = family_(n, column);
        POLYQ_ENSURE(v && *v == expect[j], "legality identity fails at coordinate " + std::to_string(j));
    }
    return resp;
}

DuplicatorState DuplicatorEngine::complete(const DuplicatorState& st, const SpoilerChoice& ch,
                                           const Tuple& spoiler, const DuplicatorResponse& resp,
                                           std::size_t pick) const {
    if (pick >= resp.tuples.size()) throw PreconditionError("pick is out of range");
    DuplicatorState out{resp.switched[pick], st.alpha, st.beta};
    for (std::size_t j = 0; j < ch.vars.size(); ++j) {
        if (ch.right) {
            out.alpha[ch.vars[j]] = spoiler[j];
            out.beta[ch.vars[j]] = resp.tuples[pick][j];
        } else {
            out.alpha[ch.vars[j]] = resp.tuples[pick][j];
            out.beta[ch.vars[j]] = spoiler[j];
        }
    }
    POLYQ_ENSURE(pebbled_edges(out) == resp.f_next, "F_alpha' differs from F'");
    if (auto bad = check_invariant(out)) throw InvariantViolation("invariant fails after the round: " + *bad);
    return out;
}

namespace {

std::vector<SpoilerChoice> all_choices(std::size_t k) {
    std::vector<SpoilerChoice> out;
    std::vector<std::uint32_t> vars;
    std::vector<char> used(k, 0);
    std::function<void(bool)> rec = [&](bool right) {
        if (!vars.empty()) out.push_back({right, vars});
        if (vars.size() == k) return;
        for (std::uint32_t v = 0; v < k; ++v) {
            if (used[v]) continue;
            used[v] = 1;
            vars.push_back(v);
            rec(right);
            vars.pop_back();
            used[v] = 0;
        }
    };
    rec(false);
    rec(true);
    return out;
}

std::string choice_str(const SpoilerChoice& ch) {
    std::ostringstream os;
    os << (ch.right ? "right" : "left") << " y=(";
    for (std::size_t i = 0; i < ch.vars.size(); ++i) os << (i ? "," : "") << ch.vars[i] + 1;
    os << ')';
    return os.str();
}

}  // namespace

VerifyReport adversarial_verify(const DuplicatorEngine& engine, std::size_t rounds, std::size_t budget) {
    VerifyReport rep;
    DuplicatorState start = engine.initial();
    if (auto bad = engine.check_invariant(start)) {
        rep.ok = false;
        rep.failure = *bad;
        return rep;
    }
    const auto choices = all_choices(engine.k());
    const auto n = engine.even().structure.universe_size();
    using Key = std::pair<std::vector<EdgeId>, std::vector<std::int64_t>>;
    std::set<std::pair<Key, std::size_t>> done;
    auto key_of = [](const DuplicatorState& st) {
        std::vector<std::int64_t> pebbles;
        for (std::size_t i = 0; i < st.alpha.size(); ++i) {
            pebbles.push_back(st.alpha[i] ? *st.alpha[i] : -1);
            pebbles.push_back(st.beta[i] ? *st.beta[i] : -1);
        }
        return Key{st.f.edges(), pebbles};
    };

    std::vector<std::string> path;
    std::function<bool(const DuplicatorState&, std::size_t)> dfs = [&](const DuplicatorState& st,
                                                                        std::size_t left) -> bool {
        if (left == 0) return true;
        if (!done.insert({key_of(st), left}).second) return true;
        ++rep.states;
        for (const auto& ch : choices) {
            const auto r = ch.vars.size();
            std::uint64_t tuples = 1;
            for (std::size_t i = 0; i < r; ++i) tuples *= n;
            for (std::uint64_t code = 0; code < tuples; ++code) {
                Tuple s = decode_tuple(code, r, n);
                bool picked = false;
                try {
                    auto resp = engine.respond(st, ch, s);
                    std::set<Tuple> served;
                    for (std::size_t i = 0; i < resp.tuples.size(); ++i) {
                        // Spoiler picks a tuple; equal tuples are one choice.
                        if (!served.insert(resp.tuples[i]).second) continue;
                        if (++rep.transitions > budget) throw BudgetExceeded("adversarial search exceeded its budget");
                        path.push_back(choice_str(ch) + " tuple=" + tuple_str(s) + " pick=" +
                                       tuple_str(resp.tuples[i]));
                        picked = true;
                        auto nxt = engine.complete(st, ch, s, resp, i);
                        picked = false;
                        if (!dfs(nxt, left - 1)) return false;
                        path.pop_back();
                    }
                } catch (const InvariantViolation& e) {
                    rep.ok = false;
                    rep.failure = e.what();
                    if (!picked) path.push_back(choice_str(ch) + " tuple=" + tuple_str(s));
                    rep.trace = path;
                    return false;
                }
            }
        }
        return true;
    };
    dfs(start, rounds);
    return rep;
}

}  // namespace polyq
