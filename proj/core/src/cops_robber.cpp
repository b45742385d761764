#include "polyq/cops_robber.hpp"

#include <algorithm>
#include <bit>
#include <queue>
#include <set>

#include "polyq/error.hpp"

namespace polyq {

EdgeMask to_mask(const std::vector<char>& edges) {
    if (edges.size() > 64) throw BudgetExceeded("edge masks hold at most 64 edges");
    EdgeMask m = 0;
    for (std::size_t e = 0; e < edges.size(); ++e)
        if (edges[e]) m |= EdgeMask{1} << e;
    return m;
}

std::vector<char> from_mask(EdgeMask m, std::size_t edge_count) {
    std::vector<char> out(edge_count, 0);
    for (std::size_t e = 0; e < edge_count && e < 64; ++e) out[e] = (m >> e) & 1;
    return out;
}

EdgeMask incident_mask(const OrderedGraph& g, Vertex v) {
    EdgeMask m = 0;
    for (EdgeId e : g.incident(v)) m |= EdgeMask{1} << e;
    return m;
}

std::size_t CRSolution::index(EdgeMask f) const {
    auto it = set_index_.find(f);
    if (it == set_index_.end()) throw PreconditionError("edge set is not a legal Cop position");
    return it->second;
}

bool CRSolution::safe(EdgeMask f, Vertex u) const {
    return safe_[index(f) * g_.vertex_count() + u] != 0;
}

std::size_t CRSolution::cop_depth(EdgeMask f, Vertex u) const {
    const auto i = index(f) * g_.vertex_count() + u;
    if (safe_[i]) throw PreconditionError("cop_depth of a safe position");
    return depth_[i];
}

std::optional<EdgeMask> CRSolution::cop_move(EdgeMask f, Vertex u) const {
    const auto i = index(f) * g_.vertex_count() + u;
    if (safe_[i] || cop_choice_[i] == UINT32_MAX) return std::nullopt;
    return sets_[cop_choice_[i]];
}

PathSystem CRSolution::robber_move(EdgeMask f, Vertex u, EdgeMask f_next) const {
    if (!safe(f, u)) throw PreconditionError("robber_move from an unsafe position");
    const auto j = index(f_next);
    const auto n = g_.vertex_count();
    std::vector<char> targets(n);
    for (Vertex x = 0; x < n; ++x) targets[x] = safe_[j * n + x];
    auto sys = find_path_system(g_, u, from_mask(f & f_next, g_.edge_count()), ell_, targets);
    POLYQ_ENSURE(sys.has_value(), "safe position without a Robber answer");
    return *sys;
}

CRSolution solve_cr_game(const OrderedGraph& g, std::size_t k, std::size_t ell, std::size_t budget) {
    const auto m = g.edge_count();
    const auto n = g.vertex_count();
    if (m > 64) throw BudgetExceeded("Cops and Robber solver handles at most 64 edges");
    CRSolution sol;
    sol.g_ = g;
    sol.k_ = k;
    sol.ell_ = ell;

    // Subsets of size <= k in order of size, then colexicographic bit pattern.
    for (std::size_t size = 0; size <= std::min(k, m); ++size) {
        if (size == 0) {
            sol.sets_.push_back(0);
            continue;
        }
        EdgeMask x = (size == 64) ? ~EdgeMask{0} : ((EdgeMask{1} << size) - 1);
        const EdgeMask limit = (m == 64) ? 0 : (EdgeMask{1} << m);
        while (true) {
            sol.sets_.push_back(x);
            if (sol.sets_.size() * n > budget) throw BudgetExceeded("too many Cops and Robber positions");
            // Gosper's hack
            EdgeMask c = x & (~x + 1);
            EdgeMask r = x + c;
            if (r == 0) break;
            x = (((r ^ x) >> 2) / c) | r;
            if (limit && x >= limit) break;
        }
    }
    for (std::size_t i = 0; i < sol.sets_.size(); ++i) sol.set_index_.emplace(sol.sets_[i], i);

    const auto sets = sol.sets_.size();
    sol.safe_.assign(sets * n, 0);
    sol.depth_.assign(sets * n, 0);
    sol.cop_choice_.assign(sets * n, UINT32_MAX);
    std::vector<EdgeMask> inc(n);
    for (Vertex v = 0; v < n; ++v) inc[v] = incident_mask(g, v);
    for (std::size_t s = 0; s < sets; ++s)
        for (Vertex u = 0; u < n; ++u) sol.safe_[s * n + u] = (inc[u] & sol.sets_[s]) == 0;

    std::vector<char> targets(n);
    for (std::size_t pass = 1;; ++pass) {
        std::vector<char> next = sol.safe_;
        bool changed = false;
        for (std::size_t s = 0; s < sets; ++s) {
            for (Vertex u = 0; u < n; ++u) {
                if (!sol.safe_[s * n + u]) continue;
                for (std::size_t t = 0; t < sets; ++t) {
                    for (Vertex x = 0; x < n; ++x) targets[x] = sol.safe_[t * n + x];
                    const auto forbidden = from_mask(sol.sets_[s] & sol.sets_[t], m);
                    if (!find_path_system(g, u, forbidden, ell, targets)) {
                        next[s * n + u] = 0;
                        sol.depth_[s * n + u] = static_cast<std::uint32_t>(pass);
                        sol.cop_choice_[s * n + u] = static_cast<std::uint32_t>(t);
                        changed = true;
                        break;
                    }
                }
            }
        }
        sol.safe_ = std::move(next);
        if (!changed) {
            sol.passes_ = pass;
            break;
        }
    }
    return sol;
}

bool far_from_edges(const OrderedGraph& g, Vertex u, const std::vector<EdgeId>& f, std::size_t d) {
    auto dist = bfs_distances(g, u);
    for (EdgeId e : f) {
        if (e >= g.edge_count()) throw PreconditionError("edge out of range");
        if (dist[g.edge(e).u] <= d || dist[g.edge(e).v] <= d) return false;
    }
    return true;
}

PathSystem robber_girth_move(const OrderedGraph& g, std::size_t d, const std::vector<EdgeId>& f,
                             Vertex u, const std::vector<EdgeId>& f_next) {
    auto ell = g.regular_degree();
    if (!ell || *ell < 3) throw PreconditionError("girth strategy needs a regular graph of degree >= 3");
    if (d < 1) throw PreconditionError("girth strategy needs d >= 1");
    if (u >= g.vertex_count()) throw PreconditionError("vertex out of range");
    auto gi = girth(g);
    if (gi && *gi <= 6 * d) throw PreconditionError("girth strategy needs girth > 6d");
    if (!far_from_edges(g, u, f, d)) throw PreconditionError("invariant (*) fails at the current position");
    // (ell-1)^(d-1) > 2|F'|, saturating.
    std::size_t reach = 1;
    for (std::size_t i = 1; i < d && reach <= 2 * f_next.size(); ++i) reach *= *ell - 1;
    if (reach <= 2 * f_next.size()) throw PreconditionError("too many new Cop edges for radius d");

    // Breadth-first tree of radius 3d; girth > 6d makes the ball a tree.
    const auto n = g.vertex_count();
    std::vector<std::size_t> depth(n, SIZE_MAX);
    std::vector<Vertex> parent(n, u);
    std::vector<std::vector<Vertex>> children(n);
    std::queue<Vertex> q;
    depth[u] = 0;
    q.push(u);
    while (!q.empty()) {
        Vertex x = q.front();
        q.pop();
        if (depth[x] == 3 * d) continue;
        for (EdgeId e : g.incident(x)) {
            Vertex y = g.other(e, x);
            if (depth[y] != SIZE_MAX) continue;
            depth[y] = depth[x] + 1;
            parent[y] = x;
            children[x].push_back(y);
            q.push(y);
        }
    }
    std::vector<char> in_c(n, 0);
    for (EdgeId e : f_next) {
        if (e >= g.edge_count()) throw PreconditionError("edge out of range");
        in_c[g.edge(e).u] = in_c[g.edge(e).v] = 1;
    }
    auto at_depth_below = [&](Vertex root, std::size_t steps) {
        std::vector<Vertex> layer{root};
        for (std::size_t i = 0; i < steps; ++i) {
            std::vector<Vertex> nxt;
            for (Vertex x : layer) nxt.insert(nxt.end(), children[x].begin(), children[x].end());
            layer = std::move(nxt);
        }
        return layer;
    };
    auto subtree_clean = [&](Vertex root) {
        std::vector<Vertex> stack{root};
        while (!stack.empty()) {
            Vertex x = stack.back();
            stack.pop_back();
            if (in_c[x]) return false;
            stack.insert(stack.end(), children[x].begin(), children[x].end());
        }
        return true;
    };

    PathSystem sys;
    for (Vertex child : children[u]) {
        std::optional<Vertex> x;
        for (Vertex cand : at_depth_below(child, d - 1))
            if (subtree_clean(cand)) {
                x = cand;
                break;
            }
        POLYQ_ENSURE(x.has_value(), "no clean subtree below a child");
        auto ys = at_depth_below(*x, d);
        POLYQ_ENSURE(!ys.empty(), "tree below x is too shallow");
        std::vector<Vertex> rev;
        for (Vertex y = ys.front(); y != u; y = parent[y]) rev.push_back(y);
        rev.push_back(u);
        std::reverse(rev.begin(), rev.end());
        sys.push_back(make_path(g, rev));
    }

    std::vector<char> forbidden(g.edge_count(), 0);
    std::set<EdgeId> fs(f.begin(), f.end());
    for (EdgeId e : f_next)
        if (fs.count(e)) forbidden[e] = 1;
    POLYQ_ENSURE(is_valid_path_system(g, u, forbidden, *ell, sys),
                 "girth move is not an edge-disjoint system avoiding F & F'");
    for (const auto& p : sys)
        POLYQ_ENSURE(far_from_edges(g, p.end(), f_next, d), "girth move endpoint violates (*)");
    return sys;
}

}  // namespace polyq
