#include "polyq/graph.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <random>
#include <set>
#include <sstream>

#include "polyq/error.hpp"

namespace polyq {

OrderedGraph::OrderedGraph(std::size_t vertex_count, std::vector<std::pair<Vertex, Vertex>> edges)
    : n_(vertex_count), incident_(vertex_count) {
    std::set<Edge> seen;
    for (auto [a, b] : edges) {
        if (a >= n_ || b >= n_) throw PreconditionError("edge endpoint outside the vertex set");
        if (a == b) throw PreconditionError("loops are not allowed");
        Edge e{std::min(a, b), std::max(a, b)};
        if (!seen.insert(e).second) throw PreconditionError("duplicate edge");
    }
    edges_.assign(seen.begin(), seen.end());
    for (EdgeId id = 0; id < edges_.size(); ++id) {
        incident_[edges_[id].u].push_back(id);
        incident_[edges_[id].v].push_back(id);
    }
    for (Vertex v = 0; v < n_; ++v)
        std::sort(incident_[v].begin(), incident_[v].end(),
                  [&](EdgeId x, EdgeId y) { return other(x, v) < other(y, v); });
}

std::optional<EdgeId> OrderedGraph::find_edge(Vertex a, Vertex b) const {
    if (a == b || a >= n_ || b >= n_) return std::nullopt;
    Edge key{std::min(a, b), std::max(a, b)};
    auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
    if (it == edges_.end() || *it != key) return std::nullopt;
    return static_cast<EdgeId>(it - edges_.begin());
}

std::optional<std::size_t> OrderedGraph::regular_degree() const {
    if (n_ == 0) return 0;
    const auto d = incident_[0].size();
    for (const auto& inc : incident_)
        if (inc.size() != d) return std::nullopt;
    return d;
}

bool OrderedGraph::is_connected() const {
    if (n_ == 0) return true;
    auto dist = bfs_distances(*this, 0);
    return std::none_of(dist.begin(), dist.end(), [](auto d) { return d == SIZE_MAX; });
}

OrderedGraph complete_graph(std::size_t n) {
    std::vector<std::pair<Vertex, Vertex>> e;
    for (Vertex a = 0; a < n; ++a)
        for (Vertex b = a + 1; b < n; ++b) e.emplace_back(a, b);
    return OrderedGraph(n, std::move(e));
}

OrderedGraph complete_bipartite(std::size_t a, std::size_t b) {
    std::vector<std::pair<Vertex, Vertex>> e;
    for (Vertex x = 0; x < a; ++x)
        for (Vertex y = 0; y < b; ++y) e.emplace_back(x, static_cast<Vertex>(a + y));
    return OrderedGraph(a + b, std::move(e));
}

OrderedGraph cycle_graph(std::size_t n) {
    if (n < 3) throw PreconditionError("cycle needs at least 3 vertices");
    std::vector<std::pair<Vertex, Vertex>> e;
    for (Vertex a = 0; a < n; ++a) e.emplace_back(a, static_cast<Vertex>((a + 1) % n));
    return OrderedGraph(n, std::move(e));
}

OrderedGraph petersen_graph() {
    // outer 5-cycle 0..4, spokes i -- i+5, inner pentagram 5..9
    std::vector<std::pair<Vertex, Vertex>> e;
    for (Vertex i = 0; i < 5; ++i) {
        e.emplace_back(i, (i + 1) % 5);
        e.emplace_back(i, i + 5);
        e.emplace_back(i + 5, (i + 2) % 5 + 5);
    }
    return OrderedGraph(10, std::move(e));
}

OrderedGraph disjoint_union(const OrderedGraph& g, const OrderedGraph& h) {
    std::vector<std::pair<Vertex, Vertex>> e;
    for (const auto& x : g.edges()) e.emplace_back(x.u, x.v);
    const auto off = static_cast<Vertex>(g.vertex_count());
    for (const auto& x : h.edges()) e.emplace_back(x.u + off, x.v + off);
    return OrderedGraph(g.vertex_count() + h.vertex_count(), std::move(e));
}

Structure graph_to_structure(const OrderedGraph& g) {
    std::vector<Tuple> e;
    for (const auto& x : g.edges()) {
        e.push_back({x.u, x.v});
        e.push_back({x.v, x.u});
    }
    return Structure(Vocabulary({{"E", 2}}), g.vertex_count(), {std::move(e)});
}

OrderedGraph structure_to_graph(const Structure& s) {
    auto idx = s.vocab().index_of("E");
    if (!idx || s.vocab()[*idx].arity != 2) throw PreconditionError("graph needs a binary relation E");
    std::set<std::pair<Vertex, Vertex>> e;
    for (const auto& t : s.relation(*idx)) {
        if (t[0] == t[1]) throw PreconditionError("graph has a loop");
        e.emplace(std::min(t[0], t[1]), std::max(t[0], t[1]));
    }
    return OrderedGraph(s.universe_size(), {e.begin(), e.end()});
}

std::vector<std::size_t> bfs_distances(const OrderedGraph& g, Vertex u) {
    std::vector<std::size_t> dist(g.vertex_count(), SIZE_MAX);
    std::queue<Vertex> q;
    dist[u] = 0;
    q.push(u);
    while (!q.empty()) {
        Vertex x = q.front();
        q.pop();
        for (EdgeId e : g.incident(x)) {
            Vertex y = g.other(e, x);
            if (dist[y] == SIZE_MAX) {
                dist[y] = dist[x] + 1;
                q.push(y);
            }
        }
    }
    return dist;
}

std::optional<std::size_t> girth(const OrderedGraph& g) {
    std::size_t best = SIZE_MAX;
    const auto n = g.vertex_count();
    std::vector<std::size_t> dist(n);
    std::vector<EdgeId> via(n);
    for (Vertex s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), SIZE_MAX);
        std::queue<Vertex> q;
        dist[s] = 0;
        q.push(s);
        while (!q.empty()) {
            Vertex x = q.front();
            q.pop();
            if (2 * dist[x] + 1 >= best) break;
            for (EdgeId e : g.incident(x)) {
                Vertex y = g.other(e, x);
                if (dist[y] == SIZE_MAX) {
                    dist[y] = dist[x] + 1;
                    via[y] = e;
                    q.push(y);
                } else if (x == s || via[x] != e) {
                    best = std::min(best, dist[x] + dist[y] + 1);
                }
            }
        }
    }
    if (best == SIZE_MAX) return std::nullopt;
    return best;
}

std::vector<Vertex> ball(const OrderedGraph& g, Vertex u, std::size_t radius) {
    auto dist = bfs_distances(g, u);
    std::vector<Vertex> out;
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        if (dist[v] <= radius) out.push_back(v);
    return out;
}

std::optional<std::size_t> distance(const OrderedGraph& g, Vertex a, Vertex b) {
    auto d = bfs_distances(g, a)[b];
    if (d == SIZE_MAX) return std::nullopt;
    return d;
}

namespace {

std::uint64_t splitmix(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::optional<OrderedGraph> try_matching(std::size_t ell, std::size_t n, std::size_t min_girth,
                                         std::mt19937_64& rng) {
    std::vector<std::vector<Vertex>> adj(n);
    std::vector<std::size_t> left(n, ell);
    std::vector<std::pair<Vertex, Vertex>> edges;
    std::vector<std::size_t> dist(n);
    for (std::size_t placed = 0; placed < n * ell / 2; ++placed) {
        Vertex v = 0;
        for (Vertex x = 1; x < n; ++x)
            if (left[x] > left[v]) v = x;
        // Distances from v in the partial graph; joining v to w closes a
        // cycle of length dist(v, w) + 1.
        std::fill(dist.begin(), dist.end(), SIZE_MAX);
        std::queue<Vertex> q;
        dist[v] = 0;
        q.push(v);
        while (!q.empty()) {
            Vertex x = q.front();
            q.pop();
            for (Vertex y : adj[x])
                if (dist[y] == SIZE_MAX) {
                    dist[y] = dist[x] + 1;
                    q.push(y);
                }
        }
        std::vector<Vertex> cand;
        for (Vertex w = 0; w < n; ++w)
            if (w != v && left[w] > 0 && (dist[w] == SIZE_MAX || dist[w] + 1 >= min_girth))
                cand.push_back(w);
        if (cand.empty()) return std::nullopt;
        Vertex w = cand[std::uniform_int_distribution<std::size_t>(0, cand.size() - 1)(rng)];
        adj[v].push_back(w);
        adj[w].push_back(v);
        --left[v];
        --left[w];
        edges.emplace_back(v, w);
    }
    OrderedGraph g(n, std::move(edges));
    if (!g.is_connected()) return std::nullopt;
    return g;
}

}  // namespace

std::optional<OrderedGraph> generate_regular(std::size_t ell, std::size_t vertex_count,
                                             std::size_t min_girth, GenerateOptions opts) {
    if ((ell * vertex_count) % 2 != 0)
        throw PreconditionError("no regular graph: degree times vertex count is odd");
    if (ell >= vertex_count) return std::nullopt;
    std::uint64_t state = opts.seed;
    for (std::size_t attempt = 0; attempt < opts.budget; ++attempt) {
        std::mt19937_64 rng(splitmix(state));
        auto g = try_matching(ell, vertex_count, min_girth, rng);
        if (!g) continue;
        auto gi = girth(*g);
        POLYQ_ENSURE(g->regular_degree() == ell, "generated graph is not regular");
        POLYQ_ENSURE(!gi || *gi >= min_girth, "generated graph has short cycles");
        return g;
    }
    return std::nullopt;
}

namespace {

void enumerate_regular(std::size_t ell, std::size_t n, std::vector<std::vector<char>>& adj,
                       std::vector<std::size_t>& deg, Vertex v,
                       std::vector<std::pair<Vertex, Vertex>>& edges,
                       std::vector<OrderedGraph>& found, std::vector<Structure>& seen) {
    while (v < n && deg[v] == ell) ++v;
    if (v == n) {
        OrderedGraph g(n, edges);
        Structure s = graph_to_structure(g);
        for (const auto& t : seen)
            if (find_isomorphism(s, t)) return;
        seen.push_back(std::move(s));
        found.push_back(std::move(g));
        return;
    }
    // Add one edge v -- w with w > v; neighbours are added in increasing
    // order so each labelled graph is produced once.
    Vertex lo = v + 1;
    for (Vertex w = v + 1; w < n; ++w)
        if (adj[v][w]) lo = w + 1;
    for (Vertex w = lo; w < n; ++w) {
        if (deg[w] == ell) continue;
        if (ell - deg[v] > n - w) break;
        adj[v][w] = adj[w][v] = 1;
        ++deg[v];
        ++deg[w];
        edges.emplace_back(v, w);
        enumerate_regular(ell, n, adj, deg, v, edges, found, seen);
        edges.pop_back();
        --deg[v];
        --deg[w];
        adj[v][w] = adj[w][v] = 0;
    }
}

}  // namespace

std::vector<OrderedGraph> all_regular_graphs(std::size_t ell, std::size_t n) {
    if ((ell * n) % 2 != 0 || ell >= n) return {};
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    std::vector<std::size_t> deg(n, 0);
    std::vector<std::pair<Vertex, Vertex>> edges;
    // Up to isomorphism vertex 0 can be joined to 1..ell.
    for (Vertex w = 1; w <= ell; ++w) {
        adj[0][w] = adj[w][0] = 1;
        ++deg[0];
        ++deg[w];
        edges.emplace_back(0, w);
    }
    std::vector<OrderedGraph> found;
    std::vector<Structure> seen;
    enumerate_regular(ell, n, adj, deg, 1, edges, found, seen);
    std::stable_sort(found.begin(), found.end(), [](const OrderedGraph& a, const OrderedGraph& b) {
        return a.is_connected() && !b.is_connected();
    });
    return found;
}

Path make_path(const OrderedGraph& g, const std::vector<Vertex>& vertices) {
    if (vertices.empty()) throw PreconditionError("path needs a start vertex");
    Path p;
    p.start = vertices.front();
    p.vertices = vertices;
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
        auto e = g.find_edge(vertices[i], vertices[i + 1]);
        if (!e) throw PreconditionError("path uses a non-edge");
        p.edges.push_back(*e);
    }
    return p;
}

bool is_valid_path_system(const OrderedGraph& g, Vertex u, const std::vector<char>& forbidden,
                          std::size_t ell, const PathSystem& sys) {
    if (sys.size() != ell) return false;
    std::vector<char> used(g.edge_count(), 0);
    for (const auto& p : sys) {
        if (p.start != u || p.vertices.empty() || p.vertices.front() != u) return false;
        if (p.edges.empty() || p.edges.size() + 1 != p.vertices.size()) return false;
        std::set<Vertex> distinct(p.vertices.begin(), p.vertices.end());
        if (distinct.size() != p.vertices.size()) return false;
        for (std::size_t i = 0; i < p.edges.size(); ++i) {
            auto e = g.find_edge(p.vertices[i], p.vertices[i + 1]);
            if (!e || *e != p.edges[i]) return false;
            if (forbidden[*e] || used[*e]) return false;
            used[*e] = 1;
        }
    }
    return true;
}

namespace {

struct PathEnumerator {
    const OrderedGraph& g;
    Vertex u;
    const std::vector<char>& forbidden;
    std::size_t ell;
    const std::function<bool(const PathSystem&)>& fn;
    std::vector<char> used;     // edges taken by earlier paths (and the current one)
    std::vector<char> on_path;  // vertices of the current path
    PathSystem sys;
    bool stop = false;

    // Paths are built in order of their first edge's position in incident(u).
    void next_path(std::size_t min_first) {
        if (stop) return;
        if (sys.size() == ell) {
            if (!is_valid_path_system(g, u, forbidden, ell, sys))
                throw InvariantViolation("path enumeration produced an invalid system");
            if (!fn(sys)) stop = true;
            return;
        }
        // Vertex marks are per path; only edges are shared between paths.
        auto outer = std::move(on_path);
        on_path.assign(g.vertex_count(), 0);
        const auto& inc = g.incident(u);
        for (std::size_t i = min_first; i < inc.size() && !stop; ++i) {
            EdgeId e = inc[i];
            if (forbidden[e] || used[e]) continue;
            Vertex w = g.other(e, u);
            sys.push_back(Path{u, {u, w}, {e}});
            used[e] = 1;
            on_path[u] = on_path[w] = 1;
            extend(i);
            on_path[u] = on_path[w] = 0;
            used[e] = 0;
            sys.pop_back();
        }
        on_path = std::move(outer);
    }

    void extend(std::size_t first_index) {
        // Stop here, then try every continuation.
        next_path(first_index + 1);
        Path& p = sys.back();
        Vertex x = p.end();
        for (EdgeId e : g.incident(x)) {
            if (stop) return;
            Vertex y = g.other(e, x);
            if (forbidden[e] || used[e] || on_path[y]) continue;
            p.vertices.push_back(y);
            p.edges.push_back(e);
            used[e] = 1;
            on_path[y] = 1;
            extend(first_index);
            on_path[y] = 0;
            used[e] = 0;
            sys.back().vertices.pop_back();
            sys.back().edges.pop_back();
        }
    }
};

}  // namespace

void for_each_path_system(const OrderedGraph& g, Vertex u, const std::vector<char>& forbidden,
                          std::size_t ell, const std::function<bool(const PathSystem&)>& fn) {
    if (forbidden.size() != g.edge_count()) throw PreconditionError("forbidden mask has wrong size");
    if (u >= g.vertex_count()) throw PreconditionError("vertex out of range");
    if (ell == 0) {
        fn({});
        return;
    }
    PathEnumerator en{g, u, forbidden, ell, fn, std::vector<char>(g.edge_count(), 0),
                      std::vector<char>(g.vertex_count(), 0), {}};
    en.next_path(0);
}

std::vector<PathSystem> disjoint_path_systems(const OrderedGraph& g, Vertex u,
                                              const std::vector<char>& forbidden, std::size_t ell,
                                              std::size_t limit) {
    std::vector<PathSystem> out;
    if (limit == 0) return out;
    for_each_path_system(g, u, forbidden, ell, [&](const PathSystem& s) {
        out.push_back(s);
        return out.size() < limit;
    });
    return out;
}

std::optional<PathSystem> find_path_system(const OrderedGraph& g, Vertex u,
                                           const std::vector<char>& forbidden, std::size_t ell,
                                           const std::vector<char>& targets) {
    const auto n = g.vertex_count();
    const auto m = g.edge_count();
    if (forbidden.size() != m || targets.size() != n) throw PreconditionError("mask has wrong size");
    if (ell == 0) return PathSystem{};

    // flow[2e] is flow along edge e from its u-end to its v-end, flow[2e+1] the reverse.
    std::vector<char> flow(2 * m, 0);
    auto residual = [&](EdgeId e, Vertex from) {
        const bool forward = g.edge(e).u == from;
        const char same = flow[2 * e + (forward ? 0 : 1)];
        const char back = flow[2 * e + (forward ? 1 : 0)];
        return !forbidden[e] && (back || !same);
    };
    auto push = [&](EdgeId e, Vertex from) {
        const bool forward = g.edge(e).u == from;
        char& same = flow[2 * e + (forward ? 0 : 1)];
        char& back = flow[2 * e + (forward ? 1 : 0)];
        if (back) back = 0;
        else same = 1;
    };

    std::size_t value = 0;
    std::vector<EdgeId> pred_edge(n);
    std::vector<char> seen(n);
    while (value < ell) {
        std::fill(seen.begin(), seen.end(), 0);
        std::queue<Vertex> q;
        q.push(u);
        seen[u] = 1;
        std::optional<Vertex> sink;
        while (!q.empty() && !sink) {
            Vertex x = q.front();
            q.pop();
            for (EdgeId e : g.incident(x)) {
                Vertex y = g.other(e, x);
                if (seen[y] || !residual(e, x)) continue;
                seen[y] = 1;
                pred_edge[y] = e;
                if (targets[y] && y != u) {
                    sink = y;
                    break;
                }
                q.push(y);
            }
        }
        if (!sink) return std::nullopt;
        for (Vertex y = *sink; y != u;) {
            EdgeId e = pred_edge[y];
            Vertex x = g.other(e, y);
            push(e, x);
            y = x;
        }
        ++value;
    }

    // Decompose: each unit leaves u and is followed until it reaches a target.
    auto out_edges = [&](Vertex x) {
        std::vector<EdgeId> out;
        for (EdgeId e : g.incident(x)) {
            const bool forward = g.edge(e).u == x;
            if (flow[2 * e + (forward ? 0 : 1)]) out.push_back(e);
        }
        return out;
    };
    PathSystem sys;
    for (EdgeId first : out_edges(u)) {
        std::vector<Vertex> walk{u};
        std::vector<EdgeId> wedges;
        EdgeId e = first;
        Vertex x = u;
        while (true) {
            const bool forward = g.edge(e).u == x;
            flow[2 * e + (forward ? 0 : 1)] = 0;
            x = g.other(e, x);
            walk.push_back(x);
            wedges.push_back(e);
            if (targets[x] && x != u) break;
            auto next = out_edges(x);
            POLYQ_ENSURE(!next.empty(), "flow decomposition got stuck");
            e = next.front();
        }
        // Loop erasure keeps a subset of the walk's edges, so disjointness survives.
        std::vector<Vertex> pv;
        std::vector<EdgeId> pe;
        for (std::size_t i = 0; i < walk.size(); ++i) {
            auto it = std::find(pv.begin(), pv.end(), walk[i]);
            if (it != pv.end()) {
                auto keep = static_cast<std::size_t>(it - pv.begin());
                pv.resize(keep + 1);
                pe.resize(keep);
            } else {
                if (i > 0) pe.push_back(wedges[i - 1]);
                pv.push_back(walk[i]);
            }
        }
        sys.push_back(Path{u, std::move(pv), std::move(pe)});
        if (sys.size() == ell) break;
    }
    POLYQ_ENSURE(sys.size() == ell && is_valid_path_system(g, u, forbidden, ell, sys),
                 "flow-based path system is invalid");
    for (const auto& p : sys) POLYQ_ENSURE(targets[p.end()], "path ends outside the targets");
    return sys;
}

OrderedGraph read_edge_list(std::istream& in) {
    std::string line;
    std::optional<std::size_t> n;
    std::size_t declared_edges = 0;
    std::vector<std::pair<Vertex, Vertex>> edges;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag == "c" || tag[0] == '#') continue;
        if (tag == "p") {
            std::size_t v = 0;
            if (!(ls >> v >> declared_edges)) throw PreconditionError("bad 'p' line in edge list");
            n = v;
        } else if (tag == "e") {
            long long a = 0, b = 0;
            if (!n) throw PreconditionError("edge before 'p' line");
            if (!(ls >> a >> b) || a < 1 || b < 1 || static_cast<std::size_t>(a) > *n ||
                static_cast<std::size_t>(b) > *n)
                throw PreconditionError("bad 'e' line in edge list");
            edges.emplace_back(static_cast<Vertex>(a - 1), static_cast<Vertex>(b - 1));
        } else {
            throw PreconditionError("unknown line in edge list: " + line);
        }
    }
    if (!n) throw PreconditionError("edge list has no 'p' line");
    if (edges.size() != declared_edges) throw PreconditionError("edge count does not match 'p' line");
    return OrderedGraph(*n, std::move(edges));
}

void write_edge_list(std::ostream& out, const OrderedGraph& g) {
    out << "p " << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (const auto& e : g.edges()) out << "e " << e.u + 1 << ' ' << e.v + 1 << '\n';
}

}  // namespace polyq
