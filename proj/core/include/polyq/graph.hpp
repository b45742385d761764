#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "polyq/structure.hpp"

namespace polyq {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;

struct Edge {
    Vertex u;  // u < v
    Vertex v;

    bool operator==(const Edge&) const = default;
    auto operator<=>(const Edge&) const = default;
};

/// Simple undirected graph on 0..n-1 ordered by vertex index; v0 = 0.
/// Edges are indexed in lexicographic order of (min, max) endpoint. The
/// incident edges of v are listed by the other endpoint's index, which fixes
/// the tuple e(v) used by the CFI gadgets.
class OrderedGraph {
public:
    OrderedGraph() = default;
    OrderedGraph(std::size_t vertex_count, std::vector<std::pair<Vertex, Vertex>> edges);

    std::size_t vertex_count() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(EdgeId e) const { return edges_[e]; }
    /// e(v): incident edges ordered by the neighbour's index.
    const std::vector<EdgeId>& incident(Vertex v) const { return incident_[v]; }
    std::size_t degree(Vertex v) const { return incident_[v].size(); }
    Vertex other(EdgeId e, Vertex v) const { return edges_[e].u == v ? edges_[e].v : edges_[e].u; }
    std::optional<EdgeId> find_edge(Vertex a, Vertex b) const;

    /// Common degree if regular.
    std::optional<std::size_t> regular_degree() const;
    bool is_connected() const;

    bool operator==(const OrderedGraph& o) const { return n_ == o.n_ && edges_ == o.edges_; }

private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<EdgeId>> incident_;
};

OrderedGraph complete_graph(std::size_t n);
OrderedGraph complete_bipartite(std::size_t a, std::size_t b);
OrderedGraph cycle_graph(std::size_t n);
OrderedGraph petersen_graph();
OrderedGraph disjoint_union(const OrderedGraph& g, const OrderedGraph& h);

/// Graph as a structure with one symmetric binary relation "E".
Structure graph_to_structure(const OrderedGraph& g);
/// Accepts a binary relation "E" given in one or both directions; loops rejected.
OrderedGraph structure_to_graph(const Structure& s);

/// Shortest cycle length; nullopt for forests.
std::optional<std::size_t> girth(const OrderedGraph& g);
std::vector<Vertex> ball(const OrderedGraph& g, Vertex u, std::size_t radius);
/// nullopt if disconnected.
std::optional<std::size_t> distance(const OrderedGraph& g, Vertex a, Vertex b);
std::vector<std::size_t> bfs_distances(const OrderedGraph& g, Vertex u);  // SIZE_MAX = unreachable

struct GenerateOptions {
    std::uint64_t seed = 0;
    std::size_t budget = 1000;  // attempts
};

/// Random connected ell-regular graph with girth >= min_girth, built by
/// randomised stub matching that refuses edges closing short cycles;
/// nullopt when every attempt fails. Throws PreconditionError if ell*n is odd.
std::optional<OrderedGraph> generate_regular(std::size_t ell, std::size_t vertex_count,
                                             std::size_t min_girth, GenerateOptions opts = {});

/// Every regular graph of degree `ell` on n vertices up to isomorphism, in
/// a deterministic order (connected first). Practical for n <= 10.
std::vector<OrderedGraph> all_regular_graphs(std::size_t ell, std::size_t n);

struct Path {
    Vertex start = 0;
    std::vector<Vertex> vertices;  // start first
    std::vector<EdgeId> edges;

    Vertex end() const { return vertices.back(); }
    std::size_t length() const { return edges.size(); }
    bool operator==(const Path&) const = default;
};

using PathSystem = std::vector<Path>;

/// Simple path from a vertex sequence; throws if consecutive vertices are not adjacent.
Path make_path(const OrderedGraph& g, const std::vector<Vertex>& vertices);

/// Checks that `sys` consists of `ell` nonempty simple paths from u, pairwise
/// edge-disjoint, avoiding `forbidden` (an edge mask indexed by EdgeId).
bool is_valid_path_system(const OrderedGraph& g, Vertex u, const std::vector<char>& forbidden,
                          std::size_t ell, const PathSystem& sys);

/// Enumerates every system of ell nonempty simple paths from u, pairwise
/// edge-disjoint and avoiding the forbidden edges. Systems are listed with
/// first edges in increasing incident order, each yielded system is
/// validated before the callback sees it. The callback returns false to stop.
void for_each_path_system(const OrderedGraph& g, Vertex u, const std::vector<char>& forbidden,
                          std::size_t ell, const std::function<bool(const PathSystem&)>& fn);

std::vector<PathSystem> disjoint_path_systems(const OrderedGraph& g, Vertex u,
                                              const std::vector<char>& forbidden, std::size_t ell,
                                              std::size_t limit = SIZE_MAX);

/// A path system whose endpoints all lie in `targets`, found by unit-capacity
/// max flow; nullopt if none exists.
std::optional<PathSystem> find_path_system(const OrderedGraph& g, Vertex u,
                                           const std::vector<char>& forbidden, std::size_t ell,
                                           const std::vector<char>& targets);

/// Edge-list format: "p <vertices> <edges>" then "e u v" lines, 1-based.
OrderedGraph read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const OrderedGraph& g);

}  // namespace polyq
