#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "polyq/graph.hpp"

namespace polyq {

using EdgeMask = std::uint64_t;

EdgeMask to_mask(const std::vector<char>& edges);
std::vector<char> from_mask(EdgeMask m, std::size_t edge_count);
EdgeMask incident_mask(const OrderedGraph& g, Vertex v);

/// Solution of CR^ell_k(G) on every position (F, u) with |F| <= k.
/// Requires |E| <= 64.
class CRSolution {
public:
    const OrderedGraph& graph() const { return g_; }
    std::size_t k() const { return k_; }
    std::size_t ell() const { return ell_; }

    /// Cop-edge sets of size <= k, by size and then bit pattern.
    const std::vector<EdgeMask>& edge_sets() const { return sets_; }
    std::size_t position_count() const { return sets_.size() * g_.vertex_count(); }

    /// Robber wins from (F, u). Throws if |F| > k.
    bool safe(EdgeMask f, Vertex u) const;
    /// Rounds the Cop needs from an unsafe position (0: already captured).
    std::size_t cop_depth(EdgeMask f, Vertex u) const;
    /// The Cop's move at an unsafe position that is not yet captured.
    std::optional<EdgeMask> cop_move(EdgeMask f, Vertex u) const;
    /// Robber's answer to F' from a safe position: paths avoiding F & F'
    /// that all end at vertices safe for F'.
    PathSystem robber_move(EdgeMask f, Vertex u, EdgeMask f_next) const;

    /// Number of passes until the fixpoint.
    std::size_t passes() const { return passes_; }

private:
    friend CRSolution solve_cr_game(const OrderedGraph& g, std::size_t k, std::size_t ell,
                                    std::size_t budget);
    std::size_t index(EdgeMask f) const;

    OrderedGraph g_;
    std::size_t k_ = 0;
    std::size_t ell_ = 0;
    std::vector<EdgeMask> sets_;
    std::unordered_map<EdgeMask, std::size_t> set_index_;
    std::vector<char> safe_;                    // [set * n + u]
    std::vector<std::uint32_t> depth_;          // meaningful when unsafe
    std::vector<std::uint32_t> cop_choice_;     // index into sets_, UINT32_MAX if none
    std::size_t passes_ = 0;
};

/// Greatest fixpoint of the safe positions: (F,u) stays safe while E(u)
/// misses F and every Cop choice F' has a Robber answer landing on safe
/// positions. Throws BudgetExceeded if the position count exceeds `budget`.
CRSolution solve_cr_game(const OrderedGraph& g, std::size_t k, std::size_t ell,
                         std::size_t budget = 2'000'000);

/// Invariant (*): no endpoint of an edge of F lies within distance d of u.
bool far_from_edges(const OrderedGraph& g, Vertex u, const std::vector<EdgeId>& f, std::size_t d);

/// The Robber move from the girth argument: paths u -> x_i -> y_i through
/// the breadth-first tree of radius 3d, one per child of u, where the
/// subtree under x_i misses every endpoint of F'. Requires G regular of
/// degree ell >= 3, girth > 6d, (*) at (F, u) and (ell-1)^(d-1) > 2|F'|;
/// throws PreconditionError otherwise. The returned system is checked to be
/// edge-disjoint, to avoid F & F', and to end at vertices satisfying (*)
/// for F'.
PathSystem robber_girth_move(const OrderedGraph& g, std::size_t d, const std::vector<EdgeId>& f,
                             Vertex u, const std::vector<EdgeId>& f_next);

}  // namespace polyq
