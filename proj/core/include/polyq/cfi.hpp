#pragma once

#include <optional>
#include <vector>

#include "polyq/graph.hpp"
#include "polyq/structure.hpp"

namespace polyq {

/// (e, i) with i in {1, 2} is element 2e + (i - 1).
inline Element cfi_element(EdgeId e, unsigned i) { return static_cast<Element>(2 * e + (i - 1)); }
inline EdgeId cfi_edge(Element a) { return a / 2; }
inline unsigned cfi_side(Element a) { return (a & 1) + 1; }

struct CFIInstance {
    OrderedGraph graph;
    std::size_t ell = 0;
    std::vector<char> in_u;  // per vertex
    Structure structure;
};

/// Tuples over e(v) whose i-components sum to an even (R(v)) or odd
/// (R~(v)) number.
std::vector<Tuple> cfi_gadget(const OrderedGraph& g, Vertex v, bool odd);

/// Requires G connected and regular of degree >= 2.
CFIInstance build_cfi(const OrderedGraph& g, const std::vector<Vertex>& u);
CFIInstance cfi_even(const OrderedGraph& g);  // U = {}
CFIInstance cfi_odd(const OrderedGraph& g);   // U = {v0}

/// Edge-preserving bijection of E x [2]: flips (e,1) <-> (e,2) exactly for
/// the switched edges.
class SwitchSet {
public:
    SwitchSet() = default;
    explicit SwitchSet(std::size_t edge_count) : bits_(edge_count, 0) {}
    SwitchSet(std::size_t edge_count, const std::vector<EdgeId>& switched);

    std::size_t edge_count() const { return bits_.size(); }
    bool contains(EdgeId e) const { return bits_[e] != 0; }
    void toggle(EdgeId e) { bits_[e] ^= 1; }
    std::vector<EdgeId> edges() const;  // sorted

    Element operator()(Element a) const { return bits_[cfi_edge(a)] ? a ^ 1u : a; }

    bool operator==(const SwitchSet&) const = default;

private:
    std::vector<char> bits_;
};

std::size_t switching_number(const OrderedGraph& g, const SwitchSet& s, Vertex v);
std::vector<Vertex> odd_set(const OrderedGraph& g, const SwitchSet& s);
/// Odd(S) empty or {v0, v}.
bool is_good(const OrderedGraph& g, const SwitchSet& s);
/// v0 when Odd(S) is empty, else the other odd vertex. Throws unless good.
Vertex twist(const OrderedGraph& g, const SwitchSet& s);
/// Good and no edge of F at the twist. F is an edge mask.
bool is_good_for(const OrderedGraph& g, const SwitchSet& s, const std::vector<char>& f);

/// S with the edges of P toggled; P must start at twist(S).
SwitchSet switch_along_path(const OrderedGraph& g, const SwitchSet& s, const Path& p);

PartialMap to_bijection(const SwitchSet& s);
/// The bijection restricted to F x [2].
PartialMap restrict(const SwitchSet& s, const std::vector<char>& f);

/// Edges e with (e,1) or (e,2) among the given elements, as a mask.
std::vector<char> touched_edges(std::size_t edge_count, const std::vector<Element>& elements);

/// Every switch set on |E| <= 24 edges, in order of their bit patterns.
std::vector<SwitchSet> all_switch_sets(std::size_t edge_count);

}  // namespace polyq
