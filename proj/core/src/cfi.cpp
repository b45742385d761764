#include "polyq/cfi.hpp"

#include "polyq/error.hpp"

namespace polyq {

std::vector<Tuple> cfi_gadget(const OrderedGraph& g, Vertex v, bool odd) {
    const auto& ev = g.incident(v);
    const std::size_t ell = ev.size();
    if (ell > 24) throw BudgetExceeded("CFI gadget degree too large");
    std::vector<Tuple> out;
    // Bit j set means i_j = 2; the sum of the i_j has the parity of ell + popcount.
    for (std::uint32_t bits = 0; bits < (1u << ell); ++bits) {
        std::size_t twos = 0;
        Tuple t(ell);
        for (std::size_t j = 0; j < ell; ++j) {
            const unsigned i = ((bits >> (ell - 1 - j)) & 1) ? 2 : 1;
            twos += i == 2;
            t[j] = cfi_element(ev[j], i);
        }
        const bool sum_odd = ((ell + twos) % 2) == 1;
        if (sum_odd == odd) out.push_back(std::move(t));
    }
    return out;
}

CFIInstance build_cfi(const OrderedGraph& g, const std::vector<Vertex>& u) {
    auto ell = g.regular_degree();
    if (!ell || *ell < 2) throw PreconditionError("CFI needs a regular graph of degree at least 2");
    if (!g.is_connected()) throw PreconditionError("CFI needs a connected graph");
    std::vector<char> in_u(g.vertex_count(), 0);
    for (Vertex v : u) {
        if (v >= g.vertex_count()) throw PreconditionError("U contains a non-vertex");
        in_u[v] = 1;
    }
    std::vector<std::vector<Tuple>> rels(2);
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        auto even = cfi_gadget(g, v, false);
        auto odd = cfi_gadget(g, v, true);
        auto& r0 = rels[0];
        auto& r1 = rels[1];
        if (in_u[v]) std::swap(even, odd);
        r0.insert(r0.end(), even.begin(), even.end());
        r1.insert(r1.end(), odd.begin(), odd.end());
    }
    Vocabulary vocab({{"R0", *ell}, {"R1", *ell}});
    return CFIInstance{g, *ell, std::move(in_u), Structure(vocab, 2 * g.edge_count(), std::move(rels))};
}

CFIInstance cfi_even(const OrderedGraph& g) { return build_cfi(g, {}); }

CFIInstance cfi_odd(const OrderedGraph& g) {
    if (g.vertex_count() == 0) throw PreconditionError("empty graph");
    return build_cfi(g, {0});
}

SwitchSet::SwitchSet(std::size_t edge_count, const std::vector<EdgeId>& switched) : bits_(edge_count, 0) {
    for (EdgeId e : switched) {
        if (e >= edge_count) throw PreconditionError("switch set mentions a non-edge");
        bits_[e] = 1;
    }
}

std::vector<EdgeId> SwitchSet::edges() const {
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < bits_.size(); ++e)
        if (bits_[e]) out.push_back(e);
    return out;
}

std::size_t switching_number(const OrderedGraph& g, const SwitchSet& s, Vertex v) {
    std::size_t n = 0;
    for (EdgeId e : g.incident(v)) n += s.contains(e);
    return n;
}

std::vector<Vertex> odd_set(const OrderedGraph& g, const SwitchSet& s) {
    if (s.edge_count() != g.edge_count()) throw PreconditionError("switch set does not match the graph");
    std::vector<Vertex> out;
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        if (switching_number(g, s, v) % 2 == 1) out.push_back(v);
    return out;
}

bool is_good(const OrderedGraph& g, const SwitchSet& s) {
    auto odd = odd_set(g, s);
    return odd.empty() || (odd.size() == 2 && odd[0] == 0);
}

Vertex twist(const OrderedGraph& g, const SwitchSet& s) {
    auto odd = odd_set(g, s);
    if (odd.empty()) return 0;
    if (odd.size() == 2 && odd[0] == 0) return odd[1];
    throw PreconditionError("twist of a switch set that is not good");
}

bool is_good_for(const OrderedGraph& g, const SwitchSet& s, const std::vector<char>& f) {
    if (f.size() != g.edge_count()) throw PreconditionError("edge mask has wrong size");
    if (!is_good(g, s)) return false;
    for (EdgeId e : g.incident(twist(g, s)))
        if (f[e]) return false;
    return true;
}

SwitchSet switch_along_path(const OrderedGraph& g, const SwitchSet& s, const Path& p) {
    if (p.vertices.empty() || p.start != twist(g, s))
        throw PreconditionError("path does not start at the twist");
    SwitchSet out = s;
    for (EdgeId e : p.edges) out.toggle(e);
    POLYQ_ENSURE(is_good(g, out) && twist(g, out) == p.end(), "path switching lost the twist");
    return out;
}

PartialMap to_bijection(const SwitchSet& s) {
    std::map<Element, Element> m;
    for (Element a = 0; a < 2 * s.edge_count(); ++a) m.emplace(a, s(a));
    return PartialMap(std::move(m));
}

PartialMap restrict(const SwitchSet& s, const std::vector<char>& f) {
    if (f.size() != s.edge_count()) throw PreconditionError("edge mask has wrong size");
    std::map<Element, Element> m;
    for (EdgeId e = 0; e < f.size(); ++e)
        if (f[e])
            for (unsigned i = 1; i <= 2; ++i) m.emplace(cfi_element(e, i), s(cfi_element(e, i)));
    return PartialMap(std::move(m));
}

std::vector<char> touched_edges(std::size_t edge_count, const std::vector<Element>& elements) {
    std::vector<char> f(edge_count, 0);
    for (Element a : elements) {
        if (cfi_edge(a) >= edge_count) throw PreconditionError("element outside E x [2]");
        f[cfi_edge(a)] = 1;
    }
    return f;
}

std::vector<SwitchSet> all_switch_sets(std::size_t edge_count) {
    if (edge_count > 24) throw BudgetExceeded("too many switch sets to list");
    std::vector<SwitchSet> out;
    for (std::uint32_t bits = 0; bits < (1u << edge_count); ++bits) {
        SwitchSet s(edge_count);
        for (EdgeId e = 0; e < edge_count; ++e)
            if ((bits >> e) & 1) s.toggle(e);
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace polyq
