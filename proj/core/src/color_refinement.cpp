#include "polyq/color_refinement.hpp"

#include <algorithm>
#include <map>

#include "polyq/error.hpp"

namespace polyq {

namespace {

std::size_t binary_index(const Structure& a, std::string_view symbol) {
    auto idx = a.vocab().index_of(symbol);
    if (!idx) throw PreconditionError("no symbol '" + std::string(symbol) + "'");
    if (a.vocab()[*idx].arity != 2) throw PreconditionError("color refinement needs a binary symbol");
    return *idx;
}

/// type[v][w]: bit 0 for v->w, bit 1 for w->v.
std::vector<std::uint32_t> refine(std::size_t n, const std::vector<std::map<Element, int>>& adj,
                                  const std::vector<char>& loop) {
    std::vector<std::uint32_t> col(n);
    for (std::size_t v = 0; v < n; ++v) col[v] = loop[v] ? 1 : 0;
    std::size_t classes = 0;
    while (true) {
        using Sig = std::pair<std::uint32_t, std::vector<std::pair<int, std::uint32_t>>>;
        std::vector<Sig> sig(n);
        for (std::size_t v = 0; v < n; ++v) {
            sig[v].first = col[v];
            for (auto [w, t] : adj[v]) sig[v].second.emplace_back(t, col[w]);
            std::sort(sig[v].second.begin(), sig[v].second.end());
        }
        std::vector<Sig> sorted = sig;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (std::size_t v = 0; v < n; ++v)
            col[v] = static_cast<std::uint32_t>(std::lower_bound(sorted.begin(), sorted.end(), sig[v]) - sorted.begin());
        if (sorted.size() == classes) return col;
        classes = sorted.size();
    }
}

void add_graph(const Structure& a, std::size_t idx, std::size_t offset, std::vector<std::map<Element, int>>& adj,
               std::vector<char>& loop) {
    for (const auto& t : a.relation(idx)) {
        const Element x = static_cast<Element>(t[0] + offset), y = static_cast<Element>(t[1] + offset);
        if (x == y) {
            loop[x] = 1;
            continue;
        }
        adj[x][y] |= 1;
        adj[y][x] |= 2;
    }
}

}  // namespace

std::vector<std::uint32_t> color_refinement(const Structure& a, std::string_view symbol) {
    const auto idx = binary_index(a, symbol);
    const auto n = a.universe_size();
    std::vector<std::map<Element, int>> adj(n);
    std::vector<char> loop(n, 0);
    add_graph(a, idx, 0, adj, loop);
    return refine(n, adj, loop);
}

bool refinement_distinguishes(const Structure& a, const Structure& b, std::string_view symbol) {
    const auto ia = binary_index(a, symbol);
    const auto ib = binary_index(b, symbol);
    const auto na = a.universe_size(), nb = b.universe_size();
    if (na != nb) return true;
    std::vector<std::map<Element, int>> adj(na + nb);
    std::vector<char> loop(na + nb, 0);
    add_graph(a, ia, 0, adj, loop);
    add_graph(b, ib, na, adj, loop);
    auto col = refine(na + nb, adj, loop);
    std::vector<std::uint32_t> ha(col.begin(), col.begin() + static_cast<long>(na));
    std::vector<std::uint32_t> hb(col.begin() + static_cast<long>(na), col.end());
    std::sort(ha.begin(), ha.end());
    std::sort(hb.begin(), hb.end());
    return ha != hb;
}

}  // namespace polyq
