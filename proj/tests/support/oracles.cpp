#include "oracles.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>

namespace oracle {

namespace {

bool maps_into(const Structure& a, const Structure& b, const std::vector<Element>& h) {
    for (std::size_t r = 0; r < a.vocab().size(); ++r)
        for (const auto& t : a.relation(r)) {
            Tuple img(t.size());
            for (std::size_t j = 0; j < t.size(); ++j) img[j] = h[t[j]];
            if (!b.relation(r).contains(img)) return false;
        }
    return true;
}

}  // namespace

bool has_homomorphism(const Structure& a, const Structure& b) {
    const auto na = a.universe_size(), nb = b.universe_size();
    if (na == 0) return true;
    if (nb == 0) return false;
    std::vector<Element> h(na, 0);
    while (true) {
        if (maps_into(a, b, h)) return true;
        std::size_t i = 0;
        while (i < na && ++h[i] == nb) h[i++] = 0;
        if (i == na) return false;
    }
}

bool partial_iso(const Structure& a, const Structure& b, const std::vector<int>& images) {
    std::vector<Element> dom;
    std::set<int> seen;
    for (std::size_t x = 0; x < images.size(); ++x) {
        if (images[x] < 0) continue;
        if (!seen.insert(images[x]).second) return false;
        dom.push_back(static_cast<Element>(x));
    }
    for (std::size_t r = 0; r < a.vocab().size(); ++r) {
        const auto ar = a.vocab()[r].arity;
        if (dom.empty()) continue;
        std::vector<std::size_t> idx(ar, 0);
        while (true) {
            Tuple t(ar), img(ar);
            for (std::size_t j = 0; j < ar; ++j) {
                t[j] = dom[idx[j]];
                img[j] = static_cast<Element>(images[t[j]]);
            }
            if (a.relation(r).contains(t) != b.relation(r).contains(img)) return false;
            std::size_t j = 0;
            while (j < ar && ++idx[j] == dom.size()) idx[j++] = 0;
            if (j == ar) break;
        }
    }
    return true;
}

bool isomorphic(const Structure& a, const Structure& b) {
    if (a.universe_size() != b.universe_size()) return false;
    std::vector<int> perm(a.universe_size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        if (partial_iso(a, b, perm)) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

std::vector<Tuple> naive_closure(const polyq::PartialFunctionFamily& p, std::size_t n, std::vector<Tuple> rel) {
    std::set<Tuple> cur(rel.begin(), rel.end());
    const auto ell = p.arity();
    while (true) {
        std::vector<Tuple> list(cur.begin(), cur.end());
        std::set<Tuple> next = cur;
        if (!list.empty()) {
            const auto r = list[0].size();
            std::vector<std::size_t> pick(ell, 0);
            while (true) {
                Tuple out(r);
                bool ok = true;
                for (std::size_t c = 0; c < r && ok; ++c) {
                    Tuple col(ell);
                    for (std::size_t i = 0; i < ell; ++i) col[i] = list[pick[i]][c];
                    auto v = p(n, col);
                    if (v) out[c] = *v;
                    else ok = false;
                }
                if (ok) next.insert(out);
                std::size_t i = 0;
                while (i < ell && ++pick[i] == list.size()) pick[i++] = 0;
                if (i == ell) break;
            }
        }
        if (next == cur) return {cur.begin(), cur.end()};
        cur = std::move(next);
    }
}

std::optional<std::size_t> girth(const polyq::OrderedGraph& g) {
    std::optional<std::size_t> best;
    for (polyq::EdgeId skip = 0; skip < g.edge_count(); ++skip) {
        const auto [s, t] = g.edge(skip);
        std::vector<std::size_t> dist(g.vertex_count(), SIZE_MAX);
        std::deque<polyq::Vertex> q{s};
        dist[s] = 0;
        while (!q.empty()) {
            auto x = q.front();
            q.pop_front();
            for (auto e : g.incident(x)) {
                if (e == skip) continue;
                auto y = g.other(e, x);
                if (dist[y] == SIZE_MAX) {
                    dist[y] = dist[x] + 1;
                    q.push_back(y);
                }
            }
        }
        if (dist[t] != SIZE_MAX && (!best || dist[t] + 1 < *best)) best = dist[t] + 1;
    }
    return best;
}

bool connected(const polyq::OrderedGraph& g) {
    std::vector<std::size_t> parent(g.vertex_count());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    std::size_t comps = g.vertex_count();
    for (const auto& e : g.edges()) {
        auto a = find(e.u), b = find(e.v);
        if (a != b) {
            parent[a] = b;
            --comps;
        }
    }
    return comps <= 1;
}

// ---------------------------------------------------------------- pebble game

namespace {

struct PebbleOracle {
    const Structure& a;
    const Structure& b;
    const polyq::PartialFunctionFamily& p;
    std::size_t n, k;
    std::vector<std::size_t> arities;

    // closure[r][P] for every subset P of the n^r tuples, as a bit mask.
    std::map<std::size_t, std::vector<std::uint32_t>> closure;
    std::map<std::pair<std::size_t, std::uint32_t>, std::uint32_t> reach_cache;

    std::size_t tuples(std::size_t r) const {
        std::size_t t = 1;
        for (std::size_t i = 0; i < r; ++i) t *= n;
        return t;
    }
    Tuple decode(std::size_t code, std::size_t r) const {
        Tuple t(r);
        for (std::size_t j = r; j-- > 0;) {
            t[j] = static_cast<Element>(code % n);
            code /= n;
        }
        return t;
    }
    std::size_t encode(const Tuple& t) const {
        std::size_t c = 0;
        for (auto x : t) c = c * n + x;
        return c;
    }

    void build_closures(std::size_t r) {
        // Keyed by family name, universe and arity; shared across instances.
        static std::map<std::tuple<std::string, std::size_t, std::size_t>, std::vector<std::uint32_t>> cache;
        auto key = std::make_tuple(p.name() + "/" + std::to_string(p.arity()), n, r);
        if (auto it = cache.find(key); it != cache.end()) {
            closure[r] = it->second;
            return;
        }
        const auto m = tuples(r);
        const auto ell = p.arity();
        if (m > 16) throw std::runtime_error("pebble oracle limited to 16 tuples per move");
        std::size_t seqs = 1;
        for (std::size_t i = 0; i < ell; ++i) seqs *= m;
        if (seqs > (std::size_t{1} << 22)) throw std::runtime_error("pebble oracle: family arity too large");
        // combine[i_1..i_ell]: code of p applied coordinatewise, or -1.
        std::vector<int> combine(seqs, -1);
        for (std::size_t q = 0; q < seqs; ++q) {
            std::vector<Tuple> args;
            std::size_t x = q;
            for (std::size_t i = 0; i < ell; ++i) {
                args.push_back(decode(x % m, r));
                x /= m;
            }
            Tuple out(r);
            bool ok = true;
            for (std::size_t c = 0; c < r && ok; ++c) {
                Tuple col(ell);
                for (std::size_t i = 0; i < ell; ++i) col[i] = args[i][c];
                auto v = p(n, col);
                if (v) out[c] = *v;
                else ok = false;
            }
            if (ok) combine[q] = static_cast<int>(encode(out));
        }
        std::vector<std::uint32_t> out(std::size_t{1} << m);
        std::vector<std::size_t> members;
        for (std::uint32_t mask = 0; mask < out.size(); ++mask) {
            std::uint32_t cur = mask;
            while (true) {
                members.clear();
                for (std::size_t c = 0; c < m; ++c)
                    if ((cur >> c) & 1) members.push_back(c);
                std::uint32_t nxt = cur;
                if (!members.empty()) {
                    std::vector<std::size_t> pick(ell, 0);
                    while (true) {
                        std::size_t q = 0;
                        for (std::size_t i = ell; i-- > 0;) q = q * m + members[pick[i]];
                        if (combine[q] >= 0) nxt |= 1u << combine[q];
                        std::size_t i = 0;
                        while (i < ell && ++pick[i] == members.size()) pick[i++] = 0;
                        if (i == ell) break;
                    }
                }
                if (nxt == cur) break;
                cur = nxt;
            }
            out[mask] = cur;
        }
        closure[r] = out;
        cache.emplace(key, std::move(out));
    }

    /// Union of Gamma^omega(P) over every P inside `good`.
    std::uint32_t reach(std::size_t r, std::uint32_t good) {
        auto key = std::make_pair(r, good);
        if (auto it = reach_cache.find(key); it != reach_cache.end()) return it->second;
        const auto& cl = closure[r];
        std::uint32_t acc = 0;
        for (std::uint32_t sub = good;; sub = (sub - 1) & good) {
            acc |= cl[sub];
            if (sub == 0) break;
        }
        reach_cache.emplace(key, acc);
        return acc;
    }

    // Position: 2k entries alpha_1..alpha_k, beta_1..beta_k, -1 for unset.
    std::size_t index(const std::vector<int>& pos) const {
        std::size_t c = 0;
        for (int x : pos) c = c * (n + 1) + static_cast<std::size_t>(x + 1);
        return c;
    }

    bool position_ok(const std::vector<int>& pos) const {
        std::vector<int> img(n, -1);
        for (std::size_t i = 0; i < k; ++i) {
            if ((pos[i] < 0) != (pos[k + i] < 0)) return false;
            if (pos[i] < 0) continue;
            if (img[pos[i]] >= 0 && img[pos[i]] != pos[k + i]) return false;
            img[pos[i]] = pos[k + i];
        }
        return partial_iso(a, b, img);
    }

    bool solve() {
        if (a.universe_size() != b.universe_size()) return false;
        if (arities.empty())
            for (std::size_t r = 1; r <= k; ++r) arities.push_back(r);
        for (auto r : arities) build_closures(r);

        std::size_t count = 1;
        for (std::size_t i = 0; i < 2 * k; ++i) count *= n + 1;
        std::vector<std::vector<int>> positions(count);
        std::vector<char> win(count, 0);
        for (std::size_t c = 0; c < count; ++c) {
            std::vector<int> pos(2 * k);
            std::size_t x = c;
            for (std::size_t i = 2 * k; i-- > 0;) {
                pos[i] = static_cast<int>(x % (n + 1)) - 1;
                x /= n + 1;
            }
            positions[c] = pos;
            win[c] = position_ok(pos);
        }

        std::vector<std::vector<std::size_t>> var_tuples;
        for (auto r : arities) {
            std::vector<std::size_t> vars(k);
            std::iota(vars.begin(), vars.end(), 0);
            std::set<std::vector<std::size_t>> seen;
            do {
                seen.insert(std::vector<std::size_t>(vars.begin(), vars.begin() + static_cast<long>(r)));
            } while (std::next_permutation(vars.begin(), vars.end()));
            var_tuples.insert(var_tuples.end(), seen.begin(), seen.end());
        }

        std::vector<Element> perm(n);
        bool changed = true;
        while (changed) {
            changed = false;
            auto cur = win;
            for (std::size_t c = 0; c < count; ++c) {
                if (!cur[c]) continue;
                const auto& pos = positions[c];
                bool survives = true;
                for (int side = 0; side < 2 && survives; ++side) {
                    for (const auto& ys : var_tuples) {
                        const auto r = ys.size();
                        const auto m = tuples(r);
                        // good[s]: response tuples keeping Duplicator in cur
                        std::vector<std::uint32_t> good(m, 0);
                        for (std::size_t s = 0; s < m; ++s) {
                            auto st = decode(s, r);
                            for (std::size_t t = 0; t < m; ++t) {
                                auto tt = decode(t, r);
                                auto nxt = pos;
                                for (std::size_t j = 0; j < r; ++j) {
                                    // side 0: Spoiler plays in B, Duplicator answers in A
                                    nxt[ys[j]] = static_cast<int>(side == 0 ? tt[j] : st[j]);
                                    nxt[k + ys[j]] = static_cast<int>(side == 0 ? st[j] : tt[j]);
                                }
                                if (cur[index(nxt)]) good[s] |= 1u << t;
                            }
                            good[s] = reach(r, good[s]);
                        }
                        std::iota(perm.begin(), perm.end(), 0);
                        bool some_f = false;
                        do {
                            bool all = true;
                            for (std::size_t s = 0; s < m && all; ++s) {
                                auto st = decode(s, r);
                                for (auto& x : st) x = perm[x];
                                all = (good[s] >> encode(st)) & 1;
                            }
                            some_f = all;
                        } while (!some_f && std::next_permutation(perm.begin(), perm.end()));
                        if (!some_f) {
                            survives = false;
                            break;
                        }
                    }
                }
                if (!survives) {
                    win[c] = 0;
                    changed = true;
                }
            }
        }
        return win[index(std::vector<int>(2 * k, -1))];
    }
};

}  // namespace

bool pebble_duplicator_wins(const Structure& a, const Structure& b, const polyq::PartialFunctionFamily& p,
                            std::size_t k, const std::vector<std::size_t>& arities) {
    PebbleOracle o{a, b, p, a.universe_size(), k, arities, {}, {}};
    return o.solve();
}

// ------------------------------------------------------------ cops and robber

namespace {

using Mask = std::uint64_t;

/// Endpoint sets (vertex masks) of every path system from u avoiding `forbidden`.
std::vector<Mask> endpoint_sets(const polyq::OrderedGraph& g, polyq::Vertex u, Mask forbidden, std::size_t ell) {
    std::set<Mask> out;
    std::vector<polyq::Vertex> ends;
    Mask used = forbidden;
    std::function<void(std::size_t)> path_no;
    std::function<void(std::size_t, polyq::Vertex, Mask, std::size_t)> extend =
        [&](std::size_t i, polyq::Vertex x, Mask visited, std::size_t len) {
            if (len > 0) {
                ends.push_back(x);
                path_no(i + 1);
                ends.pop_back();
            }
            for (auto e : g.incident(x)) {
                auto y = g.other(e, x);
                if ((used >> e) & 1 || (visited >> y) & 1) continue;
                used |= Mask{1} << e;
                extend(i, y, visited | (Mask{1} << y), len + 1);
                used &= ~(Mask{1} << e);
            }
        };
    path_no = [&](std::size_t i) {
        if (i == ell) {
            Mask m = 0;
            for (auto v : ends) m |= Mask{1} << v;
            out.insert(m);
            return;
        }
        extend(i, u, Mask{1} << u, 0);
    };
    path_no(0);
    return {out.begin(), out.end()};
}

}  // namespace

CRTable cr_minimax(const polyq::OrderedGraph& g, std::size_t k, std::size_t ell) {
    const auto n = g.vertex_count(), m = g.edge_count();
    if (m > 63 || n > 63) throw std::runtime_error("cr oracle limited to 63 edges");
    CRTable tab;
    for (std::size_t size = 0; size <= std::min(k, m); ++size) {
        std::vector<Mask> level;
        std::vector<int> pick(m, 0);
        std::fill(pick.end() - static_cast<long>(size), pick.end(), 1);
        do {
            Mask x = 0;
            for (std::size_t e = 0; e < m; ++e)
                if (pick[e]) x |= Mask{1} << e;
            level.push_back(x);
        } while (std::next_permutation(pick.begin(), pick.end()));
        std::sort(level.begin(), level.end());
        tab.sets.insert(tab.sets.end(), level.begin(), level.end());
    }
    const auto sets = tab.sets.size();
    std::vector<Mask> inc(n, 0);
    for (polyq::Vertex v = 0; v < n; ++v)
        for (auto e : g.incident(v)) inc[v] |= Mask{1} << e;

    std::map<std::pair<polyq::Vertex, Mask>, std::vector<Mask>> options;
    auto robber = [&](polyq::Vertex u, Mask forb) -> const std::vector<Mask>& {
        auto key = std::make_pair(u, forb);
        auto it = options.find(key);
        if (it == options.end()) it = options.emplace(key, endpoint_sets(g, u, forb, ell)).first;
        return it->second;
    };

    // caught[d][s][u]: Cop captures within d rounds.
    std::vector<std::vector<char>> caught(sets, std::vector<char>(n, 0));
    for (std::size_t s = 0; s < sets; ++s)
        for (polyq::Vertex u = 0; u < n; ++u) caught[s][u] = (inc[u] & tab.sets[s]) != 0;
    while (true) {
        auto next = caught;
        for (std::size_t s = 0; s < sets; ++s)
            for (polyq::Vertex u = 0; u < n; ++u) {
                if (caught[s][u]) continue;
                for (std::size_t t = 0; t < sets && !next[s][u]; ++t) {
                    bool cop_ok = true;
                    for (Mask ends : robber(u, tab.sets[s] & tab.sets[t])) {
                        bool some = false;
                        for (polyq::Vertex v = 0; v < n; ++v)
                            if ((ends >> v) & 1 && caught[t][v]) some = true;
                        if (!some) {
                            cop_ok = false;
                            break;
                        }
                    }
                    if (cop_ok) next[s][u] = 1;
                }
            }
        if (next == caught) break;
        caught = std::move(next);
    }
    tab.safe.assign(sets, std::vector<char>(n, 0));
    for (std::size_t s = 0; s < sets; ++s)
        for (polyq::Vertex u = 0; u < n; ++u) tab.safe[s][u] = !caught[s][u];
    return tab;
}

polyq::OrderedGraph random_graph(std::size_t n, double q, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(q);
    std::vector<std::pair<polyq::Vertex, polyq::Vertex>> edges;
    for (polyq::Vertex x = 0; x < n; ++x)
        for (polyq::Vertex y = x + 1; y < n; ++y)
            if (coin(rng)) edges.emplace_back(x, y);
    return polyq::OrderedGraph(n, edges);
}

}  // namespace oracle
