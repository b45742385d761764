#include "polyq/pebble_game.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "polyq/error.hpp"

namespace polyq {

bool position_is_partial_isomorphism(const Structure& a, const Structure& b, const PGPosition& pos) {
    if (pos.alpha.size() != pos.beta.size()) throw PreconditionError("alpha and beta differ in length");
    std::map<Element, Element> m;
    std::map<Element, Element> back;
    for (std::size_t i = 0; i < pos.alpha.size(); ++i) {
        if (pos.alpha[i].has_value() != pos.beta[i].has_value())
            throw PreconditionError("alpha and beta have different domains");
        if (!pos.alpha[i]) continue;
        const Element x = *pos.alpha[i], y = *pos.beta[i];
        if (x >= a.universe_size() || y >= b.universe_size()) throw PreconditionError("pebble off the universe");
        auto [it, fresh] = m.emplace(x, y);
        if (!fresh && it->second != y) return false;
        auto [jt, fresh2] = back.emplace(y, x);
        if (!fresh2 && jt->second != x) return false;
    }
    return is_partial_isomorphism(a, b, PartialMap(std::move(m)));
}

namespace {

struct Codec {
    std::size_t n = 0;
    std::size_t k = 0;
    std::uint64_t base = 0;  // n*n + 1; digit n*n is "unassigned"
    std::vector<std::uint64_t> pow;

    Codec(std::size_t n_, std::size_t k_) : n(n_), k(k_), base(n_ * n_ + 1), pow(k_ + 1, 1) {
        for (std::size_t i = 1; i <= k; ++i) pow[i] = pow[i - 1] * base;
    }
    std::uint64_t digit(std::uint64_t code, std::size_t var) const { return (code / pow[var]) % base; }
    std::uint64_t with(std::uint64_t code, std::size_t var, std::uint64_t d) const {
        return code + (d - digit(code, var)) * pow[var];
    }
};

/// Digits of a tuple code, most significant first.
void unpack(std::uint64_t code, std::size_t r, std::size_t n, Element* out) {
    for (std::size_t j = r; j-- > 0;) {
        out[j] = static_cast<Element>(code % n);
        code /= n;
    }
}

struct Solver {
    const Structure& a;
    const Structure& b;
    const PGConfig& cfg;
    Codec codec;
    std::size_t n;
    std::vector<SpoilerChoice> choices;
    std::vector<std::vector<Element>> maps;      // restricted mode, A -> B
    std::vector<std::vector<Element>> inverses;  // B -> A
    std::map<std::pair<std::size_t, std::vector<std::uint32_t>>, std::vector<char>> closure_cache;

    Solver(const Structure& a_, const Structure& b_, const PGConfig& c)
        : a(a_), b(b_), cfg(c), codec(a_.universe_size(), c.k), n(a_.universe_size()) {}

    std::vector<char> closure(std::size_t r, std::vector<std::uint32_t> good, std::size_t tuples) {
        std::vector<char> out(tuples, 0);
        const auto& p = cfg.family;
        const bool trivial = p.kind() == FamilyKind::nowhere ||
                             (p.kind() == FamilyKind::near_unanimity && r < p.arity());
        if (trivial) {
            for (auto u : good) out[u] = 1;
            return out;
        }
        auto key = std::make_pair(r, good);
        auto it = closure_cache.find(key);
        if (it != closure_cache.end()) return it->second;
        std::vector<Tuple> rel;
        for (auto u : good) {
            Tuple t(r);
            unpack(u, r, n, t.data());
            rel.push_back(std::move(t));
        }
        Relation closed = gamma_closure(p, n, Relation(r, n, std::move(rel)));
        for (const auto& t : closed) out[encode_tuple(t, n)] = 1;
        closure_cache.emplace(std::move(key), out);
        return out;
    }

    /// Position after Spoiler's tuple s and the response tuple t.
    std::uint64_t next(std::uint64_t code, const SpoilerChoice& ch, const Element* s, const Element* t) const {
        for (std::size_t j = 0; j < ch.vars.size(); ++j) {
            const Element x = ch.right ? s[j] : t[j];  // in A
            const Element y = ch.right ? t[j] : s[j];  // in B
            code = codec.with(code, ch.vars[j], std::uint64_t{x} * n + y);
        }
        return code;
    }

    /// Tables T[s] over response tuples, or nullopt if some T[s] is empty.
    std::optional<std::vector<std::vector<char>>> targets(std::uint64_t code, const SpoilerChoice& ch,
                                           const std::vector<char>& region) {
        const std::size_t r = ch.vars.size();
        std::uint64_t tuples = 1;
        for (std::size_t i = 0; i < r; ++i) tuples *= n;
        std::vector<std::vector<char>> table(tuples);
        std::vector<Element> s(r), t(r);
        for (std::uint64_t sc = 0; sc < tuples; ++sc) {
            unpack(sc, r, n, s.data());
            std::vector<std::uint32_t> good;
            for (std::uint64_t tc = 0; tc < tuples; ++tc) {
                unpack(tc, r, n, t.data());
                if (region[next(code, ch, s.data(), t.data())]) good.push_back(static_cast<std::uint32_t>(tc));
            }
            table[sc] = closure(r, std::move(good), tuples);
            if (std::none_of(table[sc].begin(), table[sc].end(), [](char c) { return c != 0; })) return std::nullopt;
        }
        return table;
    }

    static std::uint64_t image_code(const std::vector<Element>& f, const Element* s, std::size_t r, std::size_t n) {
        std::uint64_t c = 0;
        for (std::size_t j = 0; j < r; ++j) c = c * n + f[s[j]];
        return c;
    }

    bool fits(const std::vector<Element>& f, const std::vector<std::vector<char>>& table, std::size_t r) const {
        std::vector<Element> s(r);
        for (std::uint64_t sc = 0; sc < table.size(); ++sc) {
            unpack(sc, r, n, s.data());
            if (!table[sc][image_code(f, s.data(), r, n)]) return false;
        }
        return true;
    }

    /// Bijection f (spoiler side -> response side) with f(s) in T[s] for every s.
    std::optional<std::vector<Element>> bijection(const std::vector<std::vector<char>>& table, std::size_t r,
                                                  bool right) const {
        if (cfg.bijections) {
            for (const auto& f : right ? maps : inverses)
                if (fits(f, table, r)) return f;
            return std::nullopt;
        }
        // Tuples grouped by their largest entry: checked once that entry is mapped.
        std::vector<std::vector<std::uint64_t>> by_max(n);
        std::vector<Element> s(r);
        for (std::uint64_t sc = 0; sc < table.size(); ++sc) {
            unpack(sc, r, n, s.data());
            by_max[*std::max_element(s.begin(), s.end())].push_back(sc);
        }
        std::vector<Element> f(n, 0);
        std::vector<char> used(n, 0);
        std::vector<Element> buf(r);
        auto rec = [&](auto&& self, std::size_t x) -> bool {
            if (x == n) return true;
            for (Element y = 0; y < n; ++y) {
                if (used[y]) continue;
                f[x] = y;
                bool ok = true;
                for (auto sc : by_max[x]) {
                    unpack(sc, r, n, buf.data());
                    if (!table[sc][image_code(f, buf.data(), r, n)]) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) continue;
                used[y] = 1;
                if (self(self, x + 1)) return true;
                used[y] = 0;
            }
            return false;
        };
        if (rec(rec, 0)) return f;
        return std::nullopt;
    }
};

std::vector<SpoilerChoice> make_choices(std::size_t k, const std::vector<std::size_t>& arities) {
    std::vector<std::size_t> rs = arities;
    if (rs.empty())
        for (std::size_t r = 1; r <= k; ++r) rs.push_back(r);
    std::sort(rs.begin(), rs.end());
    rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
    std::vector<SpoilerChoice> out;
    for (bool right : {false, true}) {
        for (std::size_t r : rs) {
            if (r == 0 || r > k) throw PreconditionError("move arity must lie in 1..k");
            // ordered r-tuples of distinct variables
            std::vector<std::uint32_t> vars(r);
            auto rec = [&](auto&& self, std::size_t j, std::vector<char>& used) -> void {
                if (j == r) {
                    out.push_back({right, vars});
                    return;
                }
                for (std::uint32_t v = 0; v < k; ++v) {
                    if (used[v]) continue;
                    used[v] = 1;
                    vars[j] = v;
                    self(self, j + 1, used);
                    used[v] = 0;
                }
            };
            std::vector<char> used(k, 0);
            rec(rec, 0, used);
        }
    }
    return out;
}

}  // namespace

std::uint64_t PGSolution::encode(const PGPosition& pos) const {
    if (pos.alpha.size() != k_ || pos.beta.size() != k_) throw PreconditionError("position has wrong length");
    Codec codec(n_, k_);
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < k_; ++i) {
        if (pos.alpha[i].has_value() != pos.beta[i].has_value())
            throw PreconditionError("alpha and beta have different domains");
        std::uint64_t d = n_ * n_;
        if (pos.alpha[i]) {
            if (*pos.alpha[i] >= n_ || *pos.beta[i] >= n_) throw PreconditionError("pebble off the universe");
            d = std::uint64_t{*pos.alpha[i]} * n_ + *pos.beta[i];
        }
        code += d * codec.pow[i];
    }
    return code;
}

PGPosition PGSolution::decode(std::uint64_t code) const {
    Codec codec(n_, k_);
    PGPosition pos{std::vector<std::optional<Element>>(k_), std::vector<std::optional<Element>>(k_)};
    for (std::size_t i = 0; i < k_; ++i) {
        auto d = codec.digit(code, i);
        if (d == n_ * n_) continue;
        pos.alpha[i] = static_cast<Element>(d / n_);
        pos.beta[i] = static_cast<Element>(d % n_);
    }
    return pos;
}

std::optional<std::size_t> PGSolution::killing_choice(std::uint64_t code) const {
    if (killing_.empty() || killing_[code] == UINT32_MAX) return std::nullopt;
    return killing_[code];
}

const std::vector<Element>& PGSolution::witness(std::uint64_t code, std::size_t choice) const {
    if (!in_region(code)) throw PreconditionError("no witness outside the winning region");
    return witness_[code * choices_.size() + choice];
}

std::uint64_t PGSolution::advance(std::uint64_t code, std::size_t choice, const Tuple& s, const Tuple& t) const {
    const auto& ch = choices_.at(choice);
    if (s.size() != ch.vars.size() || t.size() != ch.vars.size()) throw PreconditionError("tuple length mismatch");
    Codec codec(n_, k_);
    for (std::size_t j = 0; j < ch.vars.size(); ++j) {
        if (s[j] >= n_ || t[j] >= n_) throw PreconditionError("element off the universe");
        const Element x = ch.right ? s[j] : t[j];
        const Element y = ch.right ? t[j] : s[j];
        code = codec.with(code, ch.vars[j], std::uint64_t{x} * n_ + y);
    }
    return code;
}

std::vector<Tuple> PGSolution::response(std::uint64_t code, std::size_t choice, const Tuple& s) const {
    const auto r = choices_.at(choice).vars.size();
    std::uint64_t tuples = 1;
    for (std::size_t i = 0; i < r; ++i) tuples *= n_;
    std::vector<Tuple> out;
    for (std::uint64_t tc = 0; tc < tuples; ++tc) {
        Tuple t(r);
        unpack(tc, r, n_, t.data());
        if (in_region(advance(code, choice, s, t))) out.push_back(std::move(t));
    }
    return out;
}

PGSolution solve_pebble_game(const Structure& a, const Structure& b, const PGConfig& cfg) {
    if (!(a.vocab() == b.vocab())) throw PreconditionError("structures have different vocabularies");
    if (cfg.k == 0) throw PreconditionError("pebble game needs k >= 1");
    PGSolution sol;
    sol.k_ = cfg.k;
    sol.choices_ = make_choices(cfg.k, cfg.move_arities);
    if (a.universe_size() != b.universe_size()) {
        sol.winner_ = Winner::spoiler;
        sol.reason_ = "no bijection";
        return sol;
    }
    const std::size_t n = a.universe_size();
    sol.n_ = n;
    sol.start_ = sol.encode(PGPosition{std::vector<std::optional<Element>>(cfg.k),
                                       std::vector<std::optional<Element>>(cfg.k)});

    Solver sv(a, b, cfg);
    sv.choices = sol.choices_;
    if (cfg.bijections) {
        for (const auto& f : *cfg.bijections) {
            if (f.size() != n) throw PreconditionError("supplied bijection has the wrong size");
            std::vector<Element> inv(n, UINT32_MAX);
            for (Element x = 0; x < n; ++x) {
                if (f[x] >= n || inv[f[x]] != UINT32_MAX) throw PreconditionError("supplied map is not a bijection");
                inv[f[x]] = x;
            }
            sv.maps.push_back(f);
            sv.inverses.push_back(std::move(inv));
        }
    } else if (n > cfg.full_mode_limit) {
        throw BudgetExceeded("full bijection mode is limited to universes of size " +
                             std::to_string(cfg.full_mode_limit));
    }

    std::uint64_t count = 1;
    for (std::size_t i = 0; i < cfg.k; ++i) {
        count *= sv.codec.base;
        if (count > cfg.position_budget) throw BudgetExceeded("too many pebble game positions");
    }
    const auto nc = sol.choices_.size();
    sol.depth_.assign(count, PGSolution::kForever);
    sol.killing_.assign(count, UINT32_MAX);
    sol.witness_.assign(count * nc, {});

    std::vector<char> region(count, 0);
    for (std::uint64_t code = 0; code < count; ++code) {
        if (position_is_partial_isomorphism(a, b, sol.decode(code))) region[code] = 1;
        else sol.depth_[code] = 0;
    }

    std::size_t pass = 0;
    while (true) {
        if (cfg.round_bound && pass == *cfg.round_bound) {
            sol.bounded_ = true;
            break;
        }
        ++pass;
        std::vector<char> next = region;
        bool changed = false;
        for (std::uint64_t code = 0; code < count; ++code) {
            if (!region[code]) continue;
            for (std::size_t c = 0; c < nc; ++c) {
                const auto& ch = sol.choices_[c];
                auto table = sv.targets(code, ch, region);
                std::optional<std::vector<Element>> f;
                if (table) f = sv.bijection(*table, ch.vars.size(), ch.right);
                if (!f) {
                    next[code] = 0;
                    sol.depth_[code] = static_cast<std::uint32_t>(pass);
                    sol.killing_[code] = static_cast<std::uint32_t>(c);
                    sol.witness_[code * nc + c].clear();
                    changed = true;
                    break;
                }
                sol.witness_[code * nc + c] = std::move(*f);
            }
        }
        region = std::move(next);
        if (!changed) break;
    }
    sol.rounds_ = pass;
    for (std::uint64_t code = 0; code < count; ++code)
        if (!region[code]) {
            for (std::size_t c = 0; c < nc; ++c) sol.witness_[code * nc + c].clear();
        }
    sol.winner_ = region[sol.start_] ? Winner::duplicator : Winner::spoiler;
    if (sol.winner_ == Winner::spoiler) sol.bounded_ = false;
    return sol;
}

std::vector<std::vector<Element>> switch_set_bijections(std::size_t edge_count) {
    if (edge_count > 20) throw BudgetExceeded("too many switch sets");
    std::vector<std::vector<Element>> out;
    for (std::uint32_t bits = 0; bits < (1u << edge_count); ++bits) {
        std::vector<Element> f(2 * edge_count);
        for (Element x = 0; x < f.size(); ++x) f[x] = ((bits >> (x / 2)) & 1) ? (x ^ 1u) : x;
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace polyq
