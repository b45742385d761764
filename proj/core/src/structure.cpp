#include "polyq/structure.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "polyq/error.hpp"

namespace polyq {

namespace {

constexpr std::uint64_t kBitsetLimit = std::uint64_t{1} << 24;

void require_same_vocab(const Structure& a, const Structure& b, const char* op) {
    if (!(a.vocab() == b.vocab()))
        throw PreconditionError(std::string(op) + ": vocabulary mismatch");
}

}  // namespace

Vocabulary::Vocabulary(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
    std::set<std::string> seen;
    for (const auto& s : symbols_) {
        if (s.arity == 0) throw PreconditionError("symbol '" + s.name + "' has arity 0");
        if (!seen.insert(s.name).second)
            throw PreconditionError("duplicate symbol '" + s.name + "'");
    }
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i)
        if (symbols_[i].name == name) return i;
    return std::nullopt;
}

std::optional<std::size_t> Vocabulary::uniform_arity() const {
    if (symbols_.empty()) return std::nullopt;
    for (const auto& s : symbols_)
        if (s.arity != symbols_.front().arity) return std::nullopt;
    return symbols_.front().arity;
}

std::size_t Vocabulary::max_arity() const {
    std::size_t r = 0;
    for (const auto& s : symbols_) r = std::max(r, s.arity);
    return r;
}

std::optional<std::uint64_t> checked_power(std::uint64_t n, std::size_t r) {
    std::uint64_t p = 1;
    for (std::size_t i = 0; i < r; ++i) {
        if (n != 0 && p > UINT64_MAX / n) return std::nullopt;
        p *= n;
    }
    return p;
}

std::uint64_t encode_tuple(std::span<const Element> tuple, std::size_t universe) {
    std::uint64_t code = 0;
    for (Element x : tuple) code = code * universe + x;
    return code;
}

Tuple decode_tuple(std::uint64_t code, std::size_t arity, std::size_t universe) {
    Tuple t(arity);
    for (std::size_t i = arity; i-- > 0;) {
        t[i] = static_cast<Element>(code % universe);
        code /= universe;
    }
    return t;
}

// ---------------------------------------------------------------------------
// Relation

Relation::Relation(std::size_t arity, std::size_t universe, std::vector<Tuple> tuples)
    : arity_(arity), universe_(universe), tuples_(std::move(tuples)) {
    if (arity_ == 0) throw PreconditionError("relation arity must be positive");
    for (const auto& t : tuples_) {
        if (t.size() != arity_) throw PreconditionError("tuple length does not match arity");
        for (Element x : t)
            if (x >= universe_) throw PreconditionError("tuple entry outside the universe");
    }
    std::sort(tuples_.begin(), tuples_.end());
    tuples_.erase(std::unique(tuples_.begin(), tuples_.end()), tuples_.end());

    const auto space = checked_power(universe_, arity_);
    if (space && *space <= kBitsetLimit) {
        use_bits_ = true;
        bits_.assign((*space + 63) / 64, 0);
        for (const auto& t : tuples_) {
            const auto c = encode_tuple(t, universe_);
            bits_[c >> 6] |= std::uint64_t{1} << (c & 63);
        }
    } else if (space) {
        use_codes_ = true;
        for (const auto& t : tuples_) codes_.insert(encode_tuple(t, universe_));
    }
}

bool Relation::contains(std::span<const Element> tuple) const {
    if (tuple.size() != arity_) return false;
    for (Element x : tuple)
        if (x >= universe_) return false;
    if (use_bits_) {
        const auto c = encode_tuple(tuple, universe_);
        return (bits_[c >> 6] >> (c & 63)) & 1;
    }
    if (use_codes_) return codes_.count(encode_tuple(tuple, universe_)) != 0;
    return std::binary_search(tuples_.begin(), tuples_.end(), Tuple(tuple.begin(), tuple.end()));
}

bool Relation::subset_of(const Relation& other) const {
    if (arity_ != other.arity_) return false;
    return std::all_of(tuples_.begin(), tuples_.end(),
                       [&](const Tuple& t) { return other.contains(t); });
}

// ---------------------------------------------------------------------------
// Structure

Structure::Structure(Vocabulary vocab, std::size_t universe_size,
                     std::vector<std::vector<Tuple>> relations)
    : vocab_(std::move(vocab)), n_(universe_size) {
    if (relations.size() != vocab_.size())
        throw PreconditionError("relation count does not match vocabulary");
    relations_.reserve(relations.size());
    for (std::size_t i = 0; i < relations.size(); ++i)
        relations_.emplace_back(vocab_[i].arity, n_, std::move(relations[i]));
}

Structure::Structure(Vocabulary vocab, std::size_t universe_size, std::vector<Relation> relations)
    : vocab_(std::move(vocab)), n_(universe_size), relations_(std::move(relations)) {
    if (relations_.size() != vocab_.size())
        throw PreconditionError("relation count does not match vocabulary");
    for (std::size_t i = 0; i < relations_.size(); ++i) {
        if (relations_[i].arity() != vocab_[i].arity)
            throw PreconditionError("relation arity does not match vocabulary");
        if (relations_[i].universe() != n_)
            relations_[i] = Relation(vocab_[i].arity, n_, relations_[i].tuples());
    }
}

Structure Structure::empty(Vocabulary vocab, std::size_t universe_size) {
    std::vector<std::vector<Tuple>> rels(vocab.size());
    return Structure(std::move(vocab), universe_size, std::move(rels));
}

const Relation& Structure::relation(std::string_view name) const {
    auto idx = vocab_.index_of(name);
    if (!idx) throw PreconditionError("unknown symbol '" + std::string(name) + "'");
    return relations_[*idx];
}

std::size_t Structure::tuple_count() const {
    std::size_t c = 0;
    for (const auto& r : relations_) c += r.size();
    return c;
}

// ---------------------------------------------------------------------------
// PartialMap

PartialMap PartialMap::identity(std::size_t n) {
    PartialMap m;
    for (Element i = 0; i < n; ++i) m.pairs_.emplace_hint(m.pairs_.end(), i, i);
    return m;
}

PartialMap PartialMap::from_vector(std::span<const Element> images) {
    PartialMap m;
    for (Element i = 0; i < images.size(); ++i) m.pairs_.emplace_hint(m.pairs_.end(), i, images[i]);
    return m;
}

bool PartialMap::set(Element from, Element to) {
    auto [it, inserted] = pairs_.emplace(from, to);
    return inserted || it->second == to;
}

std::optional<Element> PartialMap::operator()(Element from) const {
    auto it = pairs_.find(from);
    if (it == pairs_.end()) return std::nullopt;
    return it->second;
}

bool PartialMap::is_injective() const {
    std::set<Element> images;
    for (const auto& [a, b] : pairs_)
        if (!images.insert(b).second) return false;
    return true;
}

PartialMap PartialMap::inverse() const {
    if (!is_injective()) throw PreconditionError("inverse of a non-injective map");
    PartialMap inv;
    for (const auto& [a, b] : pairs_) inv.pairs_.emplace(b, a);
    return inv;
}

std::vector<Element> PartialMap::to_vector(std::size_t n) const {
    std::vector<Element> v(n);
    if (pairs_.size() != n) throw PreconditionError("map is not total");
    for (const auto& [a, b] : pairs_) {
        if (a >= n) throw PreconditionError("map is not total");
        v[a] = b;
    }
    return v;
}

// ---------------------------------------------------------------------------
// Operations

bool is_partial_isomorphism(const Structure& a, const Structure& b, const PartialMap& m) {
    require_same_vocab(a, b, "is_partial_isomorphism");
    for (const auto& [x, y] : m.pairs())
        if (x >= a.universe_size() || y >= b.universe_size())
            throw PreconditionError("is_partial_isomorphism: map entry outside a universe");
    if (!m.is_injective()) return false;
    const PartialMap inv = m.inverse();

    // Forward: tuples of A inside dom(m) map into B; backward: tuples of B
    // inside rng(m) pull back into A. Together with injectivity this is the
    // "tuple in R^A iff image in R^B" condition over dom(m).
    Tuple img;
    for (std::size_t r = 0; r < a.vocab().size(); ++r) {
        for (const auto& t : a.relation(r)) {
            img.clear();
            bool inside = true;
            for (Element x : t) {
                auto y = m(x);
                if (!y) { inside = false; break; }
                img.push_back(*y);
            }
            if (inside && !b.relation(r).contains(img)) return false;
        }
        for (const auto& t : b.relation(r)) {
            img.clear();
            bool inside = true;
            for (Element y : t) {
                auto x = inv(y);
                if (!x) { inside = false; break; }
                img.push_back(*x);
            }
            if (inside && !a.relation(r).contains(img)) return false;
        }
    }
    return true;
}

bool leq(const Structure& a, const Structure& b) {
    require_same_vocab(a, b, "leq");
    if (a.universe_size() != b.universe_size()) return false;
    for (std::size_t r = 0; r < a.vocab().size(); ++r)
        if (!a.relation(r).subset_of(b.relation(r))) return false;
    return true;
}

Structure structure_union(const Structure& a, const Structure& b) {
    require_same_vocab(a, b, "union");
    const std::size_t n = std::max(a.universe_size(), b.universe_size());
    std::vector<std::vector<Tuple>> rels(a.vocab().size());
    for (std::size_t r = 0; r < rels.size(); ++r) {
        rels[r] = a.relation(r).tuples();
        rels[r].insert(rels[r].end(), b.relation(r).begin(), b.relation(r).end());
    }
    return Structure(a.vocab(), n, std::move(rels));
}

Structure power(const Structure& b, std::size_t m, std::uint64_t universe_cap) {
    if (m == 0) throw PreconditionError("power: exponent must be positive");
    const std::size_t n = b.universe_size();
    const auto size = checked_power(n, m);
    if (!size || *size > universe_cap)
        throw BudgetExceeded("power: universe of B^m exceeds the configured cap");

    std::vector<std::vector<Tuple>> rels(b.vocab().size());
    for (std::size_t r = 0; r < rels.size(); ++r) {
        const auto& rel = b.relation(r).tuples();
        const auto count = checked_power(rel.size(), m);
        if (!count || *count > universe_cap)
            throw BudgetExceeded("power: relation of B^m exceeds the configured cap");
        if (rel.empty()) continue;
        const std::size_t arity = b.relation(r).arity();
        std::vector<std::size_t> pick(m, 0);
        while (true) {
            // pick[j] is the tuple of R^B used in coordinate j.
            Tuple t(arity, 0);
            for (std::size_t i = 0; i < arity; ++i) {
                std::uint64_t code = 0;
                for (std::size_t j = 0; j < m; ++j) code = code * n + rel[pick[j]][i];
                t[i] = static_cast<Element>(code);
            }
            rels[r].push_back(std::move(t));
            std::size_t j = m;
            while (j > 0 && ++pick[j - 1] == rel.size()) pick[--j] = 0;
            if (j == 0) break;
        }
    }
    return Structure(b.vocab(), static_cast<std::size_t>(*size), std::move(rels));
}

std::vector<Tuple> transpose(const std::vector<Tuple>& tuples) {
    if (tuples.empty()) return {};
    const std::size_t m = tuples.front().size();
    for (const auto& t : tuples)
        if (t.size() != m) throw PreconditionError("transpose: ragged input");
    std::vector<Tuple> out(m, Tuple(tuples.size()));
    for (std::size_t i = 0; i < tuples.size(); ++i)
        for (std::size_t j = 0; j < m; ++j) out[j][i] = tuples[i][j];
    return out;
}

Structure relabel(const Structure& a, std::span<const Element> images, std::size_t n) {
    if (images.size() != a.universe_size()) throw PreconditionError("relabel: map is not total");
    std::vector<std::vector<Tuple>> rels(a.vocab().size());
    for (std::size_t r = 0; r < rels.size(); ++r) {
        rels[r].reserve(a.relation(r).size());
        for (const auto& t : a.relation(r)) {
            Tuple u(t.size());
            for (std::size_t i = 0; i < t.size(); ++i) u[i] = images[t[i]];
            rels[r].push_back(std::move(u));
        }
    }
    return Structure(a.vocab(), n, std::move(rels));
}

// ---------------------------------------------------------------------------
// Homomorphism / isomorphism search

namespace {

struct Constraint {
    std::size_t rel;
    Tuple vars;
};

/// Backtracking with generalised arc consistency over the tuple constraints,
/// most-constrained variable first, ties broken by element index.
class HomSearch {
public:
    HomSearch(const Structure& a, const Structure& b, bool injective,
              std::vector<std::vector<char>> domains)
        : a_(a), b_(b), injective_(injective), domains_(std::move(domains)) {
        watch_.resize(a.universe_size());
        for (std::size_t r = 0; r < a.vocab().size(); ++r)
            for (const auto& t : a.relation(r)) {
                const std::size_t id = constraints_.size();
                constraints_.push_back({r, t});
                std::vector<Element> vs(t.begin(), t.end());
                std::sort(vs.begin(), vs.end());
                vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
                for (Element v : vs) watch_[v].push_back(id);
            }
    }

    std::optional<std::vector<Element>> run() {
        const std::size_t na = a_.universe_size();
        if (na == 0) return std::vector<Element>{};
        if (b_.universe_size() == 0) return std::nullopt;
        std::vector<std::size_t> all(constraints_.size());
        std::iota(all.begin(), all.end(), 0);
        if (!propagate(domains_, all)) return std::nullopt;
        if (!search(domains_)) return std::nullopt;
        return result_;
    }

private:
    using Domains = std::vector<std::vector<char>>;

    static std::size_t count(const std::vector<char>& d) {
        return static_cast<std::size_t>(std::count(d.begin(), d.end(), 1));
    }

    bool revise(Domains& dom, const Constraint& c, std::vector<Element>& changed) {
        const auto& vars = c.vars;
        const std::size_t r = vars.size();
        std::vector<std::vector<char>> support(r);
        for (std::size_t i = 0; i < r; ++i) support[i].assign(b_.universe_size(), 0);
        for (const auto& s : b_.relation(c.rel)) {
            bool ok = true;
            for (std::size_t i = 0; i < r && ok; ++i) {
                if (!dom[vars[i]][s[i]]) ok = false;
                for (std::size_t j = 0; j < i && ok; ++j)
                    if (vars[i] == vars[j] && s[i] != s[j]) ok = false;
            }
            if (!ok) continue;
            for (std::size_t i = 0; i < r; ++i) support[i][s[i]] = 1;
        }
        for (std::size_t i = 0; i < r; ++i) {
            auto& d = dom[vars[i]];
            bool touched = false;
            for (std::size_t x = 0; x < d.size(); ++x)
                if (d[x] && !support[i][x]) { d[x] = 0; touched = true; }
            if (touched) {
                if (count(d) == 0) return false;
                changed.push_back(vars[i]);
            }
        }
        return true;
    }

    bool propagate(Domains& dom, std::vector<std::size_t> queue) {
        std::vector<char> queued(constraints_.size(), 0);
        for (auto id : queue) queued[id] = 1;
        std::vector<Element> changed;
        while (!queue.empty()) {
            const auto id = queue.back();
            queue.pop_back();
            queued[id] = 0;
            changed.clear();
            if (!revise(dom, constraints_[id], changed)) return false;
            for (Element v : changed) {
                if (injective_ && !all_different(dom, v)) return false;
                for (auto w : watch_[v])
                    if (!queued[w]) { queued[w] = 1; queue.push_back(w); }
            }
        }
        return true;
    }

    // Removes the value of a fixed variable from every other domain.
    bool all_different(Domains& dom, Element v) {
        std::vector<Element> fixed{v};
        while (!fixed.empty()) {
            const Element x = fixed.back();
            fixed.pop_back();
            if (count(dom[x]) != 1) continue;
            const auto val = static_cast<std::size_t>(
                std::find(dom[x].begin(), dom[x].end(), 1) - dom[x].begin());
            for (Element y = 0; y < dom.size(); ++y) {
                if (y == x || !dom[y][val]) continue;
                dom[y][val] = 0;
                const auto c = count(dom[y]);
                if (c == 0) return false;
                if (c == 1) fixed.push_back(y);
            }
        }
        return true;
    }

    bool search(Domains& dom) {
        std::optional<Element> pick;
        std::size_t best = SIZE_MAX;
        for (Element v = 0; v < dom.size(); ++v) {
            const auto c = count(dom[v]);
            if (c > 1 && c < best) { best = c; pick = v; }
        }
        if (!pick) {
            result_.assign(dom.size(), 0);
            for (Element v = 0; v < dom.size(); ++v)
                result_[v] = static_cast<Element>(
                    std::find(dom[v].begin(), dom[v].end(), 1) - dom[v].begin());
            return true;
        }
        for (std::size_t val = 0; val < b_.universe_size(); ++val) {
            if (!dom[*pick][val]) continue;
            Domains next = dom;
            std::fill(next[*pick].begin(), next[*pick].end(), 0);
            next[*pick][val] = 1;
            if (injective_ && !all_different(next, *pick)) continue;
            if (!propagate(next, watch_[*pick])) continue;
            if (search(next)) return true;
        }
        return false;
    }

    const Structure& a_;
    const Structure& b_;
    bool injective_;
    Domains domains_;
    std::vector<Constraint> constraints_;
    std::vector<std::vector<std::size_t>> watch_;
    std::vector<Element> result_;
};

/// Joint refinement of element colours by (relation, position, neighbour
/// colours) incidence. Colour ids are shared between the two structures.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> refine_elements(const Structure& a,
                                                                              const Structure& b) {
    std::vector<std::size_t> ca(a.universe_size(), 0), cb(b.universe_size(), 0);
    std::size_t classes = 1;
    while (true) {
        using Sig = std::pair<std::size_t, std::vector<std::vector<std::size_t>>>;
        auto signatures = [](const Structure& s, const std::vector<std::size_t>& col) {
            std::vector<Sig> sig(s.universe_size());
            for (std::size_t x = 0; x < sig.size(); ++x) sig[x].first = col[x];
            for (std::size_t r = 0; r < s.vocab().size(); ++r)
                for (const auto& t : s.relation(r))
                    for (std::size_t i = 0; i < t.size(); ++i) {
                        std::vector<std::size_t> entry{r, i};
                        for (Element y : t) entry.push_back(col[y]);
                        sig[t[i]].second.push_back(std::move(entry));
                    }
            for (auto& s2 : sig) std::sort(s2.second.begin(), s2.second.end());
            return sig;
        };
        auto sa = signatures(a, ca);
        auto sb = signatures(b, cb);
        std::map<Sig, std::size_t> ids;
        for (const auto& s : sa) ids.emplace(s, 0);
        for (const auto& s : sb) ids.emplace(s, 0);
        std::size_t next = 0;
        for (auto& [k, v] : ids) v = next++;
        for (std::size_t x = 0; x < sa.size(); ++x) ca[x] = ids[sa[x]];
        for (std::size_t x = 0; x < sb.size(); ++x) cb[x] = ids[sb[x]];
        if (next == classes) break;
        classes = next;
    }
    return {ca, cb};
}

}  // namespace

std::optional<PartialMap> find_homomorphism(const Structure& a, const Structure& b) {
    require_same_vocab(a, b, "find_homomorphism");
    std::vector<std::vector<char>> dom(a.universe_size(), std::vector<char>(b.universe_size(), 1));
    HomSearch search(a, b, false, std::move(dom));
    auto h = search.run();
    if (!h) return std::nullopt;
    return PartialMap::from_vector(*h);
}

std::optional<PartialMap> find_isomorphism(const Structure& a, const Structure& b) {
    require_same_vocab(a, b, "find_isomorphism");
    if (a.universe_size() != b.universe_size()) return std::nullopt;
    for (std::size_t r = 0; r < a.vocab().size(); ++r)
        if (a.relation(r).size() != b.relation(r).size()) return std::nullopt;

    // With equal relation sizes a bijective homomorphism is an isomorphism.
    auto [ca, cb] = refine_elements(a, b);
    auto hist_a = ca, hist_b = cb;
    std::sort(hist_a.begin(), hist_a.end());
    std::sort(hist_b.begin(), hist_b.end());
    if (hist_a != hist_b) return std::nullopt;

    std::vector<std::vector<char>> dom(a.universe_size(), std::vector<char>(b.universe_size(), 0));
    for (std::size_t x = 0; x < ca.size(); ++x)
        for (std::size_t y = 0; y < cb.size(); ++y) dom[x][y] = ca[x] == cb[y];
    HomSearch search(a, b, true, std::move(dom));
    auto h = search.run();
    if (!h) return std::nullopt;
    auto m = PartialMap::from_vector(*h);
    POLYQ_ENSURE(is_partial_isomorphism(a, b, m), "find_isomorphism produced a non-isomorphism");
    return m;
}

Structure canonical_form(const Structure& a) {
    const std::size_t n = a.universe_size();
    if (n > 8) throw BudgetExceeded("canonical_form: universe larger than 8");
    std::vector<Element> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::optional<Structure> best;
    do {
        Structure s = relabel(a, perm, n);
        if (!best) {
            best = std::move(s);
            continue;
        }
        bool less = false;
        for (std::size_t r = 0; r < a.vocab().size(); ++r) {
            const auto& x = s.relation(r).tuples();
            const auto& y = best->relation(r).tuples();
            if (x != y) {
                less = x < y;
                break;
            }
        }
        if (less) best = std::move(s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best ? *best : a;
}

}  // namespace polyq
