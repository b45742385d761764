#include "polyq/closure.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

#include "polyq/csp.hpp"
#include "polyq/error.hpp"

namespace polyq {

namespace {

bool is_c_ell(const Structure& t) {
    const auto& v = t.vocab();
    if (t.universe_size() != 2 || v.size() != 2 || v[0].name != "R0" || v[1].name != "R1") return false;
    auto r = v.uniform_arity();
    return r && *r >= 2 && *r <= 24 && t == build_c_ell(*r);
}

/// A random A together with a map h into the target; tuples are drawn among
/// those whose image lies in the target relation.
Structure plant_into(const Structure& target, std::size_t n, std::mt19937_64& rng) {
    const auto m = target.universe_size();
    std::vector<Element> h(n);
    std::uniform_int_distribution<Element> pick(0, static_cast<Element>(m - 1));
    for (auto& x : h) x = pick(rng);
    std::vector<std::vector<Tuple>> rels;
    for (std::size_t r = 0; r < target.vocab().size(); ++r) {
        const auto arity = target.vocab()[r].arity;
        std::vector<Tuple> tuples;
        const auto want = std::uniform_int_distribution<std::size_t>(0, 2 * n)(rng);
        for (std::size_t tries = 0; tuples.size() < want && tries < 20 * (want + 1); ++tries) {
            Tuple t(arity), img(arity);
            for (std::size_t j = 0; j < arity; ++j) {
                t[j] = static_cast<Element>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
                img[j] = h[t[j]];
            }
            if (target.relation(r).contains(img)) tuples.push_back(std::move(t));
        }
        rels.push_back(std::move(tuples));
    }
    return Structure(target.vocab(), n, std::move(rels));
}

void require_vocab(const StructureClass& k, const Structure& a) {
    if (!(a.vocab() == k.vocab)) throw PreconditionError("structure vocabulary does not match the class");
}

std::size_t parse_size(std::string_view s, std::string_view whole) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw PreconditionError("bad class selector '" + std::string(whole) + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) return out;
        start = pos + 1;
    }
}

}  // namespace

StructureClass csp_class(const Structure& target) {
    StructureClass k;
    k.vocab = target.vocab();
    k.description = "csp";
    if (is_c_ell(target)) {
        k.member = [](const Structure& a) { return solve_xor(structure_to_xor(a)).has_value(); };
    } else {
        k.member = [target](const Structure& a) { return find_homomorphism(a, target).has_value(); };
    }
    if (target.universe_size() > 0)
        k.plant = [target](std::size_t n, std::mt19937_64& rng) { return plant_into(target, n, rng); };
    return k;
}

StructureClass explicit_class(const Vocabulary& vocab, std::vector<Structure> members,
                              std::string description) {
    for (const auto& m : members)
        if (!(m.vocab() == vocab)) throw PreconditionError("explicit class member has the wrong vocabulary");
    StructureClass k;
    k.vocab = vocab;
    k.description = std::move(description);
    k.member = [members = std::move(members)](const Structure& a) {
        for (const auto& m : members)
            if (m.universe_size() == a.universe_size() && m.tuple_count() == a.tuple_count() &&
                find_isomorphism(a, m))
                return true;
        return false;
    };
    return k;
}

StructureClass predicate_class(const Vocabulary& vocab, std::function<bool(const Structure&)> pred,
                               std::string description) {
    return StructureClass{vocab, std::move(pred), std::move(description), {}};
}

StructureClass empty_relation_class(std::size_t arity) {
    return predicate_class(Vocabulary({{"P", arity}}),
                           [](const Structure& a) { return a.relation(0).empty(); }, "P empty");
}

StructureClass nonempty_relation_class(std::size_t arity) {
    return predicate_class(Vocabulary({{"R", arity}}),
                           [](const Structure& a) { return !a.relation(0).empty(); }, "R nonempty");
}

StructureClass imhof_star(const StructureClass& k) {
    auto r = k.vocab.uniform_arity();
    if (!r || k.vocab.size() == 0) throw PreconditionError("imhof_star needs a uniform-arity vocabulary");
    const auto m = k.vocab.size();
    std::vector<Symbol> syms = k.vocab.symbols();
    for (const auto& s : k.vocab.symbols()) syms.push_back({s.name + "_c", s.arity});
    StructureClass star;
    star.vocab = Vocabulary(std::move(syms));
    star.description = "imhof*(" + k.description + ")";
    star.member = [k, m, r = *r](const Structure& a) {
        const auto full = checked_power(a.universe_size(), r);
        bool some_gap = false;
        for (std::size_t i = 0; i < m; ++i) {
            const auto& ri = a.relation(i);
            const auto& si = a.relation(m + i);
            for (const auto& t : ri)
                if (si.contains(t)) return false;
            // Disjoint, so R_i u S_i is everything iff the sizes add up.
            if (!full || ri.size() + si.size() != *full) some_gap = true;
        }
        if (some_gap) return true;
        std::vector<Relation> reduct(a.relations().begin(), a.relations().begin() + static_cast<long>(m));
        return k.member(Structure(k.vocab, a.universe_size(), std::move(reduct)));
    };
    return star;
}

StructureClass parse_class(std::string_view selector) {
    auto parts = split(selector, ':');
    if (parts.size() == 2 && parts[0] == "csp" && parts[1].size() > 1 && parts[1][0] == 'c') {
        auto c = csp_class(build_c_ell(parse_size(parts[1].substr(1), selector)));
        c.description = std::string(selector);
        return c;
    }
    if ((parts.size() == 4 || parts.size() == 5) && parts[0] == "csp" && parts[1] == "h") {
        std::size_t kk = parts.size() == 5 ? parse_size(parts[4], selector) : 1;
        auto c = csp_class(build_hypergraph_target(parse_size(parts[2], selector),
                                                   parse_size(parts[3], selector), kk));
        c.description = std::string(selector);
        return c;
    }
    if (parts.size() == 2 && parts[0] == "empty") return empty_relation_class(parse_size(parts[1], selector));
    if (parts.size() == 2 && parts[0] == "nonempty")
        return nonempty_relation_class(parse_size(parts[1], selector));
    throw PreconditionError("unknown class selector '" + std::string(selector) + "'");
}

namespace {

/// All (symbol, tuple) slots of a vocabulary over n elements.
std::vector<std::pair<std::size_t, Tuple>> slots(const Vocabulary& v, std::size_t n) {
    std::vector<std::pair<std::size_t, Tuple>> out;
    for (std::size_t r = 0; r < v.size(); ++r) {
        auto space = checked_power(n, v[r].arity);
        if (!space || *space > 4096) throw BudgetExceeded("census: relation space too large");
        for (std::uint64_t c = 0; c < *space; ++c) out.emplace_back(r, decode_tuple(c, v[r].arity, n));
    }
    return out;
}

Structure from_slots(const Vocabulary& v, std::size_t n,
                     const std::vector<std::pair<std::size_t, Tuple>>& all,
                     const std::vector<std::size_t>& chosen) {
    std::vector<std::vector<Tuple>> rels(v.size());
    for (auto i : chosen) rels[all[i].first].push_back(all[i].second);
    return Structure(v, n, std::move(rels));
}

Structure random_structure(const Vocabulary& v, std::size_t n, std::mt19937_64& rng) {
    std::vector<std::vector<Tuple>> rels(v.size());
    std::uniform_int_distribution<Element> el(0, static_cast<Element>(n - 1));
    for (std::size_t r = 0; r < v.size(); ++r) {
        const auto want = std::uniform_int_distribution<std::size_t>(0, 2 * n)(rng);
        for (std::size_t i = 0; i < want; ++i) {
            Tuple t(v[r].arity);
            for (auto& x : t) x = el(rng);
            rels[r].push_back(std::move(t));
        }
    }
    return Structure(v, n, std::move(rels));
}

std::uint64_t structure_seed(const Structure& x) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](std::uint64_t v) {
        h ^= v;
        h *= 1099511628211ULL;
    };
    mix(x.universe_size());
    for (const auto& r : x.relations()) {
        mix(r.size());
        for (const auto& t : r)
            for (auto e : t) mix(e + 1);
    }
    return h;
}

/// Structure keeping the tuples whose flat index is set in `keep`.
Structure restrict_tuples(const Structure& x, const std::vector<char>& keep) {
    std::vector<std::vector<Tuple>> rels(x.vocab().size());
    std::size_t idx = 0;
    for (std::size_t r = 0; r < x.vocab().size(); ++r)
        for (const auto& t : x.relation(r))
            if (keep[idx++]) rels[r].push_back(t);
    return Structure(x.vocab(), x.universe_size(), std::move(rels));
}

}  // namespace

std::vector<Structure> make_census(const StructureClass& k, const CensusOptions& opts) {
    if (opts.max_n == 0) throw PreconditionError("census needs max_n >= 1");
    std::vector<Structure> out;
    if (opts.mode == CensusOptions::Mode::random) {
        std::mt19937_64 rng(opts.seed);
        for (std::size_t i = 0; i < opts.count; ++i) {
            const auto n = std::uniform_int_distribution<std::size_t>(1, opts.max_n)(rng);
            if (k.plant && i % 2 == 1) out.push_back(k.plant(n, rng));
            else out.push_back(random_structure(k.vocab, n, rng));
        }
        return out;
    }
    if (opts.max_n > 8) throw BudgetExceeded("exhaustive census needs max_n <= 8");
    for (std::size_t n = 1; n <= opts.max_n; ++n) {
        const auto all = slots(k.vocab, n);
        std::set<std::vector<std::vector<Tuple>>> seen;
        for (std::size_t t = 0; t <= std::min(opts.max_tuples, all.size()); ++t) {
            std::vector<std::size_t> chosen(t);
            for (std::size_t i = 0; i < t; ++i) chosen[i] = i;
            while (true) {
                Structure s = from_slots(k.vocab, n, all, chosen);
                Structure c = canonical_form(s);
                std::vector<std::vector<Tuple>> key;
                for (const auto& r : c.relations()) key.push_back(r.tuples());
                if (seen.insert(std::move(key)).second) {
                    out.push_back(std::move(s));
                    if (out.size() > opts.budget) throw BudgetExceeded("census too large");
                }
                // next t-combination of all.size()
                std::size_t i = t;
                while (i > 0 && chosen[i - 1] == all.size() - t + i - 1) --i;
                if (i == 0) break;
                ++chosen[i - 1];
                for (std::size_t j = i; j < t; ++j) chosen[j] = chosen[j - 1] + 1;
            }
        }
    }
    return out;
}

std::vector<Structure> below(const Structure& x, bool* exhaustive) {
    const std::size_t total = x.tuple_count();
    std::vector<Structure> out;
    if (total <= kBelowExhaustiveLimit) {
        if (exhaustive) *exhaustive = true;
        for (std::uint32_t mask = 0; mask < (1u << total); ++mask) {
            std::vector<char> keep(total);
            for (std::size_t i = 0; i < total; ++i) keep[i] = (mask >> i) & 1;
            out.push_back(restrict_tuples(x, keep));
        }
        return out;
    }
    if (exhaustive) *exhaustive = false;
    out.push_back(x);
    out.push_back(Structure::empty(x.vocab(), x.universe_size()));
    for (std::size_t i = 0; i < total; ++i) {
        std::vector<char> keep(total, 1);
        keep[i] = 0;
        out.push_back(restrict_tuples(x, keep));
    }
    std::mt19937_64 rng(structure_seed(x));
    for (int s = 0; s < 64; ++s) {
        std::vector<char> keep(total);
        for (auto& b : keep) b = static_cast<char>(rng() & 1);
        out.push_back(restrict_tuples(x, keep));
    }
    return out;
}

namespace {

/// Runs A in K checks for every A in the given bounds, stopping at the first failure.
bool check_bounds(const StructureClass& k, const Structure& b, const std::vector<Structure>& bounds,
                  Verdict& v, std::size_t budget) {
    std::set<std::vector<std::vector<Tuple>>> done;
    for (const auto& x : bounds) {
        bool ex = true;
        for (auto& a : below(x, &ex)) {
            v.exhaustive_below = v.exhaustive_below && ex;
            std::vector<std::vector<Tuple>> key;
            for (const auto& r : a.relations()) key.push_back(r.tuples());
            if (!done.insert(std::move(key)).second) continue;
            if (++v.pairs_checked > budget) throw BudgetExceeded("closure check exceeded its pair budget");
            if (!k.member(a)) {
                v.holds = false;
                v.counterexample = Counterexample{b, std::move(a)};
                return false;
            }
        }
    }
    return true;
}

Structure one_step(const PartialFunctionFamily& p, const Structure& b) {
    return structure_union(b, apply_to_structure(p, b));
}

}  // namespace

Verdict is_p_closed(const StructureClass& k, const PartialFunctionFamily& p,
                    const std::vector<Structure>& census, std::size_t budget) {
    Verdict v;
    v.census_size = census.size();
    for (const auto& b : census) {
        require_vocab(k, b);
        if (!k.member(b)) continue;
        ++v.members;
        if (!check_bounds(k, b, {b, one_step(p, b)}, v, budget)) return v;
    }
    return v;
}

Verdict is_p_closed(const StructureClass& k, const PartialFunctionFamily& p, const CensusOptions& opts) {
    return is_p_closed(k, p, make_census(k, opts), opts.budget);
}

Verdict is_downwards_monotone(const StructureClass& k, const std::vector<Structure>& census,
                              std::size_t budget) {
    Verdict v;
    v.census_size = census.size();
    for (const auto& b : census) {
        require_vocab(k, b);
        if (!k.member(b)) continue;
        ++v.members;
        if (!check_bounds(k, b, {b}, v, budget)) return v;
    }
    return v;
}

Verdict is_downwards_monotone(const StructureClass& k, const CensusOptions& opts) {
    return is_downwards_monotone(k, make_census(k, opts), opts.budget);
}

GammaEquivalence gamma_equivalence_check(const StructureClass& k, const PartialFunctionFamily& p,
                                         const CensusOptions& opts) {
    auto base = make_census(k, opts);
    std::vector<Structure> census;
    for (const auto& b : base) {
        require_vocab(k, b);
        auto res = gamma_closure(p, b);
        for (const auto& st : res.trace.stages) census.push_back(st);
    }
    GammaEquivalence out;
    out.one_step = is_p_closed(k, p, census, opts.budget);

    Verdict& w = out.omega;
    w.census_size = census.size();
    for (const auto& b : census) {
        if (!k.member(b)) continue;
        ++w.members;
        auto res = gamma_closure(p, b);
        if (!check_bounds(k, b, res.trace.stages, w, opts.budget)) break;
    }
    return out;
}

}  // namespace polyq
