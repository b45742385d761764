#include "polyq/partial_functions.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "polyq/error.hpp"

namespace polyq {

PartialFunctionFamily::PartialFunctionFamily(std::string name, std::size_t arity, Evaluator eval,
                                             FamilyKind kind)
    : name_(std::move(name)), arity_(arity), eval_(std::move(eval)), kind_(kind) {
    if (arity_ == 0) throw PreconditionError("family arity must be positive");
}

PartialFunctionFamily PartialFunctionFamily::maltsev() {
    return PartialFunctionFamily(
        "maltsev", 3,
        [](std::size_t, std::span<const Element> x) -> std::optional<Element> {
            if (x[0] == x[1]) return x[2];
            if (x[1] == x[2]) return x[0];
            return std::nullopt;
        },
        FamilyKind::maltsev);
}

PartialFunctionFamily PartialFunctionFamily::near_unanimity(std::size_t ell) {
    if (ell < 3) throw PreconditionError("near-unanimity arity must be at least 3");
    return PartialFunctionFamily(
        "nu:" + std::to_string(ell), ell,
        [ell](std::size_t, std::span<const Element> x) -> std::optional<Element> {
            // With ell >= 3 at most one value can reach ell-1 votes, and it
            // must be x[0] or x[1].
            for (Element cand : {x[0], x[1]}) {
                const auto votes = static_cast<std::size_t>(std::count(x.begin(), x.end(), cand));
                if (votes + 1 >= ell) return cand;
            }
            return std::nullopt;
        },
        FamilyKind::near_unanimity);
}

PartialFunctionFamily PartialFunctionFamily::nowhere(std::size_t arity) {
    return PartialFunctionFamily(
        "nowhere", arity,
        [](std::size_t, std::span<const Element>) -> std::optional<Element> { return std::nullopt; },
        FamilyKind::nowhere);
}

std::optional<Element> PartialFunctionFamily::operator()(std::size_t universe,
                                                         std::span<const Element> args) const {
    if (args.size() != arity_)
        throw PreconditionError(name_ + ": expected " + std::to_string(arity_) + " arguments");
    for (Element x : args)
        if (x >= universe) throw PreconditionError(name_ + ": argument outside the universe");
    return eval_(universe, args);
}

PartialFunctionFamily parse_family(std::string_view selector) {
    if (selector == "maltsev") return PartialFunctionFamily::maltsev();
    if (selector == "nowhere") return PartialFunctionFamily::nowhere();
    if (selector == "majority" || selector == "mj") return PartialFunctionFamily::near_unanimity(3);
    if (selector.starts_with("nu:")) {
        std::size_t ell = 0;
        auto digits = selector.substr(3);
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), ell);
        if (ec != std::errc{} || ptr != digits.data() + digits.size())
            throw PreconditionError("bad family selector '" + std::string(selector) + "'");
        return PartialFunctionFamily::near_unanimity(ell);
    }
    throw PreconditionError("unknown family '" + std::string(selector) + "'");
}

Relation apply_to_relation(const PartialFunctionFamily& p, std::size_t universe, const Relation& r) {
    const auto& tuples = r.tuples();
    const std::size_t n = p.arity();
    const std::size_t arity = r.arity();
    std::vector<Tuple> out;
    if (tuples.empty() || p.kind() == FamilyKind::nowhere) return Relation(arity, universe, {});

    std::vector<std::size_t> pick(n, 0);
    Tuple column(n);
    Tuple image(arity);
    while (true) {
        bool defined = true;
        for (std::size_t j = 0; j < arity && defined; ++j) {
            for (std::size_t i = 0; i < n; ++i) column[i] = tuples[pick[i]][j];
            auto v = p(universe, column);
            if (!v) defined = false;
            else image[j] = *v;
        }
        if (defined) out.push_back(image);
        std::size_t i = n;
        while (i > 0 && ++pick[i - 1] == tuples.size()) pick[--i] = 0;
        if (i == 0) break;
    }
    return Relation(arity, universe, std::move(out));
}

Structure apply_to_structure(const PartialFunctionFamily& p, const Structure& a) {
    std::vector<Relation> rels;
    rels.reserve(a.vocab().size());
    for (const auto& r : a.relations()) rels.push_back(apply_to_relation(p, a.universe_size(), r));
    return Structure(a.vocab(), a.universe_size(), std::move(rels));
}

namespace {

Relation unite(const Relation& x, const Relation& y) {
    std::vector<Tuple> all = x.tuples();
    all.insert(all.end(), y.begin(), y.end());
    return Relation(x.arity(), x.universe(), std::move(all));
}

}  // namespace

// Every pass recombines the whole current relation; restricting the next
// pass to combinations involving new tuples would be a valid refinement but
// is not done here.
Relation gamma_closure(const PartialFunctionFamily& p, std::size_t universe, const Relation& r) {
    Relation current = r;
    while (true) {
        Relation next = unite(current, apply_to_relation(p, universe, current));
        if (next.size() == current.size()) return current;
        current = std::move(next);
    }
}

ClosureResult gamma_closure(const PartialFunctionFamily& p, const Structure& a) {
    ClosureTrace trace;
    trace.stages.push_back(a);
    while (true) {
        const Structure& cur = trace.stages.back();
        std::vector<Relation> rels;
        bool grew = false;
        for (std::size_t r = 0; r < cur.vocab().size(); ++r) {
            rels.push_back(
                unite(cur.relation(r), apply_to_relation(p, cur.universe_size(), cur.relation(r))));
            grew = grew || rels.back().size() != cur.relation(r).size();
        }
        if (!grew) break;
        trace.stages.emplace_back(cur.vocab(), cur.universe_size(), std::move(rels));
    }
    trace.fixpoint_index = trace.stages.size() - 1;
    Structure closure = trace.stages.back();
    return {std::move(closure), std::move(trace)};
}

bool is_partial_polymorphism(const PartialFunctionFamily& p, const Structure& a) {
    for (const auto& r : a.relations())
        if (!apply_to_relation(p, a.universe_size(), r).subset_of(r)) return false;
    return true;
}

namespace {

bool kleene_equal(const std::optional<Element>& x, const std::optional<Element>& y) {
    return x.has_value() == y.has_value() && (!x || *x == *y);
}

/// Calls fn(v) for every vector in {0..base-1}^len, in lexicographic order.
template <typename Fn>
void for_each_word(std::size_t len, std::size_t base, Fn&& fn) {
    std::vector<Element> v(len, 0);
    if (base == 0 && len > 0) return;
    while (true) {
        fn(static_cast<const std::vector<Element>&>(v));
        std::size_t i = len;
        while (i > 0 && ++v[i - 1] == base) v[--i] = 0;
        if (i == 0) return;
    }
}

}  // namespace

InvarianceReport check_invariance(const PartialFunctionFamily& p, std::size_t max_n,
                                  std::size_t guard) {
    if (max_n > guard)
        throw BudgetExceeded("check_invariance: max_n " + std::to_string(max_n) +
                             " exceeds the guard " + std::to_string(guard));
    InvarianceReport rep;
    rep.max_n = max_n;
    bool preserved_by_all = true;
    std::optional<InvarianceCounterexample> first_bij, first_inj, first_fun, first_choice;

    for (std::size_t na = 1; na <= max_n; ++na) {
        // Partial choice: p_A(args) in {args}.
        for_each_word(p.arity(), na, [&](const std::vector<Element>& args) {
            auto v = p(na, args);
            if (v && std::find(args.begin(), args.end(), *v) == args.end() && !first_choice)
                first_choice = InvarianceCounterexample{"partial_choice", na, na, {}, args, v, v};
        });

        for (std::size_t nb = 1; nb <= max_n; ++nb) {
            for_each_word(na, nb, [&](const std::vector<Element>& f) {
                std::set<Element> img(f.begin(), f.end());
                const bool injective = img.size() == na;
                const bool bijective = injective && na == nb;
                for_each_word(p.arity(), na, [&](const std::vector<Element>& args) {
                    Tuple mapped(args.size());
                    for (std::size_t i = 0; i < args.size(); ++i) mapped[i] = f[args[i]];
                    const auto pa = p(na, args);
                    const auto lhs = p(nb, mapped);
                    std::optional<Element> rhs;
                    if (pa) rhs = f[*pa];
                    const bool eq = kleene_equal(lhs, rhs);
                    if (!eq && bijective && !first_bij)
                        first_bij = InvarianceCounterexample{"invariant", na, nb, f, args, lhs, rhs};
                    if (!eq && injective && !first_inj)
                        first_inj = InvarianceCounterexample{"strongly_invariant", na, nb, f, args,
                                                             lhs, rhs};
                    if (pa && !eq) {
                        preserved_by_all = false;
                        if (!first_fun)
                            first_fun =
                                InvarianceCounterexample{"projective", na, nb, f, args, lhs, rhs};
                    }
                });
            });
        }
    }

    rep.invariant = !first_bij;
    rep.strongly_invariant = !first_inj;
    rep.projective = rep.strongly_invariant && preserved_by_all;
    rep.partial_choice = !first_choice;
    for (auto* c : {&first_bij, &first_inj, &first_fun, &first_choice})
        if (*c) rep.counterexamples.push_back(**c);
    return rep;
}

}  // namespace polyq
