#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polyq/structure.hpp"

namespace polyq {

enum class FamilyKind { maltsev, near_unanimity, nowhere, custom };

/// A family of n-ary partial functions p_A, one per finite universe,
/// given intensionally by an evaluator on (|A|, argument tuple).
class PartialFunctionFamily {
public:
    using Evaluator =
        std::function<std::optional<Element>(std::size_t universe, std::span<const Element> args)>;

    PartialFunctionFamily(std::string name, std::size_t arity, Evaluator eval,
                          FamilyKind kind = FamilyKind::custom);

    static PartialFunctionFamily maltsev();
    /// N_ell: value a iff at least ell-1 arguments equal a. N_3 is the
    /// partial majority family.
    static PartialFunctionFamily near_unanimity(std::size_t ell);
    /// Undefined everywhere.
    static PartialFunctionFamily nowhere(std::size_t arity = 1);

    const std::string& name() const { return name_; }
    std::size_t arity() const { return arity_; }
    FamilyKind kind() const { return kind_; }

    /// Throws PreconditionError on arity mismatch or out-of-universe args.
    std::optional<Element> operator()(std::size_t universe, std::span<const Element> args) const;

private:
    std::string name_;
    std::size_t arity_;
    Evaluator eval_;
    FamilyKind kind_;
};

/// "maltsev", "nu:<ell>", "nowhere" (also "majority" for nu:3).
PartialFunctionFamily parse_family(std::string_view selector);

inline std::optional<Element> eval_family(const PartialFunctionFamily& p, std::size_t universe,
                                          std::span<const Element> args) {
    return p(universe, args);
}

/// p(R): coordinatewise images of every n-sequence of tuples of R, dropping
/// sequences where some coordinate is undefined.
Relation apply_to_relation(const PartialFunctionFamily& p, std::size_t universe, const Relation& r);
Structure apply_to_structure(const PartialFunctionFamily& p, const Structure& a);

struct ClosureTrace {
    /// stages[i] is the i-th stage; stages.back() is the fixpoint.
    std::vector<Structure> stages;
    std::size_t fixpoint_index = 0;
};

struct ClosureResult {
    Structure closure;
    ClosureTrace trace;
};

/// Least fixpoint of R <- p(R) u R on every relation.
ClosureResult gamma_closure(const PartialFunctionFamily& p, const Structure& a);
Relation gamma_closure(const PartialFunctionFamily& p, std::size_t universe, const Relation& r);

bool is_partial_polymorphism(const PartialFunctionFamily& p, const Structure& a);

struct InvarianceCounterexample {
    std::string property;
    std::size_t size_a = 0;
    std::size_t size_b = 0;
    std::vector<Element> map;  // f : A -> B (empty for partial-choice failures)
    Tuple args;
    std::optional<Element> lhs;  // p_B(f(args))
    std::optional<Element> rhs;  // f(p_A(args))
};

struct InvarianceReport {
    std::size_t max_n = 0;
    bool invariant = true;
    bool strongly_invariant = true;
    bool projective = true;
    bool partial_choice = true;
    std::vector<InvarianceCounterexample> counterexamples;  // first per property
};

inline constexpr std::size_t kInvarianceGuard = 5;

/// Exhaustive check over all universes of size 1..max_n and all maps between
/// them. Throws BudgetExceeded above `guard`.
InvarianceReport check_invariance(const PartialFunctionFamily& p, std::size_t max_n,
                                  std::size_t guard = kInvarianceGuard);

}  // namespace polyq
