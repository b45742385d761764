#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "polyq/partial_functions.hpp"
#include "polyq/structure.hpp"

namespace polyq {

/// An isomorphism-closed class of structures given by a membership test.
/// `plant`, when present, draws a random member on n elements; random
/// censuses use it so that member structures actually get exercised.
struct StructureClass {
    Vocabulary vocab;
    std::function<bool(const Structure&)> member;
    std::string description;
    std::function<Structure(std::size_t n, std::mt19937_64& rng)> plant;

    bool operator()(const Structure& a) const { return member(a); }
};

/// CSP(target). Uses the XOR solver when the target is C_ell.
StructureClass csp_class(const Structure& target);
/// Structures isomorphic to one of `members`.
StructureClass explicit_class(const Vocabulary& vocab, std::vector<Structure> members,
                              std::string description = "explicit");
StructureClass predicate_class(const Vocabulary& vocab, std::function<bool(const Structure&)> pred,
                               std::string description);
/// {P}-structures with P empty (symbol "P" of the given arity).
StructureClass empty_relation_class(std::size_t arity);
/// {R}-structures with R nonempty.
StructureClass nonempty_relation_class(std::size_t arity);

/// K* over tau plus a copy S_i of each R_i (named R_i + "_c"): R_i and S_i
/// disjoint for all i, and either the tau-reduct is in K or some
/// R_i u S_i misses a tuple. Requires uniform arity.
StructureClass imhof_star(const StructureClass& k);

/// "csp:c<ell>", "csp:h:<n>:<m>[:<k>]", "empty:<r>", "nonempty:<r>".
StructureClass parse_class(std::string_view selector);

struct CensusOptions {
    enum class Mode { exhaustive, random };
    Mode mode = Mode::exhaustive;
    std::size_t max_n = 3;
    /// Exhaustive mode: at most this many tuples in total.
    std::size_t max_tuples = 3;
    /// Random mode.
    std::size_t count = 1000;
    std::uint64_t seed = 0;
    /// Cap on (B, A) pairs examined by one check.
    std::size_t budget = 50'000'000;
};

/// Exhaustive: every structure with 1..max_n elements and at most
/// max_tuples tuples, one per isomorphism type. Random: for each sample n is
/// uniform in 1..max_n and every relation gets a uniform number of tuples in
/// [0, 2n]; every second sample is planted when the class can plant.
std::vector<Structure> make_census(const StructureClass& k, const CensusOptions& opts);

/// Substructures A <= x that a check visits: all of them when x has at most
/// kBelowExhaustiveLimit tuples, otherwise x, the empty structure, every
/// one-tuple deletion and a fixed pseudo-random sample seeded by x itself.
inline constexpr std::size_t kBelowExhaustiveLimit = 12;
std::vector<Structure> below(const Structure& x, bool* exhaustive = nullptr);

struct Counterexample {
    Structure b;  // member
    Structure a;  // non-member below the relevant bound
};

struct Verdict {
    bool holds = true;  // on the tested census only
    std::size_t census_size = 0;
    std::size_t members = 0;
    std::size_t pairs_checked = 0;
    bool exhaustive_below = true;
    std::optional<Counterexample> counterexample;  // first in census order
};

/// B in K and A <= p(B) u B imply A in K.
Verdict is_p_closed(const StructureClass& k, const PartialFunctionFamily& p,
                    const std::vector<Structure>& census, std::size_t budget = 50'000'000);
Verdict is_p_closed(const StructureClass& k, const PartialFunctionFamily& p, const CensusOptions& opts);

/// B in K and A <= B imply A in K.
Verdict is_downwards_monotone(const StructureClass& k, const std::vector<Structure>& census,
                              std::size_t budget = 50'000'000);
Verdict is_downwards_monotone(const StructureClass& k, const CensusOptions& opts);

struct GammaEquivalence {
    Verdict one_step;  // A <= p(B) u B
    Verdict omega;     // A <= Gamma^omega(B)
    bool agree() const { return one_step.holds == omega.holds; }
};

/// Closes the census under the closure stages of its members, then runs
/// both closure conditions on it. On such a census the two must agree.
GammaEquivalence gamma_equivalence_check(const StructureClass& k, const PartialFunctionFamily& p,
                                         const CensusOptions& opts);

}  // namespace polyq
