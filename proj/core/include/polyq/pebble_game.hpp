#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polyq/partial_functions.hpp"
#include "polyq/structure.hpp"

namespace polyq {

/// alpha and beta, one optional element per pebble variable; dom(alpha) = dom(beta).
struct PGPosition {
    std::vector<std::optional<Element>> alpha;
    std::vector<std::optional<Element>> beta;

    bool operator==(const PGPosition&) const = default;
};

/// alpha -> beta is a well-defined injective partial isomorphism.
bool position_is_partial_isomorphism(const Structure& a, const Structure& b, const PGPosition& pos);

struct PGConfig {
    std::size_t k = 2;
    PartialFunctionFamily family = PartialFunctionFamily::nowhere();
    /// Allowed tuple lengths r; empty means 1..k.
    std::vector<std::size_t> move_arities;
    /// When set, Duplicator may only play these bijections A -> B (their
    /// inverses in left moves).
    std::optional<std::vector<std::vector<Element>>> bijections;
    /// Stop after this many rounds and report a bounded verdict.
    std::optional<std::size_t> round_bound;
    /// Full bijection search is refused above this universe size.
    std::size_t full_mode_limit = 6;
    std::size_t position_budget = 4'000'000;
};

/// Spoiler's opening of a round: the side he picks the tuple from (right
/// move: from A; left move: from B) and the distinct variables y.
struct SpoilerChoice {
    bool right = false;
    std::vector<std::uint32_t> vars;

    bool operator==(const SpoilerChoice&) const = default;
};

enum class Winner { duplicator, spoiler };

class PGSolution {
public:
    static constexpr std::uint32_t kForever = UINT32_MAX;

    Winner winner() const { return winner_; }
    /// "no bijection" when the universes differ in size.
    const std::string& reason() const { return reason_; }
    /// True when the solver stopped at the round bound; then a Duplicator
    /// verdict only means she survives that many rounds.
    bool bounded() const { return bounded_; }
    std::size_t rounds() const { return rounds_; }

    std::size_t k() const { return k_; }
    std::size_t universe() const { return n_; }
    const std::vector<SpoilerChoice>& choices() const { return choices_; }
    std::size_t position_count() const { return depth_.size(); }

    std::uint64_t encode(const PGPosition& pos) const;
    PGPosition decode(std::uint64_t code) const;
    /// Code of the empty position.
    std::uint64_t start() const { return start_; }

    /// Rounds Spoiler needs from the position, or kForever inside the
    /// winning region (for bounded runs: not refuted within the bound).
    std::uint32_t depth(std::uint64_t code) const { return depth_[code]; }
    bool in_region(std::uint64_t code) const { return depth_[code] == kForever; }
    /// Spoiler's opening at a refuted position (not for depth 0).
    std::optional<std::size_t> killing_choice(std::uint64_t code) const;
    /// Duplicator's bijection at a region position for a choice: spoiler
    /// side to response side (B -> A for left moves, A -> B for right ones).
    const std::vector<Element>& witness(std::uint64_t code, std::size_t choice) const;

    /// The set served for Spoiler's tuple: every response tuple whose
    /// continuation stays in the region.
    std::vector<Tuple> response(std::uint64_t code, std::size_t choice, const Tuple& spoiler_tuple) const;
    /// Position after the round.
    std::uint64_t advance(std::uint64_t code, std::size_t choice, const Tuple& spoiler_tuple,
                          const Tuple& response_tuple) const;

private:
    friend PGSolution solve_pebble_game(const Structure&, const Structure&, const PGConfig&);

    Winner winner_ = Winner::spoiler;
    std::string reason_;
    bool bounded_ = false;
    std::size_t rounds_ = 0;
    std::size_t k_ = 0;
    std::size_t n_ = 0;
    std::uint64_t start_ = 0;
    std::vector<SpoilerChoice> choices_;
    std::vector<std::uint32_t> depth_;
    std::vector<std::uint32_t> killing_;
    std::vector<std::vector<Element>> witness_;  // [code * choices + c], region only
};

/// Greatest fixpoint of Duplicator's safe positions. A position survives a
/// Spoiler choice when some bijection f sends every Spoiler tuple t into
/// Gamma^omega of Good(t), the response tuples whose continuation is still
/// safe; serving P = Good(t) is then a legal answer, and any legal safe P
/// lies inside Good(t).
PGSolution solve_pebble_game(const Structure& a, const Structure& b, const PGConfig& cfg);

/// The edge-preserving bijections of a CFI universe on |E| edges, one per switch set.
std::vector<std::vector<Element>> switch_set_bijections(std::size_t edge_count);

}  // namespace polyq
