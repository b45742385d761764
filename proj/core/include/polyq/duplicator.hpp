#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "polyq/cfi.hpp"
#include "polyq/cops_robber.hpp"
#include "polyq/pebble_game.hpp"

namespace polyq {

/// Source of Robber moves in CR^ell_k(G): a certificate that (F, u) is
/// safe and an answer to each Cop move from certified positions.
class RobberOracle {
public:
    virtual ~RobberOracle() = default;
    virtual bool certifies(const std::vector<char>& f, Vertex u) const = 0;
    virtual PathSystem respond(const std::vector<char>& f, Vertex u, const std::vector<char>& f_next) const = 0;
};

/// Backed by an exact solution of the Cops and Robber game.
class ExactRobber : public RobberOracle {
public:
    explicit ExactRobber(std::shared_ptr<const CRSolution> sol) : sol_(std::move(sol)) {}
    bool certifies(const std::vector<char>& f, Vertex u) const override;
    PathSystem respond(const std::vector<char>& f, Vertex u, const std::vector<char>& f_next) const override;
    const CRSolution& solution() const { return *sol_; }

private:
    std::shared_ptr<const CRSolution> sol_;
};

/// The girth strategy with radius d; certifies positions satisfying (*).
class GirthRobber : public RobberOracle {
public:
    GirthRobber(OrderedGraph g, std::size_t d) : g_(std::move(g)), d_(d) {}
    bool certifies(const std::vector<char>& f, Vertex u) const override;
    PathSystem respond(const std::vector<char>& f, Vertex u, const std::vector<char>& f_next) const override;

private:
    OrderedGraph g_;
    std::size_t d_;
};

struct DuplicatorState {
    SwitchSet f;  // current good bijection, A -> B
    std::vector<std::optional<Element>> alpha;
    std::vector<std::optional<Element>> beta;

    bool operator==(const DuplicatorState&) const = default;
};

/// Duplicator's answer to Spoiler's tuple.
struct DuplicatorResponse {
    std::vector<char> f_next;            // F': edges touched after the move
    PathSystem paths;                    // from tw(f)
    std::vector<SwitchSet> switched;     // f_{P_i}
    std::vector<Tuple> tuples;           // the served set, one tuple per path
};

/// Plays PG^{N_ell}_k on A_ell^ev(G) (left structure) and A_ell^od(G)
/// (right structure) by translating Robber moves into good bijections.
class DuplicatorEngine {
public:
    DuplicatorEngine(const OrderedGraph& g, std::size_t k, std::shared_ptr<const RobberOracle> robber);

    const CFIInstance& even() const { return even_; }
    const CFIInstance& odd() const { return odd_; }
    std::size_t k() const { return k_; }
    std::size_t ell() const { return ell_; }
    const PartialFunctionFamily& family() const { return family_; }

    /// (empty, empty) with the identity switch set; throws PreconditionError
    /// unless the oracle certifies v0 for the empty set.
    DuplicatorState initial() const;

    /// F_alpha as an edge mask.
    std::vector<char> pebbled_edges(const DuplicatorState& st) const;

    /// Empty when (†) holds, otherwise a description of the failure.
    std::optional<std::string> check_invariant(const DuplicatorState& st) const;

    /// Phase 1: the bijection Duplicator plays (the switch set describes
    /// both f and its inverse).
    const SwitchSet& serve(const DuplicatorState& st, const SpoilerChoice& ch) const;
    /// Phase 2: the served set for Spoiler's tuple (from B in a left move,
    /// from A in a right move). Asserts the legality identity.
    DuplicatorResponse respond(const DuplicatorState& st, const SpoilerChoice& ch, const Tuple& spoiler) const;
    /// Phase 3: Spoiler keeps tuple `pick` of the response. Asserts (†) and
    /// F_alpha' = F'.
    DuplicatorState complete(const DuplicatorState& st, const SpoilerChoice& ch, const Tuple& spoiler,
                             const DuplicatorResponse& resp, std::size_t pick) const;

private:
    void require(const DuplicatorState& st) const;

    CFIInstance even_;
    CFIInstance odd_;
    std::size_t k_;
    std::size_t ell_;
    PartialFunctionFamily family_;
    std::shared_ptr<const RobberOracle> robber_;
};

struct VerifyReport {
    bool ok = true;
    std::size_t states = 0;       // distinct (state, rounds left) pairs expanded
    std::size_t transitions = 0;  // Spoiler plays examined
    std::vector<std::string> trace;  // moves leading to the first failure
    std::string failure;
};

/// Every Spoiler play of at most `rounds` rounds against the engine, from
/// the initial state; checks (†), the partial-isomorphism condition
/// directly, the legality identity and F_alpha' = F' on every step.
VerifyReport adversarial_verify(const DuplicatorEngine& engine, std::size_t rounds,
                                std::size_t budget = 50'000'000);

}  // namespace polyq
