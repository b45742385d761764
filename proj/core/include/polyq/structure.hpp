#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace polyq {

using Element = std::uint32_t;
using Tuple = std::vector<Element>;

struct Symbol {
    std::string name;
    std::size_t arity = 0;

    bool operator==(const Symbol&) const = default;
};

/// Ordered list of relation symbols. Names are unique, arities positive.
class Vocabulary {
public:
    Vocabulary() = default;
    explicit Vocabulary(std::vector<Symbol> symbols);

    const std::vector<Symbol>& symbols() const { return symbols_; }
    std::size_t size() const { return symbols_.size(); }
    const Symbol& operator[](std::size_t i) const { return symbols_[i]; }
    std::optional<std::size_t> index_of(std::string_view name) const;

    /// Common arity when all symbols share one, otherwise nullopt.
    std::optional<std::size_t> uniform_arity() const;
    std::size_t max_arity() const;

    bool operator==(const Vocabulary&) const = default;

private:
    std::vector<Symbol> symbols_;
};

/// Mixed-radix code of a tuple over a universe of size `universe`.
std::uint64_t encode_tuple(std::span<const Element> tuple, std::size_t universe);
Tuple decode_tuple(std::uint64_t code, std::size_t arity, std::size_t universe);

/// n^r, or nullopt if it does not fit in 64 bits.
std::optional<std::uint64_t> checked_power(std::uint64_t n, std::size_t r);

/// An r-ary relation over {0,...,n-1}. Tuples are kept sorted and unique;
/// membership goes through a packed bitset when n^r <= 2^24, else a hash set
/// of codes (or binary search when codes overflow).
class Relation {
public:
    Relation(std::size_t arity, std::size_t universe, std::vector<Tuple> tuples);

    std::size_t arity() const { return arity_; }
    std::size_t universe() const { return universe_; }
    std::size_t size() const { return tuples_.size(); }
    bool empty() const { return tuples_.empty(); }
    const std::vector<Tuple>& tuples() const { return tuples_; }
    auto begin() const { return tuples_.begin(); }
    auto end() const { return tuples_.end(); }

    bool contains(std::span<const Element> tuple) const;
    bool subset_of(const Relation& other) const;

    bool operator==(const Relation& other) const {
        return arity_ == other.arity_ && tuples_ == other.tuples_;
    }

private:
    std::size_t arity_;
    std::size_t universe_;
    std::vector<Tuple> tuples_;
    std::vector<std::uint64_t> bits_;
    std::unordered_set<std::uint64_t> codes_;
    bool use_bits_ = false;
    bool use_codes_ = false;
};

/// Finite relational structure with universe {0,...,n-1}.
class Structure {
public:
    Structure(Vocabulary vocab, std::size_t universe_size,
              std::vector<std::vector<Tuple>> relations);
    Structure(Vocabulary vocab, std::size_t universe_size, std::vector<Relation> relations);

    /// All relations empty.
    static Structure empty(Vocabulary vocab, std::size_t universe_size);

    const Vocabulary& vocab() const { return vocab_; }
    std::size_t universe_size() const { return n_; }
    const std::vector<Relation>& relations() const { return relations_; }
    const Relation& relation(std::size_t i) const { return relations_[i]; }
    const Relation& relation(std::string_view name) const;
    std::size_t tuple_count() const;

    bool operator==(const Structure&) const = default;

private:
    Vocabulary vocab_;
    std::size_t n_;
    std::vector<Relation> relations_;
};

/// Finite map between two universes.
class PartialMap {
public:
    PartialMap() = default;
    explicit PartialMap(std::map<Element, Element> pairs) : pairs_(std::move(pairs)) {}
    static PartialMap identity(std::size_t n);
    static PartialMap from_vector(std::span<const Element> images);

    /// Returns false (and changes nothing) if `from` already maps elsewhere.
    bool set(Element from, Element to);
    std::optional<Element> operator()(Element from) const;

    const std::map<Element, Element>& pairs() const { return pairs_; }
    std::size_t size() const { return pairs_.size(); }
    bool empty() const { return pairs_.empty(); }
    bool is_injective() const;
    /// Requires injectivity.
    PartialMap inverse() const;
    /// Dense image vector; requires domain {0,...,n-1}.
    std::vector<Element> to_vector(std::size_t n) const;

    bool operator==(const PartialMap&) const = default;

private:
    std::map<Element, Element> pairs_;
};

bool is_partial_isomorphism(const Structure& a, const Structure& b, const PartialMap& m);
bool leq(const Structure& a, const Structure& b);
Structure structure_union(const Structure& a, const Structure& b);

inline constexpr std::uint64_t kDefaultPowerCap = std::uint64_t{1} << 20;
/// B^m with coordinate tuples packed most-significant-first.
Structure power(const Structure& b, std::size_t m, std::uint64_t universe_cap = kDefaultPowerCap);
std::vector<Tuple> transpose(const std::vector<Tuple>& tuples);

/// Image of `a` under a total map given as a dense vector; `n` is the target size.
Structure relabel(const Structure& a, std::span<const Element> images, std::size_t n);

std::optional<PartialMap> find_homomorphism(const Structure& a, const Structure& b);
std::optional<PartialMap> find_isomorphism(const Structure& a, const Structure& b);

/// Lexicographically least relabelling over all permutations; n <= 8.
Structure canonical_form(const Structure& a);

}  // namespace polyq
