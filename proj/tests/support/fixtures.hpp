#pragma once

#include <random>
#include <vector>

#include "polyq/structure.hpp"

namespace fixture {

using Rels = std::vector<std::vector<polyq::Tuple>>;

inline polyq::Vocabulary binary(const char* name = "E") { return polyq::Vocabulary({{name, 2}}); }
inline polyq::Vocabulary unary(const char* name = "P") { return polyq::Vocabulary({{name, 1}}); }

inline polyq::Structure make(const polyq::Vocabulary& v, std::size_t n, std::vector<std::vector<polyq::Tuple>> rels) {
    return polyq::Structure(v, n, std::move(rels));
}

/// Each of the n^r tuples present with probability q, independently per relation.
inline polyq::Structure random_structure(const polyq::Vocabulary& v, std::size_t n, double q, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(q);
    std::vector<std::vector<polyq::Tuple>> rels(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto r = v[i].arity;
        std::uint64_t total = 1;
        for (std::size_t j = 0; j < r; ++j) total *= n;
        for (std::uint64_t c = 0; c < total; ++c)
            if (coin(rng)) rels[i].push_back(polyq::decode_tuple(c, r, n));
    }
    return polyq::Structure(v, n, std::move(rels));
}

/// Every structure over a one-symbol vocabulary on n elements (labelled).
inline std::vector<polyq::Structure> all_structures(const polyq::Vocabulary& v, std::size_t n) {
    const auto r = v[0].arity;
    std::uint64_t total = 1;
    for (std::size_t j = 0; j < r; ++j) total *= n;
    std::vector<polyq::Structure> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << total); ++mask) {
        std::vector<polyq::Tuple> rel;
        for (std::uint64_t c = 0; c < total; ++c)
            if ((mask >> c) & 1) rel.push_back(polyq::decode_tuple(c, r, n));
        out.emplace_back(v, n, std::vector<std::vector<polyq::Tuple>>{rel});
    }
    return out;
}

}  // namespace fixture
