#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "polyq/structure.hpp"

namespace polyq {

/// {R0, R1}, both of arity ell.
Vocabulary parity_vocab(std::size_t ell);

/// C_ell: universe {0,1}; R0 the even-parity ell-tuples, R1 the odd ones.
Structure build_c_ell(std::size_t ell);

/// H^k_{n,m}: universe [m] (as 0..m-1), one n-ary relation "R" of tuples in
/// which every k+1 positions carry at least two distinct values. k = 1 gives
/// the complete n-uniform hypergraph H_{n,m} (all-distinct tuples).
Structure build_hypergraph_target(std::size_t n, std::size_t m, std::size_t k = 1);

struct XorEquation {
    std::vector<std::uint32_t> support;  // sorted, unique
    bool parity = false;

    bool operator==(const XorEquation&) const = default;
};

class XorSystem {
public:
    explicit XorSystem(std::size_t variable_count = 0) : vars_(variable_count) {}

    /// Cancels repeated variables (x + x = 0) and sorts the support.
    void add(std::vector<std::uint32_t> vars, bool parity);

    std::size_t variable_count() const { return vars_; }
    const std::vector<XorEquation>& equations() const { return eqs_; }
    bool satisfied_by(const std::vector<std::uint8_t>& assignment) const;

    bool operator==(const XorSystem&) const = default;

private:
    std::size_t vars_;
    std::vector<XorEquation> eqs_;
};

/// One variable per element; each R0 tuple is an even equation, each R1
/// tuple an odd one. Requires the vocabulary {R0, R1} of uniform arity.
XorSystem structure_to_xor(const Structure& a);

/// Gauss-Jordan elimination over packed 64-bit rows. Free variables are 0.
std::optional<std::vector<std::uint8_t>> solve_xor(const XorSystem& sys);

/// Text format: one equation per line, "v3 v5 = 1". '#' starts a comment.
/// The variable count is one past the largest index unless a "# vars N"
/// line says otherwise.
XorSystem read_xor(std::istream& in);
void write_xor(std::ostream& out, const XorSystem& sys);

}  // namespace polyq
