#include "polyq/csp.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "polyq/error.hpp"

namespace polyq {

Vocabulary parity_vocab(std::size_t ell) {
    return Vocabulary({{"R0", ell}, {"R1", ell}});
}

Structure build_c_ell(std::size_t ell) {
    if (ell < 2) throw PreconditionError("C_ell needs ell >= 2");
    if (ell > 24) throw BudgetExceeded("C_ell: ell too large to enumerate");
    std::vector<std::vector<Tuple>> rels(2);
    for (std::uint32_t bits = 0; bits < (1u << ell); ++bits) {
        Tuple t(ell);
        for (std::size_t i = 0; i < ell; ++i) t[i] = (bits >> (ell - 1 - i)) & 1;
        rels[std::popcount(bits) & 1].push_back(std::move(t));
    }
    return Structure(parity_vocab(ell), 2, std::move(rels));
}

Structure build_hypergraph_target(std::size_t n, std::size_t m, std::size_t k) {
    if (n < 2 || m < 2) throw PreconditionError("hypergraph target needs n >= 2 and m >= 2");
    if (k < 1 || k >= n) throw PreconditionError("hypergraph target needs 1 <= k < n");
    const auto space = checked_power(m, n);
    if (!space || *space > (std::uint64_t{1} << 24))
        throw BudgetExceeded("hypergraph target too large to enumerate");

    std::vector<Tuple> rel;
    for (std::uint64_t code = 0; code < *space; ++code) {
        Tuple t = decode_tuple(code, n, m);
        // Some k+1 positions all equal <=> some value occurs at least k+1 times.
        bool ok = true;
        for (Element v : t)
            if (static_cast<std::size_t>(std::count(t.begin(), t.end(), v)) > k) ok = false;
        if (ok) rel.push_back(std::move(t));
    }
    return Structure(Vocabulary({{"R", n}}), m, {std::move(rel)});
}

void XorSystem::add(std::vector<std::uint32_t> vars, bool parity) {
    std::sort(vars.begin(), vars.end());
    std::vector<std::uint32_t> support;
    for (std::size_t i = 0; i < vars.size();) {
        std::size_t j = i;
        while (j < vars.size() && vars[j] == vars[i]) ++j;
        if ((j - i) % 2 == 1) support.push_back(vars[i]);
        i = j;
    }
    for (auto v : support)
        if (v >= vars_) throw PreconditionError("xor equation mentions an unknown variable");
    eqs_.push_back({std::move(support), parity});
}

bool XorSystem::satisfied_by(const std::vector<std::uint8_t>& assignment) const {
    if (assignment.size() != vars_) return false;
    for (const auto& e : eqs_) {
        bool acc = false;
        for (auto v : e.support) acc ^= assignment[v] & 1;
        if (acc != e.parity) return false;
    }
    return true;
}

XorSystem structure_to_xor(const Structure& a) {
    const auto& vocab = a.vocab();
    if (vocab.size() != 2 || vocab[0].name != "R0" || vocab[1].name != "R1" || !vocab.uniform_arity())
        throw PreconditionError("structure_to_xor: expected vocabulary {R0, R1} of uniform arity");
    XorSystem sys(a.universe_size());
    for (std::size_t r = 0; r < 2; ++r)
        for (const auto& t : a.relation(r)) sys.add(std::vector<std::uint32_t>(t.begin(), t.end()), r == 1);
    return sys;
}

std::optional<std::vector<std::uint8_t>> solve_xor(const XorSystem& sys) {
    const std::size_t nv = sys.variable_count();
    const std::size_t words = nv / 64 + 1;  // last column bit nv is the parity
    std::vector<std::vector<std::uint64_t>> rows;
    rows.reserve(sys.equations().size());
    for (const auto& e : sys.equations()) {
        std::vector<std::uint64_t> row(words, 0);
        for (auto v : e.support) row[v >> 6] ^= std::uint64_t{1} << (v & 63);
        if (e.parity) row[nv >> 6] |= std::uint64_t{1} << (nv & 63);
        rows.push_back(std::move(row));
    }
    auto bit = [](const std::vector<std::uint64_t>& row, std::size_t c) {
        return (row[c >> 6] >> (c & 63)) & 1;
    };

    std::vector<std::size_t> pivot_col;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < nv && rank < rows.size(); ++c) {
        std::size_t p = rank;
        while (p < rows.size() && !bit(rows[p], c)) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[p], rows[rank]);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == rank || !bit(rows[i], c)) continue;
            for (std::size_t w = 0; w < words; ++w) rows[i][w] ^= rows[rank][w];
        }
        pivot_col.push_back(c);
        ++rank;
    }
    for (std::size_t i = rank; i < rows.size(); ++i)
        if (bit(rows[i], nv)) return std::nullopt;  // 0 = 1

    std::vector<std::uint8_t> x(nv, 0);
    for (std::size_t i = 0; i < rank; ++i) x[pivot_col[i]] = static_cast<std::uint8_t>(bit(rows[i], nv));
    POLYQ_ENSURE(sys.satisfied_by(x), "solve_xor produced a non-solution");
    return x;
}

XorSystem read_xor(std::istream& in) {
    struct Pending {
        std::vector<std::uint32_t> vars;
        bool parity;
    };
    std::vector<Pending> pending;
    std::optional<std::size_t> declared;
    std::size_t max_var = 0;
    bool any_var = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            std::istringstream cs(line.substr(hash + 1));
            std::string kw;
            std::size_t n = 0;
            if (cs >> kw && kw == "vars" && cs >> n) declared = n;
            line.resize(hash);
        }
        std::istringstream ls(line);
        std::string tok;
        Pending eq{{}, false};
        bool seen_eq = false, seen_rhs = false, empty = true;
        while (ls >> tok) {
            empty = false;
            if (tok == "=") {
                seen_eq = true;
            } else if (!seen_eq && tok.size() > 1 && tok[0] == 'v') {
                std::size_t pos = 0;
                unsigned long v = 0;
                try {
                    v = std::stoul(tok.substr(1), &pos);
                } catch (const std::exception&) {
                    pos = 0;
                }
                if (pos + 1 != tok.size())
                    throw PreconditionError("xor line " + std::to_string(lineno) + ": bad token '" + tok + "'");
                eq.vars.push_back(static_cast<std::uint32_t>(v));
                max_var = std::max<std::size_t>(max_var, v);
                any_var = true;
            } else if (seen_eq && !seen_rhs && (tok == "0" || tok == "1")) {
                eq.parity = tok == "1";
                seen_rhs = true;
            } else {
                throw PreconditionError("xor line " + std::to_string(lineno) + ": bad token '" + tok + "'");
            }
        }
        if (empty) continue;
        if (!seen_eq || !seen_rhs)
            throw PreconditionError("xor line " + std::to_string(lineno) + ": expected '= 0' or '= 1'");
        pending.push_back(std::move(eq));
    }
    std::size_t nv = any_var ? max_var + 1 : 0;
    if (declared) {
        if (*declared < nv) throw PreconditionError("xor: '# vars' smaller than the largest variable");
        nv = *declared;
    }
    XorSystem sys(nv);
    for (auto& p : pending) sys.add(std::move(p.vars), p.parity);
    return sys;
}

void write_xor(std::ostream& out, const XorSystem& sys) {
    out << "# vars " << sys.variable_count() << '\n';
    for (const auto& e : sys.equations()) {
        for (auto v : e.support) out << 'v' << v << ' ';
        out << "= " << (e.parity ? 1 : 0) << '\n';
    }
}

}  // namespace polyq
