#include "polyq/io.hpp"

#include <fstream>
#include <sstream>

#include "polyq/error.hpp"

namespace polyq {

Json structure_to_json(const Structure& a) {
    Json vocab = Json::array();
    Json rels = Json::object();
    for (std::size_t i = 0; i < a.vocab().size(); ++i) {
        const auto& s = a.vocab()[i];
        vocab.push_back({{"name", s.name}, {"arity", s.arity}});
        Json tuples = Json::array();
        for (const auto& t : a.relation(i)) tuples.push_back(t);
        rels[s.name] = std::move(tuples);
    }
    return Json{{"vocab", std::move(vocab)}, {"n", a.universe_size()}, {"relations", std::move(rels)}};
}

Structure structure_from_json(const Json& j) {
    try {
        std::vector<Symbol> syms;
        for (const auto& s : j.at("vocab")) {
            auto arity = s.at("arity").get<long long>();
            if (arity < 1) throw PreconditionError("arity must be positive");
            syms.push_back({s.at("name").get<std::string>(), static_cast<std::size_t>(arity)});
        }
        Vocabulary vocab(std::move(syms));
        const auto n = j.at("n").get<long long>();
        if (n < 0) throw PreconditionError("negative universe size");
        const auto& rels = j.contains("relations") ? j.at("relations") : Json::object();
        for (auto it = rels.begin(); it != rels.end(); ++it)
            if (!vocab.index_of(it.key())) throw PreconditionError("relation '" + it.key() + "' is not in the vocabulary");
        std::vector<std::vector<Tuple>> tuples(vocab.size());
        for (std::size_t i = 0; i < vocab.size(); ++i) {
            if (!rels.contains(vocab[i].name)) continue;
            for (const auto& t : rels.at(vocab[i].name)) {
                Tuple tt;
                for (const auto& x : t) {
                    auto v = x.get<long long>();
                    if (v < 0) throw PreconditionError("negative element");
                    tt.push_back(static_cast<Element>(v));
                }
                tuples[i].push_back(std::move(tt));
            }
        }
        return Structure(vocab, static_cast<std::size_t>(n), std::move(tuples));
    } catch (const Json::exception& e) {
        throw PreconditionError(std::string("malformed structure JSON: ") + e.what());
    }
}

Json graph_to_json(const OrderedGraph& g) { return structure_to_json(graph_to_structure(g)); }

OrderedGraph graph_from_json(const Json& j) { return structure_to_graph(structure_from_json(j)); }

OrderedGraph read_graph(std::istream& in) {
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        try {
            return graph_from_json(Json::parse(text));
        } catch (const Json::exception& e) {
            throw PreconditionError(std::string("malformed graph JSON: ") + e.what());
        }
    }
    std::istringstream is(text);
    return read_edge_list(is);
}

OrderedGraph read_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot open '" + path + "'");
    return read_graph(in);
}

Structure read_structure_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot open '" + path + "'");
    try {
        return structure_from_json(Json::parse(in));
    } catch (const Json::exception& e) {
        throw PreconditionError("malformed JSON in '" + path + "': " + e.what());
    }
}

Json switch_set_to_json(const SwitchSet& s) { return s.edges(); }

SwitchSet switch_set_from_json(const Json& j, std::size_t edge_count) {
    try {
        return SwitchSet(edge_count, j.get<std::vector<EdgeId>>());
    } catch (const Json::exception& e) {
        throw PreconditionError(std::string("malformed switch set: ") + e.what());
    }
}

}  // namespace polyq
