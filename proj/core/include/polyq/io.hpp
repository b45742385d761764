#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "polyq/cfi.hpp"
#include "polyq/graph.hpp"
#include "polyq/structure.hpp"

namespace polyq {

using Json = nlohmann::json;

/// {"vocab":[{"name":"R0","arity":3},...],"n":12,"relations":{"R0":[[0,2,4],...]}}
/// Relations are written with tuples in sorted order.
Json structure_to_json(const Structure& a);
Structure structure_from_json(const Json& j);

/// Graphs use the structure format with a symmetric relation "E".
Json graph_to_json(const OrderedGraph& g);
OrderedGraph graph_from_json(const Json& j);

/// Edge list or JSON, told apart by the first non-blank character.
OrderedGraph read_graph(std::istream& in);
OrderedGraph read_graph_file(const std::string& path);
Structure read_structure_file(const std::string& path);

/// Sorted list of switched edge indices.
Json switch_set_to_json(const SwitchSet& s);
SwitchSet switch_set_from_json(const Json& j, std::size_t edge_count);

}  // namespace polyq
