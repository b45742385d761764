#pragma once

#include <string_view>
#include <vector>

#include "polyq/structure.hpp"

namespace polyq {

/// Stable colouring under 1-dimensional refinement of the binary relation
/// `symbol`. Vertices start coloured by their loop bit and are refined by
/// the multiset of (edge direction type, neighbour colour). Colours are
/// numbered by first occurrence of their signature in sorted order, so equal
/// partitions give equal vectors.
std::vector<std::uint32_t> color_refinement(const Structure& a, std::string_view symbol = "E");

/// Joint refinement of A and B; true when the colour histograms differ.
bool refinement_distinguishes(const Structure& a, const Structure& b, std::string_view symbol = "E");

}  // namespace polyq
