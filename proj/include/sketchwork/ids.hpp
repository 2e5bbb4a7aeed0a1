#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sketchwork {

using Id = std::string;

// Injective string encodings used to name constructed elements
// (pullback pairs, derived edges, canonical span heads). Every component
// is length-prefixed, so decoding is unambiguous whatever characters the
// component identifiers contain.

/// "<len>:<a>,<b>"
std::string encode_pair(std::string_view a, std::string_view b);

/// Length-prefixed concatenation of all parts, wrapped in brackets.
std::string encode_tuple(const std::vector<std::string>& parts);

/// Identifier of a path: "~" followed by the length-prefixed edge ids, or
/// "~@<node>" for the empty path at a node.
std::string encode_path(const std::vector<Id>& edges, std::string_view at_node = {});

}  // namespace sketchwork
