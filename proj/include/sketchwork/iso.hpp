#pragma once

#include <map>
#include <optional>

#include "sketchwork/graph.hpp"

namespace sketchwork {

/// Optional labels on graph elements (typically a typing). An element
/// without a label matches only unlabelled elements.
struct Labels {
  std::map<Id, Id> nodes;
  std::map<Id, Id> edges;
};

Labels labels_of(const GraphMorphism& typing);

/// A label-preserving isomorphism a -> b, if one exists. Backtracking over
/// nodes with degree-signature pruning; intended for small graphs.
std::optional<GraphMorphism> find_isomorphism(const Graph& a, const Graph& b,
                                              const Labels& la = {}, const Labels& lb = {});

}  // namespace sketchwork
