#pragma once

#include <map>
#include <string>
#include <vector>

#include "sketchwork/query.hpp"

namespace sketchwork {

/// A Kleisli morphism source -> Q(target): nodes to nodes, edges to path
/// queries over the target metamodel.
class ViewDefinition {
 public:
  /// Throws ViewError unless the maps are total on the source graph and
  /// every edge's query runs between the images of its endpoints.
  ViewDefinition(MetamodelPtr source, MetamodelPtr target, std::map<Id, Id> node_map,
                 std::map<Id, PathQuery> edge_map);

  static ViewDefinition identity(MetamodelPtr m);
  /// Lifts a plain graph morphism source.graph -> target.graph.
  static ViewDefinition from_morphism(MetamodelPtr source, MetamodelPtr target,
                                      const GraphMorphism& m);

  const Metamodel& source() const { return *source_; }
  const Metamodel& target() const { return *target_; }
  const MetamodelPtr& source_ptr() const { return source_; }
  const MetamodelPtr& target_ptr() const { return target_; }
  const std::map<Id, Id>& node_map() const { return node_map_; }
  const std::map<Id, PathQuery>& edge_map() const { return edge_map_; }
  const Id& node(const Id& n) const;
  const PathQuery& edge(const Id& e) const;

  /// The queries of length other than one, i.e. those needing derived edges.
  std::set<PathQuery> derived_queries() const;
  /// All image queries.
  std::set<PathQuery> queries() const;
  /// Whether every edge maps to a single edge.
  bool is_plain() const;

  bool operator==(const ViewDefinition& other) const;

 private:
  MetamodelPtr source_;
  MetamodelPtr target_;
  std::map<Id, Id> node_map_;
  std::map<Id, PathQuery> edge_map_;
};

/// Labels of source declarations the view cannot be shown to preserve.
/// Empty means the view is constraint-compatible. Conservative: mult on a
/// path is bounded by the product of the per-edge bounds, inj holds when
/// every edge on the path is inj, other predicates need length-one images
/// and a matching target declaration (commutes also accepts equal
/// flattened paths).
std::vector<std::string> view_compatibility_gaps(const ViewDefinition& v);

struct ViewResult {
  TypedInstance instance;  // typed over v.source
  std::map<Id, Id> node_trace;
  /// Result edge -> the target-instance path it was computed from.
  std::map<Id, Path> edge_trace;
};

struct ExecuteOptions {
  /// Re-check the result against the source constraints and throw
  /// ViewError on a violation.
  bool verify_result = false;
};

/// Query execution followed by retyping along the induced morphism.
/// Throws ViewError when the view is constraint-incompatible or the
/// instance is not typed over v.target.
ViewResult execute_view(const ViewDefinition& v, const TypedInstance& inst,
                        ExecuteOptions options = {});

/// Kleisli composition: v1 : M -> Q(N), v2 : N -> Q(K) gives M -> Q(K).
/// Throws ViewError unless v1.target equals v2.source.
ViewDefinition compose_views(const ViewDefinition& v1, const ViewDefinition& v2);

}  // namespace sketchwork
