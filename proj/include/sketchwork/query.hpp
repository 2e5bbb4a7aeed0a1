#pragma once

#include <map>
#include <set>
#include <vector>

#include "sketchwork/sketch.hpp"

namespace sketchwork {

/// A path in a graph: consecutive edges plus declared endpoints. The empty
/// path sits at a single node (from == to).
struct Path {
  std::vector<Id> edges;
  Id from;
  Id to;

  std::size_t length() const { return edges.size(); }
  /// encode_path of the edges, or of the node for the empty path.
  Id key() const;
  auto operator<=>(const Path&) const = default;
};

/// A query of the free-path monad: a path in a metamodel graph.
using PathQuery = Path;

Path edge_path(const Graph& g, const Id& edge);
Path empty_path(const Id& node);
/// Path through `edges` (nonempty), endpoints taken from the graph.
Path make_path(const Graph& g, const std::vector<Id>& edges);

/// Throws ViewError unless the path is well formed in g.
void validate_path(const Graph& g, const Path& p);

/// Concatenation; throws ViewError unless a.to == b.from.
Path concat(const Path& a, const Path& b);

/// Result of running queries over an instance. The extended metamodel has
/// one derived meta-edge per query of length other than one (named by the
/// query key); the extended instance has one derived edge per matching
/// instance path (named by the path key).
struct QueryExtension {
  MetamodelPtr metamodel;
  TypedInstance instance;
  /// Derived instance edge -> the instance path it stands for.
  std::map<Id, Path> provenance;
  /// Query -> the meta-edge it is realized by in the extended metamodel.
  std::map<PathQuery, Id> realized_by;
  /// Matched instance path -> its derived edge, including reused ones.
  std::map<Path, Id> edge_for;
};

/// Derived instance edges are never re-queried. A derived edge that already
/// exists with the same endpoints and type (e.g. after materialization) is
/// reused; a clash with an unrelated edge is resolved by qualifying the new
/// name with its meta-edge. Throws ViewError on an ill-formed query.
QueryExtension execute_query(const TypedInstance& inst, const std::set<PathQuery>& needed);

/// All instance paths typed edgewise as q, in id order.
std::vector<Path> match_paths(const TypedInstance& inst, const PathQuery& q);

}  // namespace sketchwork
