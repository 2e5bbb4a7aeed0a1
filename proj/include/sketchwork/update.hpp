#pragma once

#include <map>
#include <set>

#include "sketchwork/sketch.hpp"
#include "sketchwork/span.hpp"

namespace sketchwork {

enum class UpdateKind { identity, insertion, deletion, mixed };

const char* to_string(UpdateKind kind);

/// A vertical delta old <- kept -> new with injective legs, stored
/// canonically: kept is the subgraph of old given by the keys of the two
/// maps, and the maps send kept old ids to their new ids.
class UpdateSpan {
 public:
  /// Throws LensError unless the maps are injective, defined on old
  /// elements, type-preserving and structure-preserving.
  UpdateSpan(TypedInstance old_model, TypedInstance new_model, std::map<Id, Id> kept_nodes,
             std::map<Id, Id> kept_edges);

  static UpdateSpan identity(const TypedInstance& inst);
  /// The pure insert from the empty instance onto inst.
  static UpdateSpan creation(const TypedInstance& inst);
  /// Keeps every element whose id occurs in both with the same type (and,
  /// for edges, the same endpoints).
  static UpdateSpan by_ids(const TypedInstance& old_model, const TypedInstance& new_model);

  const TypedInstance& old_model() const { return old_; }
  const TypedInstance& new_model() const { return new_; }
  const std::map<Id, Id>& kept_nodes() const { return kept_nodes_; }
  const std::map<Id, Id>& kept_edges() const { return kept_edges_; }

  std::set<Id> deleted_nodes() const;
  std::set<Id> deleted_edges() const;
  std::set<Id> inserted_nodes() const;
  std::set<Id> inserted_edges() const;

  UpdateKind classify() const;
  /// Nothing deleted (identities included).
  bool is_insert() const;
  /// Nothing inserted (identities included).
  bool is_delete() const;

  /// The same update as a span of graphs with the kept graph as head.
  Span as_span() const;

  bool operator==(const UpdateSpan& other) const;

 private:
  TypedInstance old_;
  TypedInstance new_;
  std::map<Id, Id> kept_nodes_;
  std::map<Id, Id> kept_edges_;
};

/// a1 then a2. Throws LensError unless a1.new_model() == a2.old_model().
UpdateSpan compose_updates(const UpdateSpan& a1, const UpdateSpan& a2);

}  // namespace sketchwork
