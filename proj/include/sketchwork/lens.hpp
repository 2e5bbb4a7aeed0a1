#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>

#include "sketchwork/update.hpp"
#include "sketchwork/view.hpp"

namespace sketchwork {

/// A node of the shared view: an MN node type with its left and right
/// anchors (a node of A and a node of B).
struct NodeLink {
  Id type;
  Id left;
  Id right;
  auto operator<=>(const NodeLink&) const = default;
};

/// An edge of the shared view: an MN edge type with the paths it traces to
/// on each side.
struct EdgeLink {
  Id type;
  Path left;
  Path right;
  auto operator<=>(const EdgeLink&) const = default;
};

/// A correspondence between A (over M) and B (over N) through the views
/// m: MN => M and n: MN => N, kept canonically as its set of links. Every
/// link relates an element of m(A) to an element of n(B) of the same MN
/// type; an edge link needs the node links of its endpoints.
struct LensCorr {
  std::set<NodeLink> nodes;
  std::set<EdgeLink> edges;

  bool empty() const { return nodes.empty() && edges.empty(); }
  std::size_t size() const { return nodes.size() + edges.size(); }
  LensCorr flipped() const;
  bool operator==(const LensCorr&) const = default;
};

/// Key that ties a freshly inserted element to its counterpart across the
/// corr: the node id, the first edge of a path, or "@node" for the empty
/// path.
Id anchor_key(const Path& p);

/// Re-anchoring of corrs along updates. A surviving link follows the kept
/// map; a link whose anchor is deleted is dropped. Newly inserted view
/// elements are linked to opposite view elements of the same type whose
/// anchor key is equal.
class AlignmentFramework {
 public:
  AlignmentFramework(ViewDefinition m, ViewDefinition n);

  const ViewDefinition& left_view() const { return m_; }
  const ViewDefinition& right_view() const { return n_; }

  /// Why r is not a corr between a and b, or nullopt when it is.
  std::optional<std::string> inconsistency(const LensCorr& r, const TypedInstance& a,
                                           const TypedInstance& b) const;

  /// a * r, with b the (unchanged) right model.
  LensCorr falt(const UpdateSpan& a, const LensCorr& r, const TypedInstance& b) const;
  /// r * b, with a the (unchanged) left model.
  LensCorr balt(const LensCorr& r, const UpdateSpan& b, const TypedInstance& a) const;

  AlignmentFramework flipped() const { return AlignmentFramework(n_, m_); }

 private:
  ViewDefinition m_;
  ViewDefinition n_;
};

/// How put realizes view changes in the source model.
struct PutPolicy {
  using Taken = std::function<bool(const Id&)>;
  /// First unused id derived from base.
  std::function<Id(const Id& base, const Taken& taken)> fresh_name;
  /// Deleting a node also deletes its incident edges. When false a node
  /// whose incident edges would survive is left in place.
  bool cascade_delete = true;
  /// Realize deletions as inserted "!dup" copies instead.
  bool delete_as_insert = false;

  static PutPolicy standard();
};

/// Appends "'" to base until it is free.
Id prime_fresh(const Id& base, const PutPolicy::Taken& taken);

/// A view-level update together with both executed views.
struct ViewUpdate {
  UpdateSpan update;  // over v.source
  ViewResult before;
  ViewResult after;
};

/// The view update induced by a source update: an element is kept when its
/// anchor is kept.
ViewUpdate get(const ViewDefinition& v, const UpdateSpan& a);

/// Realizes a view update on `source`. Deletions cascade to incident edges;
/// a deleted path takes its edges and private interior nodes (those whose
/// type no view node maps to), and private nodes left below a mult lower
/// bound are removed. An inserted node becomes fresh(view id); an inserted
/// path edge becomes a chain whose first edge is fresh(view id) and whose
/// later edges and interior nodes are fresh(view id + "/" + i). Inserted
/// nodes below a mult lower bound get fresh targets node + "/" + edge type.
/// Throws ContinuityError unless w starts at the current view of source.
UpdateSpan put(const ViewDefinition& v, const TypedInstance& source, const UpdateSpan& w,
               const PutPolicy& policy = PutPolicy::standard());

enum class LensMutation {
  none,
  drop_cascade_delete,
  skip_realignment,
  reuse_stale_corr,
  delete_as_insert,
  nondeterministic_ids,
};

const char* to_string(LensMutation mutation);
/// Throws LensError on an unknown name.
LensMutation lens_mutation_from_string(const std::string& name);

struct Propagation {
  UpdateSpan update;
  LensCorr corr;
};

struct Translation {
  TypedInstance model;
  LensCorr corr;
};

/// Symmetric delta lens over a span of views M <= MN => N.
class ViewSpanLens {
 public:
  /// Throws LensError unless both views start at the same MN graph and are
  /// constraint-compatible.
  ViewSpanLens(ViewDefinition m, ViewDefinition n, PutPolicy policy = PutPolicy::standard(),
               LensMutation mutation = LensMutation::none);

  const ViewDefinition& left_view() const { return align_.left_view(); }
  const ViewDefinition& right_view() const { return align_.right_view(); }
  const AlignmentFramework& alignment() const { return align_; }
  const PutPolicy& policy() const { return policy_; }
  LensMutation mutation() const { return mutation_; }

  /// Propagates a: A -> A' to B, where r is a corr between A and B.
  /// Throws ContinuityError when r does not relate a.old_model() and b.
  Propagation fppg(const LensCorr& r, const UpdateSpan& a, const TypedInstance& b) const;
  /// Propagates b: B -> B' to A.
  Propagation bppg(const LensCorr& r, const UpdateSpan& b, const TypedInstance& a) const;

  /// Builds B from A by propagating the creation of A from nothing.
  Translation translate(const TypedInstance& a) const;
  Translation translate_back(const TypedInstance& b) const;

  /// The same lens with sides swapped.
  ViewSpanLens flipped() const;
  /// This lens with a deliberate defect.
  ViewSpanLens mutated(LensMutation mutation) const;

 private:
  AlignmentFramework align_;
  PutPolicy policy_;
  LensMutation mutation_;
};

}  // namespace sketchwork
