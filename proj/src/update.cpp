#include "sketchwork/update.hpp"

namespace sketchwork {

const char* to_string(UpdateKind kind) {
  switch (kind) {
    case UpdateKind::identity: return "identity";
    case UpdateKind::insertion: return "insert";
    case UpdateKind::deletion: return "delete";
    case UpdateKind::mixed: return "mixed";
  }
  return "?";
}

namespace {

std::set<Id> image(const std::map<Id, Id>& m) {
  std::set<Id> out;
  for (const auto& [_, y] : m) out.insert(y);
  return out;
}

}  // namespace

UpdateSpan::UpdateSpan(TypedInstance old_model, TypedInstance new_model,
                       std::map<Id, Id> kept_nodes, std::map<Id, Id> kept_edges)
    : old_(std::move(old_model)),
      new_(std::move(new_model)),
      kept_nodes_(std::move(kept_nodes)),
      kept_edges_(std::move(kept_edges)) {
  if (old_.metamodel().graph() != new_.metamodel().graph()) {
    throw LensError("update endpoints are typed over different metamodels");
  }
  const auto& og = old_.graph();
  const auto& ng = new_.graph();
  if (image(kept_nodes_).size() != kept_nodes_.size() ||
      image(kept_edges_).size() != kept_edges_.size()) {
    throw LensError("update legs must be injective");
  }
  for (const auto& [x, y] : kept_nodes_) {
    if (!og.has_node(x) || !ng.has_node(y)) {
      throw LensError("kept node '" + x + "' -> '" + y + "' is missing from the update endpoints");
    }
    if (old_.node_type(x) != new_.node_type(y)) {
      throw LensError("kept node '" + x + "' changes its type");
    }
  }
  for (const auto& [x, y] : kept_edges_) {
    if (!og.has_edge(x) || !ng.has_edge(y)) {
      throw LensError("kept edge '" + x + "' -> '" + y + "' is missing from the update endpoints");
    }
    if (old_.edge_type(x) != new_.edge_type(y)) {
      throw LensError("kept edge '" + x + "' changes its type");
    }
    const auto& oe = og.ends(x);
    const auto& ne = ng.ends(y);
    auto s = kept_nodes_.find(oe.src);
    auto t = kept_nodes_.find(oe.tgt);
    if (s == kept_nodes_.end() || t == kept_nodes_.end() || s->second != ne.src ||
        t->second != ne.tgt) {
      throw LensError("kept edge '" + x + "' does not keep its endpoints");
    }
  }
}

UpdateSpan UpdateSpan::identity(const TypedInstance& inst) {
  std::map<Id, Id> nodes, edges;
  for (const auto& n : inst.graph().nodes()) nodes.emplace(n, n);
  for (const auto& [e, _] : inst.graph().edges()) edges.emplace(e, e);
  return UpdateSpan(inst, inst, std::move(nodes), std::move(edges));
}

UpdateSpan UpdateSpan::creation(const TypedInstance& inst) {
  return UpdateSpan(TypedInstance::empty(inst.metamodel_ptr()), inst, {}, {});
}

UpdateSpan UpdateSpan::by_ids(const TypedInstance& old_model, const TypedInstance& new_model) {
  std::map<Id, Id> nodes, edges;
  const auto& ng = new_model.graph();
  for (const auto& n : old_model.graph().nodes()) {
    if (ng.has_node(n) && new_model.node_type(n) == old_model.node_type(n)) nodes.emplace(n, n);
  }
  for (const auto& [e, ends] : old_model.graph().edges()) {
    if (ng.has_edge(e) && ng.ends(e) == ends && new_model.edge_type(e) == old_model.edge_type(e) &&
        nodes.contains(ends.src) && nodes.contains(ends.tgt)) {
      edges.emplace(e, e);
    }
  }
  return UpdateSpan(old_model, new_model, std::move(nodes), std::move(edges));
}

std::set<Id> UpdateSpan::deleted_nodes() const {
  std::set<Id> out;
  for (const auto& n : old_.graph().nodes()) {
    if (!kept_nodes_.contains(n)) out.insert(n);
  }
  return out;
}

std::set<Id> UpdateSpan::deleted_edges() const {
  std::set<Id> out;
  for (const auto& [e, _] : old_.graph().edges()) {
    if (!kept_edges_.contains(e)) out.insert(e);
  }
  return out;
}

std::set<Id> UpdateSpan::inserted_nodes() const {
  auto kept = image(kept_nodes_);
  std::set<Id> out;
  for (const auto& n : new_.graph().nodes()) {
    if (!kept.contains(n)) out.insert(n);
  }
  return out;
}

std::set<Id> UpdateSpan::inserted_edges() const {
  auto kept = image(kept_edges_);
  std::set<Id> out;
  for (const auto& [e, _] : new_.graph().edges()) {
    if (!kept.contains(e)) out.insert(e);
  }
  return out;
}

bool UpdateSpan::is_insert() const {
  return kept_nodes_.size() == old_.graph().node_count() &&
         kept_edges_.size() == old_.graph().edge_count();
}

bool UpdateSpan::is_delete() const {
  return kept_nodes_.size() == new_.graph().node_count() &&
         kept_edges_.size() == new_.graph().edge_count();
}

UpdateKind UpdateSpan::classify() const {
  bool ins = is_insert();
  bool del = is_delete();
  if (ins && del) return UpdateKind::identity;
  if (ins) return UpdateKind::insertion;
  if (del) return UpdateKind::deletion;
  return UpdateKind::mixed;
}

Span UpdateSpan::as_span() const {
  Graph kept;
  for (const auto& [n, _] : kept_nodes_) kept.add_node(n);
  std::map<Id, Id> inc_nodes, inc_edges;
  for (const auto& [n, _] : kept_nodes_) inc_nodes.emplace(n, n);
  for (const auto& [e, _] : kept_edges_) {
    const auto& ends = old_.graph().ends(e);
    kept.add_edge(e, ends.src, ends.tgt);
    inc_edges.emplace(e, e);
  }
  auto head = std::make_shared<const Graph>(std::move(kept));
  return make_span(GraphMorphism(head, old_.typing().dom_ptr(), std::move(inc_nodes),
                                 std::move(inc_edges)),
                   GraphMorphism(head, new_.typing().dom_ptr(), kept_nodes_, kept_edges_));
}

bool UpdateSpan::operator==(const UpdateSpan& other) const {
  return kept_nodes_ == other.kept_nodes_ && kept_edges_ == other.kept_edges_ &&
         old_ == other.old_ && new_ == other.new_;
}

UpdateSpan compose_updates(const UpdateSpan& a1, const UpdateSpan& a2) {
  if (!(a1.new_model() == a2.old_model())) {
    throw LensError("cannot compose updates: the first does not end where the second starts");
  }
  // Pullback of two inclusions: what survives both steps.
  std::map<Id, Id> nodes, edges;
  for (const auto& [x, y] : a1.kept_nodes()) {
    auto it = a2.kept_nodes().find(y);
    if (it != a2.kept_nodes().end()) nodes.emplace(x, it->second);
  }
  for (const auto& [x, y] : a1.kept_edges()) {
    auto it = a2.kept_edges().find(y);
    if (it != a2.kept_edges().end()) edges.emplace(x, it->second);
  }
  return UpdateSpan(a1.old_model(), a2.new_model(), std::move(nodes), std::move(edges));
}

}  // namespace sketchwork
