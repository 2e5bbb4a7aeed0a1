#include "sketchwork/sketch.hpp"

#include "sketchwork/limits.hpp"

namespace sketchwork {

std::string ConstraintDeclaration::label() const {
  std::string out = predicate + "(";
  bool first = true;
  for (const auto& [k, v] : args) {
    if (!first) out += ",";
    out += k + "=" + std::to_string(v);
    first = false;
  }
  out += ") on ";
  first = true;
  for (const auto& [_, e] : binding.edge_map()) {
    if (!first) out += ",";
    out += e;
    first = false;
  }
  return out;
}

Metamodel::Metamodel(std::string name, Graph graph, std::vector<ConstraintDeclaration> constraints)
    : name_(std::move(name)), graph_(std::make_shared<const Graph>(std::move(graph))) {
  const auto& registry = PredicateRegistry::global();
  constraints_.reserve(constraints.size());
  for (auto& decl : constraints) {
    if (!registry.contains(decl.predicate)) {
      throw ConstraintError("unknown predicate '" + decl.predicate + "'");
    }
    if (decl.binding.cod() != *graph_) {
      throw ConstraintError("declaration " + decl.label() + " is not bound into metamodel '" +
                            name_ + "'");
    }
    if (decl.binding.dom() != registry.get(decl.predicate).arity(decl.args)) {
      throw ConstraintError("declaration " + decl.label() + " does not match its predicate arity");
    }
    constraints_.push_back({std::move(decl.predicate), std::move(decl.args),
                            decl.binding.with_cod(graph_)});
  }
}

bool Metamodel::operator==(const Metamodel& other) const {
  return name_ == other.name_ && (graph_ == other.graph_ || *graph_ == *other.graph_) &&
         constraints_ == other.constraints_;
}

TypedInstance::TypedInstance(MetamodelPtr metamodel, GraphMorphism typing)
    : metamodel_(std::move(metamodel)), typing_(std::move(typing)) {
  if (typing_.cod_ptr() != metamodel_->graph_ptr()) {
    if (typing_.cod() != metamodel_->graph()) {
      throw MorphismError("typing does not land in the graph of metamodel '" +
                          metamodel_->name() + "'");
    }
    typing_ = typing_.with_cod(metamodel_->graph_ptr());
  }
}

TypedInstance::TypedInstance(MetamodelPtr metamodel, Graph graph, std::map<Id, Id> node_types,
                             std::map<Id, Id> edge_types)
    : TypedInstance(metamodel,
                    GraphMorphism(std::make_shared<const Graph>(std::move(graph)),
                                  metamodel->graph_ptr(), std::move(node_types),
                                  std::move(edge_types))) {}

TypedInstance TypedInstance::empty(MetamodelPtr metamodel) {
  return TypedInstance(metamodel, Graph{}, {}, {});
}

bool TypedInstance::operator==(const TypedInstance& other) const {
  return (metamodel_ == other.metamodel_ || *metamodel_ == *other.metamodel_) &&
         typing_ == other.typing_;
}

InstanceMorphism make_instance_morphism(TypedInstance dom, TypedInstance cod, GraphMorphism data,
                                        GraphMorphism meta) {
  if (compose(data, cod.typing()) != compose(dom.typing(), meta)) {
    throw MorphismError("instance morphism square does not commute");
  }
  return InstanceMorphism{std::move(dom), std::move(cod), std::move(data), std::move(meta)};
}

bool ConstraintReport::legal() const {
  for (const auto& [_, v] : entries) {
    if (!v.empty()) return false;
  }
  return true;
}

std::size_t ConstraintReport::violation_count() const {
  std::size_t n = 0;
  for (const auto& [_, v] : entries) n += v.size();
  return n;
}

std::vector<Violation> check_constraint(const TypedInstance& inst,
                                        const ConstraintDeclaration& decl) {
  if (decl.binding.cod() != inst.metamodel().graph()) {
    throw ConstraintError("declaration " + decl.label() +
                          " is not bound into the instance's metamodel");
  }
  return PredicateRegistry::global().get(decl.predicate).check(inst, decl);
}

ConstraintReport check_instance(const TypedInstance& inst) {
  ConstraintReport report;
  for (const auto& decl : inst.metamodel().constraints()) {
    report.entries.emplace_back(decl.label(), check_constraint(inst, decl));
  }
  return report;
}

bool declaration_implies(const ConstraintDeclaration& stronger,
                         const ConstraintDeclaration& weaker) {
  if (stronger.predicate != weaker.predicate || stronger.binding != weaker.binding) return false;
  if (stronger.args == weaker.args) return true;
  if (stronger.predicate != "mult") return false;
  // mult(lo,hi) implies mult(lo',hi') when [lo,hi] is inside [lo',hi'].
  auto lo = [](const PredicateArgs& a) { return a.contains("lo") ? a.at("lo") : 0; };
  auto hi = [](const PredicateArgs& a) -> std::optional<std::int64_t> {
    if (a.contains("hi")) return a.at("hi");
    return std::nullopt;
  };
  if (lo(stronger.args) < lo(weaker.args)) return false;
  auto hs = hi(stronger.args);
  auto hw = hi(weaker.args);
  if (!hw) return true;
  return hs && *hs <= *hw;
}

std::vector<std::string> metamodel_morphism_gaps(const GraphMorphism& m, const Metamodel& src,
                                                 const Metamodel& dst) {
  if (m.dom() != src.graph() || m.cod() != dst.graph()) {
    throw MorphismError("metamodel morphism does not run between the given metamodels");
  }
  std::vector<std::string> gaps;
  for (const auto& decl : src.constraints()) {
    ConstraintDeclaration translated{decl.predicate, decl.args,
                                     compose(decl.binding, m).with_cod(dst.graph_ptr())};
    bool found = false;
    for (const auto& candidate : dst.constraints()) {
      if (declaration_implies(candidate, translated)) {
        found = true;
        break;
      }
    }
    if (!found) gaps.push_back(decl.label());
  }
  return gaps;
}

bool check_metamodel_morphism(const GraphMorphism& m, const Metamodel& src, const Metamodel& dst) {
  return metamodel_morphism_gaps(m, src, dst).empty();
}

RetypeResult pullback_instance(const TypedInstance& inst, MetamodelPtr source,
                               const GraphMorphism& m) {
  if (m.dom() != source->graph()) {
    throw MorphismError("retype: morphism does not start at the source metamodel graph");
  }
  auto pb = pullback(inst.typing(), m);
  const bool keep_nodes = [&] {
    std::set<Id> seen;
    for (const auto& [_, y] : m.node_map()) {
      if (!seen.insert(y).second) return false;
    }
    return true;
  }();
  const bool keep_edges = [&] {
    std::set<Id> seen;
    for (const auto& [_, y] : m.edge_map()) {
      if (!seen.insert(y).second) return false;
    }
    return true;
  }();
  // apex element -> (new id); keep the instance id when that is unambiguous.
  const auto& proj = pb.left.node_map();
  const auto& proj_e = pb.left.edge_map();
  auto node_name = [&](const Id& p) -> const Id& { return keep_nodes ? proj.at(p) : p; };
  auto edge_name = [&](const Id& p) -> const Id& { return keep_edges ? proj_e.at(p) : p; };

  Graph g;
  std::map<Id, Id> node_types, edge_types, back_nodes, back_edges;
  for (const auto& n : pb.apex().nodes()) {
    const auto& id = node_name(n);
    g.add_node(id);
    node_types.emplace(id, pb.right.node(n));
    back_nodes.emplace(id, proj.at(n));
  }
  for (const auto& [e, ends] : pb.apex().edges()) {
    const auto& id = edge_name(e);
    g.add_edge(id, node_name(ends.src), node_name(ends.tgt));
    edge_types.emplace(id, pb.right.edge(e));
    back_edges.emplace(id, proj_e.at(e));
  }
  auto gp = std::make_shared<const Graph>(std::move(g));
  TypedInstance result(source, GraphMorphism(gp, source->graph_ptr(), std::move(node_types),
                                             std::move(edge_types)));
  return RetypeResult{std::move(result), GraphMorphism(gp, inst.typing().dom_ptr(),
                                                       std::move(back_nodes),
                                                       std::move(back_edges))};
}

RetypeResult retype(const TypedInstance& inst, MetamodelPtr source, const GraphMorphism& m) {
  if (m.cod() != inst.metamodel().graph()) {
    throw MorphismError("retype: morphism does not end at the instance's metamodel graph");
  }
  auto gaps = metamodel_morphism_gaps(m, *source, inst.metamodel());
  if (!gaps.empty()) {
    throw ConstraintError("retype along a constraint-incompatible morphism: " + gaps.front() +
                          " is not preserved");
  }
  if (!check_instance(inst).legal()) {
    throw ConstraintError("retype requires a legal instance");
  }
  return pullback_instance(inst, std::move(source), m);
}

}  // namespace sketchwork
