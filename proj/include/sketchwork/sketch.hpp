#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sketchwork/graph.hpp"

namespace sketchwork {

using PredicateArgs = std::map<std::string, std::int64_t>;

/// A predicate bound into a metamodel graph through its arity shape.
struct ConstraintDeclaration {
  std::string predicate;
  PredicateArgs args;
  GraphMorphism binding;  // arity -> metamodel graph

  /// Human-readable name, e.g. "mult(hi=1,lo=1) on works_for".
  std::string label() const;
  bool operator==(const ConstraintDeclaration&) const = default;
};

/// A generalized sketch: a graph plus constraint declarations over it.
class Metamodel {
 public:
  /// Validates every declaration against the predicate registry and
  /// rebinds it onto this metamodel's graph.
  Metamodel(std::string name, Graph graph, std::vector<ConstraintDeclaration> constraints = {});

  const std::string& name() const { return name_; }
  const Graph& graph() const { return *graph_; }
  const std::shared_ptr<const Graph>& graph_ptr() const { return graph_; }
  const std::vector<ConstraintDeclaration>& constraints() const { return constraints_; }

  bool operator==(const Metamodel& other) const;

 private:
  std::string name_;
  std::shared_ptr<const Graph> graph_;
  std::vector<ConstraintDeclaration> constraints_;
};

using MetamodelPtr = std::shared_ptr<const Metamodel>;

inline MetamodelPtr make_metamodel(std::string name, Graph graph,
                                   std::vector<ConstraintDeclaration> constraints = {}) {
  return std::make_shared<const Metamodel>(std::move(name), std::move(graph),
                                           std::move(constraints));
}

/// A graph typed over a metamodel graph.
class TypedInstance {
 public:
  /// Throws MorphismError unless typing's codomain is the metamodel graph.
  TypedInstance(MetamodelPtr metamodel, GraphMorphism typing);
  TypedInstance(MetamodelPtr metamodel, Graph graph, std::map<Id, Id> node_types,
                std::map<Id, Id> edge_types);

  static TypedInstance empty(MetamodelPtr metamodel);

  const Metamodel& metamodel() const { return *metamodel_; }
  const MetamodelPtr& metamodel_ptr() const { return metamodel_; }
  const Graph& graph() const { return typing_.dom(); }
  const GraphMorphism& typing() const { return typing_; }
  const Id& node_type(const Id& n) const { return typing_.node(n); }
  const Id& edge_type(const Id& e) const { return typing_.edge(e); }

  bool operator==(const TypedInstance& other) const;

 private:
  MetamodelPtr metamodel_;
  GraphMorphism typing_;
};

/// A commuting square data ; cod.typing = dom.typing ; meta.
struct InstanceMorphism {
  TypedInstance dom;
  TypedInstance cod;
  GraphMorphism data;
  GraphMorphism meta;
};

/// Throws MorphismError when the square does not commute.
InstanceMorphism make_instance_morphism(TypedInstance dom, TypedInstance cod, GraphMorphism data,
                                        GraphMorphism meta);

struct Violation {
  std::string constraint;
  std::string message;
  std::vector<Id> elements;

  bool operator==(const Violation&) const = default;
};

struct ConstraintReport {
  /// One entry per declaration, in declaration order.
  std::vector<std::pair<std::string, std::vector<Violation>>> entries;

  bool legal() const;
  std::size_t violation_count() const;
};

using ConstraintChecker =
    std::function<std::vector<Violation>(const TypedInstance&, const ConstraintDeclaration&)>;

struct PredicateSignature {
  std::string name;
  /// The shape the predicate constrains, which may depend on the args.
  std::function<Graph(const PredicateArgs&)> arity;
  ConstraintChecker check;
};

/// Named predicate signatures. The global registry starts with mult, inj,
/// jointly_monic and commutes; more may be registered at startup.
class PredicateRegistry {
 public:
  static PredicateRegistry& global();

  void add(PredicateSignature signature);
  const PredicateSignature& get(const std::string& name) const;
  bool contains(const std::string& name) const { return signatures_.contains(name); }

 private:
  std::map<std::string, PredicateSignature> signatures_;
};

/// Builders for the builtin predicate shapes. Arity element names:
/// mult/inj: nodes src,tgt and edge f. jointly_monic(n): node apex, nodes
/// t1..tn, edges leg1..legn. commutes(left=p,right=q): nodes src,tgt,
/// l1..l(p-1), r1..r(q-1); edges lf1..lfp, rf1..rfq.
namespace predicates {

Graph edge_arity();
Graph jointly_monic_arity(std::int64_t legs);
Graph commutes_arity(std::int64_t left, std::int64_t right);

/// mult(lo, hi) on edge `edge` of `graph`; hi = nullopt means unbounded.
ConstraintDeclaration mult(const Graph& graph, const Id& edge, std::int64_t lo,
                           std::optional<std::int64_t> hi);
ConstraintDeclaration inj(const Graph& graph, const Id& edge);
ConstraintDeclaration jointly_monic(const Graph& graph, const std::vector<Id>& legs);
ConstraintDeclaration commutes(const Graph& graph, const std::vector<Id>& left,
                               const std::vector<Id>& right);

}  // namespace predicates

/// Throws ConstraintError if the declaration is not bound into the
/// instance's metamodel graph.
std::vector<Violation> check_constraint(const TypedInstance& inst,
                                        const ConstraintDeclaration& decl);

/// Throws MorphismError first if the typing does not land in the
/// metamodel graph.
ConstraintReport check_instance(const TypedInstance& inst);

/// Labels of the source declarations that the target does not declare (or
/// imply) along m. Empty means m is constraint-compatible.
std::vector<std::string> metamodel_morphism_gaps(const GraphMorphism& m, const Metamodel& src,
                                                 const Metamodel& dst);

bool check_metamodel_morphism(const GraphMorphism& m, const Metamodel& src, const Metamodel& dst);

/// Whether `stronger` (a declaration of the target) implies `weaker` (a
/// translated source declaration) with the same predicate and binding.
bool declaration_implies(const ConstraintDeclaration& stronger,
                         const ConstraintDeclaration& weaker);

struct RetypeResult {
  TypedInstance instance;
  /// Result graph -> the retyped instance's graph.
  GraphMorphism projection;
};

/// Pulls the instance back along m: source.graph -> inst.metamodel.graph.
/// Result elements keep the instance's ids when m is injective on that
/// kind of element, and are pair-encoded otherwise.
/// Throws ConstraintError when m is not constraint-compatible or the
/// instance is not legal.
RetypeResult retype(const TypedInstance& inst, MetamodelPtr source, const GraphMorphism& m);

/// The pullback step of retype without the legality and compatibility
/// checks; m's codomain may be any graph the typing lands in.
RetypeResult pullback_instance(const TypedInstance& inst, MetamodelPtr source,
                               const GraphMorphism& m);

}  // namespace sketchwork
