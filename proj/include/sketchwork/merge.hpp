#pragma once

#include <map>
#include <string>
#include <vector>

#include "sketchwork/limits.hpp"
#include "sketchwork/view.hpp"

namespace sketchwork {

/// One side of a correspondence: head elements to elements of a model.
/// `paths` holds complex links (head edge -> model path) that still need
/// materializing.
struct CorrLeg {
  std::string model;
  std::map<Id, Id> nodes;
  std::map<Id, Id> edges;
  std::map<Id, Path> paths;

  bool operator==(const CorrLeg&) const = default;
};

/// A (possibly n-ary) correspondence span between models. Drafts produced
/// by matching are unconfirmed; merge accepts only confirmed corrs.
struct Corr {
  Graph head;
  std::vector<CorrLeg> legs;
  bool confirmed = false;

  bool materialized() const;
  bool operator==(const Corr&) const = default;
};

/// A metamodel-level link. Plain links map edges to single edges; Kleisli
/// links (paths) must be materialized before merging.
struct MetamodelLink {
  std::string from;
  std::string to;
  ViewDefinition view;  // from -> Q(to)
};

struct Multimodel {
  std::map<std::string, MetamodelPtr> metamodels;
  /// Each model's metamodel is the entry named by its metamodel().name().
  std::map<std::string, TypedInstance> models;
  std::vector<MetamodelLink> metamodel_links;
  std::vector<Corr> corrs;

  /// Throws MergeError when a model, link or corr refers to something
  /// missing or its legs are not graph morphisms into the models.
  void validate() const;
};

/// Links nodes with equal id and equal type, then edges with equal id and
/// type whose endpoints are linked. The result is an unconfirmed draft.
Corr name_match(const std::string& left_name, const TypedInstance& left,
                const std::string& right_name, const TypedInstance& right);

/// Executes every query referenced by complex corr links and Kleisli
/// metamodel links, adds the derived elements as concrete ones, and
/// rewrites the links to plain references. Idempotent. Throws MergeError on
/// a dangling provenance.
Multimodel materialize(const Multimodel& mm);

struct MetamodelMerge {
  MetamodelPtr metamodel;
  std::map<std::string, GraphMorphism> injections;
};

/// Colimit of the metamodel graphs; constraints are the deduplicated union
/// of all declaration images. Throws MergeError on a Kleisli link or a
/// constraint-incompatible one.
MetamodelMerge merge_metamodels(const std::map<std::string, MetamodelPtr>& metamodels,
                                const std::vector<MetamodelLink>& links);

struct MergeResult {
  MetamodelMerge metamodel;
  TypedInstance instance;
  /// Model name -> its injection into the merged graph.
  std::map<std::string, GraphMorphism> cocone;
  ConstraintReport report;
};

/// Colimit of the models and corr heads, typed over the merged metamodel.
/// Constraint violations are reported, not thrown. Throws MergeError on an
/// unconfirmed or unmaterialized corr and TypingConflict when a corr links
/// elements whose types differ in the merged metamodel.
MergeResult merge_models(const Multimodel& mm);

}  // namespace sketchwork
