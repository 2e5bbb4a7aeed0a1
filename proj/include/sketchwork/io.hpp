#pragma once

#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

#include "sketchwork/lens_laws.hpp"
#include "sketchwork/merge.hpp"

namespace sketchwork::io {

using Json = nlohmann::json;

/// Throws ParseError on IO failure or malformed JSON.
Json read_json(const std::filesystem::path& path);
/// Writes through a temporary file and a rename.
void write_file(const std::filesystem::path& path, const std::string& contents);
/// Pretty-printed with sorted keys and a trailing newline.
void write_json(const std::filesystem::path& path, const Json& j);

// Every *_from_json throws ParseError on a shape mismatch; semantic errors
// (bad morphisms, unknown predicates) surface as the owning module's error.

Json to_json(const Graph& g);
Graph graph_from_json(const Json& j);

Json to_json(const GraphMorphism& m);
GraphMorphism morphism_from_json(const Json& j, std::shared_ptr<const Graph> dom,
                                 std::shared_ptr<const Graph> cod);

Json to_json(const Metamodel& m);
MetamodelPtr metamodel_from_json(const Json& j, std::string name);

using MetamodelTable = std::map<std::string, MetamodelPtr>;

Json to_json(const TypedInstance& x);
TypedInstance instance_from_json(const Json& j, const MetamodelTable& metamodels);

/// {"path": [...]} plus "at" for the empty path.
Json to_json(const Path& p);
Path path_from_json(const Json& j, const Graph& g);

Json to_json(const ViewDefinition& v);
ViewDefinition view_from_json(const Json& j, const MetamodelTable& metamodels);

Json to_json(const ViewResult& r);

Json to_json(const Corr& c);
Corr corr_from_json(const Json& j, const std::map<std::string, TypedInstance>& models);

Json to_json(const UpdateSpan& u);
UpdateSpan update_from_json(const Json& j, const MetamodelTable& metamodels);

/// A lens correspondence with the names of the models it relates.
struct NamedLensCorr {
  std::string lens;
  std::string left;
  std::string right;
  LensCorr corr;
};

Json to_json(const NamedLensCorr& c);
NamedLensCorr lens_corr_from_json(const Json& j);

Json to_json(const ConstraintReport& r);
Json to_json(const Edit& e);
Edit edit_from_json(const Json& j);
Json to_json(const LawCase& c);
Json to_json(const LawReport& r);

/// Graph as DOT: record nodes, edges labelled by id (and type, if typed).
std::string to_dot(const std::string& name, const Graph& g, const GraphMorphism* typing = nullptr);

struct LensSpec {
  std::string left;   // view name
  std::string right;  // view name
  LensMutation mutation = LensMutation::none;
};

/// Files named by a manifest, loaded in a fixed order: metamodels, models,
/// views, metamodel links, lenses, corrs, updates. Paths are relative to
/// the manifest's directory.
struct Workspace {
  std::filesystem::path root;
  MetamodelTable metamodels;
  std::map<std::string, TypedInstance> models;
  std::map<std::string, ViewDefinition> views;
  std::vector<MetamodelLink> metamodel_links;
  std::map<std::string, LensSpec> lenses;
  std::map<std::string, Corr> corrs;
  std::map<std::string, NamedLensCorr> lens_corrs;
  /// "old"/"new" name models of the manifest, or hold instance files or
  /// inline instances.
  std::map<std::string, UpdateSpan> updates;

  /// Throws ParseError on unresolved references or duplicate names.
  static Workspace load(const std::filesystem::path& manifest);

  Multimodel multimodel() const;
  ViewSpanLens lens(const std::string& name) const;
};

}  // namespace sketchwork::io
