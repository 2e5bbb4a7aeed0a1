#include "sketchwork/io.hpp"

#include <fstream>
#include <sstream>

namespace sketchwork::io {

namespace fs = std::filesystem;

Json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError("malformed JSON in '" + path.string() + "': " + e.what());
  }
}

void write_file(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError("cannot write '" + tmp.string() + "'");
    out << contents;
    if (!out) throw ParseError("cannot write '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

void write_json(const fs::path& path, const Json& j) { write_file(path, j.dump(2) + "\n"); }

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

std::string text(const Json& j) {
  if (!j.is_string()) throw ParseError("expected a string, got " + j.dump());
  return j.get<std::string>();
}

std::map<Id, Id> string_map(const Json& j) {
  std::map<Id, Id> out;
  if (j.is_null()) return out;
  if (!j.is_object()) throw ParseError("expected an object of strings, got " + j.dump());
  for (const auto& [k, v] : j.items()) out.emplace(k, text(v));
  return out;
}

std::vector<Id> string_list(const Json& j) {
  if (!j.is_array()) throw ParseError("expected an array of strings, got " + j.dump());
  std::vector<Id> out;
  for (const auto& v : j) out.push_back(text(v));
  return out;
}

const Json& optional(const Json& j, const char* key) {
  static const Json none;
  return j.is_object() && j.contains(key) ? j.at(key) : none;
}

Json anchored(const Path& p) {
  return Json{{"path", p.edges}, {"from", p.from}, {"to", p.to}};
}

Path anchored_from_json(const Json& j) {
  return Path{string_list(field(j, "path")), text(field(j, "from")), text(field(j, "to"))};
}

}  // namespace

Json to_json(const Graph& g) {
  Json edges = Json::array();
  for (const auto& [e, ends] : g.edges()) {
    edges.push_back({{"id", e}, {"src", ends.src}, {"tgt", ends.tgt}});
  }
  return Json{{"nodes", g.nodes()}, {"edges", edges}};
}

Graph graph_from_json(const Json& j) {
  Graph g;
  for (const auto& n : string_list(field(j, "nodes"))) g.add_node(n);
  const auto& edges = optional(j, "edges");
  if (edges.is_null()) return g;
  if (!edges.is_array()) throw ParseError("graph edges must be an array");
  for (const auto& e : edges) {
    g.add_edge(text(field(e, "id")), text(field(e, "src")), text(field(e, "tgt")));
  }
  return g;
}

Json to_json(const GraphMorphism& m) {
  return Json{{"nodes", m.node_map()}, {"edges", m.edge_map()}};
}

GraphMorphism morphism_from_json(const Json& j, std::shared_ptr<const Graph> dom,
                                 std::shared_ptr<const Graph> cod) {
  return GraphMorphism(std::move(dom), std::move(cod), string_map(field(j, "nodes")),
                       string_map(optional(j, "edges")));
}

Json to_json(const Metamodel& m) {
  Json constraints = Json::array();
  for (const auto& d : m.constraints()) {
    constraints.push_back(
        {{"predicate", d.predicate}, {"args", d.args}, {"binding", to_json(d.binding)}});
  }
  return Json{{"name", m.name()}, {"graph", to_json(m.graph())}, {"constraints", constraints}};
}

MetamodelPtr metamodel_from_json(const Json& j, std::string name) {
  auto graph = std::make_shared<const Graph>(graph_from_json(field(j, "graph")));
  std::vector<ConstraintDeclaration> decls;
  const auto& constraints = optional(j, "constraints");
  if (!constraints.is_null() && !constraints.is_array()) {
    throw ParseError("constraints must be an array");
  }
  for (const auto& c : constraints) {
    auto predicate = text(field(c, "predicate"));
    PredicateArgs args;
    for (const auto& [k, v] : optional(c, "args").items()) {
      if (!v.is_number_integer()) throw ParseError("predicate argument '" + k + "' must be an integer");
      args.emplace(k, v.get<std::int64_t>());
    }
    auto arity = std::make_shared<const Graph>(
        PredicateRegistry::global().get(predicate).arity(args));
    auto binding = morphism_from_json(field(c, "binding"), arity, graph);
    decls.push_back({std::move(predicate), std::move(args), std::move(binding)});
  }
  return make_metamodel(std::move(name), *graph, std::move(decls));
}

Json to_json(const TypedInstance& x) {
  return Json{{"metamodel", x.metamodel().name()},
              {"graph", to_json(x.graph())},
              {"typing", to_json(x.typing())}};
}

TypedInstance instance_from_json(const Json& j, const MetamodelTable& metamodels) {
  auto name = text(field(j, "metamodel"));
  auto it = metamodels.find(name);
  if (it == metamodels.end()) throw ParseError("unknown metamodel '" + name + "'");
  auto graph = std::make_shared<const Graph>(graph_from_json(field(j, "graph")));
  return TypedInstance(it->second,
                       morphism_from_json(field(j, "typing"), graph, it->second->graph_ptr()));
}

Json to_json(const Path& p) {
  Json j{{"path", p.edges}};
  if (p.edges.empty()) j["at"] = p.from;
  return j;
}

Path path_from_json(const Json& j, const Graph& g) {
  auto edges = string_list(field(j, "path"));
  if (edges.empty()) {
    auto at = text(field(j, "at"));
    if (!g.has_node(at)) throw ParseError("empty path at unknown node '" + at + "'");
    return empty_path(at);
  }
  return make_path(g, edges);
}

Json to_json(const ViewDefinition& v) {
  Json edges = Json::object();
  for (const auto& [f, q] : v.edge_map()) edges[f] = to_json(q);
  return Json{{"source", v.source().name()},
              {"target", v.target().name()},
              {"nodes", v.node_map()},
              {"edges", edges}};
}

ViewDefinition view_from_json(const Json& j, const MetamodelTable& metamodels) {
  auto find = [&](const char* key) {
    auto name = text(field(j, key));
    auto it = metamodels.find(name);
    if (it == metamodels.end()) throw ParseError("view refers to unknown metamodel '" + name + "'");
    return it->second;
  };
  auto source = find("source");
  auto target = find("target");
  std::map<Id, PathQuery> edges;
  for (const auto& [f, q] : optional(j, "edges").items()) {
    edges.emplace(f, path_from_json(q, target->graph()));
  }
  return ViewDefinition(source, target, string_map(field(j, "nodes")), std::move(edges));
}

Json to_json(const ViewResult& r) {
  Json edges = Json::object();
  for (const auto& [e, p] : r.edge_trace) edges[e] = to_json(p);
  return Json{{"instance", to_json(r.instance)},
              {"trace", {{"nodes", r.node_trace}, {"edges", edges}}}};
}

namespace {

Json leg_json(const CorrLeg& leg) {
  Json paths = Json::object();
  for (const auto& [h, p] : leg.paths) paths[h] = to_json(p);
  return Json{{"model", leg.model}, {"nodes", leg.nodes}, {"edges", leg.edges}, {"paths", paths}};
}

CorrLeg leg_from_json(const Json& j, const std::map<std::string, TypedInstance>& models) {
  CorrLeg leg{text(field(j, "model")), string_map(optional(j, "nodes")),
              string_map(optional(j, "edges")), {}};
  auto it = models.find(leg.model);
  if (it == models.end()) throw ParseError("corr refers to unknown model '" + leg.model + "'");
  for (const auto& [h, p] : optional(j, "paths").items()) {
    leg.paths.emplace(h, path_from_json(p, it->second.graph()));
  }
  return leg;
}

}  // namespace

Json to_json(const Corr& c) {
  Json j{{"head", to_json(c.head)}, {"confirmed", c.confirmed}};
  if (c.legs.size() == 2) {
    j["left"] = leg_json(c.legs[0]);
    j["right"] = leg_json(c.legs[1]);
  } else {
    j["legs"] = Json::array();
    for (const auto& leg : c.legs) j["legs"].push_back(leg_json(leg));
  }
  return j;
}

Corr corr_from_json(const Json& j, const std::map<std::string, TypedInstance>& models) {
  Corr c;
  c.head = graph_from_json(field(j, "head"));
  const auto& confirmed = optional(j, "confirmed");
  if (!confirmed.is_null() && !confirmed.is_boolean()) throw ParseError("confirmed must be a boolean");
  c.confirmed = confirmed.is_boolean() && confirmed.get<bool>();
  if (j.contains("legs")) {
    for (const auto& leg : field(j, "legs")) c.legs.push_back(leg_from_json(leg, models));
  } else {
    c.legs.push_back(leg_from_json(field(j, "left"), models));
    c.legs.push_back(leg_from_json(field(j, "right"), models));
  }
  return c;
}

Json to_json(const UpdateSpan& u) {
  return Json{{"old", to_json(u.old_model())},
              {"new", to_json(u.new_model())},
              {"kept", {{"nodes", u.kept_nodes()}, {"edges", u.kept_edges()}}}};
}

UpdateSpan update_from_json(const Json& j, const MetamodelTable& metamodels) {
  const auto& kept = field(j, "kept");
  return UpdateSpan(instance_from_json(field(j, "old"), metamodels),
                    instance_from_json(field(j, "new"), metamodels),
                    string_map(optional(kept, "nodes")), string_map(optional(kept, "edges")));
}

Json to_json(const NamedLensCorr& c) {
  Json nodes = Json::array();
  Json edges = Json::array();
  for (const auto& l : c.corr.nodes) {
    nodes.push_back({{"type", l.type}, {"left", l.left}, {"right", l.right}});
  }
  for (const auto& l : c.corr.edges) {
    edges.push_back({{"type", l.type}, {"left", anchored(l.left)}, {"right", anchored(l.right)}});
  }
  return Json{{"lens", c.lens},
              {"left", c.left},
              {"right", c.right},
              {"links", {{"nodes", nodes}, {"edges", edges}}}};
}

NamedLensCorr lens_corr_from_json(const Json& j) {
  NamedLensCorr c{text(field(j, "lens")), text(field(j, "left")), text(field(j, "right")), {}};
  const auto& links = field(j, "links");
  for (const auto& l : optional(links, "nodes")) {
    c.corr.nodes.insert({text(field(l, "type")), text(field(l, "left")), text(field(l, "right"))});
  }
  for (const auto& l : optional(links, "edges")) {
    c.corr.edges.insert({text(field(l, "type")), anchored_from_json(field(l, "left")),
                         anchored_from_json(field(l, "right"))});
  }
  return c;
}

Json to_json(const ConstraintReport& r) {
  Json entries = Json::array();
  for (const auto& [label, violations] : r.entries) {
    Json vs = Json::array();
    for (const auto& v : violations) vs.push_back({{"message", v.message}, {"elements", v.elements}});
    entries.push_back({{"constraint", label}, {"violations", vs}});
  }
  return Json{{"legal", r.legal()}, {"constraints", entries}};
}

Json to_json(const Edit& e) {
  Json edges = Json::object();
  for (const auto& [id, ne] : e.insert_edges) {
    edges[id] = {{"src", ne.src}, {"tgt", ne.tgt}, {"type", ne.type}};
  }
  return Json{{"delete_nodes", e.delete_nodes},
              {"delete_edges", e.delete_edges},
              {"insert_nodes", e.insert_nodes},
              {"insert_edges", edges}};
}

Edit edit_from_json(const Json& j) {
  Edit e;
  for (const char* key : {"delete_nodes", "delete_edges"}) {
    const auto& list = optional(j, key);
    if (list.is_null()) continue;
    auto& into = std::string_view(key) == "delete_nodes" ? e.delete_nodes : e.delete_edges;
    for (const auto& id : string_list(list)) into.insert(id);
  }
  e.insert_nodes = string_map(optional(j, "insert_nodes"));
  for (const auto& [id, ne] : optional(j, "insert_edges").items()) {
    e.insert_edges.emplace(
        id, Edit::NewEdge{text(field(ne, "src")), text(field(ne, "tgt")), text(field(ne, "type"))});
  }
  return e;
}

Json to_json(const LawCase& c) {
  Json edits = Json::array();
  for (const auto& e : c.edits) edits.push_back(to_json(e));
  return Json{{"law", c.law},
              {"backward", c.backward},
              {"size", c.size()},
              {"start", to_json(c.start)},
              {"edits", edits}};
}

Json to_json(const LawReport& r) {
  Json laws = Json::array();
  for (const auto& o : r.laws) {
    Json j{{"law", o.law}, {"cases", o.cases}, {"failures", o.failures}, {"passed", o.passed()}};
    if (o.law == "fbf" || o.law == "bfb") j["corr_differences"] = o.corr_differences;
    if (o.counterexample) {
      j["message"] = o.message;
      j["counterexample_size"] = o.counterexample->size();
    }
    laws.push_back(std::move(j));
  }
  return Json{{"passed", r.passed()}, {"laws", laws}};
}

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string record_field(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (std::string_view("{}|<>\"\\ ").find(c) != std::string_view::npos) out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string to_dot(const std::string& name, const Graph& g, const GraphMorphism* typing) {
  std::ostringstream out;
  out << "digraph " << quoted(name) << " {\n  node [shape=record];\n";
  for (const auto& n : g.nodes()) {
    auto label = record_field(n);
    if (typing) label = "{" + label + "|" + record_field(typing->node(n)) + "}";
    out << "  " << quoted(n) << " [label=\"" << label << "\"];\n";
  }
  for (const auto& [e, ends] : g.edges()) {
    auto label = typing ? e + " : " + typing->edge(e) : e;
    out << "  " << quoted(ends.src) << " -> " << quoted(ends.tgt) << " [label=" << quoted(label)
        << "];\n";
  }
  out << "}\n";
  return out.str();
}

namespace {

Workspace load_workspace(const fs::path& manifest) {
  Workspace ws;
  ws.root = manifest.parent_path();
  auto m = read_json(manifest);
  if (!m.is_object()) throw ParseError("manifest must be a JSON object");
  std::set<std::string> names;
  auto load = [&](const Json& ref) {
    if (ref.is_string()) return read_json(ws.root / ref.get<std::string>());
    return ref;
  };
  auto section = [&](const char* key, auto&& add) {
    const auto& s = optional(m, key);
    if (s.is_null()) return;
    if (!s.is_object()) throw ParseError(std::string("manifest section '") + key + "' must be an object");
    for (const auto& [name, ref] : s.items()) {
      if (!names.insert(name).second) throw ParseError("duplicate manifest name '" + name + "'");
      try {
        add(name, load(ref));
      } catch (const Error& e) {
        throw ParseError(std::string(key) + " '" + name + "': " + e.what());
      }
    }
  };
  section("metamodels", [&](const std::string& name, const Json& j) {
    ws.metamodels.emplace(name, metamodel_from_json(j, name));
  });
  section("models", [&](const std::string& name, const Json& j) {
    ws.models.emplace(name, instance_from_json(j, ws.metamodels));
  });
  section("views", [&](const std::string& name, const Json& j) {
    ws.views.emplace(name, view_from_json(j, ws.metamodels));
  });
  const auto& links = optional(m, "metamodel_links");
  if (!links.is_null() && !links.is_array()) throw ParseError("metamodel_links must be an array");
  for (const auto& l : links) {
    auto view = text(field(l, "view"));
    auto it = ws.views.find(view);
    if (it == ws.views.end()) throw ParseError("metamodel link refers to unknown view '" + view + "'");
    ws.metamodel_links.push_back({text(field(l, "from")), text(field(l, "to")), it->second});
  }
  section("lenses", [&](const std::string& name, const Json& j) {
    LensSpec spec{text(field(j, "left")), text(field(j, "right")), LensMutation::none};
    for (const auto& v : {spec.left, spec.right}) {
      if (!ws.views.contains(v)) throw ParseError("lens '" + name + "' refers to unknown view '" + v + "'");
    }
    const auto& mutation = optional(j, "mutation");
    if (!mutation.is_null()) {
      try {
        spec.mutation = lens_mutation_from_string(text(mutation));
      } catch (const LensError& e) {
        throw ParseError(e.what());
      }
    }
    ws.lenses.emplace(name, std::move(spec));
  });
  section("corrs", [&](const std::string& name, const Json& j) {
    if (j.contains("links")) {
      auto c = lens_corr_from_json(j);
      for (const auto& model : {c.left, c.right}) {
        if (!ws.models.contains(model)) throw ParseError("unknown model '" + model + "'");
      }
      if (!ws.lenses.contains(c.lens)) throw ParseError("unknown lens '" + c.lens + "'");
      ws.lens_corrs.emplace(name, std::move(c));
    } else {
      ws.corrs.emplace(name, corr_from_json(j, ws.models));
    }
  });
  section("updates", [&](const std::string& name, const Json& j) {
    auto side = [&](const char* key) {
      const auto& ref = field(j, key);
      if (ref.is_string()) {
        auto it = ws.models.find(ref.get<std::string>());
        if (it != ws.models.end()) return to_json(it->second);
      }
      return load(ref);
    };
    Json resolved{{"old", side("old")}, {"new", side("new")}, {"kept", field(j, "kept")}};
    ws.updates.emplace(name, update_from_json(resolved, ws.metamodels));
  });
  return ws;
}

}  // namespace

Workspace Workspace::load(const fs::path& manifest) {
  try {
    return load_workspace(manifest);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(manifest.string() + ": " + e.what());
  }
}

Multimodel Workspace::multimodel() const {
  Multimodel mm;
  mm.metamodels = metamodels;
  mm.models = models;
  mm.metamodel_links = metamodel_links;
  for (const auto& [_, c] : corrs) mm.corrs.push_back(c);
  return mm;
}

ViewSpanLens Workspace::lens(const std::string& name) const {
  auto it = lenses.find(name);
  if (it == lenses.end()) throw ParseError("unknown lens '" + name + "'");
  ViewSpanLens lens(views.at(it->second.left), views.at(it->second.right));
  return it->second.mutation == LensMutation::none ? lens : lens.mutated(it->second.mutation);
}

}  // namespace sketchwork::io
