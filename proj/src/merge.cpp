#include "sketchwork/merge.hpp"

#include <algorithm>

namespace sketchwork {

bool Corr::materialized() const {
  return std::all_of(legs.begin(), legs.end(), [](const CorrLeg& l) { return l.paths.empty(); });
}

namespace {

std::string corr_name(std::size_t i) { return "~" + std::to_string(i); }

void validate_leg(const Corr& c, std::size_t ci, const CorrLeg& leg, const TypedInstance& model) {
  const auto& g = model.graph();
  auto where = "corr " + std::to_string(ci) + " leg '" + leg.model + "'";
  if (leg.nodes.size() != c.head.node_count()) {
    throw MergeError(where + " does not map every head node");
  }
  for (const auto& [h, n] : leg.nodes) {
    if (!c.head.has_node(h)) throw MergeError(where + " maps unknown head node '" + h + "'");
    if (!g.has_node(n)) throw MergeError(where + " links '" + h + "' to missing node '" + n + "'");
  }
  if (leg.edges.size() + leg.paths.size() != c.head.edge_count()) {
    throw MergeError(where + " does not map every head edge");
  }
  for (const auto& [h, e] : leg.edges) {
    if (!c.head.has_edge(h) || leg.paths.contains(h)) {
      throw MergeError(where + " maps head edge '" + h + "' inconsistently");
    }
    if (!g.has_edge(e)) throw MergeError(where + " links '" + h + "' to missing edge '" + e + "'");
    const auto& ends = c.head.ends(h);
    if (g.src(e) != leg.nodes.at(ends.src) || g.tgt(e) != leg.nodes.at(ends.tgt)) {
      throw MergeError(where + " link '" + h + "' does not preserve endpoints");
    }
  }
  for (const auto& [h, p] : leg.paths) {
    if (!c.head.has_edge(h)) throw MergeError(where + " maps unknown head edge '" + h + "'");
    try {
      validate_path(g, p);
    } catch (const ViewError& e) {
      throw MergeError(where + " has a dangling provenance for '" + h + "': " + e.what());
    }
    const auto& ends = c.head.ends(h);
    if (p.from != leg.nodes.at(ends.src) || p.to != leg.nodes.at(ends.tgt)) {
      throw MergeError(where + " path for '" + h + "' does not connect the linked endpoints");
    }
  }
}

/// The query a model path answers: its edgewise typing.
PathQuery query_of(const TypedInstance& model, const Path& p) {
  PathQuery q{{}, model.node_type(p.from), model.node_type(p.to)};
  for (const auto& e : p.edges) q.edges.push_back(model.edge_type(e));
  return q;
}

TypedInstance rebase(const TypedInstance& inst, const MetamodelPtr& m) {
  return TypedInstance(m, inst.graph(), inst.typing().node_map(), inst.typing().edge_map());
}

}  // namespace

void Multimodel::validate() const {
  for (const auto& [name, inst] : models) {
    if (name.starts_with("~")) throw MergeError("model names may not start with '~': " + name);
    auto it = metamodels.find(inst.metamodel().name());
    if (it == metamodels.end()) {
      throw MergeError("model '" + name + "' uses unknown metamodel '" +
                       inst.metamodel().name() + "'");
    }
    if (it->second->graph() != inst.metamodel().graph()) {
      throw MergeError("model '" + name + "' is typed over a different version of metamodel '" +
                       it->first + "'");
    }
  }
  for (const auto& link : metamodel_links) {
    auto from = metamodels.find(link.from);
    auto to = metamodels.find(link.to);
    if (from == metamodels.end() || to == metamodels.end()) {
      throw MergeError("metamodel link " + link.from + " -> " + link.to +
                       " refers to an unknown metamodel");
    }
    if (link.view.source().graph() != from->second->graph() ||
        link.view.target().graph() != to->second->graph()) {
      throw MergeError("metamodel link " + link.from + " -> " + link.to +
                       " does not run between those metamodels");
    }
  }
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    const auto& c = corrs[i];
    if (c.legs.empty()) throw MergeError("corr " + std::to_string(i) + " has no legs");
    for (const auto& leg : c.legs) {
      auto it = models.find(leg.model);
      if (it == models.end()) {
        throw MergeError("corr " + std::to_string(i) + " refers to unknown model '" + leg.model +
                         "'");
      }
      validate_leg(c, i, leg, it->second);
    }
  }
}

Corr name_match(const std::string& left_name, const TypedInstance& left,
                const std::string& right_name, const TypedInstance& right) {
  Corr c;
  CorrLeg l{left_name, {}, {}, {}};
  CorrLeg r{right_name, {}, {}, {}};
  for (const auto& n : left.graph().nodes()) {
    if (right.graph().has_node(n) && left.node_type(n) == right.node_type(n)) {
      c.head.add_node(n);
      l.nodes.emplace(n, n);
      r.nodes.emplace(n, n);
    }
  }
  for (const auto& [e, ends] : left.graph().edges()) {
    if (!right.graph().has_edge(e) || left.edge_type(e) != right.edge_type(e)) continue;
    if (right.graph().ends(e) != ends || !c.head.has_node(ends.src) ||
        !c.head.has_node(ends.tgt)) {
      continue;
    }
    c.head.add_edge(e, ends.src, ends.tgt);
    l.edges.emplace(e, e);
    r.edges.emplace(e, e);
  }
  c.legs = {std::move(l), std::move(r)};
  return c;
}

Multimodel materialize(const Multimodel& mm) {
  mm.validate();
  std::map<std::string, std::set<PathQuery>> meta_needed;
  std::map<std::string, std::set<PathQuery>> model_needed;
  for (const auto& link : mm.metamodel_links) {
    for (const auto& q : link.view.derived_queries()) meta_needed[link.to].insert(q);
  }
  for (const auto& c : mm.corrs) {
    for (const auto& leg : c.legs) {
      const auto& model = mm.models.at(leg.model);
      for (const auto& [_, p] : leg.paths) {
        auto q = query_of(model, p);
        model_needed[leg.model].insert(q);
        meta_needed[model.metamodel().name()].insert(q);
      }
    }
  }

  Multimodel out;
  std::map<std::string, QueryExtension> meta_ext;
  for (const auto& [name, m] : mm.metamodels) {
    auto it = meta_needed.find(name);
    if (it == meta_needed.end()) {
      out.metamodels.emplace(name, m);
      continue;
    }
    auto ext = execute_query(TypedInstance::empty(m), it->second);
    out.metamodels.emplace(name, ext.metamodel);
    meta_ext.emplace(name, std::move(ext));
  }

  std::map<std::string, QueryExtension> model_ext;
  for (const auto& [name, inst] : mm.models) {
    auto base = rebase(inst, out.metamodels.at(inst.metamodel().name()));
    auto it = model_needed.find(name);
    if (it == model_needed.end()) {
      out.models.emplace(name, std::move(base));
      continue;
    }
    auto ext = execute_query(base, it->second);
    out.models.emplace(name, ext.instance);
    model_ext.emplace(name, std::move(ext));
  }

  for (const auto& link : mm.metamodel_links) {
    const auto& target = out.metamodels.at(link.to);
    std::map<Id, PathQuery> edges;
    for (const auto& [f, q] : link.view.edge_map()) {
      if (q.length() == 1) {
        edges.emplace(f, q);
      } else {
        const auto& id = meta_ext.at(link.to).realized_by.at(q);
        edges.emplace(f, edge_path(target->graph(), id));
      }
    }
    out.metamodel_links.push_back({link.from, link.to,
                                   ViewDefinition(out.metamodels.at(link.from), target,
                                                  link.view.node_map(), std::move(edges))});
  }

  for (const auto& c : mm.corrs) {
    Corr flat{c.head, {}, c.confirmed};
    for (const auto& leg : c.legs) {
      CorrLeg l{leg.model, leg.nodes, leg.edges, {}};
      for (const auto& [h, p] : leg.paths) l.edges.emplace(h, model_ext.at(leg.model).edge_for.at(p));
      flat.legs.push_back(std::move(l));
    }
    out.corrs.push_back(std::move(flat));
  }
  return out;
}

MetamodelMerge merge_metamodels(const std::map<std::string, MetamodelPtr>& metamodels,
                                const std::vector<MetamodelLink>& links) {
  Diagram d;
  for (const auto& [name, m] : metamodels) d.objects.emplace(name, m->graph());
  for (const auto& link : links) {
    if (!link.view.is_plain()) {
      throw MergeError("metamodel link " + link.from + " -> " + link.to +
                       " maps edges to paths; materialize it first");
    }
    auto gaps = view_compatibility_gaps(link.view);
    if (!gaps.empty()) {
      throw MergeError("metamodel link " + link.from + " -> " + link.to + " does not preserve " +
                       gaps.front());
    }
    std::map<Id, Id> edges;
    for (const auto& [f, q] : link.view.edge_map()) edges.emplace(f, q.edges.front());
    d.arrows.push_back({link.from, link.to,
                        GraphMorphism(link.view.source().graph_ptr(),
                                      link.view.target().graph_ptr(), link.view.node_map(),
                                      std::move(edges))});
  }
  auto c = colimit(d);

  std::vector<ConstraintDeclaration> decls;
  for (const auto& [name, m] : metamodels) {
    const auto& inj = c.cocone.at(name);
    for (const auto& decl : m->constraints()) {
      ConstraintDeclaration image{decl.predicate, decl.args, compose(decl.binding, inj)};
      if (std::find(decls.begin(), decls.end(), image) == decls.end()) {
        decls.push_back(std::move(image));
      }
    }
  }
  std::string name;
  for (const auto& [n, _] : metamodels) name += (name.empty() ? "" : "+") + n;
  auto merged = make_metamodel(name, c.apex, std::move(decls));
  std::map<std::string, GraphMorphism> injections;
  for (const auto& [n, inj] : c.cocone) injections.emplace(n, inj.with_cod(merged->graph_ptr()));
  return MetamodelMerge{std::move(merged), std::move(injections)};
}

MergeResult merge_models(const Multimodel& mm) {
  mm.validate();
  for (std::size_t i = 0; i < mm.corrs.size(); ++i) {
    if (!mm.corrs[i].confirmed) {
      throw MergeError("corr " + std::to_string(i) + " is an unconfirmed draft");
    }
    if (!mm.corrs[i].materialized()) {
      throw MergeError("corr " + std::to_string(i) + " has complex links; materialize it first");
    }
  }
  auto meta = merge_metamodels(mm.metamodels, mm.metamodel_links);

  // Types in the merged metamodel, per model.
  std::map<std::string, GraphMorphism> typing;
  for (const auto& [name, inst] : mm.models) {
    typing.emplace(name, compose(inst.typing(), meta.injections.at(inst.metamodel().name())));
  }

  Diagram d;
  for (const auto& [name, inst] : mm.models) d.objects.emplace(name, inst.graph());
  for (std::size_t i = 0; i < mm.corrs.size(); ++i) {
    const auto& c = mm.corrs[i];
    auto head = corr_name(i);
    d.objects.emplace(head, c.head);
    auto conflict = [&](const Id& h, const std::string& kind, const Id& t1, const Id& t2) {
      throw TypingConflict("corr " + std::to_string(i) + " links " + kind + " '" + h +
                           "' to elements of types '" + t1 + "' and '" + t2 + "'");
    };
    std::map<Id, Id> node_type, edge_type;
    for (const auto& leg : c.legs) {
      const auto& t = typing.at(leg.model);
      for (const auto& [h, n] : leg.nodes) {
        auto [it, fresh] = node_type.emplace(h, t.node(n));
        if (!fresh && it->second != t.node(n)) conflict(h, "node", it->second, t.node(n));
      }
      for (const auto& [h, e] : leg.edges) {
        auto [it, fresh] = edge_type.emplace(h, t.edge(e));
        if (!fresh && it->second != t.edge(e)) conflict(h, "edge", it->second, t.edge(e));
      }
      d.arrows.push_back({head, leg.model,
                          GraphMorphism(c.head, mm.models.at(leg.model).graph(), leg.nodes,
                                        leg.edges)});
    }
  }
  auto c = colimit(d);

  std::map<Id, Id> node_types, edge_types;
  for (const auto& [name, inst] : mm.models) {
    const auto& inj = c.cocone.at(name);
    const auto& t = typing.at(name);
    for (const auto& [x, y] : inj.node_map()) node_types.emplace(y, t.node(x));
    for (const auto& [x, y] : inj.edge_map()) edge_types.emplace(y, t.edge(x));
  }
  auto apex = std::make_shared<const Graph>(c.apex);
  TypedInstance merged(meta.metamodel, GraphMorphism(apex, meta.metamodel->graph_ptr(),
                                                     std::move(node_types),
                                                     std::move(edge_types)));
  std::map<std::string, GraphMorphism> cocone;
  for (const auto& [name, _] : mm.models) cocone.emplace(name, c.cocone.at(name).with_cod(apex));
  auto report = check_instance(merged);
  return MergeResult{std::move(meta), std::move(merged), std::move(cocone), std::move(report)};
}

}  // namespace sketchwork
