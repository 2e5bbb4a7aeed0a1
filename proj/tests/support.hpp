#pragma once

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sketchwork/graph.hpp"
#include "sketchwork/iso.hpp"
#include "sketchwork/sketch.hpp"
#include "sketchwork/view.hpp"

namespace sketchwork::testing {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline Graph random_graph(Rng& rng, std::size_t nodes, std::size_t edges,
                          const std::string& prefix = "") {
  Graph g;
  std::vector<Id> ids;
  for (std::size_t i = 0; i < nodes; ++i) {
    ids.push_back(prefix + "n" + std::to_string(i));
    g.add_node(ids.back());
  }
  if (ids.empty()) return g;
  for (std::size_t i = 0; i < edges; ++i) {
    g.add_edge(prefix + "e" + std::to_string(i), ids[pick(rng, ids.size())],
               ids[pick(rng, ids.size())]);
  }
  return g;
}

/// Calls visit for every graph morphism dom -> cod, stopping early when it
/// returns false.
inline void for_each_morphism(const Graph& dom, const Graph& cod,
                              const std::function<bool(const GraphMorphism&)>& visit) {
  std::vector<Id> dn(dom.nodes().begin(), dom.nodes().end());
  std::vector<Id> cn(cod.nodes().begin(), cod.nodes().end());
  std::vector<std::pair<Id, EdgeEnds>> de(dom.edges().begin(), dom.edges().end());
  std::map<Id, Id> nodes, edges;
  bool stop = false;
  std::function<void(std::size_t)> assign_edges = [&](std::size_t i) {
    if (stop) return;
    if (i == de.size()) {
      if (!visit(GraphMorphism(dom, cod, nodes, edges))) stop = true;
      return;
    }
    const auto& [e, ends] = de[i];
    for (const auto& [c, cends] : cod.edges()) {
      if (cends.src != nodes.at(ends.src) || cends.tgt != nodes.at(ends.tgt)) continue;
      edges[e] = c;
      assign_edges(i + 1);
      if (stop) return;
    }
    edges.erase(e);
  };
  std::function<void(std::size_t)> assign_nodes = [&](std::size_t i) {
    if (stop) return;
    if (i == dn.size()) {
      assign_edges(0);
      return;
    }
    for (const auto& c : cn) {
      nodes[dn[i]] = c;
      assign_nodes(i + 1);
      if (stop) return;
    }
    nodes.erase(dn[i]);
  };
  assign_nodes(0);
}

inline std::vector<GraphMorphism> all_morphisms(const Graph& dom, const Graph& cod) {
  std::vector<GraphMorphism> out;
  for_each_morphism(dom, cod, [&](const GraphMorphism& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

/// A uniformly chosen morphism dom -> cod, if any exists.
inline std::optional<GraphMorphism> random_morphism(Rng& rng, const Graph& dom, const Graph& cod) {
  auto all = all_morphisms(dom, cod);
  if (all.empty()) return std::nullopt;
  return all[pick(rng, all.size())];
}

inline bool isomorphic(const Graph& a, const Graph& b) {
  return find_isomorphism(a, b).has_value();
}

/// Random instance over m: `nodes` typed uniformly, then up to `edges`
/// well-typed edges (fewer when no endpoints fit).
inline TypedInstance random_instance(Rng& rng, const MetamodelPtr& m, std::size_t nodes,
                                     std::size_t edges, const std::string& prefix = "i") {
  const auto& mg = m->graph();
  std::vector<Id> types(mg.nodes().begin(), mg.nodes().end());
  std::vector<std::pair<Id, EdgeEnds>> etypes(mg.edges().begin(), mg.edges().end());
  Graph g;
  std::map<Id, Id> nt, et;
  std::map<Id, std::vector<Id>> by_type;
  for (std::size_t i = 0; i < nodes && !types.empty(); ++i) {
    Id id = prefix + std::to_string(i);
    g.add_node(id);
    nt[id] = types[pick(rng, types.size())];
    by_type[nt[id]].push_back(id);
  }
  for (std::size_t i = 0; i < edges && !etypes.empty(); ++i) {
    const auto& [t, ends] = etypes[pick(rng, etypes.size())];
    const auto& srcs = by_type[ends.src];
    const auto& tgts = by_type[ends.tgt];
    if (srcs.empty() || tgts.empty()) continue;
    Id id = prefix + "e" + std::to_string(i);
    g.add_edge(id, srcs[pick(rng, srcs.size())], tgts[pick(rng, tgts.size())]);
    et[id] = t;
  }
  return TypedInstance(m, std::move(g), std::move(nt), std::move(et));
}

inline bool isomorphic(const TypedInstance& a, const TypedInstance& b) {
  return a.metamodel().graph() == b.metamodel().graph() &&
         find_isomorphism(a.graph(), b.graph(), labels_of(a.typing()), labels_of(b.typing()))
             .has_value();
}

/// Random view M -> Q(target) with a freshly generated unconstrained
/// source M: node images are uniform, edge images are random walks of
/// length 0..max_len that end at the image of some M node.
inline ViewDefinition random_view(Rng& rng, const MetamodelPtr& target, std::size_t nodes,
                                  std::size_t edges, std::size_t max_len,
                                  const std::string& name = "M") {
  const auto& tg = target->graph();
  std::vector<Id> tnodes(tg.nodes().begin(), tg.nodes().end());
  Adjacency adj(tg);
  Graph g;
  std::map<Id, Id> node_map;
  std::vector<Id> ids;
  for (std::size_t i = 0; i < nodes; ++i) {
    ids.push_back(name + "n" + std::to_string(i));
    g.add_node(ids.back());
    node_map[ids.back()] = tnodes[pick(rng, tnodes.size())];
  }
  std::map<Id, PathQuery> edge_map;
  for (std::size_t i = 0, tries = 0; i < edges && tries < 20 * edges; ++tries) {
    const auto& u = ids[pick(rng, ids.size())];
    Path p = empty_path(node_map[u]);
    auto len = pick(rng, max_len + 1);
    bool stuck = false;
    for (std::size_t k = 0; k < len; ++k) {
      const auto& out = adj.out(p.to);
      if (out.empty()) {
        stuck = true;
        break;
      }
      p = concat(p, edge_path(tg, out[pick(rng, out.size())]));
    }
    if (stuck) continue;
    std::vector<Id> ends;
    for (const auto& w : ids)
      if (node_map[w] == p.to) ends.push_back(w);
    if (ends.empty()) continue;
    Id id = name + "f" + std::to_string(i++);
    g.add_edge(id, u, ends[pick(rng, ends.size())]);
    edge_map.emplace(id, std::move(p));
  }
  return ViewDefinition(make_metamodel(name, std::move(g)), target, std::move(node_map),
                        std::move(edge_map));
}

}  // namespace sketchwork::testing
