#include "sketchwork/limits.hpp"

#include <unordered_map>

#include "sketchwork/union_find.hpp"

namespace sketchwork {

Cone pullback(const GraphMorphism& f, const GraphMorphism& g) {
  if (f.cod_ptr() != g.cod_ptr() && f.cod() != g.cod()) {
    throw MorphismError("pullback: the two morphisms have different codomains");
  }
  std::map<Id, std::vector<Id>> g_node_fiber;
  for (const auto& [y, c] : g.node_map()) g_node_fiber[c].push_back(y);
  std::map<Id, std::vector<Id>> g_edge_fiber;
  for (const auto& [y, c] : g.edge_map()) g_edge_fiber[c].push_back(y);

  Graph apex;
  std::map<Id, Id> left_nodes, right_nodes, left_edges, right_edges;
  for (const auto& [x, c] : f.node_map()) {
    auto it = g_node_fiber.find(c);
    if (it == g_node_fiber.end()) continue;
    for (const auto& y : it->second) {
      auto id = encode_pair(x, y);
      apex.add_node(id);
      left_nodes.emplace(id, x);
      right_nodes.emplace(id, y);
    }
  }
  for (const auto& [x, c] : f.edge_map()) {
    auto it = g_edge_fiber.find(c);
    if (it == g_edge_fiber.end()) continue;
    const auto& xe = f.dom().ends(x);
    for (const auto& y : it->second) {
      const auto& ye = g.dom().ends(y);
      auto id = encode_pair(x, y);
      apex.add_edge(id, encode_pair(xe.src, ye.src), encode_pair(xe.tgt, ye.tgt));
      left_edges.emplace(id, x);
      right_edges.emplace(id, y);
    }
  }
  auto apex_ptr = std::make_shared<const Graph>(std::move(apex));
  return Cone{GraphMorphism(apex_ptr, f.dom_ptr(), std::move(left_nodes), std::move(left_edges)),
              GraphMorphism(apex_ptr, g.dom_ptr(), std::move(right_nodes), std::move(right_edges))};
}

Cocone pushout(const GraphMorphism& f, const GraphMorphism& g) {
  if (f.dom_ptr() != g.dom_ptr() && f.dom() != g.dom()) {
    throw MorphismError("pushout: the two morphisms have different domains");
  }
  Diagram d;
  d.objects.emplace("A", f.cod());
  d.objects.emplace("B", g.cod());
  d.objects.emplace("K", f.dom());
  d.arrows.push_back({"K", "A", f});
  d.arrows.push_back({"K", "B", g});
  auto c = colimit(d);
  return Cocone{c.cocone.at("A"), c.cocone.at("B")};
}

namespace {

struct Member {
  const std::string* object;
  const Id* id;
};

/// Names classes after their least member, qualifying ids that clash.
std::vector<Id> name_classes(const std::vector<Member>& least) {
  std::vector<Id> names(least.size());
  std::vector<bool> qualified(least.size(), false);
  std::map<Id, int> plain_count;
  for (const auto& m : least) ++plain_count[*m.id];
  for (std::size_t i = 0; i < least.size(); ++i) {
    if (plain_count[*least[i].id] > 1) qualified[i] = true;
  }
  // Qualified names never clash among themselves; resolve clashes between a
  // qualified name and a plain one by qualifying the plain one as well.
  for (bool changed = true; changed;) {
    changed = false;
    std::set<Id> qualified_names;
    for (std::size_t i = 0; i < least.size(); ++i) {
      if (qualified[i]) qualified_names.insert(encode_pair(*least[i].object, *least[i].id));
    }
    for (std::size_t i = 0; i < least.size(); ++i) {
      if (!qualified[i] && qualified_names.contains(*least[i].id)) {
        qualified[i] = true;
        changed = true;
      }
    }
  }
  for (std::size_t i = 0; i < least.size(); ++i) {
    names[i] = qualified[i] ? encode_pair(*least[i].object, *least[i].id) : *least[i].id;
  }
  return names;
}

}  // namespace

Colimit colimit(const Diagram& diagram) {
  for (const auto& a : diagram.arrows) {
    auto from = diagram.objects.find(a.from);
    auto to = diagram.objects.find(a.to);
    if (from == diagram.objects.end() || to == diagram.objects.end()) {
      throw MorphismError("colimit: arrow " + a.from + " -> " + a.to +
                          " refers to an object outside the diagram");
    }
    if (a.morphism.dom() != from->second || a.morphism.cod() != to->second) {
      throw MorphismError("colimit: arrow " + a.from + " -> " + a.to +
                          " does not match its endpoint objects");
    }
  }

  // Coproduct: objects in name order, elements in id order, so member
  // index order coincides with (object, id) lexicographic order.
  std::vector<Member> node_members, edge_members;
  std::map<std::string, std::map<Id, std::size_t>> node_index, edge_index;
  for (const auto& [name, g] : diagram.objects) {
    auto& ni = node_index[name];
    for (const auto& n : g.nodes()) {
      ni.emplace(n, node_members.size());
      node_members.push_back({&name, &n});
    }
    auto& ei = edge_index[name];
    for (const auto& [e, _] : g.edges()) {
      ei.emplace(e, edge_members.size());
      edge_members.push_back({&name, &e});
    }
  }

  DisjointSets node_sets(node_members.size());
  DisjointSets edge_sets(edge_members.size());
  for (const auto& a : diagram.arrows) {
    const auto& from_n = node_index.at(a.from);
    const auto& to_n = node_index.at(a.to);
    for (const auto& [x, y] : a.morphism.node_map()) node_sets.unite(from_n.at(x), to_n.at(y));
    const auto& from_e = edge_index.at(a.from);
    const auto& to_e = edge_index.at(a.to);
    for (const auto& [x, y] : a.morphism.edge_map()) edge_sets.unite(from_e.at(x), to_e.at(y));
  }

  // The first member met in index order is the least one of its class.
  auto classes = [](DisjointSets& sets, const std::vector<Member>& members,
                    std::vector<std::size_t>& class_of) {
    std::unordered_map<std::size_t, std::size_t> root_class;
    std::vector<Member> least;
    class_of.resize(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
      auto root = sets.find(i);
      auto [it, fresh] = root_class.emplace(root, least.size());
      if (fresh) least.push_back(members[i]);
      class_of[i] = it->second;
    }
    return name_classes(least);
  };
  std::vector<std::size_t> node_class, edge_class;
  auto node_names = classes(node_sets, node_members, node_class);
  auto edge_names = classes(edge_sets, edge_members, edge_class);

  Graph apex;
  for (const auto& n : node_names) apex.add_node(n);
  std::vector<bool> edge_done(edge_names.size(), false);
  for (std::size_t i = 0; i < edge_members.size(); ++i) {
    auto c = edge_class[i];
    if (edge_done[c]) continue;
    edge_done[c] = true;
    const auto& g = diagram.objects.at(*edge_members[i].object);
    const auto& ends = g.ends(*edge_members[i].id);
    const auto& ni = node_index.at(*edge_members[i].object);
    apex.add_edge(edge_names[c], node_names[node_class[ni.at(ends.src)]],
                  node_names[node_class[ni.at(ends.tgt)]]);
  }

  Colimit result{std::move(apex), {}};
  auto apex_ptr = std::make_shared<const Graph>(result.apex);
  for (const auto& [name, g] : diagram.objects) {
    std::map<Id, Id> nodes, edges;
    for (const auto& [n, idx] : node_index.at(name)) nodes.emplace(n, node_names[node_class[idx]]);
    for (const auto& [e, idx] : edge_index.at(name)) edges.emplace(e, edge_names[edge_class[idx]]);
    result.cocone.emplace(name, GraphMorphism(std::make_shared<const Graph>(g), apex_ptr,
                                              std::move(nodes), std::move(edges)));
  }
  return result;
}

}  // namespace sketchwork
