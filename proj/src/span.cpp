#include "sketchwork/span.hpp"

#include "sketchwork/limits.hpp"

namespace sketchwork {

Span make_span(GraphMorphism left, GraphMorphism right) {
  if (left.dom_ptr() != right.dom_ptr() && left.dom() != right.dom()) {
    throw MorphismError("span legs have different domains");
  }
  return Span{std::move(left), std::move(right)};
}

Span identity_span(const Graph& g) {
  auto id = GraphMorphism::identity(g);
  return Span{id, id};
}

namespace {

std::map<Id, Id> canonical_names(const std::map<Id, Id>& left, const std::map<Id, Id>& right) {
  std::map<Id, std::vector<Id>> by_key;
  for (const auto& [h, l] : left) by_key[encode_pair(l, right.at(h))].push_back(h);
  std::map<Id, Id> rename;
  for (auto& [key, members] : by_key) {
    if (members.size() == 1) {
      rename.emplace(members.front(), key);
      continue;
    }
    for (std::size_t k = 0; k < members.size(); ++k) {
      rename.emplace(members[k], key + "#" + std::to_string(k));
    }
  }
  return rename;
}

}  // namespace

Span normalize(const Span& s) {
  auto node_rename = canonical_names(s.left.node_map(), s.right.node_map());
  auto edge_rename = canonical_names(s.left.edge_map(), s.right.edge_map());
  Graph head;
  for (const auto& [_, n] : node_rename) head.add_node(n);
  for (const auto& [e, ends] : s.head().edges()) {
    head.add_edge(edge_rename.at(e), node_rename.at(ends.src), node_rename.at(ends.tgt));
  }
  auto head_ptr = std::make_shared<const Graph>(std::move(head));
  auto leg = [&](const GraphMorphism& m) {
    std::map<Id, Id> nodes, edges;
    for (const auto& [h, x] : m.node_map()) nodes.emplace(node_rename.at(h), x);
    for (const auto& [h, x] : m.edge_map()) edges.emplace(edge_rename.at(h), x);
    return GraphMorphism(head_ptr, m.cod_ptr(), std::move(nodes), std::move(edges));
  };
  return Span{leg(s.left), leg(s.right)};
}

Span compose_spans(const Span& s1, const Span& s2) {
  if (s1.right.cod_ptr() != s2.left.cod_ptr() && s1.right.cod() != s2.left.cod()) {
    throw MorphismError("compose_spans: middle objects differ");
  }
  auto pb = pullback(s1.right, s2.left);
  return normalize(Span{compose(pb.left, s1.left), compose(pb.right, s2.right)});
}

}  // namespace sketchwork
