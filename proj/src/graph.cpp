#include "sketchwork/graph.hpp"

#include <algorithm>

namespace sketchwork {

void Graph::add_node(const Id& id) {
  if (!nodes_.insert(id).second) throw GraphError("duplicate node id '" + id + "'");
}

void Graph::add_edge(const Id& id, const Id& src, const Id& tgt) {
  if (!nodes_.contains(src)) throw GraphError("edge '" + id + "' has unknown source '" + src + "'");
  if (!nodes_.contains(tgt)) throw GraphError("edge '" + id + "' has unknown target '" + tgt + "'");
  if (!edges_.emplace(id, EdgeEnds{src, tgt}).second) {
    throw GraphError("duplicate edge id '" + id + "'");
  }
}

const EdgeEnds& Graph::ends(const Id& edge) const {
  auto it = edges_.find(edge);
  if (it == edges_.end()) throw GraphError("unknown edge '" + edge + "'");
  return it->second;
}

std::vector<Id> Graph::incident_edges(const Id& node) const {
  std::vector<Id> out;
  for (const auto& [id, e] : edges_) {
    if (e.src == node || e.tgt == node) out.push_back(id);
  }
  return out;
}

Graph Graph::without(const std::set<Id>& nodes, const std::set<Id>& edges) const {
  Graph g;
  for (const auto& n : nodes_) {
    if (!nodes.contains(n)) g.nodes_.insert(n);
  }
  for (const auto& [id, e] : edges_) {
    if (edges.contains(id) || nodes.contains(e.src) || nodes.contains(e.tgt)) continue;
    g.edges_.emplace(id, e);
  }
  return g;
}

Adjacency::Adjacency(const Graph& g) {
  for (const auto& [id, e] : g.edges()) {
    out_[e.src].push_back(id);
    in_[e.tgt].push_back(id);
  }
}

const std::vector<Id>& Adjacency::out(const Id& node) const {
  auto it = out_.find(node);
  return it == out_.end() ? none_ : it->second;
}

const std::vector<Id>& Adjacency::in(const Id& node) const {
  auto it = in_.find(node);
  return it == in_.end() ? none_ : it->second;
}

GraphMorphism::GraphMorphism(Graph dom, Graph cod, std::map<Id, Id> node_map,
                             std::map<Id, Id> edge_map)
    : GraphMorphism(std::make_shared<const Graph>(std::move(dom)),
                    std::make_shared<const Graph>(std::move(cod)), std::move(node_map),
                    std::move(edge_map)) {}

GraphMorphism::GraphMorphism(std::shared_ptr<const Graph> dom, std::shared_ptr<const Graph> cod,
                             std::map<Id, Id> node_map, std::map<Id, Id> edge_map)
    : dom_(std::move(dom)),
      cod_(std::move(cod)),
      node_map_(std::move(node_map)),
      edge_map_(std::move(edge_map)) {
  validate();
}

void GraphMorphism::validate() const {
  if (node_map_.size() != dom_->node_count()) {
    for (const auto& n : dom_->nodes()) {
      if (!node_map_.contains(n)) throw MorphismError("node map undefined on '" + n + "'");
    }
    throw MorphismError("node map defined outside the domain");
  }
  if (edge_map_.size() != dom_->edge_count()) {
    for (const auto& [e, _] : dom_->edges()) {
      if (!edge_map_.contains(e)) throw MorphismError("edge map undefined on '" + e + "'");
    }
    throw MorphismError("edge map defined outside the domain");
  }
  for (const auto& [n, image] : node_map_) {
    if (!dom_->has_node(n)) throw MorphismError("node map defined outside the domain: '" + n + "'");
    if (!cod_->has_node(image)) {
      throw MorphismError("node '" + n + "' mapped to missing node '" + image + "'");
    }
  }
  for (const auto& [e, image] : edge_map_) {
    if (!dom_->has_edge(e)) throw MorphismError("edge map defined outside the domain: '" + e + "'");
    if (!cod_->has_edge(image)) {
      throw MorphismError("edge '" + e + "' mapped to missing edge '" + image + "'");
    }
    const auto& de = dom_->ends(e);
    const auto& ce = cod_->ends(image);
    if (node_map_.at(de.src) != ce.src || node_map_.at(de.tgt) != ce.tgt) {
      throw MorphismError("edge '" + e + "' -> '" + image + "' does not preserve endpoints");
    }
  }
}

GraphMorphism GraphMorphism::identity(const Graph& g) {
  return identity(std::make_shared<const Graph>(g));
}

GraphMorphism GraphMorphism::identity(std::shared_ptr<const Graph> g) {
  std::map<Id, Id> nodes;
  std::map<Id, Id> edges;
  for (const auto& n : g->nodes()) nodes.emplace_hint(nodes.end(), n, n);
  for (const auto& [e, _] : g->edges()) edges.emplace_hint(edges.end(), e, e);
  return GraphMorphism(g, g, std::move(nodes), std::move(edges));
}

GraphMorphism GraphMorphism::initial(const Graph& cod) {
  return GraphMorphism(Graph{}, cod, {}, {});
}

const Id& GraphMorphism::node(const Id& n) const {
  auto it = node_map_.find(n);
  if (it == node_map_.end()) throw MorphismError("node '" + n + "' not in domain");
  return it->second;
}

const Id& GraphMorphism::edge(const Id& e) const {
  auto it = edge_map_.find(e);
  if (it == edge_map_.end()) throw MorphismError("edge '" + e + "' not in domain");
  return it->second;
}

GraphMorphism GraphMorphism::with_cod(std::shared_ptr<const Graph> cod) const {
  return GraphMorphism(dom_, std::move(cod), node_map_, edge_map_);
}

bool GraphMorphism::operator==(const GraphMorphism& other) const {
  return node_map_ == other.node_map_ && edge_map_ == other.edge_map_ &&
         (dom_ == other.dom_ || *dom_ == *other.dom_) &&
         (cod_ == other.cod_ || *cod_ == *other.cod_);
}

GraphMorphism compose(const GraphMorphism& f, const GraphMorphism& g) {
  if (f.cod_ptr() != g.dom_ptr() && f.cod() != g.dom()) {
    throw MorphismError("cannot compose: codomain of first differs from domain of second");
  }
  std::map<Id, Id> nodes;
  std::map<Id, Id> edges;
  for (const auto& [n, m] : f.node_map()) nodes.emplace_hint(nodes.end(), n, g.node(m));
  for (const auto& [e, m] : f.edge_map()) edges.emplace_hint(edges.end(), e, g.edge(m));
  return GraphMorphism(f.dom_ptr(), g.cod_ptr(), std::move(nodes), std::move(edges));
}

namespace {

bool injective_map(const std::map<Id, Id>& m) {
  std::set<Id> seen;
  for (const auto& [_, v] : m) {
    if (!seen.insert(v).second) return false;
  }
  return true;
}

}  // namespace

bool is_injective(const GraphMorphism& f) {
  return injective_map(f.node_map()) && injective_map(f.edge_map());
}

bool is_isomorphism(const GraphMorphism& f) {
  return is_injective(f) && f.dom().node_count() == f.cod().node_count() &&
         f.dom().edge_count() == f.cod().edge_count();
}

GraphMorphism inverse(const GraphMorphism& f) {
  if (!is_isomorphism(f)) throw MorphismError("inverse of a non-isomorphism");
  std::map<Id, Id> nodes;
  std::map<Id, Id> edges;
  for (const auto& [a, b] : f.node_map()) nodes.emplace(b, a);
  for (const auto& [a, b] : f.edge_map()) edges.emplace(b, a);
  return GraphMorphism(f.cod_ptr(), f.dom_ptr(), std::move(nodes), std::move(edges));
}

}  // namespace sketchwork
