#pragma once

#include <compare>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "sketchwork/errors.hpp"
#include "sketchwork/ids.hpp"

namespace sketchwork {

struct EdgeEnds {
  Id src;
  Id tgt;

  auto operator<=>(const EdgeEnds&) const = default;
};

/// A finite directed multigraph. Node and edge identifiers live in
/// separate namespaces; every edge's endpoints are nodes of the graph.
class Graph {
 public:
  Graph() = default;

  /// Throws GraphError on a duplicate id.
  void add_node(const Id& id);
  /// Throws GraphError on a duplicate id or unknown endpoint.
  void add_edge(const Id& id, const Id& src, const Id& tgt);

  bool has_node(const Id& id) const { return nodes_.contains(id); }
  bool has_edge(const Id& id) const { return edges_.contains(id); }
  const EdgeEnds& ends(const Id& edge) const;
  const Id& src(const Id& edge) const { return ends(edge).src; }
  const Id& tgt(const Id& edge) const { return ends(edge).tgt; }

  const std::set<Id>& nodes() const { return nodes_; }
  const std::map<Id, EdgeEnds>& edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return nodes_.empty(); }

  /// Edges incident to `node`, in id order.
  std::vector<Id> incident_edges(const Id& node) const;

  /// Copy without the given nodes and edges; edges touching a removed
  /// node are removed as well.
  Graph without(const std::set<Id>& nodes, const std::set<Id>& edges) const;

  bool operator==(const Graph&) const = default;

 private:
  std::set<Id> nodes_;
  std::map<Id, EdgeEnds> edges_;
};

/// Out/in edge lists of a graph, built once for repeated traversal.
class Adjacency {
 public:
  explicit Adjacency(const Graph& g);
  const std::vector<Id>& out(const Id& node) const;
  const std::vector<Id>& in(const Id& node) const;

 private:
  std::map<Id, std::vector<Id>> out_;
  std::map<Id, std::vector<Id>> in_;
  std::vector<Id> none_;
};

/// Structure-preserving map between graphs. Construction validates
/// totality and source/target preservation; a constructed morphism is
/// always valid.
class GraphMorphism {
 public:
  GraphMorphism(Graph dom, Graph cod, std::map<Id, Id> node_map, std::map<Id, Id> edge_map);
  GraphMorphism(std::shared_ptr<const Graph> dom, std::shared_ptr<const Graph> cod,
                std::map<Id, Id> node_map, std::map<Id, Id> edge_map);

  static GraphMorphism identity(const Graph& g);
  static GraphMorphism identity(std::shared_ptr<const Graph> g);
  /// The unique morphism out of the empty graph.
  static GraphMorphism initial(const Graph& cod);

  const Graph& dom() const { return *dom_; }
  const Graph& cod() const { return *cod_; }
  const std::shared_ptr<const Graph>& dom_ptr() const { return dom_; }
  const std::shared_ptr<const Graph>& cod_ptr() const { return cod_; }

  const Id& node(const Id& n) const;
  const Id& edge(const Id& e) const;
  const std::map<Id, Id>& node_map() const { return node_map_; }
  const std::map<Id, Id>& edge_map() const { return edge_map_; }

  /// Same maps, different (compatible) codomain, e.g. a supergraph.
  GraphMorphism with_cod(std::shared_ptr<const Graph> cod) const;

  bool operator==(const GraphMorphism& other) const;

 private:
  void validate() const;

  std::shared_ptr<const Graph> dom_;
  std::shared_ptr<const Graph> cod_;
  std::map<Id, Id> node_map_;
  std::map<Id, Id> edge_map_;
};

/// f then g. Throws MorphismError unless f.cod() == g.dom().
GraphMorphism compose(const GraphMorphism& f, const GraphMorphism& g);

bool is_injective(const GraphMorphism& f);

/// Injective and surjective on nodes and edges.
bool is_isomorphism(const GraphMorphism& f);

/// The inverse of an isomorphism; throws MorphismError otherwise.
GraphMorphism inverse(const GraphMorphism& f);

}  // namespace sketchwork
