#pragma once

#include <map>
#include <string>
#include <vector>

#include "sketchwork/graph.hpp"

namespace sketchwork {

/// Apex with its two projections.
struct Cone {
  GraphMorphism left;
  GraphMorphism right;
  const Graph& apex() const { return left.dom(); }
};

/// Apex with the two injections into it.
struct Cocone {
  GraphMorphism left;
  GraphMorphism right;
  const Graph& apex() const { return left.cod(); }
};

struct DiagramArrow {
  std::string from;
  std::string to;
  GraphMorphism morphism;
};

/// A finite diagram of graphs. Objects are named; arrows refer to them by
/// name and must have exactly the named graphs as domain and codomain.
struct Diagram {
  std::map<std::string, Graph> objects;
  std::vector<DiagramArrow> arrows;
};

struct Colimit {
  Graph apex;
  std::map<std::string, GraphMorphism> cocone;
};

/// Pullback of f: A -> C and g: B -> C. Apex elements are the pairs
/// (x, y) with f(x) = g(y), named by encode_pair(x, y).
Cone pullback(const GraphMorphism& f, const GraphMorphism& g);

/// Pushout of f: K -> A and g: K -> B.
Cocone pushout(const GraphMorphism& f, const GraphMorphism& g);

/// Coproduct of all objects quotiented by the equivalence generated by the
/// arrows. A class is named by the id of its least (object, id) member; ids
/// that would clash are qualified as encode_pair(object, id).
Colimit colimit(const Diagram& diagram);

}  // namespace sketchwork
