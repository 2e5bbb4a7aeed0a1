#pragma once

#include "sketchwork/graph.hpp"

namespace sketchwork {

/// Two morphisms out of a common head.
struct Span {
  GraphMorphism left;
  GraphMorphism right;

  const Graph& head() const { return left.dom(); }
  bool injective_legs() const { return is_injective(left) && is_injective(right); }

  bool operator==(const Span&) const = default;
};

/// Throws MorphismError when the legs do not share a domain.
Span make_span(GraphMorphism left, GraphMorphism right);

Span identity_span(const Graph& g);

/// Canonical representative of the span's isomorphism class: every head
/// element is renamed to encode_pair(left image, right image). Elements
/// that agree on both legs (only possible when the legs are not jointly
/// monic) get a "#k" suffix in order of their original id.
Span normalize(const Span& s);

/// s1 ; s2 through the pullback of s1.right and s2.left, normalized.
Span compose_spans(const Span& s1, const Span& s2);

}  // namespace sketchwork
