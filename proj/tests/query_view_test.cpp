#include <gtest/gtest.h>

#include "sketchwork/view.hpp"
#include "support.hpp"

using namespace sketchwork;
using namespace sketchwork::testing;

namespace {

// N: x -e1-> y -e2-> z
MetamodelPtr chain_meta(std::vector<ConstraintDeclaration> (*decls)(const Graph&) = nullptr) {
  Graph g;
  for (const auto* n : {"x", "y", "z"}) g.add_node(n);
  g.add_edge("e1", "x", "y");
  g.add_edge("e2", "y", "z");
  return make_metamodel("N", g, decls ? decls(g) : std::vector<ConstraintDeclaration>{});
}

TypedInstance chain_instance(const MetamodelPtr& n, bool branch = false) {
  Graph g;
  for (const auto* id : {"a", "b", "c"}) g.add_node(id);
  g.add_edge("ab", "a", "b");
  g.add_edge("bc", "b", "c");
  std::map<Id, Id> nt{{"a", "x"}, {"b", "y"}, {"c", "z"}};
  std::map<Id, Id> et{{"ab", "e1"}, {"bc", "e2"}};
  if (branch) {
    g.add_node("c2");
    g.add_edge("bc2", "b", "c2");
    nt["c2"] = "z";
    et["bc2"] = "e2";
  }
  return TypedInstance(n, g, nt, et);
}

// M: u -f-> w
MetamodelPtr uw_meta(std::vector<ConstraintDeclaration> (*decls)(const Graph&) = nullptr) {
  Graph g;
  g.add_node("u");
  g.add_node("w");
  g.add_edge("f", "u", "w");
  return make_metamodel("M", g, decls ? decls(g) : std::vector<ConstraintDeclaration>{});
}

ViewDefinition path_view(const MetamodelPtr& m, const MetamodelPtr& n) {
  return ViewDefinition(m, n, {{"u", "x"}, {"w", "z"}},
                        {{"f", make_path(n->graph(), {"e1", "e2"})}});
}

}  // namespace

TEST(PathQuery, Validation) {
  auto n = chain_meta();
  EXPECT_NO_THROW(validate_path(n->graph(), make_path(n->graph(), {"e1", "e2"})));
  EXPECT_THROW(make_path(n->graph(), {"e2", "e1"}), ViewError);
  EXPECT_THROW(validate_path(n->graph(), Path{{}, "x", "y"}), ViewError);
  EXPECT_THROW(validate_path(n->graph(), Path{{"e1"}, "x", "z"}), ViewError);
  EXPECT_THROW(validate_path(n->graph(), Path{{"nope"}, "x", "y"}), ViewError);
  EXPECT_NE(Path({{}, "x", "x"}).key(), make_path(n->graph(), {"e1"}).key());
}

TEST(ExecuteQuery, NoQueriesLeavesInstanceAlone) {
  auto n = chain_meta();
  auto a = chain_instance(n);
  auto ext = execute_query(a, {});
  EXPECT_EQ(ext.instance, a);
  EXPECT_TRUE(ext.provenance.empty());
}

TEST(ExecuteQuery, LengthTwoPaths) {
  auto n = chain_meta();
  auto q = make_path(n->graph(), {"e1", "e2"});
  auto ext = execute_query(chain_instance(n), {q});
  ASSERT_EQ(ext.provenance.size(), 1u);
  const auto& [id, p] = *ext.provenance.begin();
  EXPECT_EQ(p.edges, (std::vector<Id>{"ab", "bc"}));
  EXPECT_EQ(ext.instance.graph().ends(id), (EdgeEnds{"a", "c"}));
  EXPECT_EQ(ext.instance.edge_type(id), q.key());

  auto branched = execute_query(chain_instance(n, true), {q});
  std::set<Id> targets;
  for (const auto& [e, _] : branched.provenance) targets.insert(branched.instance.graph().tgt(e));
  EXPECT_EQ(targets, (std::set<Id>{"c", "c2"}));
}

TEST(ExecuteQuery, EmptyPathGivesLoops) {
  auto n = chain_meta();
  auto ext = execute_query(chain_instance(n, true), {empty_path("z")});
  EXPECT_EQ(ext.provenance.size(), 2u);
  for (const auto& [e, p] : ext.provenance) {
    EXPECT_EQ(ext.instance.graph().src(e), ext.instance.graph().tgt(e));
    EXPECT_TRUE(p.edges.empty());
  }
}

TEST(ExecuteQuery, NonDestructiveOnRandomInputs) {
  Rng rng(31);
  for (int i = 0; i < 200; ++i) {
    auto n = make_metamodel("N", random_graph(rng, 1 + pick(rng, 4), pick(rng, 5), "t"));
    auto a = random_instance(rng, n, pick(rng, 8), pick(rng, 12));
    auto v = random_view(rng, n, 1 + pick(rng, 3), pick(rng, 4), 3);
    auto ext = execute_query(a, v.queries());
    std::set<Id> derived;
    for (const auto& [e, _] : ext.provenance) derived.insert(e);
    EXPECT_EQ(ext.instance.graph().without({}, derived), a.graph());
    for (const auto& [x, t] : a.typing().node_map()) EXPECT_EQ(ext.instance.node_type(x), t);
    for (const auto& [e, t] : a.typing().edge_map()) EXPECT_EQ(ext.instance.edge_type(e), t);
    // Counting oracle: one derived edge per typed path of each query.
    std::size_t expected = 0;
    for (const auto& q : v.derived_queries()) expected += match_paths(a, q).size();
    EXPECT_EQ(derived.size(), expected);
  }
}

TEST(ExecuteView, IdentityView) {
  auto n = chain_meta();
  auto a = chain_instance(n, true);
  auto r = execute_view(ViewDefinition::identity(n), a);
  EXPECT_TRUE(isomorphic(r.instance, a));
  for (const auto& [x, y] : r.node_trace) EXPECT_EQ(x, y);
  for (const auto& [e, p] : r.edge_trace) EXPECT_EQ(p.edges, std::vector<Id>{e});
}

TEST(ExecuteView, PathView) {
  auto n = chain_meta();
  auto m = uw_meta();
  auto r = execute_view(path_view(m, n), chain_instance(n));
  EXPECT_EQ(r.instance.graph().nodes(), (std::set<Id>{"a", "c"}));
  EXPECT_EQ(r.instance.node_type("a"), "u");
  EXPECT_EQ(r.instance.node_type("c"), "w");
  ASSERT_EQ(r.instance.graph().edge_count(), 1u);
  const auto& [e, ends] = *r.instance.graph().edges().begin();
  EXPECT_EQ(ends, (EdgeEnds{"a", "c"}));
  EXPECT_EQ(r.instance.edge_type(e), "f");
  EXPECT_EQ(r.edge_trace.at(e).edges, (std::vector<Id>{"ab", "bc"}));
}

TEST(ExecuteView, NodeOnlyViewCountsFiber) {
  auto n = chain_meta();
  Graph one;
  one.add_node("u");
  auto m = make_metamodel("U", one);
  Graph g;
  for (const auto* id : {"p", "q", "r"}) g.add_node(id);
  g.add_node("s");
  TypedInstance a(n, g, {{"p", "x"}, {"q", "x"}, {"r", "x"}, {"s", "y"}}, {});
  auto r = execute_view(ViewDefinition(m, n, {{"u", "x"}}, {}), a);
  EXPECT_EQ(r.instance.graph().node_count(), 3u);
  EXPECT_EQ(r.instance.graph().edge_count(), 0u);
}

TEST(ExecuteView, EmptyInstanceGivesEmptyResult) {
  Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    auto n = make_metamodel("N", random_graph(rng, 1 + pick(rng, 4), pick(rng, 5), "t"));
    auto v = random_view(rng, n, 1 + pick(rng, 3), pick(rng, 4), 3);
    auto r = execute_view(v, TypedInstance::empty(n));
    EXPECT_TRUE(r.instance.graph().empty());
  }
}

TEST(ExecuteView, TracesArePathsTypedByTheQuery) {
  Rng rng(41);
  for (int i = 0; i < 200; ++i) {
    auto n = make_metamodel("N", random_graph(rng, 1 + pick(rng, 4), pick(rng, 5), "t"));
    auto a = random_instance(rng, n, pick(rng, 8), pick(rng, 12));
    auto v = random_view(rng, n, 1 + pick(rng, 3), pick(rng, 4), 3);
    auto r = execute_view(v, a);
    for (const auto& [e, p] : r.edge_trace) {
      const auto& q = v.edge(r.instance.edge_type(e));
      ASSERT_EQ(p.edges.size(), q.edges.size());
      validate_path(a.graph(), p);
      for (std::size_t k = 0; k < p.edges.size(); ++k) EXPECT_EQ(a.edge_type(p.edges[k]), q.edges[k]);
      EXPECT_EQ(r.node_trace.at(r.instance.graph().src(e)), p.from);
      EXPECT_EQ(r.node_trace.at(r.instance.graph().tgt(e)), p.to);
    }
  }
}

TEST(ViewDefinition, RejectsIllFormedMaps) {
  auto n = chain_meta();
  auto m = uw_meta();
  EXPECT_THROW(ViewDefinition(m, n, {{"u", "x"}}, {{"f", make_path(n->graph(), {"e1", "e2"})}}),
               ViewError);
  EXPECT_THROW(ViewDefinition(m, n, {{"u", "x"}, {"w", "y"}},
                              {{"f", make_path(n->graph(), {"e1", "e2"})}}),
               ViewError);
  EXPECT_THROW(ViewDefinition(m, n, {{"u", "x"}, {"w", "q"}}, {{"f", make_path(n->graph(), {"e1"})}}),
               ViewError);
}

TEST(ViewCompatibility, MultiplicitiesMultiplyAlongPaths) {
  auto n = chain_meta([](const Graph& g) {
    return std::vector<ConstraintDeclaration>{predicates::mult(g, "e1", 1, 1),
                                              predicates::mult(g, "e2", 1, 2)};
  });
  auto fits = uw_meta([](const Graph& g) {
    return std::vector<ConstraintDeclaration>{predicates::mult(g, "f", 1, 2)};
  });
  auto too_tight = uw_meta([](const Graph& g) {
    return std::vector<ConstraintDeclaration>{predicates::mult(g, "f", 1, 1)};
  });
  EXPECT_TRUE(view_compatibility_gaps(path_view(fits, n)).empty());
  EXPECT_EQ(view_compatibility_gaps(path_view(too_tight, n)).size(), 1u);
  EXPECT_THROW(execute_view(path_view(too_tight, n), chain_instance(n)), ViewError);
  // A path through an unconstrained edge is unbounded above.
  auto loose = chain_meta([](const Graph& g) {
    return std::vector<ConstraintDeclaration>{predicates::mult(g, "e1", 1, 1)};
  });
  EXPECT_FALSE(view_compatibility_gaps(path_view(fits, loose)).empty());
}

TEST(ViewCompatibility, InjNeedsEveryEdge) {
  auto both = chain_meta([](const Graph& g) {
    return std::vector<ConstraintDeclaration>{predicates::inj(g, "e1"), predicates::inj(g, "e2")};
  });
  auto one = chain_meta([](const Graph& g) {
    return std::vector<ConstraintDeclaration>{predicates::inj(g, "e1")};
  });
  auto m = uw_meta([](const Graph& g) {
    return std::vector<ConstraintDeclaration>{predicates::inj(g, "f")};
  });
  EXPECT_TRUE(view_compatibility_gaps(path_view(m, both)).empty());
  EXPECT_FALSE(view_compatibility_gaps(path_view(m, one)).empty());
  auto r = execute_view(path_view(m, both), chain_instance(both), {.verify_result = true});
  EXPECT_EQ(r.instance.graph().edge_count(), 1u);
}

TEST(ComposeViews, UnitLawsAndSubstitution) {
  auto n = chain_meta();
  auto m = uw_meta();
  auto v = path_view(m, n);
  EXPECT_EQ(compose_views(v, ViewDefinition::identity(n)), v);
  EXPECT_EQ(compose_views(ViewDefinition::identity(m), v), v);

  Graph kg;
  kg.add_node("p");
  kg.add_node("q");
  kg.add_edge("g", "p", "q");
  auto k = make_metamodel("K", kg);
  ViewDefinition v1(m, k, {{"u", "p"}, {"w", "q"}}, {{"f", make_path(kg, {"g"})}});
  ViewDefinition v2(k, n, {{"p", "x"}, {"q", "z"}}, {{"g", make_path(n->graph(), {"e1", "e2"})}});
  EXPECT_EQ(compose_views(v1, v2).edge("f").edges, (std::vector<Id>{"e1", "e2"}));
  EXPECT_THROW(compose_views(v2, v2), ViewError);
}

TEST(ComposeViews, AssociativeOnRandomViews) {
  Rng rng(43);
  for (int i = 0; i < 200; ++i) {
    auto k = make_metamodel("K", random_graph(rng, 1 + pick(rng, 4), pick(rng, 6), "k"));
    auto v3 = random_view(rng, k, 1 + pick(rng, 4), pick(rng, 5), 2, "N");
    auto v2 = random_view(rng, v3.source_ptr(), 1 + pick(rng, 4), pick(rng, 5), 2, "P");
    auto v1 = random_view(rng, v2.source_ptr(), 1 + pick(rng, 4), pick(rng, 5), 2, "M");
    EXPECT_EQ(compose_views(compose_views(v1, v2), v3), compose_views(v1, compose_views(v2, v3)));
  }
}

TEST(ComposeViews, ExecutionIsCompositional) {
  Rng rng(47);
  for (int i = 0; i < 200; ++i) {
    auto k = make_metamodel("K", random_graph(rng, 1 + pick(rng, 4), pick(rng, 6), "k"));
    auto v2 = random_view(rng, k, 1 + pick(rng, 4), pick(rng, 5), 2, "N");
    auto v1 = random_view(rng, v2.source_ptr(), 1 + pick(rng, 4), pick(rng, 5), 2, "M");
    auto c = random_instance(rng, k, pick(rng, 10), pick(rng, 15));
    auto direct = execute_view(compose_views(v1, v2), c).instance;
    auto stepwise = execute_view(v1, execute_view(v2, c).instance).instance;
    EXPECT_TRUE(isomorphic(direct, stepwise)) << "case " << i;
  }
}
