#include <gtest/gtest.h>

#include "lens_fixtures.hpp"
#include "sketchwork/lens_laws.hpp"
#include "support.hpp"

namespace sketchwork {
namespace {

using testing::graph_of;

TypedInstance instance(const MetamodelPtr& m, std::vector<std::pair<Id, Id>> nodes,
                       std::vector<std::tuple<Id, Id, Id, Id>> edges) {
  Graph g;
  std::map<Id, Id> nt, et;
  for (const auto& [n, t] : nodes) {
    g.add_node(n);
    nt.emplace(n, t);
  }
  for (const auto& [e, s, t, type] : edges) {
    g.add_edge(e, s, t);
    et.emplace(e, type);
  }
  return TypedInstance(m, std::move(g), std::move(nt), std::move(et));
}

MetamodelPtr left_meta(const ViewSpanLens& lens) { return lens.left_view().target_ptr(); }
MetamodelPtr right_meta(const ViewSpanLens& lens) { return lens.right_view().target_ptr(); }

TEST(UpdateSpan, RejectsBrokenLegs) {
  auto m = make_metamodel("M", graph_of({"X"}, {{"f", "X", "X"}}));
  auto a = instance(m, {{"x", "X"}, {"y", "X"}}, {{"e", "x", "y", "f"}});
  EXPECT_THROW(UpdateSpan(a, a, {{"x", "x"}, {"y", "x"}}, {}), LensError);
  EXPECT_THROW(UpdateSpan(a, a, {{"x", "x"}}, {{"e", "e"}}), LensError);
  EXPECT_THROW(UpdateSpan(a, a, {{"x", "y"}, {"y", "x"}}, {{"e", "e"}}), LensError);
  EXPECT_NO_THROW(UpdateSpan(a, a, {{"x", "x"}}, {}));
}

TEST(UpdateSpan, Classify) {
  auto m = make_metamodel("M", graph_of({"X"}, {{"f", "X", "X"}}));
  auto a = instance(m, {{"x", "X"}}, {});
  auto b = instance(m, {{"x", "X"}, {"y", "X"}}, {{"e", "x", "y", "f"}});
  EXPECT_EQ(UpdateSpan::identity(b).classify(), UpdateKind::identity);
  EXPECT_EQ(UpdateSpan::by_ids(a, b).classify(), UpdateKind::insertion);
  EXPECT_EQ(UpdateSpan::by_ids(b, a).classify(), UpdateKind::deletion);
  auto c = instance(m, {{"z", "X"}}, {});
  EXPECT_EQ(UpdateSpan::by_ids(a, c).classify(), UpdateKind::mixed);
  EXPECT_EQ(UpdateSpan::creation(b).classify(), UpdateKind::insertion);
}

TEST(UpdateSpan, CompositionAgreesWithSpanComposition) {
  testing::Rng rng(11);
  auto lens = testing::identity_lens();
  auto m = left_meta(lens);
  for (int i = 0; i < 200; ++i) {
    IdSource ids("a");
    auto x0 = random_legal_instance(rng, m, 6, 8, ids);
    auto e1 = random_edit(rng, x0, static_cast<EditKind>(i % 3), ids, 10, 14);
    auto x1 = apply_edit(x0, e1);
    auto e2 = random_edit(rng, x1, static_cast<EditKind>((i / 3) % 3), ids, 10, 14);
    auto u1 = edit_update(x0, e1);
    auto u2 = edit_update(x1, e2);
    auto composite = compose_updates(u1, u2);
    EXPECT_EQ(normalize(composite.as_span()), compose_spans(u1.as_span(), u2.as_span()));
    EXPECT_EQ(compose_updates(UpdateSpan::identity(x0), u1), u1);
    EXPECT_EQ(compose_updates(u1, UpdateSpan::identity(x1)), u1);
  }
}

TEST(UpdateSpan, CompositionNeedsMatchingEnds) {
  auto m = make_metamodel("M", graph_of({"X"}, {}));
  auto a = instance(m, {{"x", "X"}}, {});
  auto b = instance(m, {{"y", "X"}}, {});
  EXPECT_THROW(compose_updates(UpdateSpan::identity(a), UpdateSpan::identity(b)), LensError);
}

TEST(Get, KeepsViewElementsWithKeptAnchors) {
  auto lens = testing::path_lens();
  const auto& n = lens.right_view();
  auto b = instance(right_meta(lens), {{"x1", "x"}, {"y1", "y"}, {"z1", "z"}, {"z2", "z"}},
                    {{"p", "x1", "y1", "e1"}, {"q", "y1", "z1", "e2"}});
  Edit e;
  e.delete_nodes = {"z2"};
  auto vu = get(n, edit_update(b, e));
  EXPECT_EQ(vu.update.classify(), UpdateKind::deletion);
  EXPECT_EQ(vu.update.kept_edges().size(), 1u);
  EXPECT_EQ(vu.update.deleted_nodes().size(), 1u);

  Edit cut;
  cut.delete_edges = {"q"};
  cut.delete_nodes = {"y1"};
  auto vc = get(n, edit_update(b, cut));
  EXPECT_EQ(vc.update.deleted_edges().size(), 1u);
  EXPECT_TRUE(vc.update.deleted_nodes().empty());
}

TEST(Put, DeletingAPathRemovesPrivateInteriorNodes) {
  auto lens = testing::path_lens();
  const auto& n = lens.right_view();
  auto b = instance(right_meta(lens), {{"x1", "x"}, {"y1", "y"}, {"z1", "z"}},
                    {{"p", "x1", "y1", "e1"}, {"q", "y1", "z1", "e2"}});
  auto view = execute_view(n, b).instance;
  ASSERT_EQ(view.graph().edge_count(), 1u);
  auto without = UpdateSpan::by_ids(
      view, TypedInstance(view.metamodel_ptr(), view.graph().without({}, {view.graph().edges().begin()->first}),
                          view.typing().node_map(), {}));
  auto u = put(n, b, without);
  EXPECT_EQ(u.deleted_edges(), (std::set<Id>{"p", "q"}));
  EXPECT_EQ(u.deleted_nodes(), (std::set<Id>{"y1"}));
  EXPECT_TRUE(check_instance(u.new_model()).legal());
}

TEST(Put, InsertedPathBecomesANamedChain) {
  auto lens = testing::path_lens();
  auto a = instance(left_meta(lens), {{"s", "u"}, {"t", "w"}}, {{"k", "s", "t", "f"}});
  auto t = lens.translate(a);
  const auto& b = t.model;
  EXPECT_TRUE(b.graph().has_node("s"));
  EXPECT_TRUE(b.graph().has_node("t"));
  EXPECT_TRUE(b.graph().has_node("k/1"));
  EXPECT_EQ(b.node_type("k/1"), "y");
  EXPECT_EQ(b.graph().ends("k"), (EdgeEnds{"s", "k/1"}));
  EXPECT_EQ(b.graph().ends("k/1"), (EdgeEnds{"k/1", "t"}));
  EXPECT_TRUE(check_instance(b).legal());
  EXPECT_EQ(t.corr.nodes.size(), 2u);
  ASSERT_EQ(t.corr.edges.size(), 1u);
  EXPECT_EQ(t.corr.edges.begin()->right.edges, (std::vector<Id>{"k", "k/1"}));
}

TEST(Put, InsertRepairAddsMandatoryPrivateEdges) {
  auto lens = testing::node_exposure_lens();
  auto a = instance(left_meta(lens), {{"x", "X"}, {"y", "Y"}}, {{"p", "x", "y", "p"}});
  auto t = lens.translate(a);
  EXPECT_EQ(t.model.graph().nodes(), (std::set<Id>{"x", "x/q"}));
  EXPECT_EQ(t.model.node_type("x/q"), "W");
  EXPECT_EQ(t.model.graph().ends("x/q"), (EdgeEnds{"x", "x/q"}));
  EXPECT_TRUE(check_instance(t.model).legal());
  EXPECT_EQ(t.corr.nodes, (std::set<NodeLink>{{"u", "x", "x"}}));
}

TEST(Put, RejectsAStaleViewUpdate) {
  auto lens = testing::identity_lens();
  auto m = left_meta(lens);
  auto a = instance(m, {{"x", "X"}, {"y", "Y"}}, {{"f1", "x", "y", "f"}});
  auto stale = instance(m, {{"y", "Y"}}, {});
  EXPECT_THROW(put(lens.right_view(), a, UpdateSpan::identity(stale)), ContinuityError);
}

TEST(Lens, DeleteCascadesAcrossTheCorr) {
  auto lens = testing::node_exposure_lens();
  auto a = instance(left_meta(lens), {{"x", "X"}, {"x2", "X"}}, {});
  auto t = lens.translate(a);
  Edit e;
  e.delete_nodes = {"x"};
  auto p = lens.fppg(t.corr, edit_update(a, e), t.model);
  EXPECT_EQ(p.update.deleted_nodes(), (std::set<Id>{"x"}));
  EXPECT_EQ(p.update.deleted_edges(), (std::set<Id>{"x/q"}));
  // The private W node survives.
  EXPECT_TRUE(p.update.new_model().graph().has_node("x/q"));
  EXPECT_EQ(p.corr.nodes, (std::set<NodeLink>{{"u", "x2", "x2"}}));
}

TEST(Lens, BackwardPropagationThroughAPath) {
  auto lens = testing::path_lens();
  auto b = instance(right_meta(lens), {{"x1", "x"}, {"y1", "y"}, {"z1", "z"}},
                    {{"p", "x1", "y1", "e1"}, {"q", "y1", "z1", "e2"}});
  auto t = lens.translate_back(b);
  EXPECT_TRUE(t.model.graph().has_edge("p"));
  Edit e;
  e.delete_edges = {"p"};
  auto p = lens.bppg(t.corr, edit_update(b, e), t.model);
  EXPECT_EQ(p.update.deleted_edges(), (std::set<Id>{"p"}));
  EXPECT_TRUE(p.corr.edges.empty());
  EXPECT_EQ(p.corr.nodes.size(), 2u);
}

TEST(Lens, ContinuityIsChecked) {
  auto lens = testing::identity_lens();
  auto m = left_meta(lens);
  auto a = instance(m, {{"x", "X"}, {"y", "Y"}}, {{"f1", "x", "y", "f"}});
  auto t = lens.translate(a);
  auto other = instance(m, {{"z", "X"}, {"y", "Y"}}, {{"f2", "z", "y", "f"}});
  EXPECT_THROW(lens.fppg(t.corr, UpdateSpan::identity(other), t.model), ContinuityError);
}

TEST(Lens, RejectsIncompatibleViews) {
  auto g = graph_of({"X"}, {{"f", "X", "X"}});
  auto strict = make_metamodel("S", g, {predicates::mult(g, "f", 1, 1)});
  auto loose = make_metamodel("L", g);
  EXPECT_THROW(ViewSpanLens(ViewDefinition::identity(strict),
                            ViewDefinition::from_morphism(strict, loose, GraphMorphism::identity(g))),
               LensError);
}

TEST(Alignment, IdentityAndComposition) {
  auto lens = testing::path_lens();
  const auto& al = lens.alignment();
  testing::Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    IdSource ids("a");
    auto a = random_legal_instance(rng, left_meta(lens), 6, 8, ids);
    auto t = lens.translate(a);
    ids.reserve(t.model);
    EXPECT_EQ(al.falt(UpdateSpan::identity(a), t.corr, t.model), t.corr);
    EXPECT_EQ(al.balt(t.corr, UpdateSpan::identity(t.model), a), t.corr);
    EXPECT_FALSE(al.inconsistency(t.corr, a, t.model));
    auto e = random_edit(rng, a, EditKind::mixed, ids, 20, 30);
    auto u = edit_update(a, e);
    auto r1 = al.falt(u, t.corr, t.model);
    EXPECT_FALSE(al.inconsistency(r1, u.new_model(), t.model)) << i;
  }
}

class LawSuite : public ::testing::TestWithParam<int> {};

ViewSpanLens fixture(int i) {
  switch (i) {
    case 0: return testing::identity_lens();
    case 1: return testing::node_exposure_lens();
    default: return testing::path_lens();
  }
}

TEST_P(LawSuite, AllLawsHold) {
  HarnessConfig config;
  config.seed = 21;
  config.cases = 100;
  auto report = check_laws(fixture(GetParam()), config);
  ASSERT_EQ(report.laws.size(), law_names().size());
  for (const auto& o : report.laws) {
    EXPECT_TRUE(o.passed()) << o.law << ": " << o.message;
    EXPECT_EQ(o.cases, 100u);
  }
}

TEST_P(LawSuite, MutantsAreCaughtWithSmallCounterexamples) {
  HarnessConfig config;
  config.seed = 3;
  config.cases = 100;
  auto lens = fixture(GetParam());
  for (auto m : {LensMutation::skip_realignment, LensMutation::reuse_stale_corr,
                 LensMutation::delete_as_insert, LensMutation::nondeterministic_ids}) {
    auto report = check_laws(lens.mutated(m), config);
    EXPECT_FALSE(report.passed()) << to_string(m);
    for (const auto& o : report.laws) {
      if (o.passed()) continue;
      ASSERT_TRUE(o.counterexample);
      EXPECT_LE(o.counterexample->size(), 6u) << to_string(m) << " " << o.law;
      EXPECT_TRUE(evaluate_law(lens.mutated(m), *o.counterexample)) << o.law;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Fixtures, LawSuite, ::testing::Values(0, 1, 2));

TEST(Laws, DroppedCascadeIsCaughtWherePrivateEdgesExist) {
  HarnessConfig config;
  config.cases = 200;
  for (auto lens : {testing::node_exposure_lens(), testing::path_lens()}) {
    auto report = check_laws(lens.mutated(LensMutation::drop_cascade_delete), config);
    EXPECT_FALSE(report.passed());
  }
}

TEST(Laws, MixedPutPutFailsWhereMonotonicPutPutHolds) {
  auto lens = testing::node_exposure_lens();
  LawCase c{"putput_mixed", false, TypedInstance::empty(left_meta(lens)), {}};
  Edit insert;
  insert.insert_nodes = {{"x", "X"}};
  Edit remove;
  remove.delete_nodes = {"x"};
  c.edits = {insert, remove};
  ASSERT_TRUE(case_is_legal(lens, c));
  auto failure = evaluate_law(lens, c);
  ASSERT_TRUE(failure);
  EXPECT_NE(failure->find("x/q"), std::string::npos) << *failure;

  c.law = "putput_insert_fwd";
  c.edits = {insert, Edit{{}, {}, {{"x2", "X"}}, {}}};
  EXPECT_FALSE(evaluate_law(lens, c));
  c.law = "putput_delete_fwd";
  c.start = apply_edit(c.start, insert);
  c.edits = {remove, Edit{}};
  EXPECT_FALSE(evaluate_law(lens, c));
}

TEST(Laws, ShrinkingKeepsTheFailure) {
  auto lens = testing::path_lens().mutated(LensMutation::skip_realignment);
  HarnessConfig config;
  config.cases = 50;
  auto report = check_laws(lens, config, {"commutativity_fwd"});
  ASSERT_EQ(report.laws.size(), 1u);
  const auto& o = report.laws.front();
  ASSERT_TRUE(o.counterexample);
  EXPECT_TRUE(case_is_legal(lens, *o.counterexample));
  EXPECT_TRUE(evaluate_law(lens, *o.counterexample));
  // No single removal keeps it failing.
  EXPECT_EQ(shrink_case(lens, *o.counterexample).size(), o.counterexample->size());
}

TEST(Laws, SameSeedSameReport) {
  auto lens = testing::path_lens().mutated(LensMutation::delete_as_insert);
  HarnessConfig config;
  config.cases = 30;
  auto r1 = check_laws(lens, config);
  auto r2 = check_laws(lens, config);
  ASSERT_EQ(r1.laws.size(), r2.laws.size());
  for (std::size_t i = 0; i < r1.laws.size(); ++i) {
    EXPECT_EQ(r1.laws[i].failures, r2.laws[i].failures);
    EXPECT_EQ(r1.laws[i].message, r2.laws[i].message);
  }
}

TEST(Generator, ProducesLegalBoundedUpdates) {
  testing::Rng rng(8);
  std::size_t largest = 0;
  for (auto lens : {testing::identity_lens(), testing::path_lens()}) {
    for (int i = 0; i < 200; ++i) {
      IdSource ids("a");
      auto m = i % 2 ? left_meta(lens) : right_meta(lens);
      auto x = random_legal_instance(rng, m, 12, 18, ids);
      ASSERT_TRUE(check_instance(x).legal());
      auto kind = static_cast<EditKind>(i % 3);
      auto e = random_edit(rng, x, kind, ids, 20, 30);
      auto u = edit_update(x, e);
      ASSERT_TRUE(check_instance(u.new_model()).legal());
      EXPECT_LE(u.new_model().graph().node_count(), 20u);
      EXPECT_LE(u.new_model().graph().edge_count(), 30u);
      if (kind == EditKind::insert) EXPECT_TRUE(u.is_insert());
      if (kind == EditKind::remove) EXPECT_TRUE(u.is_delete());
      largest = std::max(largest, u.new_model().graph().node_count());
    }
  }
  EXPECT_GE(largest, 10u);
}

}  // namespace
}  // namespace sketchwork
