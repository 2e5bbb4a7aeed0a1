#include <gtest/gtest.h>

#include "cli_support.hpp"
#include "sketchwork/io.hpp"
#include "support.hpp"

namespace sketchwork::io {
namespace {

using testing::fixtures;
using testing::scratch;

TEST(Io, GraphRoundTrip) {
  testing::Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    auto g = testing::random_graph(rng, 1 + i % 6, i % 9);
    EXPECT_EQ(graph_from_json(to_json(g)), g);
    EXPECT_EQ(graph_from_json(Json::parse(to_json(g).dump())), g);
  }
}

TEST(Io, WorkspaceElementsRoundTrip) {
  auto ws = Workspace::load(fixtures() / "lens" / "manifest.json");
  for (const auto& [name, m] : ws.metamodels) {
    EXPECT_EQ(*metamodel_from_json(to_json(*m), name), *m) << name;
  }
  for (const auto& [name, x] : ws.models) {
    EXPECT_EQ(instance_from_json(to_json(x), ws.metamodels), x) << name;
  }
  for (const auto& [name, v] : ws.views) {
    EXPECT_EQ(view_from_json(to_json(v), ws.metamodels), v) << name;
  }
  for (const auto& [name, u] : ws.updates) {
    EXPECT_EQ(update_from_json(to_json(u), ws.metamodels), u) << name;
  }
  ASSERT_EQ(ws.lens_corrs.size(), 1u);
  const auto& c = ws.lens_corrs.at("ab");
  auto back = lens_corr_from_json(to_json(c));
  EXPECT_EQ(back.corr, c.corr);
  EXPECT_EQ(back.left, "A");
  EXPECT_EQ(back.right, "B");
  EXPECT_EQ(back.lens, "path");
}

TEST(Io, ConstraintsSurviveRoundTrip) {
  auto ws = Workspace::load(fixtures() / "check" / "manifest.json");
  const auto& m = *ws.metamodels.at("Company");
  ASSERT_EQ(m.constraints().size(), 1u);
  EXPECT_EQ(m.constraints()[0].predicate, "mult");
  EXPECT_EQ(*metamodel_from_json(to_json(m), "Company"), m);
  EXPECT_TRUE(check_instance(ws.models.at("legal")).legal());
  EXPECT_FALSE(check_instance(ws.models.at("broken")).legal());
}

TEST(Io, CorrRoundTrip) {
  auto ws = Workspace::load(fixtures() / "merge" / "manifest.json");
  ASSERT_FALSE(ws.corrs.empty());
  for (const auto& [name, c] : ws.corrs) {
    EXPECT_EQ(corr_from_json(to_json(c), ws.models), c) << name;
  }
}

TEST(Io, MalformedInputIsParseError) {
  EXPECT_THROW(Workspace::load(fixtures() / "check" / "malformed.json"), ParseError);
  EXPECT_THROW(read_json(fixtures() / "does-not-exist.json"), ParseError);
  EXPECT_THROW(graph_from_json(Json::parse(R"({"nodes": "a"})")), ParseError);
  EXPECT_THROW(graph_from_json(Json::parse(R"({"nodes": ["a"], "edges": [{"id": "e"}]})")),
               ParseError);
}

TEST(Io, UnresolvedAndDuplicateNamesAreRejected) {
  auto dir = scratch("io-manifest");
  write_json(dir / "company.json", read_json(fixtures() / "check" / "company.json"));
  write_json(dir / "legal.json", read_json(fixtures() / "check" / "legal.json"));

  write_json(dir / "dup.json", Json::parse(R"({"metamodels": {"Company": "company.json"},
                                               "models": {"Company": "legal.json"}})"));
  EXPECT_THROW(Workspace::load(dir / "dup.json"), ParseError);

  write_json(dir / "missing.json", Json::parse(R"({"models": {"x": "legal.json"}})"));
  EXPECT_THROW(Workspace::load(dir / "missing.json"), ParseError);

  write_json(dir / "ok.json", Json::parse(R"({"metamodels": {"Company": "company.json"},
                                              "models": {"x": "legal.json"}})"));
  EXPECT_NO_THROW(Workspace::load(dir / "ok.json"));
}

TEST(Io, WriteJsonIsStable) {
  auto dir = scratch("io-write");
  auto ws = Workspace::load(fixtures() / "lens" / "manifest.json");
  write_json(dir / "a.json", to_json(ws.models.at("B")));
  write_json(dir / "b.json", to_json(instance_from_json(read_json(dir / "a.json"),
                                                        ws.metamodels)));
  auto a = testing::slurp(dir / "a.json");
  EXPECT_EQ(a, testing::slurp(dir / "b.json"));
  ASSERT_FALSE(a.empty());
  EXPECT_EQ(a.back(), '\n');
}

TEST(Io, DotExport) {
  auto ws = Workspace::load(fixtures() / "lens" / "manifest.json");
  const auto& a = ws.models.at("A");
  auto dot = to_dot("A", a.graph(), &a.typing());
  EXPECT_NE(dot.find("digraph \"A\""), std::string::npos);
  EXPECT_NE(dot.find("\"s\" -> \"t\" [label=\"k : f\"]"), std::string::npos);
}

}  // namespace
}  // namespace sketchwork::io
