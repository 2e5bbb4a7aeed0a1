// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <json.hpp>

#include "cli_support.hpp"
#include "lens_fixtures.hpp"
#include "oracles.hpp"
#include "sketchwork/io.hpp"
#include "sketchwork/lens_laws.hpp"

namespace {

using namespace sketchwork;
using namespace sketchwork::testing;
using Json = nlohmann::json;

constexpr std::size_t kRandomCases = 200;
constexpr double kUniversalSeconds = 60.0;
constexpr std::size_t kLawCases = 500;
constexpr double kLawSeconds = 300.0;
constexpr std::size_t kMaxCounterexampleNodes = 6;
constexpr std::uint64_t kSeed = 20240601;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Verdict {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail.clear();
    pass = false;
    detail += (detail.empty() ? "" : "; ") + why;
  }
};

/// Draws until `wanted` applicable cases have been checked.
Verdict random_cases(const std::string& what, std::uint64_t seed,
                     const std::function<Outcome(Rng&)>& draw, std::size_t wanted,
                     std::size_t* probes = nullptr) {
  Verdict v;
  Rng rng(seed);
  std::size_t checked = 0, draws = 0;
  while (checked < wanted && draws < 50 * wanted) {
    ++draws;
    Outcome o;
    try {
      o = draw(rng);
    } catch (const std::exception& e) {
      o.applicable = true;
      o.failure = std::string("raised: ") + e.what();
    }
    if (!o.applicable) continue;
    ++checked;
    if (probes) *probes += o.probes;
    if (!o.ok()) {
      v.fail(what + " case " + std::to_string(checked) + ": " + o.failure);
      return v;
    }
  }
  if (checked < wanted) v.fail(what + ": only " + std::to_string(checked) + " usable cases");
  v.detail = what + " " + std::to_string(checked) + " cases";
  return v;
}

Verdict universal_properties() {
  auto start = Clock::now();
  Verdict v;
  std::vector<std::string> parts;
  struct Kind {
    const char* name;
    Outcome (*draw)(Rng&);
  };
  for (auto [name, draw] : {Kind{"pullback", pullback_universal}, Kind{"pushout", pushout_universal},
                            Kind{"colimit", colimit_universal}}) {
    std::size_t probes = 0;
    auto r = random_cases(name, kSeed + parts.size(), draw, kRandomCases, &probes);
    if (!r.pass) {
      v.fail(r.detail);
      continue;
    }
    parts.push_back(r.detail + " / " + std::to_string(probes) + " competing cones");
  }
  double secs = since(start);
  if (secs >= kUniversalSeconds) v.fail("took " + std::to_string(secs) + " s");
  if (v.pass) {
    for (const auto& p : parts) v.detail += (v.detail.empty() ? "" : ", ") + p;
    v.detail += ", " + std::to_string(secs) + " s";
  }
  return v;
}

Verdict fibration() { return random_cases("retype", kSeed + 10, fibration_case, kRandomCases); }

Verdict view_compositionality() {
  return random_cases("view triple", kSeed + 20, view_composition_case, kRandomCases);
}

/// Copies the merge fixtures and marks every corr of every manifest as an
/// unconfirmed draft; each such merge must be refused without output.
Verdict merge_gate() {
  Verdict v;
  auto dir = scratch("acceptance-gate");
  fs::copy(fixtures() / "merge", dir / "fixtures", fs::copy_options::recursive);
  std::size_t gated = 0;
  for (const auto& entry : fs::directory_iterator(fixtures() / "merge")) {
    auto manifest = io::read_json(entry.path());
    if (!manifest.contains("models")) continue;
    if (!manifest.contains("corrs") || manifest["corrs"].empty()) continue;
    auto stem = entry.path().stem().string();
    auto draft_manifest = manifest;
    for (auto& [name, file] : draft_manifest["corrs"].items()) {
      auto corr = io::read_json(fixtures() / "merge" / file.get<std::string>());
      corr["confirmed"] = false;
      auto draft_name = stem + "_" + name + "_draft.json";
      io::write_json(dir / "fixtures" / draft_name, corr);
      file = draft_name;
    }
    auto path = dir / "fixtures" / (stem + "_drafts.json");
    io::write_json(path, draft_manifest);
    auto out = dir / ("out_" + stem);
    auto r = run_cli("merge '" + path.string() + "' --out '" + out.string() + "'",
                     dir / (stem + ".log"));
    if (r.status != 1 || fs::exists(out / "instance.json")) {
      v.fail("merge of " + stem + " with unconfirmed corrs exited " + std::to_string(r.status));
    }
    ++gated;
  }
  auto r = run_cli("merge '" + (fixtures() / "merge" / "manifest.json").string() + "' --out '" +
                       (dir / "confirmed").string() + "'",
                   dir / "confirmed.log");
  if (r.status != 0) v.fail("confirmed merge fixture exited " + std::to_string(r.status));
  if (gated == 0) v.fail("no merge fixture has corrs");
  if (v.pass) v.detail = std::to_string(gated) + " fixture manifests gated";
  return v;
}

Verdict merge_exactness() {
  auto m = merge_metamodel();
  std::size_t complex = 0;
  auto v = random_cases(
      "multimodel", kSeed + 30,
      [&](Rng& rng) {
        // Count complex links on a copy of the draw so the oracle sees the
        // same stream.
        Rng peek = rng;
        auto mm = random_multimodel(peek, m, 1 + pick(peek, 3), 5, pick(peek, 3));
        for (const auto& c : mm.corrs) complex += c.legs[0].paths.size();
        return merge_exactness_case(rng, m);
      },
      kRandomCases);
  auto gate = merge_gate();
  if (!gate.pass) v.fail(gate.detail);
  if (complex == 0) v.fail("no complex links were generated");
  if (v.pass) {
    v.detail += " (" + std::to_string(complex) + " complex links), " + gate.detail;
  }
  return v;
}

struct NamedLens {
  std::string name;
  ViewSpanLens lens;
};

std::vector<NamedLens> fixture_lenses() {
  return {{"identity", identity_lens()},
          {"node-exposure", node_exposure_lens()},
          {"path", path_lens()}};
}

Verdict law_suite() {
  Verdict v;
  HarnessConfig config;
  config.seed = kSeed;
  config.cases = kLawCases;
  auto start = Clock::now();
  std::size_t runs = 0, corr_differences = 0;
  for (const auto& [name, lens] : fixture_lenses()) {
    auto report = check_laws(lens, config);
    if (report.laws.size() != law_names().size()) v.fail(name + ": missing laws");
    for (const auto& o : report.laws) {
      if (!o.passed()) v.fail(name + " " + o.law + ": " + o.message);
      if (o.cases < kLawCases) v.fail(name + " " + o.law + " ran " + std::to_string(o.cases));
      runs += o.cases;
      corr_differences += o.corr_differences;
    }
  }
  double secs = since(start);
  if (secs >= kLawSeconds) v.fail("took " + std::to_string(secs) + " s");
  if (v.pass) {
    v.detail = std::to_string(law_names().size()) + " laws x 3 lenses, " + std::to_string(runs) +
               " cases, " + std::to_string(secs) + " s; weak invertibility round trips changed the corr in " +
               std::to_string(corr_differences) + " cases (logged, not a law)";
  }
  return v;
}

Verdict negative_controls() {
  Verdict v;
  HarnessConfig config;
  config.seed = kSeed;
  config.cases = kLawCases;
  std::string summary;
  for (auto m : {LensMutation::drop_cascade_delete, LensMutation::skip_realignment,
                 LensMutation::reuse_stale_corr, LensMutation::delete_as_insert,
                 LensMutation::nondeterministic_ids}) {
    const std::string mutation = to_string(m);
    std::optional<std::pair<std::string, LawCase>> best;
    for (const auto& [name, lens] : fixture_lenses()) {
      auto mutant = lens.mutated(m);
      for (const auto& o : check_laws(mutant, config).laws) {
        if (o.passed()) continue;
        const auto& cx = *o.counterexample;
        if (!evaluate_law(mutant, cx)) {
          v.fail(mutation + ": counterexample for " + o.law + " does not replay");
          continue;
        }
        if (!best || cx.size() < best->second.size()) best.emplace(name + "/" + o.law, cx);
      }
    }
    if (!best) {
      v.fail(mutation + " passes every law");
      continue;
    }
    if (best->second.size() > kMaxCounterexampleNodes) {
      v.fail(mutation + " smallest counterexample has " +
             std::to_string(best->second.size()) + " nodes");
    }
    summary += std::string(summary.empty() ? "" : ", ") + mutation + " by " + best->first + " (" +
               std::to_string(best->second.size()) + " nodes)";
  }
  if (v.pass) v.detail = summary;
  return v;
}

Verdict mixed_exemption() {
  Verdict v;
  for (const auto& law : law_names()) {
    if (law.starts_with("putput_mixed")) v.fail("harness checks " + law);
  }
  auto lens = node_exposure_lens();
  // Insert a node, then delete it: the counterpart keeps its private
  // W partner created by insert repair.
  LawCase c{"putput_mixed_fwd", false, TypedInstance::empty(lens.left_view().target_ptr()), {}};
  Edit insert;
  insert.insert_nodes = {{"x", "X"}};
  Edit remove;
  remove.delete_nodes = {"x"};
  c.edits = {insert, remove};
  if (!case_is_legal(lens, c) || !evaluate_law(lens, c)) {
    v.fail("dedicated insert-then-delete fixture does not break PutPut");
  }
  HarnessConfig config;
  config.seed = kSeed;
  config.cases = kLawCases;
  auto mixed = check_law(lens, config, "putput_mixed_fwd");
  if (mixed.passed()) v.fail("random mixed chains never break PutPut");
  auto report = check_laws(lens, config);
  std::size_t monotonic = 0;
  for (const auto& o : report.laws) {
    if (!o.passed()) v.fail(o.law + " flagged: " + o.message);
    if (o.law.starts_with("putput_")) monotonic += o.cases;
  }
  if (v.pass) {
    v.detail = "mixed PutPut fails (fixture, and random case " + std::to_string(mixed.cases) +
               "); monotonic PutPut passes " + std::to_string(monotonic) +
               " cases; no mixed law in the suite";
  }
  return v;
}

Verdict determinism() {
  Verdict v;
  auto root = scratch("acceptance-determinism");
  auto fx = [](const std::string& rel) { return "'" + (fixtures() / rel).string() + "'"; };
  struct Command {
    std::string name;
    std::string args;  // before --out
  };
  const std::vector<Command> commands{
      {"check", "check " + fx("check/manifest.json")},
      {"view", "view " + fx("view/manifest.json") + " path chain"},
      {"match", "match " + fx("merge/manifest.json") + " hr payroll"},
      {"materialize", "materialize " + fx("merge/manifest.json")},
      {"merge", "merge " + fx("merge/manifest.json")},
      {"propagate", "propagate " + fx("lens/manifest.json") + " path ab insert --direction fwd"},
      {"propagate-bwd", "propagate " + fx("lens/manifest.json") + " path ab unlink --direction bwd"},
      {"translate", "translate " + fx("lens/manifest.json") + " path A --direction fwd"},
      {"lens-test", "lens-test " + fx("lens/manifest.json") + " path --seed 7 --cases 60"},
      {"lens-test-mutant", "lens-test " + fx("lens/manifest.json") +
                               " path --seed 7 --cases 200 --mutation nondeterministic_ids"},
      {"export-dot", "export-dot " + fx("lens/manifest.json") + " N"},
  };
  std::size_t files = 0;
  for (const auto& c : commands) {
    std::map<std::string, std::string> runs[2];
    int status[2];
    for (int k = 0; k < 2; ++k) {
      auto out = root / c.name / ("run" + std::to_string(k));
      auto r = run_cli(c.args + " --out '" + out.string() + "'",
                       root / c.name / ("run" + std::to_string(k) + ".log"));
      status[k] = r.status;
      runs[k] = tree(out);
    }
    if (status[0] != status[1] || status[0] == 2) {
      v.fail(c.name + " exited " + std::to_string(status[0]) + "/" + std::to_string(status[1]));
    }
    if (runs[0].empty()) v.fail(c.name + " wrote no files");
    if (runs[0] != runs[1]) v.fail(c.name + " output differs between runs");
    files += runs[0].size();
  }
  if (v.pass) {
    v.detail = std::to_string(commands.size()) + " commands, " + std::to_string(files) +
               " files byte-identical";
  }
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    Verdict (*run)();
  };
  const Criterion criteria[] = {
      {1, "universal properties", universal_properties},
      {2, "fibration", fibration},
      {3, "view compositionality", view_compositionality},
      {4, "merge exactness", merge_exactness},
      {5, "lens law suite", law_suite},
      {6, "negative controls", negative_controls},
      {7, "mixed PutPut exemption", mixed_exemption},
      {8, "CLI determinism", determinism},
  };
  bool all = true;
  for (const auto& c : criteria) {
    auto start = Clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.fail(std::string("raised: ") + e.what());
    }
    all = all && v.pass;
    std::printf("criterion %d %s: %s (%s) [%.1f s]\n", c.id, c.name, v.pass ? "PASS" : "FAIL",
                v.detail.c_str(), since(start));
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
