#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "sketchwork/io.hpp"

namespace fs = std::filesystem;
using namespace sketchwork;
using io::Json;

namespace {

enum Exit { ok = 0, failed = 1, usage = 2 };

struct Options {
  std::string manifest;
  std::string out;
  std::uint64_t seed = 1;
  std::size_t cases = 500;
  bool confirm = false;
  std::string direction = "fwd";
  std::string mutation;
  std::string replay;
  std::vector<std::string> names;
};

std::uint64_t effective_seed(std::uint64_t flag) {
  if (const char* env = std::getenv("SKETCHWORK_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ParseError(std::string("SKETCHWORK_SEED is not an unsigned integer: ") + env);
    }
  }
  return flag;
}

const std::string& arg(const Options& o, std::size_t i, const char* what) {
  if (o.names.size() <= i) throw ParseError(std::string("missing argument: ") + what);
  return o.names[i];
}

template <class Map>
const auto& lookup(const Map& map, const std::string& name, const char* what) {
  auto it = map.find(name);
  if (it == map.end()) throw ParseError(std::string("unknown ") + what + " '" + name + "'");
  return it->second;
}

bool backward(const Options& o) {
  if (o.direction == "fwd") return false;
  if (o.direction == "bwd") return true;
  throw ParseError("direction must be fwd or bwd");
}

int cmd_check(const Options& o) {
  auto ws = io::Workspace::load(o.manifest);
  std::vector<std::string> targets = o.names;
  if (targets.empty()) {
    for (const auto& [name, _] : ws.models) targets.push_back(name);
  }
  bool legal = true;
  Json out = Json::object();
  for (const auto& name : targets) {
    const auto& model = lookup(ws.models, name, "model");
    auto report = check_instance(model);
    out[name] = io::to_json(report);
    for (const auto& [label, violations] : report.entries) {
      for (const auto& v : violations) {
        std::cout << name << ": " << label << ": " << v.message << "\n";
        legal = false;
      }
    }
  }
  if (!o.out.empty()) io::write_json(fs::path(o.out) / "check.json", out);
  return legal ? ok : failed;
}

int cmd_view(const Options& o) {
  auto ws = io::Workspace::load(o.manifest);
  const auto& view = lookup(ws.views, arg(o, 0, "view"), "view");
  const auto& model = lookup(ws.models, arg(o, 1, "model"), "model");
  auto result = execute_view(view, model);
  auto j = io::to_json(result);
  io::write_json(fs::path(o.out) / "view.json", j.at("instance"));
  io::write_json(fs::path(o.out) / "trace.json", j.at("trace"));
  std::cout << "view: " << result.instance.graph().node_count() << " nodes, "
            << result.instance.graph().edge_count() << " edges\n";
  return ok;
}

int cmd_match(const Options& o) {
  auto ws = io::Workspace::load(o.manifest);
  const auto& left = arg(o, 0, "left model");
  const auto& right = arg(o, 1, "right model");
  auto corr = name_match(left, lookup(ws.models, left, "model"), right,
                         lookup(ws.models, right, "model"));
  corr.confirmed = o.confirm;
  io::write_json(fs::path(o.out) / "corr.json", io::to_json(corr));
  std::cout << "corr: " << corr.head.node_count() << " node links, " << corr.head.edge_count()
            << " edge links" << (corr.confirmed ? " (confirmed)" : " (draft)") << "\n";
  return ok;
}

// Writes a self-contained workspace for a multimodel.
void write_workspace(const fs::path& dir, const Multimodel& mm) {
  Json manifest{{"metamodels", Json::object()}, {"models", Json::object()},
                {"views", Json::object()},      {"corrs", Json::object()},
                {"metamodel_links", Json::array()}};
  for (const auto& [name, m] : mm.metamodels) {
    io::write_json(dir / "metamodels" / (name + ".json"), io::to_json(*m));
    manifest["metamodels"][name] = "metamodels/" + name + ".json";
  }
  for (const auto& [name, x] : mm.models) {
    io::write_json(dir / "models" / (name + ".json"), io::to_json(x));
    manifest["models"][name] = "models/" + name + ".json";
  }
  for (std::size_t i = 0; i < mm.metamodel_links.size(); ++i) {
    const auto& l = mm.metamodel_links[i];
    auto name = "link" + std::to_string(i);
    io::write_json(dir / "views" / (name + ".json"), io::to_json(l.view));
    manifest["views"][name] = "views/" + name + ".json";
    manifest["metamodel_links"].push_back({{"from", l.from}, {"to", l.to}, {"view", name}});
  }
  for (std::size_t i = 0; i < mm.corrs.size(); ++i) {
    auto name = "corr" + std::to_string(i);
    io::write_json(dir / "corrs" / (name + ".json"), io::to_json(mm.corrs[i]));
    manifest["corrs"][name] = "corrs/" + name + ".json";
  }
  io::write_json(dir / "manifest.json", manifest);
}

int cmd_materialize(const Options& o) {
  auto ws = io::Workspace::load(o.manifest);
  auto mm = materialize(ws.multimodel());
  write_workspace(o.out, mm);
  std::cout << "materialized " << mm.models.size() << " models, " << mm.corrs.size() << " corrs\n";
  return ok;
}

int cmd_merge(const Options& o) {
  auto ws = io::Workspace::load(o.manifest);
  auto mm = ws.multimodel();
  mm.validate();
  for (std::size_t i = 0; i < mm.corrs.size(); ++i) {
    if (!mm.corrs[i].confirmed) {
      std::cerr << "merge refused: correspondence " << i
                << " is an unconfirmed draft; review it and mark it confirmed first\n";
      return failed;
    }
  }
  auto result = merge_models(materialize(mm));
  fs::path out(o.out);
  io::write_json(out / "metamodel.json", io::to_json(*result.metamodel.metamodel));
  io::write_json(out / "instance.json", io::to_json(result.instance));
  Json cocone = Json::object();
  for (const auto& [name, m] : result.cocone) cocone[name] = io::to_json(m);
  io::write_json(out / "cocone.json", cocone);
  io::write_json(out / "report.json", io::to_json(result.report));
  std::cout << "merged: " << result.instance.graph().node_count() << " nodes, "
            << result.instance.graph().edge_count() << " edges, "
            << result.report.violation_count() << " violations\n";
  return result.report.legal() ? ok : failed;
}

int cmd_propagate(const Options& o) {
  auto ws = io::Workspace::load(o.manifest);
  auto lens = ws.lens(arg(o, 0, "lens"));
  const auto& corr = lookup(ws.lens_corrs, arg(o, 1, "corr"), "corr");
  const auto& update = lookup(ws.updates, arg(o, 2, "update"), "update");
  const bool bwd = backward(o);
  const auto& source = lookup(ws.models, bwd ? corr.right : corr.left, "model");
  const auto& target = lookup(ws.models, bwd ? corr.left : corr.right, "model");
  if (!(update.old_model() == source)) {
    throw ContinuityError("update does not start at the current version of model '" +
                          (bwd ? corr.right : corr.left) + "'");
  }
  auto p = bwd ? lens.bppg(corr.corr, update, target) : lens.fppg(corr.corr, update, target);
  fs::path out(o.out);
  io::write_json(out / "update.json", io::to_json(p.update));
  io::write_json(out / "model.json", io::to_json(p.update.new_model()));
  io::write_json(out / "corr.json", io::to_json(io::NamedLensCorr{corr.lens, corr.left, corr.right, p.corr}));
  std::cout << "propagated " << to_string(update.classify()) << " as "
            << to_string(p.update.classify()) << "; corr has " << p.corr.size() << " links\n";
  return ok;
}

int cmd_translate(const Options& o) {
  auto ws = io::Workspace::load(o.manifest);
  const auto& lens_name = arg(o, 0, "lens");
  auto lens = ws.lens(lens_name);
  const auto& model_name = arg(o, 1, "model");
  const auto& model = lookup(ws.models, model_name, "model");
  const bool bwd = backward(o);
  auto t = bwd ? lens.translate_back(model) : lens.translate(model);
  auto other = model_name + "_translated";
  fs::path out(o.out);
  io::write_json(out / "model.json", io::to_json(t.model));
  io::write_json(out / "corr.json",
                 io::to_json(io::NamedLensCorr{lens_name, bwd ? other : model_name,
                                               bwd ? model_name : other, t.corr}));
  std::cout << "translated: " << t.model.graph().node_count() << " nodes, " << t.corr.size()
            << " links\n";
  return ok;
}

int cmd_lens_test(const Options& o) {
  auto ws = io::Workspace::load(o.manifest);
  const auto& lens_name = arg(o, 0, "lens");
  auto lens = ws.lens(lens_name);
  if (!o.mutation.empty()) {
    try {
      lens = lens.mutated(lens_mutation_from_string(o.mutation));
    } catch (const LensError& e) {
      throw ParseError(e.what());
    }
  }
  fs::path out(o.out);
  if (!o.replay.empty()) {
    auto j = io::read_json(o.replay);
    const auto& side = j.at("backward").get<bool>() ? lens.right_view() : lens.left_view();
    LawCase c{j.at("law").get<std::string>(), j.at("backward").get<bool>(),
              io::instance_from_json(j.at("start"), {{side.target().name(), side.target_ptr()}}),
              {}};
    for (const auto& e : j.at("edits")) c.edits.push_back(io::edit_from_json(e));
    auto failure = evaluate_law(lens, c);
    std::cout << c.law << ": " << (failure ? "FAIL " + *failure : std::string("pass")) << "\n";
    return failure ? failed : ok;
  }
  if (o.out.empty()) throw ParseError("lens-test needs --out unless --replay is given");
  HarnessConfig config;
  config.seed = effective_seed(o.seed);
  config.cases = o.cases;
  auto report = check_laws(lens, config);
  std::string text;
  for (const auto& l : report.laws) {
    text += l.law + ": " + (l.passed() ? "pass" : "FAIL") + " (" + std::to_string(l.cases) +
            " cases)";
    if (l.corr_differences > 0) {
      text += " corr differs after round trip in " + std::to_string(l.corr_differences) + " cases";
    }
    if (!l.passed()) {
      text += " counterexample size " + std::to_string(l.counterexample->size()) + ": " + l.message;
      io::write_json(out / ("counterexample_" + l.law + ".json"), io::to_json(*l.counterexample));
    }
    text += "\n";
  }
  auto j = io::to_json(report);
  j["seed"] = config.seed;
  j["lens"] = lens_name;
  j["mutation"] = to_string(lens.mutation());
  io::write_json(out / "report.json", j);
  io::write_file(out / "report.txt", text);
  std::cout << text;
  std::cerr << "law suite took " << report.seconds << " s\n";
  return report.passed() ? ok : failed;
}

int cmd_export_dot(const Options& o) {
  auto ws = io::Workspace::load(o.manifest);
  const auto& name = arg(o, 0, "name");
  std::string dot;
  if (auto m = ws.metamodels.find(name); m != ws.metamodels.end()) {
    dot = io::to_dot(name, m->second->graph());
  } else {
    const auto& x = lookup(ws.models, name, "metamodel or model");
    dot = io::to_dot(name, x.graph(), &x.typing());
  }
  if (o.out.empty()) {
    std::cout << dot;
  } else {
    io::write_file(fs::path(o.out) / (name + ".dot"), dot);
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sketch-based metamodels: views, merges and delta lenses"};
  app.require_subcommand(1);
  Options o;
  using Handler = int (*)(const Options&);
  Handler handler = nullptr;

  auto command = [&](const char* name, const char* help, Handler h, const char* positional,
                     bool needs_out) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("manifest", o.manifest, "Workspace manifest")->required()->check(CLI::ExistingFile);
    if (positional) sub->add_option("names", o.names, positional);
    auto* out = sub->add_option("--out", o.out, "Output directory");
    if (needs_out) out->required();
    sub->callback([&handler, h] { handler = h; });
    return sub;
  };
  command("check", "Check models against their metamodel constraints", cmd_check, "Models to check", false);
  command("view", "Execute a view over a model", cmd_view, "VIEW MODEL", true);
  auto* match = command("match", "Draft a correspondence by equal names", cmd_match, "LEFT RIGHT", true);
  match->add_flag("--confirm", o.confirm, "Mark the draft as confirmed");
  command("materialize", "Materialize derived links and elements", cmd_materialize, nullptr, true);
  command("merge", "Merge models along confirmed correspondences", cmd_merge, nullptr, true);
  auto* propagate = command("propagate", "Propagate an update across a lens", cmd_propagate,
                            "LENS CORR UPDATE", true);
  propagate->add_option("--direction", o.direction, "fwd or bwd")->check(CLI::IsMember({"fwd", "bwd"}));
  auto* translate = command("translate", "Build the counterpart of a model", cmd_translate,
                            "LENS MODEL", true);
  translate->add_option("--direction", o.direction, "fwd or bwd")->check(CLI::IsMember({"fwd", "bwd"}));
  auto* lens_test = command("lens-test", "Run the lens law suite", cmd_lens_test, "LENS", false);
  lens_test->add_option("--seed", o.seed, "Random seed (SKETCHWORK_SEED overrides)");
  lens_test->add_option("--cases", o.cases, "Cases per law");
  lens_test->add_option("--mutation", o.mutation, "Run a deliberately broken variant");
  lens_test->add_option("--replay", o.replay, "Re-evaluate a counterexample file")->check(CLI::ExistingFile);
  command("export-dot", "Export a metamodel or model as DOT", cmd_export_dot, "NAME", false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return usage;
  }
  try {
    return handler(o);
  } catch (const ContinuityError& e) {
    std::cerr << "continuity violation: " << e.what() << "\n";
    return failed;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  } catch (const MergeError& e) {
    std::cerr << "merge error: " << e.what() << "\n";
    return failed;
  } catch (const ViewError& e) {
    std::cerr << "view error: " << e.what() << "\n";
    return failed;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return failed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  }
}
