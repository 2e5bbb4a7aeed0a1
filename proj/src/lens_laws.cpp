#include "sketchwork/lens_laws.hpp"

#include <algorithm>
#include <chrono>

namespace sketchwork {

bool Edit::empty() const {
  return delete_nodes.empty() && delete_edges.empty() && insert_nodes.empty() &&
         insert_edges.empty();
}

TypedInstance apply_edit(const TypedInstance& x, const Edit& edit) {
  const auto& g = x.graph();
  const auto& meta = x.metamodel().graph();
  Graph out;
  std::map<Id, Id> node_types, edge_types;
  for (const auto& n : g.nodes()) {
    if (edit.delete_nodes.contains(n)) continue;
    out.add_node(n);
    node_types.emplace(n, x.node_type(n));
  }
  for (const auto& [e, ends] : g.edges()) {
    if (edit.delete_edges.contains(e) || !out.has_node(ends.src) || !out.has_node(ends.tgt)) {
      continue;
    }
    out.add_edge(e, ends.src, ends.tgt);
    edge_types.emplace(e, x.edge_type(e));
  }
  for (const auto& [n, type] : edit.insert_nodes) {
    if (out.has_node(n) || !meta.has_node(type)) continue;
    out.add_node(n);
    node_types.emplace(n, type);
  }
  for (const auto& [e, ne] : edit.insert_edges) {
    if (out.has_edge(e) || !meta.has_edge(ne.type) || !out.has_node(ne.src) ||
        !out.has_node(ne.tgt) || node_types.at(ne.src) != meta.src(ne.type) ||
        node_types.at(ne.tgt) != meta.tgt(ne.type)) {
      continue;
    }
    out.add_edge(e, ne.src, ne.tgt);
    edge_types.emplace(e, ne.type);
  }
  return TypedInstance(x.metamodel_ptr(), std::move(out), std::move(node_types),
                       std::move(edge_types));
}

UpdateSpan edit_update(const TypedInstance& x, const Edit& edit) {
  return UpdateSpan::by_ids(x, apply_edit(x, edit));
}

void IdSource::reserve(const TypedInstance& x) {
  for (const auto& n : x.graph().nodes()) taken_.insert(n);
  for (const auto& [e, _] : x.graph().edges()) taken_.insert(e);
}

Id IdSource::next() {
  Id id;
  do id = prefix_ + std::to_string(counter_++);
  while (taken_.contains(id));
  taken_.insert(id);
  return id;
}

namespace {

std::size_t uniform(LawRng& rng, std::size_t lo, std::size_t hi) {
  if (hi <= lo) return lo;
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

template <class C>
const auto& pick(LawRng& rng, const C& items) {
  auto it = items.begin();
  std::advance(it, static_cast<std::ptrdiff_t>(uniform(rng, 0, items.size() - 1)));
  return *it;
}

struct Mult {
  Id source_type;
  Id edge_type;
  std::int64_t lo;
  std::optional<std::int64_t> hi;
};

struct Bounds {
  std::vector<Mult> mult;
  std::set<Id> inj;

  explicit Bounds(const Metamodel& m) {
    for (const auto& d : m.constraints()) {
      if (d.predicate == "mult") {
        std::optional<std::int64_t> hi;
        if (d.args.contains("hi")) hi = d.args.at("hi");
        mult.push_back({d.binding.node("src"), d.binding.edge("f"),
                        d.args.contains("lo") ? d.args.at("lo") : 0, hi});
      } else if (d.predicate == "inj") {
        inj.insert(d.binding.edge("f"));
      }
    }
  }
};

void drop_inserted_node(Edit& e, const Id& n) {
  e.insert_nodes.erase(n);
  std::erase_if(e.insert_edges, [&](const auto& kv) {
    return kv.second.src == n || kv.second.tgt == n;
  });
}

// One repair round over the inserted part; returns whether anything changed.
bool repair_inserts(LawRng& rng, const TypedInstance& x, Edit& e, const Bounds& bounds,
                    IdSource& ids, std::size_t max_nodes) {
  auto z = apply_edit(x, e);
  const auto& g = z.graph();
  const auto& meta = z.metamodel().graph();
  auto inserted_edge = [&](const Id& id) { return e.insert_edges.contains(id); };
  for (const auto& m : bounds.mult) {
    std::map<Id, std::vector<Id>> out;
    for (const auto& n : g.nodes()) {
      if (z.node_type(n) == m.source_type) out[n];
    }
    for (const auto& [id, ends] : g.edges()) {
      if (z.edge_type(id) == m.edge_type) out[ends.src].push_back(id);
    }
    for (const auto& [n, edges] : out) {
      auto c = static_cast<std::int64_t>(edges.size());
      if (c < m.lo) {
        if (!e.insert_nodes.contains(n)) continue;
        const auto& target_type = meta.tgt(m.edge_type);
        std::vector<Id> targets;
        for (const auto& t : g.nodes()) {
          if (z.node_type(t) != target_type) continue;
          if (bounds.inj.contains(m.edge_type)) {
            bool hit = false;
            for (const auto& [id, ends] : g.edges()) {
              hit = hit || (ends.tgt == t && z.edge_type(id) == m.edge_type);
            }
            if (hit) continue;
          }
          targets.push_back(t);
        }
        Id target;
        if (!targets.empty() && (rng() % 2 == 0 || g.node_count() >= max_nodes)) {
          target = pick(rng, targets);
        } else if (g.node_count() < max_nodes) {
          target = ids.next();
          e.insert_nodes.emplace(target, target_type);
        } else {
          drop_inserted_node(e, n);
          return true;
        }
        e.insert_edges.emplace(ids.next(), Edit::NewEdge{n, target, m.edge_type});
        return true;
      }
      if (m.hi && c > *m.hi) {
        for (const auto& id : edges) {
          if (inserted_edge(id)) {
            e.insert_edges.erase(id);
            return true;
          }
        }
      }
    }
  }
  for (const auto& f : bounds.inj) {
    std::map<Id, std::vector<Id>> in;
    for (const auto& [id, ends] : g.edges()) {
      if (z.edge_type(id) == f) in[ends.tgt].push_back(id);
    }
    for (const auto& [_, edges] : in) {
      if (edges.size() < 2) continue;
      for (const auto& id : edges) {
        if (inserted_edge(id)) {
          e.insert_edges.erase(id);
          return true;
        }
      }
    }
  }
  return false;
}

void add_inserts(LawRng& rng, const TypedInstance& x, Edit& e, IdSource& ids,
                 std::size_t new_nodes, std::size_t new_edges, std::size_t max_nodes,
                 std::size_t max_edges) {
  const auto& meta = x.metamodel().graph();
  if (meta.nodes().empty()) return;
  auto base = apply_edit(x, e);
  std::map<Id, Id> types = base.typing().node_map();
  for (std::size_t i = 0; i < new_nodes; ++i) {
    auto id = ids.next();
    const auto& type = pick(rng, meta.nodes());
    e.insert_nodes.emplace(id, type);
    types.emplace(id, type);
  }
  if (!meta.edges().empty()) {
    for (std::size_t i = 0; i < new_edges; ++i) {
      const auto& [type, ends] = pick(rng, meta.edges());
      std::vector<Id> srcs, tgts;
      for (const auto& [n, t] : types) {
        if (t == ends.src) srcs.push_back(n);
        if (t == ends.tgt) tgts.push_back(n);
      }
      if (srcs.empty() || tgts.empty()) continue;
      e.insert_edges.emplace(ids.next(), Edit::NewEdge{pick(rng, srcs), pick(rng, tgts), type});
    }
  }
  Bounds bounds(x.metamodel());
  for (int round = 0; round < 200; ++round) {
    if (!repair_inserts(rng, x, e, bounds, ids, max_nodes)) break;
  }
  auto z = apply_edit(x, e);
  if (!check_instance(z).legal() || z.graph().node_count() > max_nodes ||
      z.graph().edge_count() > max_edges) {
    e.insert_nodes.clear();
    e.insert_edges.clear();
  }
}

void add_deletes(LawRng& rng, const TypedInstance& x, Edit& e) {
  const auto& g = x.graph();
  if (g.empty()) return;
  std::vector<Id> nodes(g.nodes().begin(), g.nodes().end());
  std::vector<Id> edges;
  for (const auto& [id, _] : g.edges()) edges.push_back(id);
  std::shuffle(nodes.begin(), nodes.end(), rng);
  std::shuffle(edges.begin(), edges.end(), rng);
  auto k = uniform(rng, 0, std::min<std::size_t>(2, nodes.size()));
  auto j = std::min(edges.size(), uniform(rng, k == 0 ? 1 : 0, std::min<std::size_t>(3, edges.size())));
  if (k == 0 && j == 0) k = 1;
  for (std::size_t i = 0; i < k; ++i) e.delete_nodes.insert(nodes[i]);
  for (std::size_t i = 0; i < j; ++i) e.delete_edges.insert(edges[i]);
  // Delete whatever the removal leaves illegal, until nothing is.
  for (;;) {
    auto report = check_instance(apply_edit(x, e));
    if (report.legal()) break;
    for (const auto& [_, violations] : report.entries) {
      for (const auto& v : violations) {
        for (const auto& n : v.elements) e.delete_nodes.insert(n);
      }
    }
  }
}

}  // namespace

Edit random_edit(LawRng& rng, const TypedInstance& x, EditKind kind, IdSource& ids,
                 std::size_t max_nodes, std::size_t max_edges) {
  Edit e;
  if (kind != EditKind::insert) add_deletes(rng, x, e);
  if (kind != EditKind::remove) {
    auto after = apply_edit(x, e);
    auto room_nodes = max_nodes - std::min(max_nodes, after.graph().node_count());
    auto room_edges = max_edges - std::min(max_edges, after.graph().edge_count());
    auto n = uniform(rng, kind == EditKind::insert ? 1 : 0, std::min<std::size_t>(3, room_nodes));
    auto m = uniform(rng, 0, std::min<std::size_t>(4, room_edges));
    add_inserts(rng, x, e, ids, std::min(n, room_nodes), m, max_nodes, max_edges);
  }
  return e;
}

TypedInstance random_legal_instance(LawRng& rng, const MetamodelPtr& m, std::size_t max_nodes,
                                    std::size_t max_edges, IdSource& ids) {
  auto empty = TypedInstance::empty(m);
  Edit e;
  add_inserts(rng, empty, e, ids, uniform(rng, 0, max_nodes), uniform(rng, 0, max_edges),
              max_nodes, max_edges);
  return apply_edit(empty, e);
}

std::size_t LawCase::size() const {
  auto n = start.graph().node_count();
  for (const auto& e : edits) n += e.insert_nodes.size();
  return n;
}

const std::vector<std::string>& law_names() {
  static const std::vector<std::string> names{
      "stability_fwd",     "stability_bwd",     "monotonicity_fwd",  "monotonicity_bwd",
      "putput_insert_fwd", "putput_insert_bwd", "putput_delete_fwd", "putput_delete_bwd",
      "commutativity_fwd", "commutativity_bwd", "fbf",               "bfb",
      "idalt",             "falt_balt",         "altalt",
  };
  return names;
}

namespace {

std::string family(const std::string& law) {
  if (law == "fbf" || law == "bfb") return "weak_invertibility";
  for (const char* suffix : {"_fwd", "_bwd"}) {
    if (law.ends_with(suffix)) return law.substr(0, law.size() - 4);
  }
  return law;
}

bool forced_backward(const std::string& law) { return law.ends_with("_bwd") || law == "bfb"; }

std::string list(const std::set<Id>& ids) {
  std::string out;
  for (const auto& id : ids) out += (out.empty() ? "" : ",") + id;
  return "{" + out + "}";
}

std::string describe(const UpdateSpan& u) {
  return std::string(to_string(u.classify())) + " -nodes" + list(u.deleted_nodes()) + " -edges" +
         list(u.deleted_edges()) + " +nodes" + list(u.inserted_nodes()) + " +edges" +
         list(u.inserted_edges());
}

std::string describe(const LensCorr& r) {
  return std::to_string(r.nodes.size()) + " node links, " + std::to_string(r.edges.size()) +
         " edge links";
}

std::optional<std::string> differ(const char* what, const UpdateSpan& expected,
                                  const UpdateSpan& got) {
  if (expected == got) return std::nullopt;
  return std::string(what) + ": expected " + describe(expected) + ", got " + describe(got);
}

std::optional<std::string> differ(const char* what, const LensCorr& expected,
                                  const LensCorr& got) {
  if (expected == got) return std::nullopt;
  return std::string(what) + ": expected " + describe(expected) + ", got " + describe(got);
}

const Edit& edit_at(const LawCase& c, std::size_t i) {
  if (c.edits.size() <= i) throw LensError("law case '" + c.law + "' lacks edits");
  return c.edits[i];
}

}  // namespace

bool round_trip_changes_corr(const ViewSpanLens& lens, const LawCase& c) {
  const auto lens_ = c.backward ? lens.flipped() : lens;
  auto t = lens_.translate(c.start);
  auto a = edit_update(c.start, edit_at(c, 0));
  auto p = lens_.fppg(t.corr, a, t.model);
  auto a1 = lens_.bppg(t.corr, p.update, c.start).update;
  return lens_.fppg(t.corr, a1, t.model).corr != p.corr;
}

std::optional<std::string> evaluate_law(const ViewSpanLens& lens, const LawCase& c) {
  const auto lens_ = c.backward ? lens.flipped() : lens;
  const auto& al = lens_.alignment();
  const auto& a0 = c.start;
  auto t = lens_.translate(a0);
  const auto& b0 = t.model;
  const auto& r = t.corr;
  auto law = family(c.law);

  if (law == "stability") {
    auto p = lens_.fppg(r, UpdateSpan::identity(a0), b0);
    if (auto d = differ("identity not propagated to identity", UpdateSpan::identity(b0), p.update)) {
      return d;
    }
    return differ("corr changed under identity", r, p.corr);
  }
  if (law == "monotonicity") {
    auto a = edit_update(a0, edit_at(c, 0));
    auto p = lens_.fppg(r, a, b0);
    if (a.is_insert() && !p.update.is_insert()) {
      return "insert propagated to " + describe(p.update);
    }
    if (a.is_delete() && !p.update.is_delete()) {
      return "delete propagated to " + describe(p.update);
    }
    return std::nullopt;
  }
  if (law == "putput_insert" || law == "putput_delete" || law == "putput_mixed") {
    auto a1 = edit_update(a0, edit_at(c, 0));
    auto a2 = edit_update(a1.new_model(), edit_at(c, 1));
    auto p1 = lens_.fppg(r, a1, b0);
    auto p2 = lens_.fppg(p1.corr, a2, p1.update.new_model());
    auto pc = lens_.fppg(r, compose_updates(a1, a2), b0);
    if (auto d = differ("stepwise and composite propagation differ", pc.update,
                        compose_updates(p1.update, p2.update))) {
      return d;
    }
    return differ("stepwise and composite corrs differ", pc.corr, p2.corr);
  }
  if (law == "commutativity") {
    auto a = edit_update(a0, edit_at(c, 0));
    auto p = lens_.fppg(r, a, b0);
    auto expected = al.falt(a, al.balt(r, p.update, a0), p.update.new_model());
    return differ("new corr is not the realigned corr", expected, p.corr);
  }
  if (law == "weak_invertibility") {
    auto a = edit_update(a0, edit_at(c, 0));
    auto b = lens_.fppg(r, a, b0).update;
    auto a1 = lens_.bppg(r, b, a0).update;
    auto b1 = lens_.fppg(r, a1, b0).update;
    return differ("round trip changes the propagated update", b, b1);
  }
  if (law == "idalt") {
    auto a = edit_update(a0, edit_at(c, 0));
    auto p = lens_.fppg(r, a, b0);
    const auto& a1 = a.new_model();
    const auto& b1 = p.update.new_model();
    if (auto d = differ("falt of an identity", p.corr,
                        al.falt(UpdateSpan::identity(a1), p.corr, b1))) {
      return d;
    }
    return differ("balt of an identity", p.corr, al.balt(p.corr, UpdateSpan::identity(b1), a1));
  }
  if (law == "falt_balt") {
    auto a = edit_update(a0, edit_at(c, 0));
    auto b = edit_update(b0, edit_at(c, 1));
    return differ("falt and balt do not commute", al.balt(al.falt(a, r, b0), b, a.new_model()),
                  al.falt(a, al.balt(r, b, a0), b.new_model()));
  }
  if (law == "altalt") {
    auto a1 = edit_update(a0, edit_at(c, 0));
    auto a2 = edit_update(a1.new_model(), edit_at(c, 1));
    return differ("stepwise and composite alignment differ",
                  al.falt(compose_updates(a1, a2), r, b0), al.falt(a2, al.falt(a1, r, b0), b0));
  }
  throw LensError("unknown law '" + c.law + "'");
}

bool case_is_legal(const ViewSpanLens& lens, const LawCase& c) {
  try {
    if (!check_instance(c.start).legal()) return false;
    auto x = c.start;
    for (std::size_t i = 0; i < c.edits.size(); ++i) {
      if (family(c.law) == "falt_balt" && i == 1) {
        auto b = c.backward ? lens.flipped().translate(c.start).model : lens.translate(c.start).model;
        if (!check_instance(apply_edit(b, c.edits[i])).legal()) return false;
        continue;
      }
      x = apply_edit(x, c.edits[i]);
      if (!check_instance(x).legal()) return false;
    }
    return true;
  } catch (const Error&) {
    return false;
  }
}

namespace {

std::vector<LawCase> smaller(const LawCase& c) {
  std::vector<LawCase> out;
  auto with_start = [&](const Edit& e) {
    auto d = c;
    d.start = apply_edit(c.start, e);
    out.push_back(std::move(d));
  };
  for (const auto& n : c.start.graph().nodes()) with_start(Edit{{n}, {}, {}, {}});
  for (const auto& [e, _] : c.start.graph().edges()) with_start(Edit{{}, {e}, {}, {}});
  for (std::size_t i = 0; i < c.edits.size(); ++i) {
    const auto& e = c.edits[i];
    auto with_edit = [&](auto&& change) {
      auto d = c;
      change(d.edits[i]);
      out.push_back(std::move(d));
    };
    for (const auto& [n, _] : e.insert_nodes) with_edit([&](Edit& x) { drop_inserted_node(x, n); });
    for (const auto& [id, _] : e.insert_edges) with_edit([&](Edit& x) { x.insert_edges.erase(id); });
    for (const auto& n : e.delete_nodes) with_edit([&](Edit& x) { x.delete_nodes.erase(n); });
    for (const auto& id : e.delete_edges) with_edit([&](Edit& x) { x.delete_edges.erase(id); });
  }
  return out;
}

bool still_fails(const ViewSpanLens& lens, const LawCase& c) {
  if (!case_is_legal(lens, c)) return false;
  try {
    return evaluate_law(lens, c).has_value();
  } catch (const Error&) {
    return true;
  }
}

}  // namespace

LawCase shrink_case(const ViewSpanLens& lens, LawCase c) {
  for (int step = 0; step < 1000; ++step) {
    bool improved = false;
    for (auto& candidate : smaller(c)) {
      if (still_fails(lens, candidate)) {
        c = std::move(candidate);
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return c;
}

bool LawReport::passed() const {
  return std::all_of(laws.begin(), laws.end(), [](const LawOutcome& o) { return o.passed(); });
}

namespace {

LawCase generate_case(const ViewSpanLens& lens, const std::string& law, LawRng& rng,
                      const HarnessConfig& config) {
  LawCase c{law, forced_backward(law), TypedInstance::empty(lens.left_view().target_ptr()), {}};
  auto fam = family(law);
  if (fam == "idalt" || fam == "falt_balt" || fam == "altalt") c.backward = rng() % 2 == 1;
  const auto lens_ = c.backward ? lens.flipped() : lens;
  IdSource ids(c.backward ? "b" : "a");
  c.start = random_legal_instance(rng, lens_.left_view().target_ptr(),
                                  std::min<std::size_t>(8, config.max_nodes),
                                  std::min<std::size_t>(12, config.max_edges), ids);
  auto other = lens_.translate(c.start).model;
  ids.reserve(other);

  auto any = [&] { return static_cast<EditKind>(uniform(rng, 0, 2)); };
  std::vector<EditKind> kinds;
  if (fam == "monotonicity") {
    kinds = {rng() % 2 == 0 ? EditKind::insert : EditKind::remove};
  } else if (fam == "putput_insert") {
    kinds = {EditKind::insert, EditKind::insert};
  } else if (fam == "putput_delete") {
    kinds = {EditKind::remove, EditKind::remove};
  } else if (fam == "putput_mixed") {
    kinds = {EditKind::insert, EditKind::remove};
  } else if (fam == "altalt") {
    kinds = {any(), any()};
  } else if (fam != "stability") {
    kinds = {any()};
  }
  auto x = c.start;
  for (auto kind : kinds) {
    c.edits.push_back(random_edit(rng, x, kind, ids, config.max_nodes, config.max_edges));
    x = apply_edit(x, c.edits.back());
  }
  if (fam == "falt_balt") {
    IdSource other_ids(c.backward ? "a" : "b");
    other_ids.reserve(c.start);
    other_ids.reserve(other);
    other_ids.reserve(x);
    c.edits.push_back(random_edit(rng, other, any(), other_ids, config.max_nodes, config.max_edges));
  }
  return c;
}

}  // namespace

namespace {

LawOutcome run_law(const ViewSpanLens& lens, const HarnessConfig& config, const std::string& law,
                   std::size_t index) {
  LawOutcome o{law, 0, 0, std::nullopt, {}, 0};
  for (std::size_t i = 0; i < config.cases; ++i) {
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                      static_cast<std::uint32_t>(config.seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(i)};
    LawRng rng(seq);
    auto c = generate_case(lens, law, rng, config);
    ++o.cases;
    std::optional<std::string> failure;
    try {
      failure = evaluate_law(lens, c);
    } catch (const Error& e) {
      failure = std::string("raised: ") + e.what();
    }
    if (!failure) {
      if (law == "fbf" || law == "bfb") o.corr_differences += round_trip_changes_corr(lens, c);
      continue;
    }
    ++o.failures;
    if (!o.counterexample) {
      auto small = shrink_case(lens, c);
      try {
        o.message = evaluate_law(lens, small).value_or(*failure);
      } catch (const Error& e) {
        o.message = std::string("raised: ") + e.what();
      }
      o.counterexample = std::move(small);
    }
    if (config.stop_at_first_failure) break;
  }
  return o;
}

}  // namespace

LawOutcome check_law(const ViewSpanLens& lens, const HarnessConfig& config,
                     const std::string& law) {
  const auto& names = law_names();
  auto it = std::find(names.begin(), names.end(), law);
  return run_law(lens, config, law, static_cast<std::size_t>(it - names.begin()));
}

LawReport check_laws(const ViewSpanLens& lens, const HarnessConfig& config,
                     const std::vector<std::string>& only) {
  auto started = std::chrono::steady_clock::now();
  LawReport report;
  const auto& names = law_names();
  for (std::size_t k = 0; k < names.size(); ++k) {
    const auto& law = names[k];
    if (!only.empty() && std::find(only.begin(), only.end(), law) == only.end()) continue;
    report.laws.push_back(run_law(lens, config, law, k));
  }
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace sketchwork
