#include "sketchwork/lens.hpp"

#include <deque>

namespace sketchwork {

LensCorr LensCorr::flipped() const {
  LensCorr out;
  for (const auto& l : nodes) out.nodes.insert({l.type, l.right, l.left});
  for (const auto& l : edges) out.edges.insert({l.type, l.right, l.left});
  return out;
}

Id anchor_key(const Path& p) { return p.edges.empty() ? "@" + p.from : p.edges.front(); }

namespace {

struct Anchors {
  std::set<std::pair<Id, Id>> nodes;
  std::set<std::pair<Id, Path>> edges;
};

Anchors anchors_of(const ViewDefinition& v, const TypedInstance& x) {
  Anchors out;
  std::map<Id, std::vector<Id>> by_type;
  for (const auto& [n, t] : x.typing().node_map()) by_type[t].push_back(n);
  for (const auto& [t, image] : v.node_map()) {
    auto it = by_type.find(image);
    if (it == by_type.end()) continue;
    for (const auto& n : it->second) out.nodes.insert({t, n});
  }
  for (const auto& [f, q] : v.edge_map()) {
    for (auto& p : match_paths(x, q)) out.edges.insert({f, std::move(p)});
  }
  return out;
}

std::optional<Path> keep_path(const UpdateSpan& a, const Path& p) {
  auto from = a.kept_nodes().find(p.from);
  auto to = a.kept_nodes().find(p.to);
  if (from == a.kept_nodes().end() || to == a.kept_nodes().end()) return std::nullopt;
  Path out{{}, from->second, to->second};
  for (const auto& e : p.edges) {
    auto it = a.kept_edges().find(e);
    if (it == a.kept_edges().end()) return std::nullopt;
    out.edges.push_back(it->second);
  }
  return out;
}

bool path_matches(const TypedInstance& inst, const Path& p, const PathQuery& q) {
  const auto& g = inst.graph();
  if (p.edges.size() != q.edges.size() || !g.has_node(p.from) || !g.has_node(p.to)) return false;
  if (inst.node_type(p.from) != q.from || inst.node_type(p.to) != q.to) return false;
  Id at = p.from;
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    const auto& e = p.edges[i];
    if (!g.has_edge(e) || inst.edge_type(e) != q.edges[i] || g.src(e) != at) return false;
    at = g.tgt(e);
  }
  return at == p.to;
}

// falt for the left side; balt is this on the flipped corr.
LensCorr realign_left(const ViewDefinition& m, const ViewDefinition& n, const UpdateSpan& a,
                      const LensCorr& r, const TypedInstance& b) {
  LensCorr out;
  for (const auto& l : r.nodes) {
    auto it = a.kept_nodes().find(l.left);
    if (it != a.kept_nodes().end()) out.nodes.insert({l.type, it->second, l.right});
  }
  for (const auto& l : r.edges) {
    if (auto p = keep_path(a, l.left)) out.edges.insert({l.type, std::move(*p), l.right});
  }
  auto fresh_nodes = a.inserted_nodes();
  auto fresh_edges = a.inserted_edges();
  if (fresh_nodes.empty() && fresh_edges.empty()) return out;

  auto left = anchors_of(m, a.new_model());
  auto right = anchors_of(n, b);
  for (const auto& [t, x] : left.nodes) {
    if (fresh_nodes.contains(x) && right.nodes.contains({t, x})) out.nodes.insert({t, x, x});
  }
  std::map<std::pair<Id, Id>, std::vector<const Path*>> by_key;
  for (const auto& [f, q] : right.edges) by_key[{f, anchor_key(q)}].push_back(&q);
  const auto& mn = m.source().graph();
  for (const auto& [f, p] : left.edges) {
    bool inserted = p.edges.empty() ? fresh_nodes.contains(p.from) : false;
    for (const auto& e : p.edges) inserted = inserted || fresh_edges.contains(e);
    if (!inserted) continue;
    auto it = by_key.find({f, anchor_key(p)});
    if (it == by_key.end()) continue;
    for (const Path* q : it->second) {
      if (out.nodes.contains({mn.src(f), p.from, q->from}) &&
          out.nodes.contains({mn.tgt(f), p.to, q->to})) {
        out.edges.insert({f, p, *q});
      }
    }
  }
  return out;
}

}  // namespace

AlignmentFramework::AlignmentFramework(ViewDefinition m, ViewDefinition n)
    : m_(std::move(m)), n_(std::move(n)) {}

std::optional<std::string> AlignmentFramework::inconsistency(const LensCorr& r,
                                                             const TypedInstance& a,
                                                             const TypedInstance& b) const {
  const auto& mn = m_.source().graph();
  auto has_node = [](const TypedInstance& x, const Id& n, const Id& type) {
    return x.graph().has_node(n) && x.node_type(n) == type;
  };
  for (const auto& l : r.nodes) {
    if (!mn.has_node(l.type)) return "link type '" + l.type + "' is not an MN node";
    if (!has_node(a, l.left, m_.node(l.type))) {
      return "left anchor '" + l.left + "' of a '" + l.type + "' link is not in the left model";
    }
    if (!has_node(b, l.right, n_.node(l.type))) {
      return "right anchor '" + l.right + "' of a '" + l.type + "' link is not in the right model";
    }
  }
  for (const auto& l : r.edges) {
    if (!mn.has_edge(l.type)) return "link type '" + l.type + "' is not an MN edge";
    if (!path_matches(a, l.left, m_.edge(l.type))) {
      return "left path " + l.left.key() + " of a '" + l.type + "' link is not in the left view";
    }
    if (!path_matches(b, l.right, n_.edge(l.type))) {
      return "right path " + l.right.key() + " of a '" + l.type + "' link is not in the right view";
    }
    if (!r.nodes.contains({mn.src(l.type), l.left.from, l.right.from}) ||
        !r.nodes.contains({mn.tgt(l.type), l.left.to, l.right.to})) {
      return "a '" + l.type + "' link lacks the links of its endpoints";
    }
  }
  return std::nullopt;
}

LensCorr AlignmentFramework::falt(const UpdateSpan& a, const LensCorr& r,
                                  const TypedInstance& b) const {
  return realign_left(m_, n_, a, r, b);
}

LensCorr AlignmentFramework::balt(const LensCorr& r, const UpdateSpan& b,
                                  const TypedInstance& a) const {
  return realign_left(n_, m_, b, r.flipped(), a).flipped();
}

Id prime_fresh(const Id& base, const PutPolicy::Taken& taken) {
  Id id = base;
  while (taken(id)) id += "'";
  return id;
}

PutPolicy PutPolicy::standard() {
  PutPolicy p;
  p.fresh_name = prime_fresh;
  return p;
}

ViewUpdate get(const ViewDefinition& v, const UpdateSpan& a) {
  auto before = execute_view(v, a.old_model());
  auto after = execute_view(v, a.new_model());
  std::map<std::pair<Id, Id>, Id> node_at;
  std::map<std::pair<Id, Path>, Id> edge_at;
  for (const auto& [vn, x] : after.node_trace) node_at[{after.instance.node_type(vn), x}] = vn;
  for (const auto& [ve, p] : after.edge_trace) edge_at[{after.instance.edge_type(ve), p}] = ve;

  std::map<Id, Id> kept_nodes, kept_edges;
  for (const auto& [vn, x] : before.node_trace) {
    auto it = a.kept_nodes().find(x);
    if (it == a.kept_nodes().end()) continue;
    auto found = node_at.find({before.instance.node_type(vn), it->second});
    if (found == node_at.end()) throw LensError("view node '" + vn + "' lost its trace");
    kept_nodes.emplace(vn, found->second);
  }
  for (const auto& [ve, p] : before.edge_trace) {
    auto kept = keep_path(a, p);
    if (!kept) continue;
    auto found = edge_at.find({before.instance.edge_type(ve), *kept});
    if (found == edge_at.end()) throw LensError("view edge '" + ve + "' lost its trace");
    kept_edges.emplace(ve, found->second);
  }
  UpdateSpan update(before.instance, after.instance, std::move(kept_nodes), std::move(kept_edges));
  return ViewUpdate{std::move(update), std::move(before), std::move(after)};
}

namespace {

struct MultBound {
  Id source_type;
  Id edge_type;
  std::int64_t lo;
};

std::vector<MultBound> lower_bounds(const Metamodel& m) {
  std::vector<MultBound> out;
  for (const auto& d : m.constraints()) {
    if (d.predicate != "mult") continue;
    auto lo = d.args.contains("lo") ? d.args.at("lo") : 0;
    if (lo > 0) out.push_back({d.binding.node("src"), d.binding.edge("f"), lo});
  }
  return out;
}

// A graph with typing under construction.
struct Draft {
  Graph graph;
  std::map<Id, Id> node_types;
  std::map<Id, Id> edge_types;

  void node(const Id& id, const Id& type) {
    graph.add_node(id);
    node_types.emplace(id, type);
  }
  void edge(const Id& id, const Id& s, const Id& t, const Id& type) {
    graph.add_edge(id, s, t);
    edge_types.emplace(id, type);
  }
  std::int64_t out_degree(const Id& n, const Id& type) const {
    std::int64_t c = 0;
    for (const auto& [e, ends] : graph.edges()) {
      if (ends.src == n && edge_types.at(e) == type) ++c;
    }
    return c;
  }
};

}  // namespace

UpdateSpan put(const ViewDefinition& v, const TypedInstance& source, const UpdateSpan& w,
               const PutPolicy& policy) {
  auto exec = execute_view(v, source);
  if (!(exec.instance == w.old_model())) {
    throw ContinuityError("view update does not start at the current view of the model");
  }
  const auto& g = source.graph();
  std::set<Id> visible;
  for (const auto& [_, t] : v.node_map()) visible.insert(t);
  auto is_private = [&](const Id& n) { return !visible.contains(source.node_type(n)); };

  std::set<Id> del_nodes, del_edges;
  for (const auto& vn : w.deleted_nodes()) del_nodes.insert(exec.node_trace.at(vn));
  for (const auto& ve : w.deleted_edges()) {
    const auto& p = exec.edge_trace.at(ve);
    if (p.edges.empty()) {
      if (!del_nodes.contains(p.from)) {
        throw LensError("view edge '" + ve + "' traces to an empty path and cannot be deleted alone");
      }
      continue;
    }
    for (std::size_t i = 0; i < p.edges.size(); ++i) {
      del_edges.insert(p.edges[i]);
      if (i + 1 < p.edges.size() && is_private(g.tgt(p.edges[i]))) {
        del_nodes.insert(g.tgt(p.edges[i]));
      }
    }
  }
  auto cascade = [&](const Id& n) {
    for (const auto& e : g.incident_edges(n)) del_edges.insert(e);
  };
  if (policy.cascade_delete) {
    for (const auto& n : del_nodes) cascade(n);
  } else {
    std::erase_if(del_nodes, [&](const Id& n) {
      for (const auto& e : g.incident_edges(n)) {
        if (!del_edges.contains(e)) return true;
      }
      return false;
    });
  }
  const auto bounds = lower_bounds(source.metamodel());
  for (bool changed = !del_edges.empty(); changed;) {
    changed = false;
    for (const auto& n : g.nodes()) {
      if (del_nodes.contains(n) || !is_private(n)) continue;
      for (const auto& b : bounds) {
        if (b.source_type != source.node_type(n)) continue;
        std::int64_t c = 0;
        for (const auto& e : g.incident_edges(n)) {
          if (g.src(e) == n && !del_edges.contains(e) && source.edge_type(e) == b.edge_type) ++c;
        }
        if (c < b.lo) {
          del_nodes.insert(n);
          cascade(n);
          changed = true;
          break;
        }
      }
    }
  }

  Draft d;
  std::map<Id, Id> kept_nodes, kept_edges;
  const bool dup = policy.delete_as_insert;
  for (const auto& n : g.nodes()) {
    if (dup || !del_nodes.contains(n)) {
      d.node(n, source.node_type(n));
      kept_nodes.emplace(n, n);
    }
  }
  for (const auto& [e, ends] : g.edges()) {
    if (dup || !del_edges.contains(e)) {
      d.edge(e, ends.src, ends.tgt, source.edge_type(e));
      kept_edges.emplace(e, e);
    }
  }
  auto node_taken = [&](const Id& id) { return d.graph.has_node(id); };
  auto edge_taken = [&](const Id& id) { return d.graph.has_edge(id); };
  if (dup) {
    for (const auto& n : del_nodes) {
      d.node(policy.fresh_name(n + "!dup", node_taken), source.node_type(n));
    }
    for (const auto& e : del_edges) {
      d.edge(policy.fresh_name(e + "!dup", edge_taken), g.src(e), g.tgt(e), source.edge_type(e));
    }
  }

  const auto& meta = source.metamodel().graph();
  std::deque<Id> fresh;
  std::map<Id, Id> created;
  for (const auto& vn : w.inserted_nodes()) {
    auto id = policy.fresh_name(vn, node_taken);
    d.node(id, v.node(w.new_model().node_type(vn)));
    created.emplace(vn, id);
    fresh.push_back(id);
  }
  std::map<Id, Id> kept_back;
  for (const auto& [x, y] : w.kept_nodes()) kept_back.emplace(y, x);
  auto resolve = [&](const Id& vn) -> Id {
    auto it = created.find(vn);
    return it != created.end() ? it->second : exec.node_trace.at(kept_back.at(vn));
  };
  const auto& wg = w.new_model().graph();
  for (const auto& ve : w.inserted_edges()) {
    const auto& q = v.edge(w.new_model().edge_type(ve));
    auto s = resolve(wg.src(ve));
    auto t = resolve(wg.tgt(ve));
    if (q.edges.empty()) {
      if (s != t) throw LensError("view edge '" + ve + "' needs an empty path between distinct nodes");
      continue;
    }
    Id at = s;
    for (std::size_t k = 0; k < q.edges.size(); ++k) {
      const auto& type = q.edges[k];
      Id next = t;
      if (k + 1 < q.edges.size()) {
        next = policy.fresh_name(ve + "/" + std::to_string(k + 1), node_taken);
        d.node(next, meta.tgt(type));
        fresh.push_back(next);
      }
      auto base = k == 0 ? ve : ve + "/" + std::to_string(k);
      d.edge(policy.fresh_name(base, edge_taken), at, next, type);
      at = next;
    }
  }

  std::size_t budget = 10000;
  while (!fresh.empty()) {
    auto n = fresh.front();
    fresh.pop_front();
    for (const auto& b : bounds) {
      if (b.source_type != d.node_types.at(n)) continue;
      for (auto c = d.out_degree(n, b.edge_type); c < b.lo; ++c) {
        if (budget-- == 0) throw LensError("insert repair does not terminate");
        auto base = n + "/" + b.edge_type;
        auto target = policy.fresh_name(base, node_taken);
        d.node(target, meta.tgt(b.edge_type));
        d.edge(policy.fresh_name(base, edge_taken), n, target, b.edge_type);
        fresh.push_back(target);
      }
    }
  }

  TypedInstance result(source.metamodel_ptr(), std::move(d.graph), std::move(d.node_types),
                       std::move(d.edge_types));
  return UpdateSpan(source, std::move(result), std::move(kept_nodes), std::move(kept_edges));
}

const char* to_string(LensMutation mutation) {
  switch (mutation) {
    case LensMutation::none: return "none";
    case LensMutation::drop_cascade_delete: return "drop_cascade_delete";
    case LensMutation::skip_realignment: return "skip_realignment";
    case LensMutation::reuse_stale_corr: return "reuse_stale_corr";
    case LensMutation::delete_as_insert: return "delete_as_insert";
    case LensMutation::nondeterministic_ids: return "nondeterministic_ids";
  }
  return "?";
}

LensMutation lens_mutation_from_string(const std::string& name) {
  for (auto m : {LensMutation::none, LensMutation::drop_cascade_delete,
                 LensMutation::skip_realignment, LensMutation::reuse_stale_corr,
                 LensMutation::delete_as_insert, LensMutation::nondeterministic_ids}) {
    if (name == to_string(m)) return m;
  }
  throw LensError("unknown lens mutation '" + name + "'");
}

namespace {

// The view update on the right induced by va through the corr r.
UpdateSpan transport(const ViewUpdate& va, const LensCorr& r, const ViewResult& vb) {
  std::map<std::pair<Id, Id>, std::vector<Id>> node_links;
  std::map<std::pair<Id, Path>, std::vector<Path>> edge_links;
  for (const auto& l : r.nodes) node_links[{l.type, l.left}].push_back(l.right);
  for (const auto& l : r.edges) edge_links[{l.type, l.left}].push_back(l.right);
  std::map<std::pair<Id, Id>, Id> node_at;
  std::map<std::pair<Id, Path>, Id> edge_at;
  for (const auto& [vn, y] : vb.node_trace) node_at[{vb.instance.node_type(vn), y}] = vn;
  for (const auto& [ve, q] : vb.edge_trace) edge_at[{vb.instance.edge_type(ve), q}] = ve;

  const auto& before = va.before;
  const auto& after = va.after;
  std::set<Id> del_nodes, del_edges;
  for (const auto& vn : va.update.deleted_nodes()) {
    auto it = node_links.find({before.instance.node_type(vn), before.node_trace.at(vn)});
    if (it == node_links.end()) continue;
    for (const auto& y : it->second) {
      auto found = node_at.find({it->first.first, y});
      if (found != node_at.end()) del_nodes.insert(found->second);
    }
  }
  for (const auto& ve : va.update.deleted_edges()) {
    auto it = edge_links.find({before.instance.edge_type(ve), before.edge_trace.at(ve)});
    if (it == edge_links.end()) continue;
    for (const auto& q : it->second) {
      auto found = edge_at.find({it->first.first, q});
      if (found != edge_at.end()) del_edges.insert(found->second);
    }
  }
  const auto& bg = vb.instance.graph();
  for (const auto& [e, ends] : bg.edges()) {
    if (del_nodes.contains(ends.src) || del_nodes.contains(ends.tgt)) del_edges.insert(e);
  }

  Draft d;
  std::map<Id, Id> kept_nodes, kept_edges;
  for (const auto& n : bg.nodes()) {
    if (del_nodes.contains(n)) continue;
    d.node(n, vb.instance.node_type(n));
    kept_nodes.emplace(n, n);
  }
  for (const auto& [e, ends] : bg.edges()) {
    if (del_edges.contains(e)) continue;
    d.edge(e, ends.src, ends.tgt, vb.instance.edge_type(e));
    kept_edges.emplace(e, e);
  }

  std::map<Id, Id> created;
  for (const auto& vn : va.update.inserted_nodes()) {
    auto id = prime_fresh(after.node_trace.at(vn), [&](const Id& x) { return d.graph.has_node(x); });
    d.node(id, after.instance.node_type(vn));
    created.emplace(vn, id);
  }
  std::map<Id, Id> kept_back;
  for (const auto& [x, y] : va.update.kept_nodes()) kept_back.emplace(y, x);
  auto resolve = [&](const Id& vn) -> std::optional<Id> {
    if (auto it = created.find(vn); it != created.end()) return it->second;
    const auto& old = kept_back.at(vn);
    const auto& type = before.instance.node_type(old);
    auto it = node_links.find({type, before.node_trace.at(old)});
    if (it == node_links.end()) return std::nullopt;
    for (const auto& y : it->second) {
      auto found = node_at.find({type, y});
      if (found != node_at.end() && d.graph.has_node(found->second)) return found->second;
    }
    return std::nullopt;
  };
  const auto& ag = after.instance.graph();
  for (const auto& ve : va.update.inserted_edges()) {
    auto s = resolve(ag.src(ve));
    auto t = resolve(ag.tgt(ve));
    if (!s || !t) continue;
    auto id = prime_fresh(anchor_key(after.edge_trace.at(ve)),
                          [&](const Id& x) { return d.graph.has_edge(x); });
    d.edge(id, *s, *t, after.instance.edge_type(ve));
  }
  TypedInstance next(vb.instance.metamodel_ptr(), std::move(d.graph), std::move(d.node_types),
                     std::move(d.edge_types));
  return UpdateSpan(vb.instance, std::move(next), std::move(kept_nodes), std::move(kept_edges));
}

}  // namespace

ViewSpanLens::ViewSpanLens(ViewDefinition m, ViewDefinition n, PutPolicy policy,
                           LensMutation mutation)
    : align_(std::move(m), std::move(n)), policy_(std::move(policy)), mutation_(mutation) {
  if (left_view().source().graph() != right_view().source().graph()) {
    throw LensError("the two views of a lens must share their source graph");
  }
  for (const auto* v : {&left_view(), &right_view()}) {
    auto gaps = view_compatibility_gaps(*v);
    if (!gaps.empty()) throw LensError("lens view is not constraint-compatible: " + gaps.front());
  }
  if (!policy_.fresh_name) policy_.fresh_name = prime_fresh;
}

Propagation ViewSpanLens::fppg(const LensCorr& r, const UpdateSpan& a,
                               const TypedInstance& b) const {
  if (auto why = align_.inconsistency(r, a.old_model(), b)) throw ContinuityError(*why);
  auto va = get(left_view(), a);
  auto vb = execute_view(right_view(), b);
  auto wb = transport(va, r, vb);
  auto ub = put(right_view(), b, wb, policy_);
  switch (mutation_) {
    case LensMutation::skip_realignment: return {std::move(ub), r};
    case LensMutation::reuse_stale_corr: return {std::move(ub), align_.falt(a, r, b)};
    default: break;
  }
  auto next = align_.balt(align_.falt(a, r, b), ub, a.new_model());
  return {std::move(ub), std::move(next)};
}

Propagation ViewSpanLens::bppg(const LensCorr& r, const UpdateSpan& b,
                               const TypedInstance& a) const {
  auto p = flipped().fppg(r.flipped(), b, a);
  return {std::move(p.update), p.corr.flipped()};
}

Translation ViewSpanLens::translate(const TypedInstance& a) const {
  auto p = fppg({}, UpdateSpan::creation(a), TypedInstance::empty(right_view().target_ptr()));
  return {p.update.new_model(), std::move(p.corr)};
}

Translation ViewSpanLens::translate_back(const TypedInstance& b) const {
  auto t = flipped().translate(b);
  return {std::move(t.model), t.corr.flipped()};
}

ViewSpanLens ViewSpanLens::flipped() const {
  return ViewSpanLens(right_view(), left_view(), policy_, mutation_);
}

ViewSpanLens ViewSpanLens::mutated(LensMutation mutation) const {
  auto policy = policy_;
  switch (mutation) {
    case LensMutation::drop_cascade_delete: policy.cascade_delete = false; break;
    case LensMutation::delete_as_insert: policy.delete_as_insert = true; break;
    case LensMutation::nondeterministic_ids: {
      auto counter = std::make_shared<std::uint64_t>(0);
      policy.fresh_name = [counter](const Id&, const PutPolicy::Taken& taken) {
        Id id;
        do id = "n" + std::to_string((*counter)++);
        while (taken(id));
        return id;
      };
      break;
    }
    default: break;
  }
  return ViewSpanLens(left_view(), right_view(), std::move(policy), mutation);
}

}  // namespace sketchwork
