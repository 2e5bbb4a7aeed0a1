#include "sketchwork/query.hpp"

namespace sketchwork {

Id Path::key() const { return encode_path(edges, edges.empty() ? std::string_view(from) : ""); }

Path edge_path(const Graph& g, const Id& edge) {
  const auto& ends = g.ends(edge);
  return Path{{edge}, ends.src, ends.tgt};
}

Path empty_path(const Id& node) { return Path{{}, node, node}; }

Path make_path(const Graph& g, const std::vector<Id>& edges) {
  if (edges.empty()) throw ViewError("make_path: an empty path needs an explicit node");
  for (const auto& e : edges) {
    if (!g.has_edge(e)) throw ViewError("path uses unknown edge '" + e + "'");
  }
  Path p{edges, g.src(edges.front()), g.tgt(edges.back())};
  validate_path(g, p);
  return p;
}

void validate_path(const Graph& g, const Path& p) {
  if (!g.has_node(p.from) || !g.has_node(p.to)) {
    throw ViewError("path endpoints '" + p.from + "', '" + p.to + "' are not nodes");
  }
  if (p.edges.empty()) {
    if (p.from != p.to) throw ViewError("empty path must start and end at the same node");
    return;
  }
  Id at = p.from;
  for (const auto& e : p.edges) {
    if (!g.has_edge(e)) throw ViewError("path uses unknown edge '" + e + "'");
    if (g.src(e) != at) throw ViewError("path is not connected at edge '" + e + "'");
    at = g.tgt(e);
  }
  if (at != p.to) throw ViewError("path does not end at its declared target '" + p.to + "'");
}

Path concat(const Path& a, const Path& b) {
  if (a.to != b.from) throw ViewError("cannot concatenate paths ending at '" + a.to +
                                      "' and starting at '" + b.from + "'");
  Path out{a.edges, a.from, b.to};
  out.edges.insert(out.edges.end(), b.edges.begin(), b.edges.end());
  return out;
}

std::vector<Path> match_paths(const TypedInstance& inst, const PathQuery& q) {
  const auto& g = inst.graph();
  std::vector<Path> out;
  if (q.edges.empty()) {
    for (const auto& [n, t] : inst.typing().node_map()) {
      if (t == q.from) out.push_back(empty_path(n));
    }
    return out;
  }
  std::map<Id, std::vector<Id>> by_type;  // edge type -> edges, in id order
  for (const auto& [e, t] : inst.typing().edge_map()) by_type[t].push_back(e);
  std::map<Id, std::vector<Id>> out_by_type;  // encode_pair(node, type) -> edges
  for (const auto& t : std::set<Id>(q.edges.begin(), q.edges.end())) {
    auto it = by_type.find(t);
    if (it == by_type.end()) return out;
    for (const auto& e : it->second) out_by_type[encode_pair(g.src(e), t)].push_back(e);
  }
  std::vector<Id> stack;
  auto extend = [&](auto&& self, const Id& node, std::size_t depth) -> void {
    if (depth == q.edges.size()) {
      out.push_back(Path{stack, g.src(stack.front()), node});
      return;
    }
    auto it = out_by_type.find(encode_pair(node, q.edges[depth]));
    if (it == out_by_type.end()) return;
    for (const auto& e : it->second) {
      stack.push_back(e);
      self(self, g.tgt(e), depth + 1);
      stack.pop_back();
    }
  };
  for (const auto& e : by_type[q.edges.front()]) {
    stack.push_back(e);
    extend(extend, g.tgt(e), 1);
    stack.pop_back();
  }
  return out;
}

QueryExtension execute_query(const TypedInstance& inst, const std::set<PathQuery>& needed) {
  const auto& meta = inst.metamodel();
  const auto& mg = meta.graph();
  for (const auto& q : needed) validate_path(mg, q);

  Graph ext_meta = mg;
  std::map<PathQuery, Id> realized_by;
  bool meta_changed = false;
  for (const auto& q : needed) {
    if (q.length() == 1) {
      realized_by.emplace(q, q.edges.front());
      continue;
    }
    auto id = q.key();
    while (mg.has_edge(id) && mg.ends(id) != EdgeEnds{q.from, q.to}) id += "'";
    if (!mg.has_edge(id)) {
      ext_meta.add_edge(id, q.from, q.to);
      meta_changed = true;
    }
    realized_by.emplace(q, id);
  }

  MetamodelPtr ext_mm = inst.metamodel_ptr();
  if (meta_changed) {
    auto gp = std::make_shared<const Graph>(ext_meta);
    std::vector<ConstraintDeclaration> decls;
    for (const auto& d : meta.constraints()) {
      decls.push_back({d.predicate, d.args, d.binding.with_cod(gp)});
    }
    ext_mm = make_metamodel(meta.name(), std::move(ext_meta), std::move(decls));
  }

  Graph g = inst.graph();
  auto node_types = inst.typing().node_map();
  auto edge_types = inst.typing().edge_map();
  std::map<Id, Path> provenance;
  std::map<Path, Id> edge_for;
  for (const auto& [q, meta_edge] : realized_by) {
    if (q.length() == 1) continue;
    for (auto& p : match_paths(inst, q)) {
      // Reuse an existing edge only if it is the same derived edge (as left
      // by materialization); otherwise qualify the name by the query.
      auto id = p.key();
      auto same = [&](const Id& e) {
        return inst.graph().ends(e) == EdgeEnds{p.from, p.to} && edge_types.at(e) == meta_edge;
      };
      if (inst.graph().has_edge(id) && !same(id)) {
        id = encode_pair(meta_edge, id);
        while (inst.graph().has_edge(id) && !same(id)) id += "'";
      }
      if (inst.graph().has_edge(id)) {
        edge_for.emplace(std::move(p), id);
        continue;
      }
      edge_for.emplace(p, id);
      g.add_edge(id, p.from, p.to);
      edge_types.emplace(id, meta_edge);
      provenance.emplace(id, std::move(p));
    }
  }
  TypedInstance ext(ext_mm, std::move(g), std::move(node_types), std::move(edge_types));
  return QueryExtension{std::move(ext_mm), std::move(ext), std::move(provenance),
                        std::move(realized_by), std::move(edge_for)};
}

}  // namespace sketchwork
