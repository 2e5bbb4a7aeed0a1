#include <algorithm>

#include "sketchwork/sketch.hpp"

namespace sketchwork {

namespace {

std::int64_t arg(const PredicateArgs& args, const std::string& key, std::int64_t fallback) {
  auto it = args.find(key);
  return it == args.end() ? fallback : it->second;
}

std::int64_t required_arg(const PredicateArgs& args, const std::string& key, std::int64_t min) {
  auto it = args.find(key);
  if (it == args.end()) throw ConstraintError("missing predicate argument '" + key + "'");
  if (it->second < min) {
    throw ConstraintError("predicate argument '" + key + "' must be at least " +
                          std::to_string(min));
  }
  return it->second;
}

std::string str(std::int64_t v) { return std::to_string(v); }

std::vector<Violation> check_mult(const TypedInstance& inst, const ConstraintDeclaration& d) {
  const auto& source_type = d.binding.node("src");
  const auto& edge_type = d.binding.edge("f");
  auto lo = arg(d.args, "lo", 0);
  const bool bounded = d.args.contains("hi");
  const auto hi = arg(d.args, "hi", 0);
  std::map<Id, std::int64_t> count;
  for (const auto& [n, t] : inst.typing().node_map()) {
    if (t == source_type) count.emplace(n, 0);
  }
  for (const auto& [e, t] : inst.typing().edge_map()) {
    if (t == edge_type) ++count[inst.graph().src(e)];
  }
  std::vector<Violation> out;
  for (const auto& [n, c] : count) {
    if (c < lo || (bounded && c > hi)) {
      out.push_back({d.label(),
                     "node '" + n + "' has " + str(c) + " outgoing '" + edge_type +
                         "' edges, expected " + str(lo) + ".." + (bounded ? str(hi) : "*"),
                     {n}});
    }
  }
  return out;
}

std::vector<Violation> check_inj(const TypedInstance& inst, const ConstraintDeclaration& d) {
  const auto& edge_type = d.binding.edge("f");
  std::map<Id, std::vector<Id>> by_target;
  for (const auto& [e, t] : inst.typing().edge_map()) {
    if (t == edge_type) by_target[inst.graph().tgt(e)].push_back(e);
  }
  std::vector<Violation> out;
  for (const auto& [n, edges] : by_target) {
    if (edges.size() < 2) continue;
    out.push_back({d.label(),
                   "node '" + n + "' is the target of " + str(static_cast<std::int64_t>(edges.size())) +
                       " '" + edge_type + "' edges",
                   {n}});
  }
  return out;
}

std::vector<Violation> check_jointly_monic(const TypedInstance& inst,
                                           const ConstraintDeclaration& d) {
  auto legs = required_arg(d.args, "n", 1);
  const auto& apex_type = d.binding.node("apex");
  std::vector<Id> leg_types;
  for (std::int64_t i = 1; i <= legs; ++i) leg_types.push_back(d.binding.edge("leg" + str(i)));
  using Tuple = std::vector<std::vector<Id>>;
  std::map<Id, Tuple> tuples;
  for (const auto& [n, t] : inst.typing().node_map()) {
    if (t == apex_type) tuples.emplace(n, Tuple(leg_types.size()));
  }
  for (const auto& [e, t] : inst.typing().edge_map()) {
    auto it = tuples.find(inst.graph().src(e));
    if (it == tuples.end()) continue;
    for (std::size_t i = 0; i < leg_types.size(); ++i) {
      if (leg_types[i] == t) it->second[i].push_back(inst.graph().tgt(e));
    }
  }
  std::map<Tuple, std::vector<Id>> groups;
  for (auto& [n, tuple] : tuples) {
    for (auto& targets : tuple) std::sort(targets.begin(), targets.end());
    groups[tuple].push_back(n);
  }
  std::vector<Violation> out;
  for (const auto& [_, nodes] : groups) {
    if (nodes.size() < 2) continue;
    std::string names;
    for (const auto& n : nodes) names += (names.empty() ? "'" : ", '") + n + "'";
    out.push_back({d.label(), "nodes " + names + " have identical leg targets", nodes});
  }
  return out;
}

std::set<Id> follow(const TypedInstance& inst, const Adjacency& adj, const Id& start,
                    const std::vector<Id>& path_types) {
  std::set<Id> frontier{start};
  for (const auto& t : path_types) {
    std::set<Id> next;
    for (const auto& n : frontier) {
      for (const auto& e : adj.out(n)) {
        if (inst.edge_type(e) == t) next.insert(inst.graph().tgt(e));
      }
    }
    frontier = std::move(next);
  }
  return frontier;
}

std::vector<Violation> check_commutes(const TypedInstance& inst, const ConstraintDeclaration& d) {
  auto p = required_arg(d.args, "left", 1);
  auto q = required_arg(d.args, "right", 1);
  std::vector<Id> left, right;
  for (std::int64_t i = 1; i <= p; ++i) left.push_back(d.binding.edge("lf" + str(i)));
  for (std::int64_t i = 1; i <= q; ++i) right.push_back(d.binding.edge("rf" + str(i)));
  const auto& source_type = d.binding.node("src");
  Adjacency adj(inst.graph());
  std::vector<Violation> out;
  for (const auto& [n, t] : inst.typing().node_map()) {
    if (t != source_type) continue;
    if (follow(inst, adj, n, left) != follow(inst, adj, n, right)) {
      out.push_back({d.label(), "paths from node '" + n + "' reach different nodes", {n}});
    }
  }
  return out;
}

Graph mult_arity(const PredicateArgs& args) {
  auto lo = arg(args, "lo", 0);
  if (lo < 0) throw ConstraintError("mult: lo must be non-negative");
  if (args.contains("hi") && args.at("hi") < lo) throw ConstraintError("mult: hi below lo");
  return predicates::edge_arity();
}

PredicateRegistry make_builtins() {
  PredicateRegistry r;
  r.add({"mult", mult_arity, check_mult});
  r.add({"inj", [](const PredicateArgs&) { return predicates::edge_arity(); }, check_inj});
  r.add({"jointly_monic",
         [](const PredicateArgs& a) {
           return predicates::jointly_monic_arity(required_arg(a, "n", 1));
         },
         check_jointly_monic});
  r.add({"commutes",
         [](const PredicateArgs& a) {
           return predicates::commutes_arity(required_arg(a, "left", 1),
                                             required_arg(a, "right", 1));
         },
         check_commutes});
  return r;
}

}  // namespace

PredicateRegistry& PredicateRegistry::global() {
  static PredicateRegistry registry = make_builtins();
  return registry;
}

void PredicateRegistry::add(PredicateSignature signature) {
  auto name = signature.name;
  signatures_.insert_or_assign(std::move(name), std::move(signature));
}

const PredicateSignature& PredicateRegistry::get(const std::string& name) const {
  auto it = signatures_.find(name);
  if (it == signatures_.end()) throw ConstraintError("unknown predicate '" + name + "'");
  return it->second;
}

namespace predicates {

Graph edge_arity() {
  Graph g;
  g.add_node("src");
  g.add_node("tgt");
  g.add_edge("f", "src", "tgt");
  return g;
}

Graph jointly_monic_arity(std::int64_t legs) {
  Graph g;
  g.add_node("apex");
  for (std::int64_t i = 1; i <= legs; ++i) {
    g.add_node("t" + str(i));
    g.add_edge("leg" + str(i), "apex", "t" + str(i));
  }
  return g;
}

Graph commutes_arity(std::int64_t left, std::int64_t right) {
  Graph g;
  g.add_node("src");
  g.add_node("tgt");
  auto chain = [&](const std::string& node_prefix, const std::string& edge_prefix,
                   std::int64_t len) {
    Id prev = "src";
    for (std::int64_t i = 1; i <= len; ++i) {
      Id next = i == len ? Id("tgt") : node_prefix + str(i);
      if (i != len) g.add_node(next);
      g.add_edge(edge_prefix + str(i), prev, next);
      prev = next;
    }
  };
  chain("l", "lf", left);
  chain("r", "rf", right);
  return g;
}

namespace {

ConstraintDeclaration bind_edge(const Graph& graph, const Id& edge, std::string predicate,
                                PredicateArgs args) {
  const auto& ends = graph.ends(edge);
  auto arity = edge_arity();
  return {std::move(predicate), std::move(args),
          GraphMorphism(arity, graph, {{"src", ends.src}, {"tgt", ends.tgt}}, {{"f", edge}})};
}

}  // namespace

ConstraintDeclaration mult(const Graph& graph, const Id& edge, std::int64_t lo,
                           std::optional<std::int64_t> hi) {
  PredicateArgs args{{"lo", lo}};
  if (hi) args.emplace("hi", *hi);
  return bind_edge(graph, edge, "mult", std::move(args));
}

ConstraintDeclaration inj(const Graph& graph, const Id& edge) {
  return bind_edge(graph, edge, "inj", {});
}

ConstraintDeclaration jointly_monic(const Graph& graph, const std::vector<Id>& legs) {
  if (legs.empty()) throw ConstraintError("jointly_monic needs at least one leg");
  auto n = static_cast<std::int64_t>(legs.size());
  std::map<Id, Id> nodes{{"apex", graph.src(legs.front())}};
  std::map<Id, Id> edges;
  for (std::int64_t i = 1; i <= n; ++i) {
    const auto& leg = legs[static_cast<std::size_t>(i - 1)];
    nodes.emplace("t" + str(i), graph.tgt(leg));
    edges.emplace("leg" + str(i), leg);
  }
  return {"jointly_monic", {{"n", n}},
          GraphMorphism(jointly_monic_arity(n), graph, std::move(nodes), std::move(edges))};
}

ConstraintDeclaration commutes(const Graph& graph, const std::vector<Id>& left,
                               const std::vector<Id>& right) {
  if (left.empty() || right.empty()) throw ConstraintError("commutes needs two nonempty paths");
  auto p = static_cast<std::int64_t>(left.size());
  auto q = static_cast<std::int64_t>(right.size());
  std::map<Id, Id> nodes{{"src", graph.src(left.front())}, {"tgt", graph.tgt(left.back())}};
  std::map<Id, Id> edges;
  auto bind = [&](const std::vector<Id>& path, const std::string& np, const std::string& ep) {
    for (std::size_t i = 0; i < path.size(); ++i) {
      edges.emplace(ep + str(static_cast<std::int64_t>(i + 1)), path[i]);
      if (i + 1 < path.size()) {
        nodes.emplace(np + str(static_cast<std::int64_t>(i + 1)), graph.tgt(path[i]));
      }
    }
  };
  bind(left, "l", "lf");
  bind(right, "r", "rf");
  return {"commutes", {{"left", p}, {"right", q}},
          GraphMorphism(commutes_arity(p, q), graph, std::move(nodes), std::move(edges))};
}

}  // namespace predicates

}  // namespace sketchwork
