#include "sketchwork/view.hpp"

#include <algorithm>
#include <limits>
#include <optional>

namespace sketchwork {

ViewDefinition::ViewDefinition(MetamodelPtr source, MetamodelPtr target,
                               std::map<Id, Id> node_map, std::map<Id, PathQuery> edge_map)
    : source_(std::move(source)),
      target_(std::move(target)),
      node_map_(std::move(node_map)),
      edge_map_(std::move(edge_map)) {
  const auto& sg = source_->graph();
  const auto& tg = target_->graph();
  if (node_map_.size() != sg.node_count() || edge_map_.size() != sg.edge_count()) {
    throw ViewError("view " + source_->name() + " -> " + target_->name() +
                    " is not total on the source metamodel");
  }
  for (const auto& [u, x] : node_map_) {
    if (!sg.has_node(u)) throw ViewError("view maps unknown source node '" + u + "'");
    if (!tg.has_node(x)) throw ViewError("view maps '" + u + "' to unknown node '" + x + "'");
  }
  for (const auto& [f, q] : edge_map_) {
    if (!sg.has_edge(f)) throw ViewError("view maps unknown source edge '" + f + "'");
    validate_path(tg, q);
    const auto& ends = sg.ends(f);
    if (q.from != node_map_.at(ends.src) || q.to != node_map_.at(ends.tgt)) {
      throw ViewError("query for edge '" + f + "' does not connect the images of its endpoints");
    }
  }
}

ViewDefinition ViewDefinition::identity(MetamodelPtr m) {
  std::map<Id, Id> nodes;
  std::map<Id, PathQuery> edges;
  for (const auto& n : m->graph().nodes()) nodes.emplace(n, n);
  for (const auto& [e, _] : m->graph().edges()) edges.emplace(e, edge_path(m->graph(), e));
  return ViewDefinition(m, m, std::move(nodes), std::move(edges));
}

ViewDefinition ViewDefinition::from_morphism(MetamodelPtr source, MetamodelPtr target,
                                             const GraphMorphism& m) {
  std::map<Id, PathQuery> edges;
  for (const auto& [e, img] : m.edge_map()) edges.emplace(e, edge_path(target->graph(), img));
  return ViewDefinition(std::move(source), std::move(target), m.node_map(), std::move(edges));
}

const Id& ViewDefinition::node(const Id& n) const {
  auto it = node_map_.find(n);
  if (it == node_map_.end()) throw ViewError("view has no image for node '" + n + "'");
  return it->second;
}

const PathQuery& ViewDefinition::edge(const Id& e) const {
  auto it = edge_map_.find(e);
  if (it == edge_map_.end()) throw ViewError("view has no image for edge '" + e + "'");
  return it->second;
}

std::set<PathQuery> ViewDefinition::derived_queries() const {
  std::set<PathQuery> out;
  for (const auto& [_, q] : edge_map_) {
    if (q.length() != 1) out.insert(q);
  }
  return out;
}

std::set<PathQuery> ViewDefinition::queries() const {
  std::set<PathQuery> out;
  for (const auto& [_, q] : edge_map_) out.insert(q);
  return out;
}

bool ViewDefinition::is_plain() const {
  return std::all_of(edge_map_.begin(), edge_map_.end(),
                     [](const auto& kv) { return kv.second.length() == 1; });
}

bool ViewDefinition::operator==(const ViewDefinition& other) const {
  return (source_ == other.source_ || *source_ == *other.source_) &&
         (target_ == other.target_ || *target_ == *other.target_) &&
         node_map_ == other.node_map_ && edge_map_ == other.edge_map_;
}

namespace {

constexpr std::int64_t kUnbounded = -1;

struct Interval {
  std::int64_t lo = 0;
  std::int64_t hi = kUnbounded;
};

Interval interval_of(const PredicateArgs& args) {
  Interval i;
  if (auto it = args.find("lo"); it != args.end()) i.lo = it->second;
  if (auto it = args.find("hi"); it != args.end()) i.hi = it->second;
  return i;
}

std::int64_t saturating_mul(std::int64_t a, std::int64_t b) {
  constexpr auto cap = std::numeric_limits<std::int64_t>::max() / 4;
  if (a == 0 || b == 0) return 0;
  if (a > cap / b) return cap;
  return a * b;
}

/// Tightest declared bound on a single target edge.
Interval edge_interval(const Metamodel& target, const Id& edge) {
  Interval out;
  for (const auto& d : target.constraints()) {
    if (d.predicate != "mult" || d.binding.edge("f") != edge) continue;
    auto i = interval_of(d.args);
    out.lo = std::max(out.lo, i.lo);
    if (i.hi != kUnbounded) out.hi = out.hi == kUnbounded ? i.hi : std::min(out.hi, i.hi);
  }
  return out;
}

Interval path_interval(const Metamodel& target, const PathQuery& q) {
  Interval out{1, 1};
  for (const auto& e : q.edges) {
    auto i = edge_interval(target, e);
    out.lo = saturating_mul(out.lo, i.lo);
    if (out.hi == 0 || i.hi == 0) {
      out.hi = 0;
    } else if (out.hi == kUnbounded || i.hi == kUnbounded) {
      out.hi = kUnbounded;
    } else {
      out.hi = saturating_mul(out.hi, i.hi);
    }
  }
  return out;
}

bool edge_is_inj(const Metamodel& target, const Id& edge) {
  return std::any_of(target.constraints().begin(), target.constraints().end(), [&](const auto& d) {
    return d.predicate == "inj" && d.binding.edge("f") == edge;
  });
}

/// The declaration translated along v when every bound edge maps to a
/// single edge.
std::optional<ConstraintDeclaration> translate_plain(const ViewDefinition& v,
                                                     const ConstraintDeclaration& d) {
  std::map<Id, Id> nodes, edges;
  for (const auto& [a, u] : d.binding.node_map()) nodes.emplace(a, v.node(u));
  for (const auto& [a, f] : d.binding.edge_map()) {
    const auto& q = v.edge(f);
    if (q.length() != 1) return std::nullopt;
    edges.emplace(a, q.edges.front());
  }
  return ConstraintDeclaration{
      d.predicate, d.args,
      GraphMorphism(d.binding.dom_ptr(), v.target().graph_ptr(), std::move(nodes),
                    std::move(edges))};
}

bool implied_by_target(const ViewDefinition& v, const ConstraintDeclaration& translated) {
  return std::any_of(v.target().constraints().begin(), v.target().constraints().end(),
                     [&](const auto& c) { return declaration_implies(c, translated); });
}

std::vector<Id> flatten(const ViewDefinition& v, const ConstraintDeclaration& d,
                        const std::string& prefix, std::int64_t len) {
  std::vector<Id> out;
  for (std::int64_t i = 1; i <= len; ++i) {
    const auto& q = v.edge(d.binding.edge(prefix + std::to_string(i)));
    out.insert(out.end(), q.edges.begin(), q.edges.end());
  }
  return out;
}

std::vector<Id> bound_sequence(const ConstraintDeclaration& d, const std::string& prefix,
                               std::int64_t len) {
  std::vector<Id> out;
  for (std::int64_t i = 1; i <= len; ++i) out.push_back(d.binding.edge(prefix + std::to_string(i)));
  return out;
}

bool preserved(const ViewDefinition& v, const ConstraintDeclaration& d) {
  if (d.predicate == "mult") {
    auto want = interval_of(d.args);
    auto got = path_interval(v.target(), v.edge(d.binding.edge("f")));
    if (got.lo < want.lo) return false;
    return want.hi == kUnbounded || (got.hi != kUnbounded && got.hi <= want.hi);
  }
  if (d.predicate == "inj") {
    const auto& q = v.edge(d.binding.edge("f"));
    return std::all_of(q.edges.begin(), q.edges.end(),
                       [&](const Id& e) { return edge_is_inj(v.target(), e); });
  }
  if (d.predicate == "commutes") {
    auto p = d.args.at("left");
    auto q = d.args.at("right");
    auto left = flatten(v, d, "lf", p);
    auto right = flatten(v, d, "rf", q);
    if (left == right) return true;
    for (const auto& c : v.target().constraints()) {
      if (c.predicate != "commutes") continue;
      auto cl = bound_sequence(c, "lf", c.args.at("left"));
      auto cr = bound_sequence(c, "rf", c.args.at("right"));
      if ((cl == left && cr == right) || (cl == right && cr == left)) return true;
    }
    return false;
  }
  auto translated = translate_plain(v, d);
  return translated && implied_by_target(v, *translated);
}

}  // namespace

std::vector<std::string> view_compatibility_gaps(const ViewDefinition& v) {
  std::vector<std::string> gaps;
  for (const auto& d : v.source().constraints()) {
    if (!preserved(v, d)) gaps.push_back(d.label());
  }
  return gaps;
}

ViewResult execute_view(const ViewDefinition& v, const TypedInstance& inst,
                        ExecuteOptions options) {
  if (inst.metamodel().graph() != v.target().graph()) {
    throw ViewError("instance is not typed over the view's target metamodel '" +
                    v.target().name() + "'");
  }
  auto gaps = view_compatibility_gaps(v);
  if (!gaps.empty()) {
    throw ViewError("view " + v.source().name() + " -> " + v.target().name() +
                    " does not preserve " + gaps.front());
  }
  auto ext = execute_query(inst, v.queries());
  std::map<Id, Id> edges;
  for (const auto& [f, q] : v.edge_map()) edges.emplace(f, ext.realized_by.at(q));
  GraphMorphism induced(v.source().graph_ptr(), ext.metamodel->graph_ptr(), v.node_map(),
                        std::move(edges));
  auto pb = pullback_instance(ext.instance, v.source_ptr(), induced);

  std::map<Id, Path> edge_trace;
  for (const auto& [e, original] : pb.projection.edge_map()) {
    auto it = ext.provenance.find(original);
    edge_trace.emplace(e, it != ext.provenance.end() ? it->second
                                                     : edge_path(inst.graph(), original));
  }
  ViewResult result{std::move(pb.instance), pb.projection.node_map(), std::move(edge_trace)};
  if (options.verify_result) {
    auto report = check_instance(result.instance);
    for (const auto& [label, violations] : report.entries) {
      if (!violations.empty()) {
        throw ViewError("view result violates " + label + ": " + violations.front().message);
      }
    }
  }
  return result;
}

ViewDefinition compose_views(const ViewDefinition& v1, const ViewDefinition& v2) {
  if (v1.target().graph() != v2.source().graph()) {
    throw ViewError("cannot compose views: '" + v1.target().name() + "' is not '" +
                    v2.source().name() + "'");
  }
  std::map<Id, Id> nodes;
  for (const auto& [u, x] : v1.node_map()) nodes.emplace(u, v2.node(x));
  std::map<Id, PathQuery> edges;
  for (const auto& [f, q] : v1.edge_map()) {
    Path out = empty_path(v2.node(q.from));
    for (const auto& g : q.edges) out = concat(out, v2.edge(g));
    edges.emplace(f, std::move(out));
  }
  return ViewDefinition(v1.source_ptr(), v2.target_ptr(), std::move(nodes), std::move(edges));
}

}  // namespace sketchwork
