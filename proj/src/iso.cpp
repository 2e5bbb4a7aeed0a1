#include "sketchwork/iso.hpp"

#include <algorithm>
#include <tuple>

namespace sketchwork {

Labels labels_of(const GraphMorphism& typing) {
  return Labels{typing.node_map(), typing.edge_map()};
}

namespace {

const Id& label(const std::map<Id, Id>& m, const Id& key) {
  static const Id none;
  auto it = m.find(key);
  return it == m.end() ? none : it->second;
}

using EdgeKey = std::tuple<Id, Id, Id>;  // src, tgt, label

struct Indexed {
  const Graph& g;
  const Labels& l;
  std::map<EdgeKey, std::vector<Id>> groups;
  std::map<Id, std::multiset<std::tuple<int, Id, bool>>> signature;  // dir, label, loop

  Indexed(const Graph& graph, const Labels& labels) : g(graph), l(labels) {
    for (const auto& [e, ends] : g.edges()) {
      const auto& el = label(l.edges, e);
      groups[{ends.src, ends.tgt, el}].push_back(e);
      bool loop = ends.src == ends.tgt;
      signature[ends.src].insert({0, el, loop});
      signature[ends.tgt].insert({1, el, loop});
    }
  }

  std::size_t count(const Id& s, const Id& t, const Id& el) const {
    auto it = groups.find({s, t, el});
    return it == groups.end() ? 0 : it->second.size();
  }

  std::tuple<Id, std::multiset<std::tuple<int, Id, bool>>> node_sig(const Id& n) const {
    auto it = signature.find(n);
    return {label(l.nodes, n), it == signature.end() ? decltype(it->second){} : it->second};
  }
};

class Matcher {
 public:
  Matcher(const Indexed& a, const Indexed& b) : a_(a), b_(b) {
    for (const auto& [key, _] : a.groups) labels_.insert(std::get<2>(key));
    for (const auto& n : a.g.nodes()) order_.push_back(n);
    for (const auto& n : order_) {
      auto sig = a.node_sig(n);
      std::vector<Id> c;
      for (const auto& m : b.g.nodes()) {
        if (b.node_sig(m) == sig) c.push_back(m);
      }
      candidates_[n] = std::move(c);
    }
    std::stable_sort(order_.begin(), order_.end(), [&](const Id& x, const Id& y) {
      return candidates_[x].size() < candidates_[y].size();
    });
  }

  bool run() { return extend(0); }
  const std::map<Id, Id>& mapping() const { return map_; }

 private:
  bool consistent(const Id& u, const Id& v) const {
    // Edge counts per label between u and every mapped node must match.
    const auto& labels = labels_;
    for (const auto& [x, y] : map_) {
      for (const auto& el : labels) {
        if (a_.count(u, x, el) != b_.count(v, y, el)) return false;
        if (a_.count(x, u, el) != b_.count(y, v, el)) return false;
      }
    }
    for (const auto& el : labels) {
      if (a_.count(u, u, el) != b_.count(v, v, el)) return false;
    }
    return true;
  }

  bool extend(std::size_t i) {
    if (i == order_.size()) return true;
    const auto& u = order_[i];
    for (const auto& v : candidates_.at(u)) {
      if (used_.contains(v)) continue;
      if (!consistent(u, v)) continue;
      map_[u] = v;
      used_.insert(v);
      if (extend(i + 1)) return true;
      map_.erase(u);
      used_.erase(v);
    }
    return false;
  }

  const Indexed& a_;
  const Indexed& b_;
  std::vector<Id> order_;
  std::map<Id, std::vector<Id>> candidates_;
  std::map<Id, Id> map_;
  std::set<Id> used_;
  std::set<Id> labels_;
};

}  // namespace

std::optional<GraphMorphism> find_isomorphism(const Graph& a, const Graph& b, const Labels& la,
                                              const Labels& lb) {
  if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count()) return std::nullopt;
  Indexed ia(a, la), ib(b, lb);
  Matcher m(ia, ib);
  if (!m.run()) return std::nullopt;
  const auto& nodes = m.mapping();
  std::map<Id, Id> edges;
  for (const auto& [key, list] : ia.groups) {
    const auto& [s, t, el] = key;
    auto it = ib.groups.find({nodes.at(s), nodes.at(t), el});
    if (it == ib.groups.end() || it->second.size() != list.size()) return std::nullopt;
    for (std::size_t k = 0; k < list.size(); ++k) edges.emplace(list[k], it->second[k]);
  }
  return GraphMorphism(a, b, nodes, std::move(edges));
}

}  // namespace sketchwork
