#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "causalkit/error.hpp"

namespace causalkit {

enum class Role {
  Treatment,
  ObservedConfounder,
  UnobservedConfounder,
  Outcome,
  Instrument,
  AssignmentIndicator,
  CensoringIndicator,
  RunningVariable,
  Generic,
};

inline std::string_view role_name(Role r) {
  switch (r) {
    case Role::Treatment: return "treatment";
    case Role::ObservedConfounder: return "observed_confounder";
    case Role::UnobservedConfounder: return "unobserved_confounder";
    case Role::Outcome: return "outcome";
    case Role::Instrument: return "instrument";
    case Role::AssignmentIndicator: return "assignment";
    case Role::CensoringIndicator: return "censoring";
    case Role::RunningVariable: return "running_variable";
    case Role::Generic: return "generic";
  }
  return "generic";
}

inline Role parse_role(std::string_view s) {
  for (Role r : {Role::Treatment, Role::ObservedConfounder, Role::UnobservedConfounder,
                 Role::Outcome, Role::Instrument, Role::AssignmentIndicator,
                 Role::CensoringIndicator, Role::RunningVariable, Role::Generic}) {
    if (role_name(r) == s) return r;
  }
  throw Error(Errc::ParseError, "unknown role '" + std::string(s) + "'");
}

struct NodeSpec {
  std::string id;
  Role role = Role::Generic;
};

using Edge = std::pair<std::string, std::string>;
using NodeSet = std::set<std::string>;

/// Role-tagged directed acyclic graph. Immutable once built; all queries
/// return lexicographically ordered results.
class CausalDag {
 public:
  CausalDag() = default;

  static CausalDag build(const std::vector<NodeSpec>& nodes, const std::vector<Edge>& edges) {
    CausalDag g;
    for (const auto& n : nodes) {
      if (n.id.empty()) throw Error(Errc::InvalidArgument, "empty node identifier");
      if (!g.roles_.emplace(n.id, n.role).second) {
        throw Error(Errc::InvalidArgument, "node '" + n.id + "' declared twice");
      }
      g.parents_[n.id];
      g.children_[n.id];
    }
    for (const auto& [from, to] : edges) {
      if (!g.has_node(from) || !g.has_node(to)) {
        throw Error(Errc::UnknownEndpoint, "edge " + from + " -> " + to + " references an undeclared node");
      }
      if (from == to) throw Error(Errc::CycleDetected, "self-loop on " + from);
      if (!g.children_[from].insert(to).second) {
        throw Error(Errc::DuplicateEdge, from + " -> " + to);
      }
      g.parents_[to].insert(from);
    }
    g.topo_ = g.compute_topological_order();
    return g;
  }

  bool has_node(const std::string& id) const { return roles_.count(id) != 0; }
  std::size_t node_count() const { return roles_.size(); }

  std::size_t edge_count() const {
    std::size_t n = 0;
    for (const auto& [_, ch] : children_) n += ch.size();
    return n;
  }

  std::vector<std::string> nodes() const {
    std::vector<std::string> out;
    out.reserve(roles_.size());
    for (const auto& [id, _] : roles_) out.push_back(id);
    return out;
  }

  std::vector<NodeSpec> node_specs() const {
    std::vector<NodeSpec> out;
    for (const auto& [id, r] : roles_) out.push_back({id, r});
    return out;
  }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (const auto& [from, ch] : children_) {
      for (const auto& to : ch) out.emplace_back(from, to);
    }
    return out;
  }

  Role role(const std::string& id) const { return roles_.at(require(id)); }
  const NodeSet& parents(const std::string& id) const { return parents_.at(require(id)); }
  const NodeSet& children(const std::string& id) const { return children_.at(require(id)); }

  bool has_edge(const std::string& from, const std::string& to) const {
    auto it = children_.find(from);
    return it != children_.end() && it->second.count(to) != 0;
  }

  /// Kahn's algorithm; ties broken lexicographically.
  const std::vector<std::string>& topological_order() const { return topo_; }

  NodeSet descendants(const std::string& id) const {
    return closure(id, children_);
  }

  NodeSet ancestors(const std::string& id) const {
    return closure(id, parents_);
  }

  const std::string& require(const std::string& id) const {
    if (!has_node(id)) throw Error(Errc::UnknownNode, "'" + id + "'");
    return id;
  }

  friend bool operator==(const CausalDag& a, const CausalDag& b) {
    return a.roles_ == b.roles_ && a.children_ == b.children_;
  }

 private:
  NodeSet closure(const std::string& start, const std::map<std::string, NodeSet>& adj) const {
    require(start);
    NodeSet seen;
    std::vector<std::string> stack{start};
    while (!stack.empty()) {
      auto cur = std::move(stack.back());
      stack.pop_back();
      for (const auto& nxt : adj.at(cur)) {
        if (seen.insert(nxt).second) stack.push_back(nxt);
      }
    }
    return seen;
  }

  std::vector<std::string> compute_topological_order() const {
    std::map<std::string, std::size_t> indeg;
    for (const auto& [id, ps] : parents_) indeg[id] = ps.size();
    std::priority_queue<std::string, std::vector<std::string>, std::greater<>> ready;
    for (const auto& [id, d] : indeg) {
      if (d == 0) ready.push(id);
    }
    std::vector<std::string> order;
    while (!ready.empty()) {
      auto cur = ready.top();
      ready.pop();
      order.push_back(cur);
      for (const auto& ch : children_.at(cur)) {
        if (--indeg[ch] == 0) ready.push(ch);
      }
    }
    if (order.size() != roles_.size()) {
      throw Error(Errc::CycleDetected, describe_cycle(indeg));
    }
    return order;
  }

  // Walks parent links among the nodes Kahn could not remove; every such
  // node has a parent that is also stuck, so the walk must revisit a node.
  std::string describe_cycle(const std::map<std::string, std::size_t>& indeg) const {
    std::string cur;
    for (const auto& [id, d] : indeg) {
      if (d > 0) { cur = id; break; }
    }
    std::vector<std::string> walk;
    std::map<std::string, std::size_t> pos;
    while (!pos.count(cur)) {
      pos[cur] = walk.size();
      walk.push_back(cur);
      for (const auto& p : parents_.at(cur)) {
        if (indeg.at(p) > 0) { cur = p; break; }
      }
    }
    std::vector<std::string> cycle(walk.begin() + static_cast<std::ptrdiff_t>(pos[cur]), walk.end());
    std::reverse(cycle.begin(), cycle.end());
    std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
    std::string msg;
    for (const auto& n : cycle) msg += n + " -> ";
    return msg + cycle.front();
  }

  std::map<std::string, Role> roles_;
  std::map<std::string, NodeSet> parents_;
  std::map<std::string, NodeSet> children_;
  std::vector<std::string> topo_;
};

inline CausalDag build_dag(const std::vector<NodeSpec>& nodes, const std::vector<Edge>& edges) {
  return CausalDag::build(nodes, edges);
}

enum class Step { Forward, Backward };  // Forward: nodes[i] -> nodes[i+1]
enum class Triple { Chain, Fork, Collider };

inline std::string_view triple_name(Triple t) {
  switch (t) {
    case Triple::Chain: return "chain";
    case Triple::Fork: return "fork";
    case Triple::Collider: return "collider";
  }
  return "chain";
}

/// One undirected path through the DAG with the direction of every edge and
/// the kind of every interior triple.
struct PathWitness {
  std::vector<std::string> nodes;
  std::vector<Step> steps;
  std::vector<Triple> triples;  // one per interior node

  bool is_backdoor() const { return !steps.empty() && steps.front() == Step::Backward; }

  std::string to_string() const {
    std::string s = nodes.empty() ? "" : nodes.front();
    for (std::size_t i = 0; i < steps.size(); ++i) {
      s += steps[i] == Step::Forward ? " -> " : " <- ";
      s += nodes[i + 1];
    }
    return s;
  }

  friend bool operator<(const PathWitness& a, const PathWitness& b) { return a.nodes < b.nodes; }
};

namespace detail {

inline PathWitness make_witness(const CausalDag& dag, std::vector<std::string> nodes) {
  PathWitness w;
  w.nodes = std::move(nodes);
  for (std::size_t i = 0; i + 1 < w.nodes.size(); ++i) {
    w.steps.push_back(dag.has_edge(w.nodes[i], w.nodes[i + 1]) ? Step::Forward : Step::Backward);
  }
  for (std::size_t i = 1; i < w.steps.size(); ++i) {
    const bool into_from_left = w.steps[i - 1] == Step::Forward;
    const bool into_from_right = w.steps[i] == Step::Backward;
    if (into_from_left && into_from_right) {
      w.triples.push_back(Triple::Collider);
    } else if (!into_from_left && !into_from_right) {
      w.triples.push_back(Triple::Fork);
    } else {
      w.triples.push_back(Triple::Chain);
    }
  }
  return w;
}

inline void enumerate_paths(const CausalDag& dag, const std::string& target,
                            std::vector<std::string>& stack, NodeSet& on_path,
                            bool first_step_into_source, std::vector<PathWitness>& out) {
  const std::string cur = stack.back();
  if (cur == target) {
    out.push_back(make_witness(dag, stack));
    return;
  }
  auto visit = [&](const std::string& nxt) {
    if (on_path.count(nxt)) return;
    stack.push_back(nxt);
    on_path.insert(nxt);
    enumerate_paths(dag, target, stack, on_path, false, out);
    on_path.erase(nxt);
    stack.pop_back();
  };
  for (const auto& p : dag.parents(cur)) visit(p);
  if (first_step_into_source) return;
  for (const auto& c : dag.children(cur)) visit(c);
}

inline bool any_in(const NodeSet& a, const NodeSet& b) {
  for (const auto& x : a) {
    if (b.count(x)) return true;
  }
  return false;
}

inline void check_query(const CausalDag& dag, const std::string& x, const std::string& y,
                        const NodeSet& given) {
  dag.require(x);
  dag.require(y);
  for (const auto& z : given) dag.require(z);
  if (x == y) throw Error(Errc::InvalidArgument, "x and y must differ");
  if (given.count(x) || given.count(y)) {
    throw Error(Errc::OverlapError, "query endpoint appears in the conditioning set");
  }
}

}  // namespace detail

/// All simple paths in the skeleton between `from` and `to`, sorted by node
/// sequence. Exponential in the worst case; graphs here have a dozen nodes.
inline std::vector<PathWitness> all_paths(const CausalDag& dag, const std::string& from,
                                          const std::string& to) {
  dag.require(from);
  dag.require(to);
  std::vector<PathWitness> out;
  if (from == to) return out;
  std::vector<std::string> stack{from};
  NodeSet on_path{from};
  detail::enumerate_paths(dag, to, stack, on_path, false, out);
  std::sort(out.begin(), out.end());
  return out;
}

/// A path is blocked by `given` if some interior non-collider is in `given`,
/// or some interior collider has neither itself nor a descendant in `given`.
inline bool path_blocked(const CausalDag& dag, const PathWitness& path, const NodeSet& given) {
  for (std::size_t i = 0; i < path.triples.size(); ++i) {
    const auto& node = path.nodes[i + 1];
    if (path.triples[i] == Triple::Collider) {
      if (given.count(node)) continue;
      if (detail::any_in(dag.descendants(node), given)) continue;
      return true;
    }
    if (given.count(node)) return true;
  }
  return false;
}

/// Paths between x and y left open by `given`.
inline std::vector<PathWitness> open_paths(const CausalDag& dag, const std::string& x,
                                           const std::string& y, const NodeSet& given) {
  detail::check_query(dag, x, y, given);
  std::vector<PathWitness> out;
  for (auto& p : all_paths(dag, x, y)) {
    if (!path_blocked(dag, p, given)) out.push_back(std::move(p));
  }
  return out;
}

/// Reachability ("Bayes-ball") d-separation test, linear in the graph size.
/// Traverses (node, direction) states from x; y is d-connected iff reached.
inline bool d_separated(const CausalDag& dag, const std::string& x, const std::string& y,
                        const NodeSet& given) {
  detail::check_query(dag, x, y, given);

  // Nodes that are in `given` or have a descendant in it: colliders there are open.
  NodeSet anc_of_given;
  for (const auto& z : given) {
    anc_of_given.insert(z);
    for (const auto& a : dag.ancestors(z)) anc_of_given.insert(a);
  }

  // up = arrived from a child (travelling against edge direction),
  // down = arrived from a parent.
  enum Dir { Up, Down };
  std::set<std::pair<std::string, Dir>> visited;
  std::vector<std::pair<std::string, Dir>> frontier{{x, Up}};
  while (!frontier.empty()) {
    auto [node, dir] = frontier.back();
    frontier.pop_back();
    if (!visited.insert({node, dir}).second) continue;
    if (node == y) return false;
    const bool observed = given.count(node) != 0;
    if (dir == Up && !observed) {
      for (const auto& p : dag.parents(node)) frontier.emplace_back(p, Up);
      for (const auto& c : dag.children(node)) frontier.emplace_back(c, Down);
    } else if (dir == Down) {
      if (!observed) {
        for (const auto& c : dag.children(node)) frontier.emplace_back(c, Down);
      }
      if (anc_of_given.count(node)) {
        for (const auto& p : dag.parents(node)) frontier.emplace_back(p, Up);
      }
    }
  }
  return true;
}

/// Every simple path from treatment to outcome whose first edge points into
/// the treatment, ordered by node sequence.
inline std::vector<PathWitness> backdoor_paths(const CausalDag& dag, const std::string& treatment,
                                               const std::string& outcome) {
  dag.require(treatment);
  dag.require(outcome);
  if (treatment == outcome) throw Error(Errc::InvalidArgument, "treatment and outcome must differ");
  std::vector<PathWitness> out;
  std::vector<std::string> stack{treatment};
  NodeSet on_path{treatment};
  detail::enumerate_paths(dag, outcome, stack, on_path, true, out);
  std::sort(out.begin(), out.end());
  return out;
}

/// Backdoor criterion: z has no descendant of the treatment and blocks every
/// backdoor path.
inline bool is_valid_adjustment_set(const CausalDag& dag, const std::string& treatment,
                                    const std::string& outcome, const NodeSet& z) {
  for (const auto& n : z) dag.require(n);
  if (z.count(treatment) || z.count(outcome)) {
    throw Error(Errc::OverlapError, "treatment/outcome inside the adjustment set");
  }
  if (detail::any_in(dag.descendants(treatment), z)) return false;
  for (const auto& p : backdoor_paths(dag, treatment, outcome)) {
    if (!path_blocked(dag, p, z)) return false;
  }
  return true;
}

/// Graph surgery for do(targets): drop every edge entering a target.
inline CausalDag intervene(const CausalDag& dag, const NodeSet& targets) {
  for (const auto& t : targets) dag.require(t);
  std::vector<Edge> kept;
  for (auto& e : dag.edges()) {
    if (!targets.count(e.second)) kept.push_back(std::move(e));
  }
  return CausalDag::build(dag.node_specs(), kept);
}

}  // namespace causalkit
