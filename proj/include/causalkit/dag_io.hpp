#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "causalkit/dag.hpp"

namespace causalkit {

// {"nodes": [{"id": "X", "role": "treatment"}, ...], "edges": [["Z", "X"], ...]}
inline nlohmann::json dag_to_json(const CausalDag& dag) {
  nlohmann::json j;
  j["nodes"] = nlohmann::json::array();
  for (const auto& n : dag.node_specs()) {
    j["nodes"].push_back({{"id", n.id}, {"role", std::string(role_name(n.role))}});
  }
  j["edges"] = nlohmann::json::array();
  for (const auto& [from, to] : dag.edges()) j["edges"].push_back({from, to});
  return j;
}

inline CausalDag dag_from_json(const nlohmann::json& j) {
  try {
    std::vector<NodeSpec> nodes;
    for (const auto& n : j.at("nodes")) {
      NodeSpec spec;
      if (n.is_string()) {
        spec.id = n.get<std::string>();
      } else {
        spec.id = n.at("id").get<std::string>();
        if (n.contains("role")) spec.role = parse_role(n.at("role").get<std::string>());
      }
      nodes.push_back(std::move(spec));
    }
    std::vector<Edge> edges;
    if (j.contains("edges")) {
      for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2) throw Error(Errc::ParseError, "edge must be [parent, child]");
        edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
      }
    }
    return CausalDag::build(nodes, edges);
  } catch (const nlohmann::json::exception& ex) {
    throw Error(Errc::ParseError, ex.what());
  }
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& ex) {
    throw Error(Errc::ParseError, path + ": " + ex.what());
  }
}

inline CausalDag read_dag_file(const std::string& path) { return dag_from_json(read_json_file(path)); }

/// Graphviz export, one edge per line. Edges lying on any of `highlight`
/// paths get a red colour attribute.
inline std::string dag_to_dot(const CausalDag& dag, const std::vector<PathWitness>& highlight = {}) {
  std::set<Edge> marked;
  for (const auto& p : highlight) {
    for (std::size_t i = 0; i < p.steps.size(); ++i) {
      if (p.steps[i] == Step::Forward) {
        marked.emplace(p.nodes[i], p.nodes[i + 1]);
      } else {
        marked.emplace(p.nodes[i + 1], p.nodes[i]);
      }
    }
  }
  std::ostringstream os;
  os << "digraph causal {\n";
  for (const auto& n : dag.node_specs()) {
    os << "  \"" << n.id << "\" [role=\"" << role_name(n.role) << "\""
       << (n.role == Role::UnobservedConfounder ? ", style=dashed" : "") << "];\n";
  }
  for (const auto& e : dag.edges()) {
    os << "  \"" << e.first << "\" -> \"" << e.second << "\"";
    if (marked.count(e)) os << " [color=red, label=\"backdoor\"]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace causalkit
