#pragma once

#include <nlohmann/json.hpp>

#include "causalkit/dag_io.hpp"
#include "causalkit/scm.hpp"

namespace causalkit {

inline nlohmann::json equation_to_json(const Equation& eq) {
  if (const auto* b = std::get_if<BernoulliLinear>(&eq)) {
    nlohmann::json coefs = nlohmann::json::object();
    for (const auto& [p, c] : b->coefficients) coefs[p] = c;
    return {{"kind", "bernoulli"}, {"intercept", b->intercept}, {"coefficients", coefs}};
  }
  if (const auto* g = std::get_if<GaussianLinear>(&eq)) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : g->terms) terms.push_back({{"parents", t.parents}, {"coef", t.coef}});
    return {{"kind", "gaussian"}, {"intercept", g->intercept}, {"terms", terms}, {"sigma", g->sigma}};
  }
  const auto& c = std::get<Constant>(eq);
  return {{"kind", "constant"}, {"value", c.value}, {"binary", c.binary}};
}

inline Equation equation_from_json(const std::string& node, const nlohmann::json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "bernoulli") {
    BernoulliLinear b;
    b.intercept = j.value("intercept", 0.0);
    if (j.contains("coefficients")) {
      for (const auto& [p, c] : j.at("coefficients").items()) b.coefficients[p] = c.get<double>();
    }
    return b;
  }
  if (kind == "gaussian") {
    GaussianLinear g;
    g.intercept = j.value("intercept", 0.0);
    g.sigma = j.at("sigma").get<double>();
    if (j.contains("terms")) {
      for (const auto& t : j.at("terms")) {
        g.terms.push_back({t.at("parents").get<std::vector<std::string>>(), t.at("coef").get<double>()});
      }
    }
    return g;
  }
  if (kind == "constant") {
    return Constant{j.at("value").get<double>(), j.value("binary", true)};
  }
  throw Error(Errc::ParseError, "node '" + node + "': unknown equation kind '" + kind + "'");
}

inline nlohmann::json scm_to_json(const StructuralModel& model) {
  nlohmann::json eqs = nlohmann::json::object();
  for (const auto& [node, eq] : model.equations()) eqs[node] = equation_to_json(eq);
  return {{"dag", dag_to_json(model.dag())}, {"equations", eqs}};
}

/// {"dag": {...}, "equations": {"X": {"kind": "bernoulli", ...}, ...}}
inline StructuralModel scm_from_json(const nlohmann::json& j) {
  CausalDag dag;
  std::map<std::string, Equation> eqs;
  try {
    dag = dag_from_json(j.at("dag"));
    for (const auto& [node, e] : j.at("equations").items()) eqs[node] = equation_from_json(node, e);
  } catch (const nlohmann::json::exception& ex) {
    throw Error(Errc::ParseError, ex.what());
  }
  return build_scm(std::move(dag), std::move(eqs));
}

inline StructuralModel read_scm_file(const std::string& path) { return scm_from_json(read_json_file(path)); }

}  // namespace causalkit
