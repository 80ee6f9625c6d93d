// causalkit command-line front end.
//
// Exit status: 0 success (or "separated"/"valid"/all verdicts ok), 1 a
// domain-negative answer, 2 usage, input or validation errors.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "causalkit/causalkit.hpp"

using namespace causalkit;

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kError = 2;

std::vector<std::string> split(const std::string& s, char sep, bool keep_empty = false) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    if (keep_empty || !cur.empty()) out.push_back(cur);
  }
  if (keep_empty && !s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::vector<Term> parse_terms(const std::vector<std::string>& specs) {
  std::vector<Term> terms;
  for (const auto& s : specs) terms.push_back(split(s, '*'));
  return terms;
}

// "L1;L2;L3" -> {{L1},{L2},{L3}}; commas separate columns within one time,
// empty segments are allowed (";L2;L3").
std::vector<std::vector<std::string>> parse_confounders(const std::string& s, std::size_t times) {
  std::vector<std::vector<std::string>> out;
  for (const auto& seg : split(s, ';', true)) out.push_back(split(seg, ','));
  if (s.empty()) out.clear();
  if (out.empty() && times > 0) out.resize(times);
  if (out.size() != times) {
    throw Error(Errc::InvalidArgument, "--confounders needs " + std::to_string(times) +
                                           " ';'-separated sets, got " + std::to_string(out.size()));
  }
  return out;
}

// "X2|X1,L2|" -> treatment X2, denominator {X1, L2}, numerator {}.
WeightFactor parse_factor(const std::string& s) {
  const auto parts = split(s, '|', true);
  if (parts.size() != 3 || parts[0].empty()) {
    throw Error(Errc::InvalidArgument, "--factor must look like TREATMENT|DENOMINATOR,...|NUMERATOR,...");
  }
  return {parts[0], split(parts[1], ','), split(parts[2], ',')};
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw Error(Errc::InvalidArgument, "cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::string report_to_csv(const CoefficientReport& r) {
  std::ostringstream os;
  os << "term,estimate,se,t,p,ci_low,ci_high\n";
  auto num = [](double v) { return std::isfinite(v) ? format_number(v) : std::string(); };
  for (const auto& t : r.terms) {
    os << t.name << ',' << num(t.estimate) << ',' << num(t.se) << ',' << num(t.t) << ',' << num(t.p) << ','
       << (t.ci ? num(t.ci->lower) : "") << ',' << (t.ci ? num(t.ci->upper) : "") << '\n';
  }
  return os.str();
}

void emit_report(std::ostream& os, const CoefficientReport& r, const std::string& format) {
  if (format == "json") {
    os << report_to_json(r).dump(2) << '\n';
  } else if (format == "csv") {
    os << report_to_csv(r);
  } else {
    os << report_to_text(r);
  }
}

// Named scalar results (adjusted means, regime means).
void emit_values(std::ostream& os, const std::vector<std::pair<std::string, double>>& rows,
                 const std::string& header, const std::string& format) {
  if (format == "json") {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& [k, v] : rows) j.push_back({{"name", k}, {"value", number_or_null(v)}});
    os << nlohmann::json{{header, j}}.dump(2) << '\n';
  } else if (format == "csv") {
    os << "name,value\n";
    for (const auto& [k, v] : rows) os << k << ',' << format_number(v) << '\n';
  } else {
    std::size_t w = 4;
    for (const auto& [k, _] : rows) w = std::max(w, k.size());
    for (const auto& [k, v] : rows) os << k << std::string(w + 2 - k.size(), ' ') << fixed4(v) << '\n';
  }
}

std::string regime_label(const std::vector<std::string>& treatments, std::size_t r) {
  std::string s;
  for (std::size_t j = 0; j < treatments.size(); ++j) {
    s += (j ? "," : "") + treatments[j] + "=" + std::to_string((r >> j) & 1u);
  }
  return s;
}

struct Common {
  std::string out;
  std::string format = "text";
};

void add_format(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "text, json or csv")->check(CLI::IsMember({"text", "json", "csv"}));
  cmd->add_option("-o,--out", c.out, "output file (default: standard output)");
}

// ---------------------------------------------------------------- dsep / paths

struct QueryArgs {
  std::string dag;
  std::string x, y;
  std::vector<std::string> given;
  bool verbose = false;
};

int cmd_dsep(const QueryArgs& a) {
  const auto dag = read_dag_file(a.dag);
  const NodeSet z(a.given.begin(), a.given.end());
  const bool sep = d_separated(dag, a.x, a.y, z);
  std::cout << (sep ? "d-separated" : "d-connected") << '\n';
  if (!sep && a.verbose) {
    for (const auto& p : open_paths(dag, a.x, a.y, z)) std::cout << "  open: " << p.to_string() << '\n';
  }
  return sep ? kOk : kNegative;
}

int cmd_paths(const QueryArgs& a, bool backdoor_only, const Common& c) {
  const auto dag = read_dag_file(a.dag);
  const NodeSet z(a.given.begin(), a.given.end());
  const auto paths = backdoor_only ? backdoor_paths(dag, a.x, a.y) : all_paths(dag, a.x, a.y);
  if (!backdoor_only) detail::check_query(dag, a.x, a.y, z);
  Output out(c.out);
  auto& os = out.stream();
  if (c.format == "json") {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& p : paths) {
      nlohmann::json triples = nlohmann::json::array();
      for (auto t : p.triples) triples.push_back(std::string(triple_name(t)));
      j.push_back({{"path", p.to_string()},
                   {"nodes", p.nodes},
                   {"triples", triples},
                   {"backdoor", p.is_backdoor()},
                   {"blocked", path_blocked(dag, p, z)}});
    }
    os << j.dump(2) << '\n';
  } else {
    for (const auto& p : paths) {
      os << (path_blocked(dag, p, z) ? "blocked " : "open    ") << p.to_string();
      if (!p.triples.empty()) {
        os << "  [";
        for (std::size_t i = 0; i < p.triples.size(); ++i) {
          os << (i ? ", " : "") << p.nodes[i + 1] << ": " << triple_name(p.triples[i]);
        }
        os << "]";
      }
      os << '\n';
    }
  }
  return kOk;
}

int cmd_adjust_check(const QueryArgs& a) {
  const auto dag = read_dag_file(a.dag);
  const NodeSet z(a.given.begin(), a.given.end());
  const bool ok = is_valid_adjustment_set(dag, a.x, a.y, z);
  std::cout << (ok ? "valid" : "invalid") << '\n';
  if (!ok) {
    const auto desc = dag.descendants(a.x);
    for (const auto& n : z) {
      if (desc.count(n)) std::cout << "  descendant of " << a.x << ": " << n << '\n';
    }
    for (const auto& p : backdoor_paths(dag, a.x, a.y)) {
      if (!path_blocked(dag, p, z)) std::cout << "  open backdoor: " << p.to_string() << '\n';
    }
  }
  return ok ? kOk : kNegative;
}

// ---------------------------------------------------------------- intervene

int cmd_intervene(const std::string& path, const std::vector<std::string>& assignments, const Common& c) {
  const auto j = read_json_file(path);
  std::map<std::string, double> values;
  NodeSet targets;
  for (const auto& a : assignments) {
    const auto eq = a.find('=');
    const std::string name = a.substr(0, eq);
    targets.insert(name);
    if (eq != std::string::npos) {
      try {
        values[name] = std::stod(a.substr(eq + 1));
      } catch (const std::exception&) {
        throw Error(Errc::InvalidArgument, "bad value in '" + a + "'");
      }
    }
  }
  Output out(c.out);
  if (j.contains("equations")) {
    if (values.size() != targets.size()) {
      throw Error(Errc::InvalidArgument, "an SCM intervention needs NODE=VALUE for every target");
    }
    out.stream() << scm_to_json(apply_intervention(scm_from_json(j), values)).dump(2) << '\n';
  } else {
    out.stream() << dag_to_json(intervene(dag_from_json(j), targets)).dump(2) << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const std::string& path, std::size_t n, std::uint64_t seed, const std::string& out_path) {
  if (n == 0) throw CLI::ValidationError("--n", "must be at least 1");
  const auto model = read_scm_file(path);
  for (const auto& w : model.warnings()) std::cerr << "warning: " << w << '\n';
  Output out(out_path);
  write_csv(out.stream(), simulate(model, n, seed));
  return kOk;
}

// ---------------------------------------------------------------- estimate

struct EstimateArgs {
  std::string data;
  std::string method;
  std::string scenario;
  std::string outcome;
  std::string treatment;
  std::vector<std::string> treatments;
  std::vector<std::string> terms;
  std::vector<std::string> adjust;
  std::string confounders;
  bool confounders_given = false;
  std::vector<std::string> factors;
  std::vector<int> regime;
  std::string numerators = "history";
  bool unstabilized = false;
  std::string weights_out;
  std::string time, value, running;
  std::optional<double> interruption, cutoff, bandwidth;
  std::size_t bootstrap = 0;
  double level = 0.95;
  std::optional<std::uint64_t> seed;
  Common common;
};

void require(bool present, const std::string& flag, const std::string& method) {
  if (!present) throw CLI::RequiredError(flag + " (required by --method " + method + ")");
}

CoefficientReport maybe_bootstrap(const Dataset& data, const Estimator& est, const EstimateArgs& a) {
  if (a.bootstrap == 0) return est(data);
  if (!a.seed) throw CLI::RequiredError("--seed (required with --bootstrap)");
  return bootstrap_ci(data, est, a.bootstrap, a.level, *a.seed);
}

int cmd_estimate(EstimateArgs a) {
  const auto data = read_csv_file(a.data);
  Output out(a.common.out);
  auto& os = out.stream();

  std::optional<ScenarioSpec> scenario;
  if (!a.scenario.empty()) {
    scenario = find_scenario(a.scenario);
    if (a.outcome.empty()) a.outcome = scenario->outcome;
    if (a.treatments.empty()) a.treatments = scenario->treatments;
  }
  auto confounders = [&] {
    if (!a.confounders_given && scenario) return scenario->confounders;
    return parse_confounders(a.confounders, a.treatments.size());
  };

  if (a.method == "ols") {
    require(!a.outcome.empty(), "--outcome", a.method);
    require(!a.terms.empty(), "--terms", a.method);
    const auto terms = parse_terms(a.terms);
    const Estimator est = [&](const Dataset& d) { return fit_ols(d, a.outcome, terms); };
    emit_report(os, maybe_bootstrap(data, est, a), a.common.format);
  } else if (a.method == "standardize") {
    require(!a.treatment.empty(), "--treatment", a.method);
    require(!a.outcome.empty(), "--outcome", a.method);
    const auto r = standardize(data, a.treatment, a.outcome, a.adjust);
    emit_values(os,
                {{a.treatment + "=0", r.mean_untreated}, {a.treatment + "=1", r.mean_treated}, {"ate", r.ate}},
                "adjusted_means", a.common.format);
  } else if (a.method == "iptw-msm") {
    require(!a.treatments.empty(), "--treatments", a.method);
    require(!a.outcome.empty(), "--outcome", a.method);
    WeightModel model;
    if (!a.factors.empty()) {
      for (const auto& f : a.factors) model.push_back(parse_factor(f));
    } else if (scenario && !a.confounders_given) {
      model = scenario->weights;
    } else {
      model = history_weight_model(a.treatments, confounders());
      if (a.numerators == "marginal") {
        for (auto& f : model) f.numerator.clear();
      }
    }
    const bool stab = !a.unstabilized;
    const auto weights = iptw_weights(data, model);
    if (!a.weights_out.empty()) {
      Output w(a.weights_out);
      w.stream() << weights_to_csv(weights);
    }
    const auto terms = saturated_terms(a.treatments);
    const Estimator est = [&](const Dataset& d) {
      return fit_msm(d, iptw_weights(d, model), a.outcome, terms, stab);
    };
    auto report = maybe_bootstrap(data, est, a);
    emit_report(os, report, a.common.format);
    if (a.common.format == "text") {
      os << "mean W = " << fixed4(weights.mean_unstabilized) << ", mean SW = " << fixed4(weights.mean_stabilized)
         << '\n';
    }
  } else if (a.method == "g-formula") {
    require(!a.treatments.empty(), "--treatments", a.method);
    require(!a.outcome.empty(), "--outcome", a.method);
    const auto conf = confounders();
    if (!a.regime.empty()) {
      const double m = g_formula(data, a.treatments, conf, a.outcome, a.regime);
      std::size_t r = 0;
      for (std::size_t j = 0; j < a.regime.size(); ++j) r |= static_cast<std::size_t>(a.regime[j] != 0) << j;
      emit_values(os, {{regime_label(a.treatments, r), m}}, "regime_means", a.common.format);
    } else if (a.bootstrap > 0) {
      const Estimator est = [&](const Dataset& d) { return g_formula_report(d, a.treatments, conf, a.outcome); };
      emit_report(os, maybe_bootstrap(data, est, a), a.common.format);
    } else {
      const auto fit = g_formula_coefficients(data, a.treatments, conf, a.outcome);
      std::vector<std::pair<std::string, double>> rows;
      for (std::size_t r = 0; r < fit.regime_means.size(); ++r) {
        rows.emplace_back(regime_label(a.treatments, r), fit.regime_means[r]);
      }
      if (a.treatments.size() > 1) {
        for (const auto& [k, v] : fit.coefficients) rows.emplace_back(k, v);
      }
      emit_values(os, rows, "g_formula", a.common.format);
    }
  } else if (a.method == "its") {
    require(!a.time.empty(), "--time", a.method);
    require(!a.value.empty(), "--value", a.method);
    require(a.interruption.has_value(), "--interruption", a.method);
    const auto& t = data.values(a.time);
    const auto& v = data.values(a.value);
    std::vector<std::pair<double, double>> series;
    for (std::size_t i = 0; i < data.rows(); ++i) series.emplace_back(t[i], v[i]);
    emit_report(os, its_segmented(series, *a.interruption), a.common.format);
  } else if (a.method == "rd") {
    require(!a.running.empty(), "--running", a.method);
    require(!a.outcome.empty(), "--outcome", a.method);
    require(a.cutoff.has_value(), "--cutoff", a.method);
    require(a.bandwidth.has_value(), "--bandwidth", a.method);
    const Estimator est = [&](const Dataset& d) {
      return rd_estimate(d, a.running, a.outcome, *a.cutoff, *a.bandwidth);
    };
    emit_report(os, maybe_bootstrap(data, est, a), a.common.format);
  }
  return kOk;
}

// ---------------------------------------------------------------- reproduce

int cmd_reproduce(const std::string& id, const std::vector<std::string>& methods, const ReproduceOptions& opt,
                  const Common& c) {
  const auto s = find_scenario(id);
  const auto rows = reproduce(s, methods, opt);
  bool all_ok = true;
  for (const auto& r : rows) all_ok &= r.verdict != Verdict::Mismatch;
  Output out(c.out);
  auto& os = out.stream();
  if (c.format == "json") {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::json row{{"method", r.method},
                         {"term", r.term},
                         {"truth", r.truth},
                         {"estimate", number_or_null(r.estimate)},
                         {"se", number_or_null(r.se)},
                         {"verdict", std::string(verdict_name(r.verdict))}};
      if (r.ci) {
        row["ci_low"] = r.ci->lower;
        row["ci_high"] = r.ci->upper;
      }
      if (!r.note.empty()) row["note"] = r.note;
      j.push_back(std::move(row));
    }
    os << nlohmann::json{{"scenario", s.id}, {"anchor", s.anchor}, {"n", opt.n}, {"seed", opt.seed},
                         {"bootstrap", opt.bootstrap}, {"rows", j}}
              .dump(2)
       << '\n';
  } else if (c.format == "csv") {
    os << "method,term,truth,estimate,se,ci_low,ci_high,verdict\n";
    auto num = [](double v) { return std::isfinite(v) ? format_number(v) : std::string(); };
    for (const auto& r : rows) {
      os << r.method << ',' << r.term << ',' << num(r.truth) << ',' << num(r.estimate) << ',' << num(r.se) << ','
         << (r.ci ? num(r.ci->lower) : "") << ',' << (r.ci ? num(r.ci->upper) : "") << ','
         << verdict_name(r.verdict) << '\n';
    }
  } else {
    os << s.id << ": " << s.anchor << '\n';
    os << "n = " << opt.n << ", seed = " << opt.seed << ", bootstrap B = " << opt.bootstrap << '\n';
    char line[256];
    std::snprintf(line, sizeof line, "%-14s %-10s %10s %10s %10s %10s %10s  %s\n", "method", "term", "truth",
                  "estimate", "se", "ci_low", "ci_high", "verdict");
    os << line;
    std::string last_note;
    for (const auto& r : rows) {
      std::snprintf(line, sizeof line, "%-14s %-10s %10s %10s %10s %10s %10s  %s\n", r.method.c_str(),
                    r.term.c_str(), fixed4(r.truth).c_str(), fixed4(r.estimate).c_str(), fixed4(r.se).c_str(),
                    r.ci ? fixed4(r.ci->lower).c_str() : "-", r.ci ? fixed4(r.ci->upper).c_str() : "-",
                    std::string(verdict_name(r.verdict)).c_str());
      os << line;
      if (!r.note.empty() && r.note != last_note) os << "  note: " << r.note << '\n';
      last_note = r.note;
    }
  }
  return all_ok ? kOk : kNegative;
}

// ---------------------------------------------------------------- catalog / dot

int cmd_catalog(const std::string& export_id, const Common& c) {
  Output out(c.out);
  auto& os = out.stream();
  if (!export_id.empty()) {
    os << scm_to_json(find_scenario(export_id).model).dump(2) << '\n';
    return kOk;
  }
  const auto all = catalog();
  if (c.format == "json") {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& s : all) {
      nlohmann::json methods = nlohmann::json::array();
      for (const auto& m : s.methods) methods.push_back(m.id);
      nlohmann::json truth = nlohmann::json::object();
      for (const auto& [k, v] : s.reference_truth) truth[k] = v;
      j.push_back({{"id", s.id},
                   {"anchor", s.anchor},
                   {"treatments", s.treatments},
                   {"outcome", s.outcome},
                   {"observed", s.observed},
                   {"methods", methods},
                   {"truth", truth}});
    }
    os << j.dump(2) << '\n';
    return kOk;
  }
  for (const auto& s : all) {
    os << s.id << '\n' << "  " << s.anchor << '\n' << "  methods:";
    for (const auto& m : s.methods) os << ' ' << m.id;
    os << "\n  truth:";
    for (const auto& [k, v] : s.reference_truth) os << ' ' << k << '=' << fixed4(v);
    os << '\n';
  }
  return kOk;
}

int cmd_export_dot(const std::string& path, const std::vector<std::string>& backdoor, const std::string& out_path) {
  const auto j = read_json_file(path);
  const auto dag = j.contains("equations") ? scm_from_json(j).dag() : dag_from_json(j);
  std::vector<PathWitness> highlight;
  if (!backdoor.empty()) {
    if (backdoor.size() != 2) throw CLI::ValidationError("--backdoor", "takes TREATMENT OUTCOME");
    highlight = backdoor_paths(dag, backdoor[0], backdoor[1]);
  }
  Output out(out_path);
  out.stream() << dag_to_dot(dag, highlight);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"causalkit: causal DAGs, structural models and effect estimators"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "causalkit 0.1.0");

  QueryArgs q;
  Common common;
  bool backdoor_only = false;

  auto* dsep = app.add_subcommand("dsep", "test d-separation of X and Y given a set");
  dsep->add_option("dag", q.dag, "DAG JSON file")->required();
  dsep->add_option("x", q.x)->required();
  dsep->add_option("y", q.y)->required();
  dsep->add_option("--given,-g", q.given, "conditioning nodes")->delimiter(',');
  dsep->add_flag("-v,--verbose", q.verbose, "list open paths when d-connected");

  auto* paths = app.add_subcommand("paths", "list paths between X and Y with their blocking status");
  paths->add_option("dag", q.dag)->required();
  paths->add_option("x", q.x)->required();
  paths->add_option("y", q.y)->required();
  paths->add_option("--given,-g", q.given)->delimiter(',');
  paths->add_flag("--backdoor", backdoor_only, "only paths entering X");
  add_format(paths, common);

  auto* adjust = app.add_subcommand("adjust-check", "check the backdoor criterion for an adjustment set");
  adjust->add_option("dag", q.dag)->required();
  adjust->add_option("x", q.x)->required();
  adjust->add_option("y", q.y)->required();
  adjust->add_option("--set,-z", q.given, "adjustment set")->delimiter(',');

  std::string model_path;
  std::vector<std::string> assignments;
  auto* interv = app.add_subcommand("intervene", "graph surgery on a DAG, or do() on an SCM");
  interv->add_option("file", model_path, "DAG or SCM JSON file")->required();
  interv->add_option("--do", assignments, "NODE or NODE=VALUE (values required for SCM files)")
      ->delimiter(',')
      ->required();
  interv->add_option("-o,--out", common.out);

  std::size_t n = 0;
  std::uint64_t seed = 0;
  auto* sim = app.add_subcommand("simulate", "draw a dataset from an SCM");
  sim->add_option("scm", model_path, "SCM JSON file")->required();
  sim->add_option("-n,--n", n, "number of units")->required();
  sim->add_option("--seed", seed)->required();
  sim->add_option("-o,--out", common.out, "CSV output (default: standard output)");

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "fit an estimator to a CSV dataset");
  estimate->add_option("data", est.data, "CSV file")->required();
  estimate->add_option("--method,-m", est.method)
      ->required()
      ->check(CLI::IsMember({"ols", "standardize", "iptw-msm", "g-formula", "its", "rd"}));
  estimate->add_option("--scenario", est.scenario, "take treatments, confounders and weights from a catalog entry");
  estimate->add_option("--outcome,-y", est.outcome);
  estimate->add_option("--treatment", est.treatment, "standardize: binary treatment");
  estimate->add_option("--treatments", est.treatments, "ordered treatment columns")->delimiter(',');
  estimate->add_option("--terms", est.terms, "ols terms, interactions written A*B")->delimiter(',');
  estimate->add_option("--adjust", est.adjust, "standardize: adjustment columns")->delimiter(',');
  auto* conf_opt = estimate->add_option("--confounders", est.confounders,
                                        "per-time confounder sets, e.g. 'L1;L2;L3' or ';L2;L3'");
  estimate->add_option("--factor", est.factors, "iptw-msm weight factor TREATMENT|DENOM,...|NUMER,...");
  estimate->add_option("--numerators", est.numerators, "iptw-msm numerators when no --factor is given")
      ->check(CLI::IsMember({"history", "marginal"}));
  estimate->add_flag("--unstabilized", est.unstabilized, "iptw-msm: fit with W instead of SW");
  estimate->add_option("--weights-out", est.weights_out, "iptw-msm: write per-unit W and SW as CSV");
  estimate->add_option("--regime", est.regime, "g-formula: one regime, e.g. 1,1,0")->delimiter(',');
  estimate->add_option("--time", est.time, "its: time column");
  estimate->add_option("--value", est.value, "its: series column");
  estimate->add_option("--interruption", est.interruption, "its: first post-interruption time");
  estimate->add_option("--running", est.running, "rd: running variable");
  estimate->add_option("--cutoff", est.cutoff, "rd: assignment threshold");
  estimate->add_option("--bandwidth", est.bandwidth, "rd: half-width of the estimation window");
  estimate->add_option("--bootstrap,-B", est.bootstrap, "bootstrap replicates (0 = none, otherwise >= 100)");
  estimate->add_option("--level", est.level, "interval coverage")->check(CLI::Range(0.0, 1.0));
  estimate->add_option("--seed", est.seed, "required with --bootstrap");
  add_format(estimate, est.common);

  std::string scenario_id;
  std::vector<std::string> methods;
  ReproduceOptions ropt;
  auto* repro = app.add_subcommand("reproduce", "rerun a tabulated simulation study and judge each estimate");
  repro->add_option("scenario", scenario_id)->required();
  repro->add_option("--methods", methods, "comma-separated method ids (default: the study's rows)")->delimiter(',');
  repro->add_option("-n,--n", ropt.n, "units")->required();
  repro->add_option("--seed", ropt.seed)->required();
  repro->add_option("--bootstrap,-B", ropt.bootstrap, "bootstrap replicates (0 = none)");
  repro->add_option("--level", ropt.level)->check(CLI::Range(0.0, 1.0));
  repro->add_option("--tolerance", ropt.tolerance, "absolute tolerance for unbiased terms");
  add_format(repro, common);

  std::string export_id;
  auto* cat = app.add_subcommand("catalog", "list the built-in simulation studies");
  cat->add_option("--export", export_id, "print the SCM JSON of one study");
  add_format(cat, common);

  std::vector<std::string> backdoor;
  auto* dot = app.add_subcommand("export-dot", "Graphviz rendering of a DAG or SCM file");
  dot->add_option("file", model_path)->required();
  dot->add_option("--backdoor", backdoor, "TREATMENT OUTCOME: highlight backdoor paths")->expected(2);
  dot->add_option("-o,--out", common.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kError;
  }

  try {
    if (*dsep) return cmd_dsep(q);
    if (*paths) return cmd_paths(q, backdoor_only, common);
    if (*adjust) return cmd_adjust_check(q);
    if (*interv) return cmd_intervene(model_path, assignments, common);
    if (*sim) {
      if (n == 0) {
        std::cerr << "--n: must be at least 1\n";
        return kError;
      }
      return cmd_simulate(model_path, n, seed, common.out);
    }
    if (*estimate) {
      est.confounders_given = conf_opt->count() > 0;
      if (est.bootstrap > 0 && !est.seed) {
        std::cerr << "--seed is required with --bootstrap\n";
        return kError;
      }
      return cmd_estimate(est);
    }
    if (*repro) {
      if (ropt.n == 0) {
        std::cerr << "--n: must be at least 1\n";
        return kError;
      }
      return cmd_reproduce(scenario_id, methods, ropt, common);
    }
    if (*cat) return cmd_catalog(export_id, common);
    if (*dot) return cmd_export_dot(model_path, backdoor, common.out);
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << '\n';
    return kError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}
