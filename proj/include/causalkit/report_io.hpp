#pragma once

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "causalkit/iptw.hpp"
#include "causalkit/regression.hpp"

namespace causalkit {

inline std::string fixed4(double v) {
  if (std::isnan(v)) return "NA";
  if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

inline std::string pvalue4(double p) {
  if (std::isnan(p)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, p < 1e-4 ? "%.4g" : "%.4f", p);
  return buf;
}

namespace detail {
inline void pad(std::ostringstream& os, const std::string& s, std::size_t width, bool left = false) {
  if (left) {
    os << s << std::string(width > s.size() ? width - s.size() : 1, ' ');
  } else {
    os << std::string(width > s.size() ? width - s.size() : 1, ' ') << s;
  }
}
}  // namespace detail

/// Aligned table: term, estimate, se, t, p, ci_low, ci_high.
inline std::string report_to_text(const CoefficientReport& r) {
  std::size_t name_w = 4;
  for (const auto& t : r.terms) name_w = std::max(name_w, t.name.size());
  name_w += 2;
  std::ostringstream os;
  detail::pad(os, "term", name_w, true);
  for (const char* h : {"estimate", "se", "t", "p", "ci_low", "ci_high"}) detail::pad(os, h, 12);
  os << '\n';
  for (const auto& t : r.terms) {
    detail::pad(os, t.name, name_w, true);
    detail::pad(os, fixed4(t.estimate), 12);
    detail::pad(os, fixed4(t.se), 12);
    detail::pad(os, fixed4(t.t), 12);
    detail::pad(os, pvalue4(t.p), 12);
    detail::pad(os, t.ci ? fixed4(t.ci->lower) : "-", 12);
    detail::pad(os, t.ci ? fixed4(t.ci->upper) : "-", 12);
    if (t.ci_excludes_estimate) os << "  (interval excludes estimate)";
    os << '\n';
  }
  os << "n = " << r.n << ", df = " << r.df << ", residual variance = " << fixed4(r.residual_variance)
     << ", se: " << r.se_kind;
  if (r.bootstrap) {
    os << ", bootstrap B = " << r.bootstrap->replicates << " (failed " << r.bootstrap->failures
       << "), level = " << r.bootstrap->level << ", seed = " << r.bootstrap->seed;
  }
  os << '\n';
  return os.str();
}

inline nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

inline nlohmann::json report_to_json(const CoefficientReport& r) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : r.terms) {
    nlohmann::json j{{"term", t.name},
                     {"estimate", number_or_null(t.estimate)},
                     {"se", number_or_null(t.se)},
                     {"t", number_or_null(t.t)},
                     {"p", number_or_null(t.p)}};
    if (t.ci) {
      j["ci_low"] = t.ci->lower;
      j["ci_high"] = t.ci->upper;
      j["ci_excludes_estimate"] = t.ci_excludes_estimate;
    }
    if (t.bootstrap_se) j["bootstrap_se"] = *t.bootstrap_se;
    terms.push_back(std::move(j));
  }
  nlohmann::json out{{"terms", terms},
                     {"n", r.n},
                     {"df", r.df},
                     {"residual_variance", number_or_null(r.residual_variance)},
                     {"se_kind", r.se_kind}};
  if (r.bootstrap) {
    out["bootstrap"] = {{"replicates", r.bootstrap->replicates},
                        {"failures", r.bootstrap->failures},
                        {"level", r.bootstrap->level},
                        {"seed", r.bootstrap->seed}};
  }
  return out;
}

/// CSV with columns unit, W, SW.
inline std::string weights_to_csv(const WeightVector& w) {
  std::ostringstream os;
  os << "unit,W,SW\n";
  for (std::size_t i = 0; i < w.stabilized.size(); ++i) {
    os << i << ',' << format_number(w.unstabilized[i]) << ',' << format_number(w.stabilized[i]) << '\n';
  }
  return os.str();
}

}  // namespace causalkit
