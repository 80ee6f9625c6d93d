#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>

#include "causalkit/dataset.hpp"
#include "causalkit/saturated.hpp"

namespace causalkit {

struct Interval {
  double lower = 0;
  double upper = 0;
};

struct TermEstimate {
  std::string name;
  double estimate = 0;
  double se = 0;
  double t = 0;
  double p = 1;
  std::optional<Interval> ci;
  std::optional<double> bootstrap_se;
  bool ci_excludes_estimate = false;  // percentile quirk, flagged only
};

struct BootstrapInfo {
  double level = 0.95;
  std::size_t replicates = 0;
  std::size_t failures = 0;
  std::uint64_t seed = 0;
};

/// Term-wise fit summary. Standard errors are homoskedastic for OLS and
/// HC0 sandwich for weighted fits (se_kind says which).
struct CoefficientReport {
  std::vector<TermEstimate> terms;
  std::size_t n = 0;
  std::size_t df = 0;
  double residual_variance = 0;
  std::string se_kind = "ols";
  std::optional<BootstrapInfo> bootstrap;

  const TermEstimate& term(const std::string& name) const {
    for (const auto& t : terms) {
      if (t.name == name) return t;
    }
    throw Error(Errc::InvalidArgument, "no term '" + name + "' in report");
  }

  double estimate(const std::string& name) const { return term(name).estimate; }

  CoefficientMap estimates() const {
    CoefficientMap out;
    for (const auto& t : terms) out.emplace_back(t.name, t.estimate);
    return out;
  }
};

/// Two-sided p-value of a t statistic with `df` degrees of freedom.
inline double two_sided_p(double t, double df) {
  if (std::isnan(t)) return 1.0;
  if (std::isinf(t)) return 0.0;
  if (df <= 0) return std::numeric_limits<double>::quiet_NaN();
  boost::math::students_t dist(df);
  return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
}

struct Design {
  Eigen::MatrixXd x;
  std::vector<std::string> names;
};

/// Intercept column followed by one column per term; a multi-column term is
/// the elementwise product and is named "A*B".
inline Design build_design(const Dataset& data, const std::vector<Term>& terms, bool intercept = true) {
  const auto n = static_cast<Eigen::Index>(data.rows());
  Design d;
  d.x.resize(n, static_cast<Eigen::Index>(terms.size() + (intercept ? 1 : 0)));
  Eigen::Index col = 0;
  if (intercept) {
    d.x.col(col++).setOnes();
    d.names.push_back("Intercept");
  }
  for (const auto& term : terms) {
    if (term.empty()) throw Error(Errc::InvalidArgument, "empty term");
    auto c = d.x.col(col++);
    c.setOnes();
    for (const auto& name : term) {
      const auto& v = data.values(name);
      for (Eigen::Index i = 0; i < n; ++i) c(i) *= v[static_cast<std::size_t>(i)];
    }
    d.names.push_back(term_name(term));
  }
  return d;
}

namespace detail {

inline void require_full_rank(const Design& d) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(d.x);
  qr.setThreshold(1e-10);
  if (qr.rank() == d.x.cols()) return;
  // name the first column lying in the span of the ones before it
  for (Eigen::Index j = 1; j <= d.x.cols(); ++j) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> sub(d.x.leftCols(j));
    sub.setThreshold(1e-10);
    if (sub.rank() < j) {
      throw Error(Errc::RankDeficient, "column '" + d.names[static_cast<std::size_t>(j - 1)] +
                                           "' is linearly dependent on earlier columns");
    }
  }
  throw Error(Errc::RankDeficient, "design matrix is rank deficient");
}

inline void fill_inference(CoefficientReport& r, const std::vector<std::string>& names,
                           const Eigen::VectorXd& beta, const Eigen::VectorXd& se) {
  r.terms.clear();
  for (std::size_t j = 0; j < names.size(); ++j) {
    TermEstimate t;
    t.name = names[j];
    t.estimate = beta(static_cast<Eigen::Index>(j));
    t.se = se(static_cast<Eigen::Index>(j));
    if (t.se > 0) {
      t.t = t.estimate / t.se;
    } else {
      t.t = t.estimate == 0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), t.estimate);
    }
    t.p = t.estimate == 0 && t.se == 0 ? 1.0 : two_sided_p(t.t, static_cast<double>(r.df));
    r.terms.push_back(std::move(t));
  }
}

}  // namespace detail

/// Least squares on a prepared design with homoskedastic standard errors.
inline CoefficientReport fit_design(const Design& d, const Eigen::VectorXd& y) {
  const auto n = d.x.rows(), p = d.x.cols();
  if (n <= p) {
    throw Error(Errc::InsufficientRows, std::to_string(n) + " rows for " + std::to_string(p) + " coefficients");
  }
  detail::require_full_rank(d);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(d.x);
  const Eigen::VectorXd beta = qr.solve(y);
  const Eigen::VectorXd resid = y - d.x * beta;
  CoefficientReport r;
  r.n = static_cast<std::size_t>(n);
  r.df = static_cast<std::size_t>(n - p);
  r.residual_variance = resid.squaredNorm() / static_cast<double>(r.df);
  const Eigen::MatrixXd xtx_inv = (d.x.transpose() * d.x).inverse();
  const Eigen::VectorXd se = (r.residual_variance * xtx_inv.diagonal()).cwiseMax(0.0).cwiseSqrt();
  detail::fill_inference(r, d.names, beta, se);
  return r;
}

inline Eigen::VectorXd column_vector(const Dataset& data, const std::string& name) {
  const auto& v = data.values(name);
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

/// OLS of `outcome` on an intercept plus `terms`.
inline CoefficientReport fit_ols(const Dataset& data, const std::string& outcome, const std::vector<Term>& terms) {
  const auto y = column_vector(data, outcome);
  return fit_design(build_design(data, terms), y);
}

/// Weighted least squares with HC0 sandwich standard errors.
inline CoefficientReport fit_wls(const Dataset& data, const std::string& outcome, const std::vector<Term>& terms,
                                 const std::vector<double>& weights) {
  if (weights.size() != data.rows()) {
    throw Error(Errc::LengthMismatch, std::to_string(weights.size()) + " weights for " +
                                          std::to_string(data.rows()) + " rows");
  }
  for (double w : weights) {
    if (!(w > 0) || !std::isfinite(w)) throw Error(Errc::InvalidArgument, "weights must be finite and positive");
  }
  const Design d = build_design(data, terms);
  const auto y = column_vector(data, outcome);
  const auto n = d.x.rows(), p = d.x.cols();
  if (n <= p) {
    throw Error(Errc::InsufficientRows, std::to_string(n) + " rows for " + std::to_string(p) + " coefficients");
  }
  detail::require_full_rank(d);
  const Eigen::Map<const Eigen::VectorXd> w(weights.data(), n);
  const Eigen::VectorXd sw = w.cwiseSqrt();
  const Eigen::MatrixXd xw = sw.asDiagonal() * d.x;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xw);
  const Eigen::VectorXd beta = qr.solve(sw.cwiseProduct(y));
  const Eigen::VectorXd resid = y - d.x * beta;

  const Eigen::MatrixXd bread = (d.x.transpose() * w.asDiagonal() * d.x).inverse();
  const Eigen::VectorXd score_scale = w.cwiseProduct(resid);
  const Eigen::MatrixXd xs = score_scale.asDiagonal() * d.x;
  const Eigen::MatrixXd meat = xs.transpose() * xs;
  const Eigen::MatrixXd cov = bread * meat * bread;

  CoefficientReport r;
  r.n = static_cast<std::size_t>(n);
  r.df = static_cast<std::size_t>(n - p);
  r.se_kind = "hc0";
  r.residual_variance = (w.cwiseProduct(resid.cwiseAbs2())).sum() / w.sum();
  detail::fill_inference(r, d.names, beta, cov.diagonal().cwiseMax(0.0).cwiseSqrt());
  return r;
}

}  // namespace causalkit
