#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "causalkit/dataset.hpp"
#include "causalkit/regression.hpp"

namespace causalkit {

/// Segmented regression for an interrupted time series:
///   value = b0 + b1 t + b2 post + b3 (t - t0) post,   post = [t >= t0].
/// Terms: Intercept, time, level_change, slope_change.
inline CoefficientReport its_segmented(const std::vector<std::pair<double, double>>& series, double interruption) {
  std::size_t before = 0, after = 0;
  for (const auto& [t, _] : series) (t >= interruption ? after : before)++;
  if (before < 2 || after < 2) {
    throw Error(Errc::InsufficientSegment, std::to_string(before) + " observations before and " +
                                               std::to_string(after) + " after the interruption");
  }
  const auto n = static_cast<Eigen::Index>(series.size());
  Design d;
  d.x.resize(n, 4);
  d.names = {"Intercept", "time", "level_change", "slope_change"};
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto [t, v] = series[static_cast<std::size_t>(i)];
    const double post = t >= interruption ? 1.0 : 0.0;
    d.x.row(i) << 1.0, t, post, (t - interruption) * post;
    y(i) = v;
  }
  return fit_design(d, y);
}

/// Sharp regression discontinuity, linear on each side, within the bandwidth:
///   O = b0 + b1 A + b2 Z + b3 A Z,  A centred at the cutoff, Z = [A >= cutoff].
/// b2 (beta2) is the jump at the cutoff; all four are reported.
inline CoefficientReport rd_estimate(const Dataset& data, const std::string& running, const std::string& outcome,
                                     double cutoff, double bandwidth) {
  if (!(bandwidth > 0)) throw Error(Errc::InvalidArgument, "bandwidth must be positive");
  const auto& a = data.values(running);
  const auto& o = data.values(outcome);
  std::vector<std::size_t> keep;
  std::size_t below = 0, above = 0;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    if (std::abs(a[i] - cutoff) <= bandwidth) {
      keep.push_back(i);
      (a[i] >= cutoff ? above : below)++;
    }
  }
  if (below == 0 || above == 0) {
    throw Error(Errc::EmptyArm, std::string("no units ") + (below == 0 ? "below" : "at or above") +
                                    " the cutoff within the bandwidth");
  }
  if (below < 2 || above < 2) {
    throw Error(Errc::InsufficientRows, "need at least two units on each side of the cutoff");
  }
  const auto n = static_cast<Eigen::Index>(keep.size());
  Design d;
  d.x.resize(n, 4);
  d.names = {"beta0", "beta1", "beta2", "beta3"};
  Eigen::VectorXd y(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto i = keep[static_cast<std::size_t>(r)];
    const double ac = a[i] - cutoff;
    const double z = a[i] >= cutoff ? 1.0 : 0.0;
    d.x.row(r) << 1.0, ac, z, ac * z;
    y(r) = o[i];
  }
  return fit_design(d, y);
}

}  // namespace causalkit
