#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

#include "causalkit/noise.hpp"
#include "causalkit/regression.hpp"

namespace causalkit {

using Estimator = std::function<CoefficientReport(const Dataset&)>;

/// Linear-interpolation quantile (R type 7) of a sorted sample.
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double h = (static_cast<double>(sorted.size()) - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

/// Worker count for replicate loops: CAUSALKIT_WORKERS if set, else 1.
inline std::size_t worker_count() {
  if (const char* env = std::getenv("CAUSALKIT_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return 1;
}

/// Resampling indices of replicate `b`: n draws with replacement, seeded
/// from (seed, b) so the result does not depend on scheduling.
inline std::vector<std::size_t> bootstrap_rows(std::size_t n, std::uint64_t seed, std::size_t b) {
  noise::Stream rng(noise::derive_seed(seed, b));
  std::vector<std::size_t> rows(n);
  for (auto& r : rows) r = rng.below(n);
  return rows;
}

/// Case-resampling percentile intervals around `estimator`'s full-sample fit.
/// Replicates that throw are counted; fewer than 95% successes is fatal.
inline CoefficientReport bootstrap_ci(const Dataset& data, const Estimator& estimator, std::size_t replicates,
                                      double level, std::uint64_t seed) {
  if (replicates < 100) throw Error(Errc::InvalidArgument, "bootstrap needs at least 100 replicates");
  if (!(level > 0 && level < 1)) throw Error(Errc::InvalidArgument, "level must lie in (0,1)");
  CoefficientReport report = estimator(data);
  const std::size_t k = report.terms.size();

  std::vector<std::optional<std::vector<double>>> draws(replicates);
  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t b = begin; b < end; ++b) {
      try {
        const auto rep = estimator(data.take(bootstrap_rows(data.rows(), seed, b)));
        std::vector<double> est(k);
        for (std::size_t j = 0; j < k; ++j) est[j] = rep.terms.at(j).estimate;
        draws[b] = std::move(est);
      } catch (const Error&) {
        draws[b].reset();
      }
    }
  };
  const std::size_t workers = std::min(worker_count(), replicates);
  if (workers <= 1) {
    run_range(0, replicates);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (replicates + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk, end = std::min(replicates, begin + chunk);
      if (begin < end) pool.emplace_back(run_range, begin, end);
    }
    for (auto& t : pool) t.join();
  }

  std::vector<std::vector<double>> per_term(k);
  std::size_t failures = 0;
  for (const auto& d : draws) {
    if (!d) {
      ++failures;
      continue;
    }
    for (std::size_t j = 0; j < k; ++j) per_term[j].push_back((*d)[j]);
  }
  const std::size_t successes = replicates - failures;
  if (static_cast<double>(successes) < 0.95 * static_cast<double>(replicates)) {
    throw Error(Errc::BootstrapUnstable, std::to_string(failures) + " of " + std::to_string(replicates) +
                                             " replicates failed");
  }
  const double alpha = 1 - level;
  for (std::size_t j = 0; j < k; ++j) {
    auto& v = per_term[j];
    std::sort(v.begin(), v.end());
    auto& t = report.terms[j];
    t.ci = Interval{quantile_sorted(v, alpha / 2), quantile_sorted(v, 1 - alpha / 2)};
    t.ci_excludes_estimate = t.estimate < t.ci->lower || t.estimate > t.ci->upper;
    double mean = 0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    t.bootstrap_se = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  }
  report.bootstrap = BootstrapInfo{level, replicates, failures, seed};
  return report;
}

}  // namespace causalkit
