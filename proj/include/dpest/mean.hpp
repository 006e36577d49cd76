#pragma once

// Differentially private mean estimation: the Gaussian-mechanism sample mean
// (low dimension) and its sparse variant built on the peeling selector.

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dpest/core.hpp"
#include "dpest/mechanisms.hpp"
#include "dpest/peeling.hpp"

namespace dpest {

struct MeanConfig {
  double r = 1.0;                    // truncation level
  std::optional<std::size_t> s;      // sparsity, present for the sparse variant
  PrivacyBudget budget{1.0, 1e-6};
  Seed seed;
  double noise_multiplier = 1.0;     // 0 disables noise (test mode)
  bool keep_noise_ledger = false;
};

struct MeanResult {
  std::vector<double> estimate;
  BudgetLedger budget;
  std::optional<NoiseLedger> noise;
  std::vector<std::size_t> selected;  // sparse variant only
};

/// Coordinatewise clamp to [-R, R] followed by column means. Deterministic.
inline std::vector<double> truncated_mean(const DataMatrix& x, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument("truncated_mean: R must be positive");
  }
  const std::size_t n = x.rows(), d = x.cols();
  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = x.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      mean[j] += clamp_scalar(row[j], r);
    }
  }
  for (double& m : mean) m /= static_cast<double>(n);
  return mean;
}

/// Truncated-mean variant with an asymmetric clamp interval (used with
/// data-driven truncation levels).
inline std::vector<double> truncated_mean(const DataMatrix& x, double lo,
                                          double hi) {
  if (!(lo < hi)) {
    throw std::invalid_argument("truncated_mean: requires lo < hi");
  }
  const std::size_t n = x.rows(), d = x.cols();
  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = x.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      mean[j] += clamp_interval(row[j], lo, hi);
    }
  }
  for (double& m : mean) m /= static_cast<double>(n);
  return mean;
}

/// Per-coordinate noise variance of the private mean release:
/// 4 R^2 d log(1/delta) / (n^2 eps^2), applied verbatim.
inline double private_mean_noise_variance(std::size_t n, std::size_t d,
                                          double r,
                                          const PrivacyBudget& budget) {
  if (!(budget.delta > 0.0)) {
    throw std::invalid_argument("private_mean: requires delta > 0");
  }
  const double nn = static_cast<double>(n);
  return 4.0 * r * r * static_cast<double>(d) * std::log(1.0 / budget.delta) /
         (nn * nn * budget.epsilon * budget.epsilon);
}

/// Truncated mean plus Gaussian noise calibrated as above. The whole budget
/// is consumed by the single Gaussian release.
inline MeanResult private_mean(const DataMatrix& x, const MeanConfig& cfg) {
  if (cfg.s.has_value()) {
    throw std::invalid_argument("private_mean: cfg.s must be absent");
  }
  const std::size_t n = x.rows(), d = x.cols();
  const double variance = private_mean_noise_variance(n, d, cfg.r, cfg.budget);
  const double stddev = cfg.noise_multiplier * std::sqrt(variance);

  MeanResult result;
  result.estimate = truncated_mean(x, cfg.r);
  result.budget = BudgetLedger(cfg.budget);
  result.budget.charge("gaussian_release", 1, 1);

  Rng rng(cfg.seed);
  NoiseDraw draw{"output", 0, "gaussian", stddev, {}};
  for (std::size_t j = 0; j < d; ++j) {
    const double w = (stddev > 0.0) ? rng.gaussian(stddev) : 0.0;
    result.estimate[j] += w;
    if (cfg.keep_noise_ledger) draw.values.push_back(w);
  }
  if (cfg.keep_noise_ledger) {
    result.noise.emplace();
    result.noise->record(std::move(draw));
  }
  return result;
}

/// Truncated mean followed by peeling with Linf sensitivity 2R/n. Output is
/// exactly s-sparse; the whole budget is consumed by the peel call.
inline MeanResult private_sparse_mean(const DataMatrix& x,
                                      const MeanConfig& cfg) {
  if (!cfg.s.has_value()) {
    throw std::invalid_argument("private_sparse_mean: cfg.s must be present");
  }
  const std::size_t d = x.cols();
  const std::size_t s = *cfg.s;
  if (s < 1 || s > d) {
    throw std::invalid_argument("private_sparse_mean: requires 1 <= s <= d");
  }
  const std::vector<double> mean = truncated_mean(x, cfg.r);
  const double lambda =
      cfg.noise_multiplier * 2.0 * cfg.r / static_cast<double>(x.rows());

  Rng rng(cfg.seed);
  PeelingResult peeled =
      peel(mean, s, cfg.budget, lambda, rng, cfg.keep_noise_ledger);

  MeanResult result;
  result.estimate = std::move(peeled.output);
  result.selected = std::move(peeled.selected);
  result.noise = std::move(peeled.ledger);
  result.budget = BudgetLedger(cfg.budget);
  result.budget.charge("peeling", 1, 1);
  return result;
}

}  // namespace dpest
