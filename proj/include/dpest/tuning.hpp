#pragma once

// Data-driven hyperparameter selection: private histogram quantiles for
// truncation levels, the theoretical truncation rule, and private
// cross-validation over the sparsity grid via the exponential mechanism.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dpest/core.hpp"
#include "dpest/mean.hpp"
#include "dpest/mechanisms.hpp"
#include "dpest/regression.hpp"

namespace dpest {

/// Noisy-histogram quantile. Builds a histogram of x clipped to [lo, hi],
/// perturbs each normalized cell count with Laplace(2/(n*eps)) (one value
/// change moves two cells by 1/n each), and returns the left edge of the
/// first cell whose noisy cumulative mass reaches q. Output always lies in
/// [lo, hi]; noise_multiplier = 0 is the exact-histogram test mode.
inline double private_quantile(const std::vector<double>& x, double q,
                               const PrivacyBudget& budget, double lo,
                               double hi, std::size_t bins, Seed seed,
                               double noise_multiplier = 1.0) {
  if (x.empty()) throw std::invalid_argument("private_quantile: empty input");
  if (!(q > 0.0) || !(q < 1.0)) {
    throw std::invalid_argument("private_quantile: q must lie in (0, 1)");
  }
  if (!(lo < hi)) throw std::invalid_argument("private_quantile: lo < hi required");
  if (bins < 2) throw std::invalid_argument("private_quantile: bins must be >= 2");

  const double n = static_cast<double>(x.size());
  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<double> mass(bins, 0.0);
  for (double v : x) {
    const double clipped = clamp_interval(v, lo, hi);
    auto cell = static_cast<std::size_t>((clipped - lo) / width);
    if (cell >= bins) cell = bins - 1;
    mass[cell] += 1.0 / n;
  }

  const double scale = noise_multiplier * 2.0 / (n * budget.epsilon);
  Rng rng(seed);
  double cum = 0.0;
  for (std::size_t cell = 0; cell < bins; ++cell) {
    const double noisy = mass[cell] + (scale > 0.0 ? rng.laplace(scale) : 0.0);
    cum += noisy;
    if (cum >= q) return lo + static_cast<double>(cell) * width;
  }
  return hi;
}

struct TruncationInterval {
  double lo = 0.0;
  double hi = 0.0;
  BudgetLedger ledger;
};

/// Private 2.5% / 97.5% quantiles of the pooled entries, budget split evenly
/// between the two calls. Estimators then clamp to [lo, hi].
inline TruncationInterval data_driven_truncation(const DataMatrix& x,
                                                 const PrivacyBudget& budget,
                                                 Seed seed,
                                                 double bound = 100.0,
                                                 std::size_t bins = 2000,
                                                 double noise_multiplier = 1.0) {
  const PrivacyBudget half = split_budget(budget, 2).part();

  TruncationInterval out;
  out.ledger = BudgetLedger(budget);
  // Two deterministic sub-seeds, one per quantile call.
  const Seed s_lo{seed.value ^ 0x9e3779b97f4a7c15ULL};
  const Seed s_hi{seed.value ^ 0xc2b2ae3d27d4eb4fULL};

  out.lo = private_quantile(x.values(), 0.025, half, -bound, bound, bins, s_lo,
                            noise_multiplier);
  out.hi = private_quantile(x.values(), 0.975, half, -bound, bound, bins, s_hi,
                            noise_multiplier);
  if (out.lo > out.hi) std::swap(out.lo, out.hi);
  if (out.lo == out.hi) {
    // Degenerate noisy interval; widen by one bin so clamping stays valid.
    const double width = 2.0 * bound / static_cast<double>(bins);
    out.hi += width;
  }
  out.ledger.charge("quantile_lo", 1, 2);
  out.ledger.charge("quantile_hi", 1, 2);
  return out;
}

/// The theoretical truncation level 4 * sigma * sqrt(log n).
inline double theoretical_truncation(double sigma, std::size_t n) {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("theoretical_truncation: sigma must be positive");
  }
  if (n < 2) throw std::invalid_argument("theoretical_truncation: n must be >= 2");
  return 4.0 * sigma * std::sqrt(std::log(static_cast<double>(n)));
}

// ---------------------------------------------------------------------------
// Private cross-validation over the sparsity grid.

struct CvOptions {
  std::size_t folds = 5;
  double clip_lo = 0.0;     // cross-validation scores clipped to [clip_lo, clip_hi]
  double clip_hi = 1.0;
  long long selection_num = 1;  // budget share of the exponential-mechanism step
  long long selection_den = 5;
  Seed seed;
  // Test mode: overrides the selection epsilon (infinity -> exact argmin).
  std::optional<double> selection_epsilon_override;
};

struct CvResult {
  std::size_t chosen_s = 0;
  std::vector<double> scores;  // clipped mean CV score per grid candidate
  BudgetLedger ledger;
};

namespace detail {

// Fold membership by row index modulo fold count; deterministic.
inline bool in_fold(std::size_t row, std::size_t fold, std::size_t folds) {
  return row % folds == fold;
}

template <typename ScoreFn>
inline CvResult cv_select(const std::vector<std::size_t>& grid, std::size_t d,
                          std::size_t n, const PrivacyBudget& budget,
                          const CvOptions& opt, ScoreFn&& score_candidate) {
  if (grid.empty()) throw std::invalid_argument("private_cv_sparsity: empty grid");
  if (opt.folds < 2) throw std::invalid_argument("private_cv_sparsity: folds >= 2");
  if (!(opt.clip_lo < opt.clip_hi)) {
    throw std::invalid_argument("private_cv_sparsity: clip_lo < clip_hi required");
  }
  for (std::size_t s : grid) {
    if (s < 1 || s > d) {
      throw std::invalid_argument("private_cv_sparsity: grid candidate out of range");
    }
  }

  CvResult result;
  result.ledger = BudgetLedger(budget);
  if (grid.size() == 1) {
    // Degenerate grid: no selection, no budget consumed by it.
    result.chosen_s = grid[0];
    result.scores = {0.0};
    return result;
  }

  result.scores.reserve(grid.size());
  for (std::size_t s : grid) {
    double total = 0.0;
    for (std::size_t fold = 0; fold < opt.folds; ++fold) {
      total += score_candidate(s, fold);
    }
    result.scores.push_back(
        clamp_interval(total / static_cast<double>(opt.folds), opt.clip_lo,
                       opt.clip_hi));
  }

  // One-row change moves each fold mean by at most (hi - lo) / ceil(n/folds).
  const auto fold_size =
      static_cast<double>((n + opt.folds - 1) / opt.folds);
  const SensitivityBound sens(NormOrder::L1,
                              (opt.clip_hi - opt.clip_lo) / fold_size);
  const double eps_sel =
      opt.selection_epsilon_override.value_or(budget.epsilon * opt.selection_num /
                                              static_cast<double>(opt.selection_den));
  Rng rng(opt.seed);
  const std::size_t idx = exponential_mechanism(result.scores, sens, eps_sel, rng);
  result.chosen_s = grid[idx];
  result.ledger.charge("exponential_mechanism", opt.selection_num,
                       opt.selection_den);
  return result;
}

}  // namespace detail

/// Sparsity selection for sparse mean estimation. CV fits run the estimator
/// in zero-noise mode (scores are clipped and the exponential mechanism
/// carries the privacy of the selection); the budget share not consumed here
/// is left for the caller's final fit.
inline CvResult private_cv_sparsity(const DataMatrix& data,
                                    const std::vector<std::size_t>& grid,
                                    const MeanConfig& base,
                                    const PrivacyBudget& budget,
                                    const CvOptions& opt) {
  const std::size_t n = data.rows(), d = data.cols();
  return detail::cv_select(
      grid, d, n, budget, opt, [&](std::size_t s, std::size_t fold) {
        std::vector<double> train_rows;
        std::size_t n_train = 0, n_test = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (detail::in_fold(i, fold, opt.folds)) {
            ++n_test;
          } else {
            ++n_train;
            const double* row = data.row(i);
            train_rows.insert(train_rows.end(), row, row + d);
          }
        }
        DataMatrix train(n_train, d, std::move(train_rows));
        MeanConfig cfg = base;
        cfg.s = s;
        cfg.noise_multiplier = 0.0;
        const MeanResult fit = private_sparse_mean(train, cfg);

        double score = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (!detail::in_fold(i, fold, opt.folds)) continue;
          const double* row = data.row(i);
          for (std::size_t j = 0; j < d; ++j) {
            const double diff = row[j] - fit.estimate[j];
            score += diff * diff;
          }
        }
        return score / static_cast<double>(n_test);
      });
}

/// Sparsity selection for sparse regression; scores are held-out mean squared
/// residuals.
inline CvResult private_cv_sparsity(const RegressionData& data,
                                    const std::vector<std::size_t>& grid,
                                    const RegressionConfig& base,
                                    const PrivacyBudget& budget,
                                    const CvOptions& opt) {
  const std::size_t n = data.rows(), d = data.cols();
  return detail::cv_select(
      grid, d, n, budget, opt, [&](std::size_t s, std::size_t fold) {
        std::vector<double> train_rows;
        std::vector<double> train_y;
        for (std::size_t i = 0; i < n; ++i) {
          if (detail::in_fold(i, fold, opt.folds)) continue;
          const double* row = data.x.row(i);
          train_rows.insert(train_rows.end(), row, row + d);
          train_y.push_back(data.y[i]);
        }
        DataMatrix train_x(train_y.size(), d, std::move(train_rows));
        RegressionData train(std::move(train_x), std::move(train_y));
        RegressionConfig cfg = base;
        cfg.s = s;
        cfg.noise_multiplier = 0.0;
        auto [beta, trace] = private_sparse_regression(train, cfg);

        double score = 0.0;
        std::size_t n_test = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (!detail::in_fold(i, fold, opt.folds)) continue;
          const double* row = data.x.row(i);
          double pred = 0.0;
          for (std::size_t j = 0; j < d; ++j) pred += row[j] * beta[j];
          const double resid = data.y[i] - pred;
          score += resid * resid;
          ++n_test;
        }
        return score / static_cast<double>(n_test);
      });
}

}  // namespace dpest
