#pragma once

// Calibrated noise primitives: Laplace and Gaussian mechanisms, the
// exponential mechanism, and the sensitivity bounds behind the truncated
// mean estimators.

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dpest/core.hpp"

namespace dpest {

enum class NormOrder { L1, L2, Linf };

struct SensitivityBound {
  NormOrder order = NormOrder::L2;
  double value = 0.0;

  SensitivityBound() = default;
  SensitivityBound(NormOrder o, double v) : order(o), value(v) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("SensitivityBound: value must be >= 0 and finite");
    }
  }
};

/// d i.i.d. Laplace(scale) draws. Sample variance of a large batch is close
/// to 2*scale^2.
inline std::vector<double> laplace_vector(std::size_t d, double scale,
                                          Seed seed) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("laplace_vector: scale must be positive");
  }
  Rng rng(seed);
  return rng.laplace_vector(d, scale);
}

struct GaussianCalibration {
  double sigma2 = 0.0;
  // The classical calibration is valid for epsilon <= 1; outside that regime
  // the formula is still evaluated but flagged.
  bool epsilon_above_one = false;
};

/// Per-coordinate variance of the Gaussian mechanism for an l2-sensitivity
/// bound: 2 * (delta2 / eps)^2 * log(1.25 / delta). Requires delta > 0.
inline GaussianCalibration gaussian_sigma2(const SensitivityBound& delta2,
                                           const PrivacyBudget& budget) {
  if (delta2.order != NormOrder::L2) {
    throw std::invalid_argument("gaussian_sigma2: bound must be an L2 bound");
  }
  if (!(delta2.value > 0.0)) {
    throw std::invalid_argument("gaussian_sigma2: sensitivity must be positive");
  }
  if (!(budget.delta > 0.0)) {
    throw std::invalid_argument(
        "gaussian_sigma2: the Gaussian mechanism requires delta > 0");
  }
  const double ratio = delta2.value / budget.epsilon;
  GaussianCalibration cal;
  cal.sigma2 = 2.0 * ratio * ratio * std::log(1.25 / budget.delta);
  cal.epsilon_above_one = budget.epsilon > 1.0;
  return cal;
}

/// Laplace scale used inside the peeling selector:
/// lambda * 2 * sqrt(3 s log(1/delta)) / eps.
/// lambda = 0 is the noiseless test mode.
inline double peeling_scale(double lambda, std::size_t s,
                            const PrivacyBudget& budget) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("peeling_scale: lambda must be >= 0");
  }
  if (s < 1) throw std::invalid_argument("peeling_scale: s must be >= 1");
  if (!(budget.delta > 0.0) || !(budget.delta < 1.0)) {
    throw std::invalid_argument("peeling_scale: requires 0 < delta < 1");
  }
  return lambda * 2.0 *
         std::sqrt(3.0 * static_cast<double>(s) * std::log(1.0 / budget.delta)) /
         budget.epsilon;
}

/// Exponential mechanism over loss scores (lower is better): samples index i
/// with probability proportional to exp(-eps * score_i / (2 * sensitivity)).
/// sensitivity -> 0 or eps -> infinity degenerate to the argmin
/// (ties broken by lowest index).
inline std::size_t exponential_mechanism(const std::vector<double>& scores,
                                         const SensitivityBound& sensitivity,
                                         double epsilon, Rng& rng) {
  if (scores.empty()) {
    throw std::invalid_argument("exponential_mechanism: empty scores");
  }
  for (double s : scores) {
    if (!std::isfinite(s)) {
      throw std::invalid_argument("exponential_mechanism: scores must be finite");
    }
  }
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("exponential_mechanism: epsilon must be positive");
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] < scores[best]) best = i;
  }
  if (sensitivity.value == 0.0 || std::isinf(epsilon)) return best;

  // Softmax over -eps*score/(2*sens), stabilized at the minimum score.
  const double beta = epsilon / (2.0 * sensitivity.value);
  std::vector<double> weights(scores.size());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    weights[i] = std::exp(-beta * (scores[i] - scores[best]));
    total += weights[i];
  }
  const double u = rng.uniform() * total;
  double cum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    cum += weights[i];
    if (u < cum) return i;
  }
  return scores.size() - 1;
}

inline std::size_t exponential_mechanism(const std::vector<double>& scores,
                                         const SensitivityBound& sensitivity,
                                         double epsilon, Seed seed) {
  Rng rng(seed);
  return exponential_mechanism(scores, sensitivity, epsilon, rng);
}

struct TruncatedMeanSensitivity {
  SensitivityBound l2;    // 2 R sqrt(d) / n
  SensitivityBound linf;  // 2 R / n
};

/// Worst-case change of the coordinatewise truncated mean over adjacent
/// datasets.
inline TruncatedMeanSensitivity truncated_mean_sensitivity(std::size_t n,
                                                           std::size_t d,
                                                           double r) {
  if (n < 1 || d < 1) {
    throw std::invalid_argument("truncated_mean_sensitivity: n, d must be >= 1");
  }
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument("truncated_mean_sensitivity: R must be positive");
  }
  const double nn = static_cast<double>(n);
  TruncatedMeanSensitivity out;
  out.l2 = SensitivityBound(NormOrder::L2,
                            2.0 * r * std::sqrt(static_cast<double>(d)) / nn);
  out.linf = SensitivityBound(NormOrder::Linf, 2.0 * r / nn);
  return out;
}

}  // namespace dpest
