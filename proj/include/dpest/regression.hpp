#pragma once

// Differentially private linear regression: noisy projected gradient descent
// in low dimension and noisy iterative hard thresholding (gradient step +
// peeling + projection) for the sparse case.

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dpest/core.hpp"
#include "dpest/mechanisms.hpp"
#include "dpest/peeling.hpp"

namespace dpest {

struct RegressionConfig {
  double eta0 = 1.0;                 // step size, applied to the half-gradient
  std::size_t iterations = 1;        // T
  double r = 1.0;                    // response truncation level
  double c = 1.0;                    // feasibility radius
  double b = 1.0;                    // gradient-sensitivity scale
  std::optional<std::size_t> s;      // sparsity, present for the sparse variant
  PrivacyBudget budget{1.0, 1e-6};
  std::optional<std::vector<double>> beta0;  // default: zero vector
  Seed seed;
  double noise_multiplier = 1.0;     // 0 disables noise (test mode)
  std::optional<double> c0;          // norm bound on the true parameter, if known
  bool keep_trace = false;
};

struct TraceRecord {
  std::vector<std::vector<double>> iterates;  // beta^0 .. beta^T when kept
  std::vector<double> losses;                 // L_n(beta^t), t = 0..T
  NoiseLedger noise;
  BudgetLedger budget;
  bool feasibility_clamped = false;  // C was reduced to c0
};

/// Mean squared residual (1/n) sum (y_i - x_i' beta)^2.
inline double least_squares_loss(const RegressionData& data,
                                 const std::vector<double>& beta) {
  if (beta.size() != data.cols()) {
    throw std::invalid_argument("least_squares_loss: dimension mismatch");
  }
  const std::size_t n = data.rows(), d = data.cols();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = data.x.row(i);
    double pred = 0.0;
    for (std::size_t j = 0; j < d; ++j) pred += row[j] * beta[j];
    const double resid = data.y[i] - pred;
    total += resid * resid;
  }
  return total / static_cast<double>(n);
}

/// (1/n) sum (x_i' beta - clamp(y_i, R)) x_i. Equals half the gradient of
/// least_squares_loss whenever no response is clamped.
inline std::vector<double> truncated_half_gradient(const RegressionData& data,
                                                   const std::vector<double>& beta,
                                                   double r) {
  if (beta.size() != data.cols()) {
    throw std::invalid_argument("truncated_half_gradient: dimension mismatch");
  }
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument("truncated_half_gradient: R must be positive");
  }
  const std::size_t n = data.rows(), d = data.cols();
  std::vector<double> grad(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = data.x.row(i);
    double pred = 0.0;
    for (std::size_t j = 0; j < d; ++j) pred += row[j] * beta[j];
    const double resid = pred - clamp_scalar(data.y[i], r);
    for (std::size_t j = 0; j < d; ++j) grad[j] += resid * row[j];
  }
  for (double& g : grad) g /= static_cast<double>(n);
  return grad;
}

namespace detail {

inline std::pair<std::vector<double>, double> initial_beta(
    const RegressionConfig& cfg, std::size_t d) {
  std::vector<double> beta(d, 0.0);
  if (cfg.beta0.has_value()) {
    if (cfg.beta0->size() != d) {
      throw std::invalid_argument("regression: beta0 dimension mismatch");
    }
    beta = *cfg.beta0;
  }
  // The privacy analysis needs C <= c0; clamp rather than error when the
  // caller supplies both.
  double c_eff = cfg.c;
  if (cfg.c0.has_value()) c_eff = std::min(c_eff, *cfg.c0);
  return {std::move(beta), c_eff};
}

inline void validate_common(const RegressionConfig& cfg) {
  if (!(cfg.eta0 > 0.0) || !(cfg.r > 0.0) || !(cfg.c > 0.0) || !(cfg.b > 0.0)) {
    throw std::invalid_argument("regression: eta0, R, C, B must be positive");
  }
  if (cfg.iterations < 1) {
    throw std::invalid_argument("regression: T must be >= 1");
  }
}

}  // namespace detail

/// Per-coordinate variance of the per-iteration gradient noise:
/// (eta0)^2 * 2 B^2 log(2T/delta) / (n^2 (eps/T)^2), applied verbatim.
inline double regression_noise_variance(std::size_t n, const RegressionConfig& cfg) {
  if (!(cfg.budget.delta > 0.0)) {
    throw std::invalid_argument("regression: requires delta > 0");
  }
  const double nn = static_cast<double>(n);
  const double t = static_cast<double>(cfg.iterations);
  const double eps_t = cfg.budget.epsilon / t;
  return cfg.eta0 * cfg.eta0 * 2.0 * cfg.b * cfg.b *
         std::log(2.0 * t / cfg.budget.delta) / (nn * nn * eps_t * eps_t);
}

/// Noisy projected gradient descent:
///   beta^{t+1} = Pi_C(beta^t - eta0 * half_grad(beta^t) + w_t)
/// with w_t Gaussian. T releases at (eps/T, delta/T) each.
inline std::pair<std::vector<double>, TraceRecord> private_linear_regression(
    const RegressionData& data, const RegressionConfig& cfg) {
  detail::validate_common(cfg);
  if (cfg.s.has_value()) {
    throw std::invalid_argument("private_linear_regression: cfg.s must be absent");
  }
  const std::size_t n = data.rows(), d = data.cols();
  auto [beta, c_eff] = detail::initial_beta(cfg, d);

  const double stddev =
      cfg.noise_multiplier * std::sqrt(regression_noise_variance(n, cfg));

  TraceRecord trace;
  trace.budget = BudgetLedger(cfg.budget);
  trace.feasibility_clamped = c_eff < cfg.c;
  if (cfg.keep_trace) {
    trace.iterates.push_back(beta);
    trace.losses.push_back(least_squares_loss(data, beta));
  }

  Rng rng(cfg.seed);
  for (std::size_t t = 0; t < cfg.iterations; ++t) {
    const std::vector<double> grad = truncated_half_gradient(data, beta, cfg.r);
    NoiseDraw draw{"gradient", t, "gaussian", stddev, {}};
    for (std::size_t j = 0; j < d; ++j) {
      const double w = (stddev > 0.0) ? rng.gaussian(stddev) : 0.0;
      beta[j] += -cfg.eta0 * grad[j] + w;
      if (cfg.keep_trace) draw.values.push_back(w);
    }
    beta = project_l2_ball(std::move(beta), c_eff);
    trace.budget.charge("gaussian_step_" + std::to_string(t), 1,
                        static_cast<long long>(cfg.iterations));
    if (cfg.keep_trace) {
      trace.noise.record(std::move(draw));
      trace.iterates.push_back(beta);
      trace.losses.push_back(least_squares_loss(data, beta));
    }
  }
  return {std::move(beta), std::move(trace)};
}

/// Noisy iterative hard thresholding: gradient half-step, peel with budget
/// (eps/T, delta/T) and Linf sensitivity eta0*B/n, then project onto the C
/// ball. Output is s-sparse with norm <= C.
inline std::pair<std::vector<double>, TraceRecord> private_sparse_regression(
    const RegressionData& data, const RegressionConfig& cfg) {
  detail::validate_common(cfg);
  if (!cfg.s.has_value()) {
    throw std::invalid_argument("private_sparse_regression: cfg.s must be present");
  }
  const std::size_t n = data.rows(), d = data.cols();
  const std::size_t s = *cfg.s;
  if (s < 1 || s > d) {
    throw std::invalid_argument("private_sparse_regression: requires 1 <= s <= d");
  }
  if (!(cfg.budget.delta > 0.0)) {
    throw std::invalid_argument("private_sparse_regression: requires delta > 0");
  }
  auto [beta, c_eff] = detail::initial_beta(cfg, d);

  const double t_count = static_cast<double>(cfg.iterations);
  const PrivacyBudget step_budget(cfg.budget.epsilon / t_count,
                                  cfg.budget.delta / t_count);
  const double lambda =
      cfg.noise_multiplier * cfg.eta0 * cfg.b / static_cast<double>(n);

  TraceRecord trace;
  trace.budget = BudgetLedger(cfg.budget);
  trace.feasibility_clamped = c_eff < cfg.c;
  if (cfg.keep_trace) {
    trace.iterates.push_back(beta);
    trace.losses.push_back(least_squares_loss(data, beta));
  }

  Rng rng(cfg.seed);
  for (std::size_t t = 0; t < cfg.iterations; ++t) {
    const std::vector<double> grad = truncated_half_gradient(data, beta, cfg.r);
    for (std::size_t j = 0; j < d; ++j) beta[j] -= cfg.eta0 * grad[j];

    PeelingResult peeled =
        peel(beta, s, step_budget, lambda, rng, cfg.keep_trace);
    beta = project_l2_ball(std::move(peeled.output), c_eff);
    trace.budget.charge("peeling_step_" + std::to_string(t), 1,
                        static_cast<long long>(cfg.iterations));
    if (cfg.keep_trace) {
      for (auto& draw : peeled.ledger->draws) {
        draw.iteration = t;
        trace.noise.record(std::move(draw));
      }
      trace.iterates.push_back(beta);
      trace.losses.push_back(least_squares_loss(data, beta));
    }
  }
  return {std::move(beta), std::move(trace)};
}

}  // namespace dpest
