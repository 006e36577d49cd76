#pragma once

// Tracing-attack statistics packaged as an empirical membership-inference
// auditor. The attack scores need the true parameter, so the auditor is a
// simulation-only tool: it draws the truth, builds the dataset, runs the
// estimator as a black box, and contrasts in-sample vs out-of-sample scores.

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dpest/core.hpp"

namespace dpest {

/// <x - mu, m_out>.
inline double mean_attack(const std::vector<double>& x_row,
                          const std::vector<double>& mu,
                          const std::vector<double>& m_out) {
  if (x_row.size() != mu.size() || x_row.size() != m_out.size()) {
    throw std::invalid_argument("mean_attack: dimension mismatch");
  }
  double s = 0.0;
  for (std::size_t j = 0; j < x_row.size(); ++j) {
    s += (x_row[j] - mu[j]) * m_out[j];
  }
  return s;
}

/// <(x - mu)_support, (m_out - mu)_support>. An empty support scores 0.
inline double sparse_mean_attack(const std::vector<double>& x_row,
                                 const std::vector<double>& mu,
                                 const std::vector<std::size_t>& support,
                                 const std::vector<double>& m_out) {
  if (x_row.size() != mu.size() || x_row.size() != m_out.size()) {
    throw std::invalid_argument("sparse_mean_attack: dimension mismatch");
  }
  double s = 0.0;
  for (std::size_t j : support) {
    if (j >= x_row.size()) {
      throw std::invalid_argument("sparse_mean_attack: support index out of range");
    }
    s += (x_row[j] - mu[j]) * (m_out[j] - mu[j]);
  }
  return s;
}

/// <(m_out - beta)[support], (y - x' beta) * x[support]>; full-vector form
/// when no support is given.
inline double regression_attack(double y, const std::vector<double>& x_row,
                                const std::vector<double>& beta,
                                const std::vector<double>& m_out,
                                const std::optional<std::vector<std::size_t>>&
                                    support = std::nullopt) {
  if (x_row.size() != beta.size() || x_row.size() != m_out.size()) {
    throw std::invalid_argument("regression_attack: dimension mismatch");
  }
  double pred = 0.0;
  for (std::size_t j = 0; j < x_row.size(); ++j) pred += x_row[j] * beta[j];
  const double resid = y - pred;

  double s = 0.0;
  if (support.has_value()) {
    for (std::size_t j : *support) {
      if (j >= x_row.size()) {
        throw std::invalid_argument("regression_attack: support index out of range");
      }
      s += (m_out[j] - beta[j]) * resid * x_row[j];
    }
  } else {
    for (std::size_t j = 0; j < x_row.size(); ++j) {
      s += (m_out[j] - beta[j]) * resid * x_row[j];
    }
  }
  return s;
}

/// Default exceedance threshold sigma^2 * sqrt(8 d log(1/delta)).
inline double attack_threshold(double sigma2, std::size_t d, double delta) {
  if (!(sigma2 > 0.0) || !(delta > 0.0) || !(delta < 1.0)) {
    throw std::invalid_argument("attack_threshold: bad parameters");
  }
  return sigma2 * std::sqrt(8.0 * static_cast<double>(d) * std::log(1.0 / delta));
}

// ---------------------------------------------------------------------------
// AttackReport

struct AttackScore {
  double score = 0.0;
  bool in_sample = false;
  std::size_t rep = 0;
};

struct RepSummary {
  std::size_t rep = 0;
  double mean_in = 0.0;
  double mean_out = 0.0;
};

struct AttackReport {
  std::vector<AttackScore> scores;  // one per audited row, finite
  std::vector<RepSummary> rep_summaries;

  double mean_in = 0.0, mean_out = 0.0;
  double sd_in = 0.0, sd_out = 0.0;
  double z = 0.0;  // (mean_in - mean_out) / se of the difference
  double threshold = 0.0;
  std::size_t exceed_in = 0, exceed_out = 0;

  std::string problem;
  std::size_t n = 0, d = 0, reps = 0;
  std::uint64_t seed = 0;

  json to_json() const {
    json reps_json = json::array();
    for (const auto& r : rep_summaries) {
      reps_json.push_back(
          {{"rep", r.rep}, {"mean_in", r.mean_in}, {"mean_out", r.mean_out}});
    }
    return json{{"config",
                 {{"problem", problem},
                  {"n", n},
                  {"d", d},
                  {"reps", reps},
                  {"seed", seed},
                  {"threshold", threshold}}},
                {"reps", reps_json},
                {"aggregate",
                 {{"mean_in", mean_in},
                  {"mean_out", mean_out},
                  {"sd_in", sd_in},
                  {"sd_out", sd_out},
                  {"z", z},
                  {"exceed_in", exceed_in},
                  {"exceed_out", exceed_out}}}};
  }
};

namespace detail {

struct RunningStats {
  double sum = 0.0, sumsq = 0.0;
  std::size_t count = 0;

  void add(double x) {
    sum += x;
    sumsq += x * x;
    ++count;
  }
  double mean() const { return count > 0 ? sum / static_cast<double>(count) : 0.0; }
  double sd() const {
    if (count < 2) return 0.0;
    const double m = mean();
    return std::sqrt((sumsq - static_cast<double>(count) * m * m) /
                     static_cast<double>(count - 1));
  }
};

inline void finalize_report(AttackReport& report, const RunningStats& in,
                            const RunningStats& out) {
  report.mean_in = in.mean();
  report.mean_out = out.mean();
  report.sd_in = in.sd();
  report.sd_out = out.sd();
  const double se =
      std::sqrt(in.sd() * in.sd() / static_cast<double>(in.count) +
                out.sd() * out.sd() / static_cast<double>(out.count));
  report.z = se > 0.0 ? (report.mean_in - report.mean_out) / se : 0.0;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// run_membership_audit

/// Mean-family audit problem: a prior over the true mean and a conditional
/// row sampler. When support is set the sparse attack statistic is used.
struct MeanAuditProblem {
  std::function<std::vector<double>(Rng&)> draw_mean;
  std::function<std::vector<double>(const std::vector<double>&, Rng&)> draw_row;
  std::optional<std::vector<std::size_t>> support;
};

using MeanEstimator =
    std::function<std::vector<double>(const DataMatrix&, Seed)>;

/// Regression audit problem: a prior over beta and a conditional (x, y)
/// sampler. When support is set the attack restricts to those coordinates.
struct RegressionAuditProblem {
  std::function<std::vector<double>(Rng&)> draw_beta;
  std::function<std::pair<std::vector<double>, double>(
      const std::vector<double>&, Rng&)>
      draw_row;
  std::optional<std::vector<std::size_t>> support;
};

using RegressionEstimator =
    std::function<std::vector<double>(const RegressionData&, Seed)>;

/// For each rep: draw the truth, build an n-row dataset, run the estimator,
/// score every in-sample row and n fresh out-of-sample rows, and aggregate.
inline AttackReport run_membership_audit(const MeanAuditProblem& problem,
                                         const MeanEstimator& estimator,
                                         std::size_t n, std::size_t d,
                                         std::size_t reps, Seed seed,
                                         double threshold = 0.0) {
  if (n < 1 || d < 1 || reps < 1) {
    throw std::invalid_argument("run_membership_audit: n, d, reps must be >= 1");
  }
  AttackReport report;
  report.problem = problem.support.has_value() ? "sparse_mean" : "mean";
  report.n = n;
  report.d = d;
  report.reps = reps;
  report.seed = seed.value;
  report.threshold = threshold;

  detail::RunningStats in_stats, out_stats;
  Rng root(seed);
  for (std::size_t rep = 0; rep < reps; ++rep) {
    Rng rng = root.child(rep);
    const std::vector<double> mu = problem.draw_mean(rng);
    if (mu.size() != d) {
      throw std::invalid_argument("run_membership_audit: draw_mean returned wrong d");
    }

    DataMatrix x(n, d);
    for (std::size_t i = 0; i < n; ++i) {
      const std::vector<double> row = problem.draw_row(mu, rng);
      if (row.size() != d) {
        throw std::invalid_argument("run_membership_audit: draw_row returned wrong d");
      }
      for (std::size_t j = 0; j < d; ++j) x(i, j) = row[j];
    }

    std::vector<double> m_out;
    try {
      m_out = estimator(x, Seed{seed.value ^ (rep + 1)});
    } catch (const std::exception& e) {
      throw std::runtime_error("run_membership_audit: estimator failed at rep " +
                               std::to_string(rep) + ": " + e.what());
    }
    if (m_out.size() != d) {
      throw std::invalid_argument("run_membership_audit: estimator returned wrong d");
    }

    detail::RunningStats rep_in, rep_out;
    const auto score_row = [&](const std::vector<double>& row) {
      return problem.support.has_value()
                 ? sparse_mean_attack(row, mu, *problem.support, m_out)
                 : mean_attack(row, mu, m_out);
    };
    for (std::size_t i = 0; i < n; ++i) {
      const double a = score_row(x.row_copy(i));
      if (!std::isfinite(a)) {
        throw std::runtime_error("run_membership_audit: non-finite score");
      }
      report.scores.push_back(AttackScore{a, true, rep});
      in_stats.add(a);
      rep_in.add(a);
      if (threshold > 0.0 && a > threshold) ++report.exceed_in;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double a = score_row(problem.draw_row(mu, rng));
      if (!std::isfinite(a)) {
        throw std::runtime_error("run_membership_audit: non-finite score");
      }
      report.scores.push_back(AttackScore{a, false, rep});
      out_stats.add(a);
      rep_out.add(a);
      if (threshold > 0.0 && a > threshold) ++report.exceed_out;
    }
    report.rep_summaries.push_back(RepSummary{rep, rep_in.mean(), rep_out.mean()});
  }
  detail::finalize_report(report, in_stats, out_stats);
  return report;
}

inline AttackReport run_membership_audit(const RegressionAuditProblem& problem,
                                         const RegressionEstimator& estimator,
                                         std::size_t n, std::size_t d,
                                         std::size_t reps, Seed seed,
                                         double threshold = 0.0) {
  if (n < 1 || d < 1 || reps < 1) {
    throw std::invalid_argument("run_membership_audit: n, d, reps must be >= 1");
  }
  AttackReport report;
  report.problem =
      problem.support.has_value() ? "sparse_regression" : "regression";
  report.n = n;
  report.d = d;
  report.reps = reps;
  report.seed = seed.value;
  report.threshold = threshold;

  detail::RunningStats in_stats, out_stats;
  Rng root(seed);
  for (std::size_t rep = 0; rep < reps; ++rep) {
    Rng rng = root.child(rep);
    const std::vector<double> beta = problem.draw_beta(rng);
    if (beta.size() != d) {
      throw std::invalid_argument("run_membership_audit: draw_beta returned wrong d");
    }

    DataMatrix x(n, d);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto [row, yi] = problem.draw_row(beta, rng);
      if (row.size() != d) {
        throw std::invalid_argument("run_membership_audit: draw_row returned wrong d");
      }
      for (std::size_t j = 0; j < d; ++j) x(i, j) = row[j];
      y[i] = yi;
    }
    RegressionData data(x, y);

    std::vector<double> m_out;
    try {
      m_out = estimator(data, Seed{seed.value ^ (rep + 1)});
    } catch (const std::exception& e) {
      throw std::runtime_error("run_membership_audit: estimator failed at rep " +
                               std::to_string(rep) + ": " + e.what());
    }
    if (m_out.size() != d) {
      throw std::invalid_argument("run_membership_audit: estimator returned wrong d");
    }

    detail::RunningStats rep_in, rep_out;
    for (std::size_t i = 0; i < n; ++i) {
      const double a =
          regression_attack(y[i], x.row_copy(i), beta, m_out, problem.support);
      if (!std::isfinite(a)) {
        throw std::runtime_error("run_membership_audit: non-finite score");
      }
      report.scores.push_back(AttackScore{a, true, rep});
      in_stats.add(a);
      rep_in.add(a);
      if (threshold > 0.0 && a > threshold) ++report.exceed_in;
    }
    for (std::size_t i = 0; i < n; ++i) {
      auto [row, yi] = problem.draw_row(beta, rng);
      const double a = regression_attack(yi, row, beta, m_out, problem.support);
      if (!std::isfinite(a)) {
        throw std::runtime_error("run_membership_audit: non-finite score");
      }
      report.scores.push_back(AttackScore{a, false, rep});
      out_stats.add(a);
      rep_out.add(a);
      if (threshold > 0.0 && a > threshold) ++report.exceed_out;
    }
    report.rep_summaries.push_back(RepSummary{rep, rep_in.mean(), rep_out.mean()});
  }
  detail::finalize_report(report, in_stats, out_stats);
  return report;
}

}  // namespace dpest
