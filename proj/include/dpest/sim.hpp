#pragma once

// Experiment harness: synthetic data generation, repetition loops over an
// n grid, l2-error aggregation, and log-log rate fits for the private
// estimators against their zero-noise counterparts.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dpest/core.hpp"
#include "dpest/io.hpp"
#include "dpest/mean.hpp"
#include "dpest/regression.hpp"
#include "dpest/tuning.hpp"

namespace dpest {

/// The default privacy schedule delta(n) = 10 / n^1.1.
inline double delta_rule(std::size_t n) {
  if (n < 2) throw std::invalid_argument("delta_rule: n must be >= 2");
  return 10.0 / std::pow(static_cast<double>(n), 1.1);
}

struct ExperimentSpec {
  std::string problem;  // mean | sparse_mean | regression | sparse_regression
  std::vector<std::size_t> n_grid;
  std::string d_rule = "fixed";  // fixed | equal_n | double_n
  std::size_t d = 0;             // used when d_rule == fixed
  std::optional<std::size_t> s_star;
  double epsilon = 0.5;
  std::optional<double> delta;  // default: delta_rule(n)
  std::size_t reps = 1;
  Seed seed;
  double sigma = 1.0;  // regression noise level; mean data are N(mu, I)

  // Truncation: theoretical R scaled by truncation_scale, a fixed level, or
  // private data-driven quantiles (mean problems; 10% of budget).
  std::string truncation = "theoretical";  // theoretical | data_driven | fixed
  double truncation_scale = 1.0;
  double r_fixed = 0.0;

  // Regression iteration schedule: eta0 = eta0_scale * d, T = iterations,
  // design norm bound c_x by rule, gradient bound B derived from them.
  std::size_t iterations = 10;
  double eta0_scale = 0.0;
  double c = 1.0;
  double c0 = 1.0;
  std::string cx_rule = "unit";  // unit | sqrt_s_over_d

  void validate() const {
    if (problem != "mean" && problem != "sparse_mean" &&
        problem != "regression" && problem != "sparse_regression") {
      throw std::invalid_argument("ExperimentSpec: unknown problem '" + problem +
                                  "'");
    }
    if (n_grid.empty()) throw std::invalid_argument("ExperimentSpec: empty n grid");
    if (reps < 1) throw std::invalid_argument("ExperimentSpec: reps must be >= 1");
    if (d_rule != "fixed" && d_rule != "equal_n" && d_rule != "double_n") {
      throw std::invalid_argument("ExperimentSpec: unknown d_rule '" + d_rule + "'");
    }
    if (d_rule == "fixed" && d < 1) {
      throw std::invalid_argument("ExperimentSpec: d must be >= 1 for fixed d_rule");
    }
    const bool sparse = problem == "sparse_mean" || problem == "sparse_regression";
    if (sparse && !s_star.has_value()) {
      throw std::invalid_argument("ExperimentSpec: sparse problems need s_star");
    }
    if (truncation != "theoretical" && truncation != "data_driven" &&
        truncation != "fixed") {
      throw std::invalid_argument("ExperimentSpec: unknown truncation '" +
                                  truncation + "'");
    }
    if (truncation == "fixed" && !(r_fixed > 0.0)) {
      throw std::invalid_argument("ExperimentSpec: fixed truncation needs r_fixed");
    }
    const bool regression_family =
        problem == "regression" || problem == "sparse_regression";
    if (regression_family) {
      if (!(eta0_scale > 0.0)) {
        throw std::invalid_argument("ExperimentSpec: regression needs eta0_scale");
      }
      if (iterations < 1) {
        throw std::invalid_argument("ExperimentSpec: iterations must be >= 1");
      }
      if (truncation == "data_driven") {
        throw std::invalid_argument(
            "ExperimentSpec: data_driven truncation applies to mean problems");
      }
      if (cx_rule != "unit" && cx_rule != "sqrt_s_over_d") {
        throw std::invalid_argument("ExperimentSpec: unknown cx_rule '" + cx_rule +
                                    "'");
      }
    }
    PrivacyBudget(epsilon, delta.value_or(delta_rule(*std::max_element(
                               n_grid.begin(), n_grid.end()))))
        .validate();
  }

  std::size_t resolve_d(std::size_t n) const {
    if (d_rule == "equal_n") return n;
    if (d_rule == "double_n") return 2 * n;
    return d;
  }

  double resolve_delta(std::size_t n) const {
    return delta.has_value() ? *delta : delta_rule(n);
  }
};

inline ExperimentSpec parse_experiment_spec(const json& j) {
  ExperimentSpec spec;
  try {
    spec.problem = j.at("problem").get<std::string>();
    spec.n_grid = j.at("n_grid").get<std::vector<std::size_t>>();
    spec.reps = j.at("reps").get<std::size_t>();
    spec.epsilon = j.at("epsilon").get<double>();
    spec.seed = Seed{j.value("seed", std::uint64_t{0})};
    spec.d_rule = j.value("d_rule", std::string("fixed"));
    spec.d = j.value("d", std::size_t{0});
    if (j.contains("s_star")) spec.s_star = j.at("s_star").get<std::size_t>();
    if (j.contains("delta")) spec.delta = j.at("delta").get<double>();
    spec.sigma = j.value("sigma", 1.0);
    spec.truncation = j.value("truncation", std::string("theoretical"));
    spec.truncation_scale = j.value("truncation_scale", 1.0);
    spec.r_fixed = j.value("r_fixed", 0.0);
    spec.iterations = j.value("iterations", std::size_t{10});
    spec.eta0_scale = j.value("eta0_scale", 0.0);
    spec.c = j.value("c", 1.0);
    spec.c0 = j.value("c0", 1.0);
    spec.cx_rule = j.value("cx_rule", std::string("unit"));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("experiment spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

// ---------------------------------------------------------------------------
// Data generation

/// mu coordinates i.i.d. Uniform(-10, 10) (all d, or the first s_star with
/// the rest zero); rows i.i.d. N(mu, I).
inline std::pair<DataMatrix, std::vector<double>> gen_mean_data(
    std::size_t n, std::size_t d, std::optional<std::size_t> s_star, Seed seed) {
  if (n < 1 || d < 1) throw std::invalid_argument("gen_mean_data: n, d >= 1");
  if (s_star.has_value() && (*s_star < 1 || *s_star > d)) {
    throw std::invalid_argument("gen_mean_data: requires 1 <= s_star <= d");
  }
  Rng rng(seed);
  std::vector<double> mu(d, 0.0);
  const std::size_t active = s_star.value_or(d);
  for (std::size_t j = 0; j < active; ++j) mu[j] = -10.0 + 20.0 * rng.uniform();

  DataMatrix x(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) x(i, j) = mu[j] + rng.gaussian();
  }
  return {std::move(x), std::move(mu)};
}

/// Design entries i.i.d. Uniform(-1/sqrt(d), 1/sqrt(d)); beta uniform on the
/// unit sphere (full, or supported on the first s_star coordinates);
/// y = X beta + N(0, sigma^2).
inline std::pair<RegressionData, std::vector<double>> gen_regression_data(
    std::size_t n, std::size_t d, std::optional<std::size_t> s_star,
    double sigma, Seed seed) {
  if (n < 1 || d < 1) throw std::invalid_argument("gen_regression_data: n, d >= 1");
  if (s_star.has_value() && (*s_star < 1 || *s_star > d)) {
    throw std::invalid_argument("gen_regression_data: requires 1 <= s_star <= d");
  }
  if (!(sigma >= 0.0)) {
    throw std::invalid_argument("gen_regression_data: sigma must be >= 0");
  }
  Rng rng(seed);
  std::vector<double> beta(d, 0.0);
  const std::size_t active = s_star.value_or(d);
  double norm = 0.0;
  while (norm == 0.0) {
    for (std::size_t j = 0; j < active; ++j) beta[j] = rng.gaussian();
    norm = l2_norm(beta);
  }
  for (std::size_t j = 0; j < active; ++j) beta[j] /= norm;

  const double bound = 1.0 / std::sqrt(static_cast<double>(d));
  DataMatrix x(n, d);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double pred = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      x(i, j) = bound * (2.0 * rng.uniform() - 1.0);
      pred += x(i, j) * beta[j];
    }
    y[i] = pred + (sigma > 0.0 ? rng.gaussian(sigma) : 0.0);
  }
  return {RegressionData(std::move(x), std::move(y)), std::move(beta)};
}

// ---------------------------------------------------------------------------
// ExperimentResult

struct CellResult {
  std::size_t n = 0, d = 0, s = 0;  // s = 0 for dense problems
  double epsilon = 0.0, delta = 0.0;
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  double err_private = 0.0;
  double err_nonprivate = 0.0;
  bool valid = true;
  std::string error;
};

struct GridAggregate {
  std::size_t n = 0;
  std::size_t count = 0;
  double mean_private = 0.0, se_private = 0.0;
  double mean_nonprivate = 0.0, se_nonprivate = 0.0;
};

struct ExperimentResult {
  std::string problem;
  std::vector<CellResult> cells;
  std::vector<GridAggregate> aggregates;
  double slope_private = 0.0;     // log mean error vs log n, least squares
  double slope_nonprivate = 0.0;

  std::string to_csv() const {
    std::string out =
        "problem,n,d,s,epsilon,delta,rep,seed,err_private,err_nonprivate\n";
    for (const auto& c : cells) {
      if (!c.valid) continue;
      out += problem + ',' + std::to_string(c.n) + ',' + std::to_string(c.d) +
             ',' + std::to_string(c.s) + ',' + format_double(c.epsilon) + ',' +
             format_double(c.delta) + ',' + std::to_string(c.rep) + ',' +
             std::to_string(c.seed) + ',' + format_double(c.err_private) + ',' +
             format_double(c.err_nonprivate) + '\n';
    }
    return out;
  }

  json summary_json() const {
    json agg = json::array();
    for (const auto& a : aggregates) {
      agg.push_back({{"n", a.n},
                     {"count", a.count},
                     {"mean_private", a.mean_private},
                     {"se_private", a.se_private},
                     {"mean_nonprivate", a.mean_nonprivate},
                     {"se_nonprivate", a.se_nonprivate}});
    }
    return json{{"problem", problem},
                {"aggregates", agg},
                {"slope_private", slope_private},
                {"slope_nonprivate", slope_nonprivate}};
  }
};

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a,
                              std::uint64_t b) {
  std::uint64_t h = base ^ (a * 0x9e3779b97f4a7c15ULL) ^
                    (b * 0xc2b2ae3d27d4eb4fULL);
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  return h;
}

inline double loglog_slope(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 2) return 0.0;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t m = 0;
  for (const auto& [n, err] : pts) {
    if (!(err > 0.0)) continue;
    const double x = std::log(n), y = std::log(err);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) return 0.0;
  const double dm = static_cast<double>(m);
  return (dm * sxy - sx * sy) / (dm * sxx - sx * sx);
}

// Truncated mean over an asymmetric interval plus Gaussian noise calibrated
// for the equivalent half-width (hi - lo)/2.
inline std::vector<double> interval_private_mean(const DataMatrix& x, double lo,
                                                 double hi,
                                                 const PrivacyBudget& budget,
                                                 Seed seed,
                                                 double noise_multiplier) {
  std::vector<double> est = truncated_mean(x, lo, hi);
  const double half = (hi - lo) / 2.0;
  const double stddev =
      noise_multiplier *
      std::sqrt(private_mean_noise_variance(x.rows(), x.cols(), half, budget));
  if (stddev > 0.0) {
    Rng rng(seed);
    for (double& e : est) e += rng.gaussian(stddev);
  }
  return est;
}

}  // namespace detail

/// One private + one zero-noise run per (n, rep) cell; aggregates and rate
/// fits over the grid. Cell seeds are derived arithmetically from the spec
/// seed, so results do not depend on execution order.
inline ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const bool sparse =
      spec.problem == "sparse_mean" || spec.problem == "sparse_regression";
  const bool regression_family =
      spec.problem == "regression" || spec.problem == "sparse_regression";

  ExperimentResult result;
  result.problem = spec.problem;

  for (std::size_t gi = 0; gi < spec.n_grid.size(); ++gi) {
    const std::size_t n = spec.n_grid[gi];
    const std::size_t d = spec.resolve_d(n);
    const double delta = spec.resolve_delta(n);
    const PrivacyBudget budget(spec.epsilon, delta);

    for (std::size_t rep = 0; rep < spec.reps; ++rep) {
      const std::size_t cell = gi * spec.reps + rep;
      const Seed data_seed{detail::mix_seed(spec.seed.value, cell, 0)};
      const Seed est_seed{detail::mix_seed(spec.seed.value, cell, 1)};
      const Seed trunc_seed{detail::mix_seed(spec.seed.value, cell, 2)};

      CellResult cr;
      cr.n = n;
      cr.d = d;
      cr.s = sparse ? *spec.s_star : 0;
      cr.epsilon = spec.epsilon;
      cr.delta = delta;
      cr.rep = rep;
      cr.seed = data_seed.value;

      try {
        if (!regression_family) {
          auto [x, mu] = gen_mean_data(n, d, sparse ? spec.s_star : std::nullopt,
                                       data_seed);
          const auto run = [&](double mult) -> std::vector<double> {
            if (spec.truncation == "data_driven" && !sparse) {
              // 10% of epsilon buys the truncation interval; the release
              // keeps the remaining 90% and the whole delta.
              const PrivacyBudget trunc_budget(spec.epsilon / 10.0, 0.0);
              const PrivacyBudget est_budget(spec.epsilon * 0.9, delta);
              const TruncationInterval iv = data_driven_truncation(
                  x, trunc_budget, trunc_seed, 100.0, 2000, mult);
              return detail::interval_private_mean(x, iv.lo, iv.hi, est_budget,
                                                   est_seed, mult);
            }
            MeanConfig cfg;
            cfg.budget = budget;
            cfg.seed = est_seed;
            cfg.noise_multiplier = mult;
            if (spec.truncation == "fixed") {
              cfg.r = spec.r_fixed;
            } else {
              cfg.r = spec.truncation_scale *
                      theoretical_truncation(spec.sigma, n);
            }
            if (sparse) {
              if (spec.truncation == "data_driven") {
                const PrivacyBudget trunc_budget(spec.epsilon / 10.0, 0.0);
                const TruncationInterval iv = data_driven_truncation(
                    x, trunc_budget, trunc_seed, 100.0, 2000, mult);
                cfg.r = std::max(std::abs(iv.lo), std::abs(iv.hi));
                cfg.budget = PrivacyBudget(spec.epsilon * 0.9, delta);
              }
              cfg.s = spec.s_star;
              return private_sparse_mean(x, cfg).estimate;
            }
            return private_mean(x, cfg).estimate;
          };
          cr.err_private = l2_distance(run(1.0), mu);
          cr.err_nonprivate = l2_distance(run(0.0), mu);
        } else {
          auto [data, beta] = gen_regression_data(
              n, d, sparse ? spec.s_star : std::nullopt, spec.sigma, data_seed);
          RegressionConfig cfg;
          cfg.iterations = spec.iterations;
          cfg.budget = budget;
          cfg.seed = est_seed;
          cfg.c = spec.c;
          cfg.c0 = spec.c0;
          cfg.eta0 = spec.eta0_scale * static_cast<double>(d);
          if (spec.truncation == "fixed") {
            cfg.r = spec.r_fixed;
          } else {
            cfg.r = spec.truncation_scale * spec.sigma *
                    std::sqrt(2.0 * std::log(static_cast<double>(n)));
          }
          double cx = 1.0;
          if (spec.cx_rule == "sqrt_s_over_d") {
            cx = std::sqrt(static_cast<double>(*spec.s_star) /
                           static_cast<double>(d));
          }
          cfg.b = 4.0 * (cfg.r + spec.c0 * cx) * cx;
          if (sparse) {
            cfg.b /= std::sqrt(static_cast<double>(*spec.s_star));
            cfg.s = spec.s_star;
          }
          const auto run = [&](double mult) {
            RegressionConfig c = cfg;
            c.noise_multiplier = mult;
            return sparse ? private_sparse_regression(data, c).first
                          : private_linear_regression(data, c).first;
          };
          cr.err_private = l2_distance(run(1.0), beta);
          cr.err_nonprivate = l2_distance(run(0.0), beta);
        }
      } catch (const std::exception& e) {
        cr.valid = false;
        cr.error = e.what();
      }
      result.cells.push_back(std::move(cr));
    }
  }

  // Aggregates per grid point.
  std::vector<std::pair<double, double>> priv_pts, nonpriv_pts;
  for (std::size_t gi = 0; gi < spec.n_grid.size(); ++gi) {
    const std::size_t n = spec.n_grid[gi];
    GridAggregate agg;
    agg.n = n;
    double sp = 0.0, spp = 0.0, snp = 0.0, snpp = 0.0;
    for (const auto& c : result.cells) {
      if (c.n != n || !c.valid) continue;
      ++agg.count;
      sp += c.err_private;
      spp += c.err_private * c.err_private;
      snp += c.err_nonprivate;
      snpp += c.err_nonprivate * c.err_nonprivate;
    }
    if (agg.count > 0) {
      const double m = static_cast<double>(agg.count);
      agg.mean_private = sp / m;
      agg.mean_nonprivate = snp / m;
      if (agg.count > 1) {
        agg.se_private = std::sqrt(
            std::max(0.0, (spp - m * agg.mean_private * agg.mean_private) /
                              (m - 1.0)) /
            m);
        agg.se_nonprivate = std::sqrt(
            std::max(0.0,
                     (snpp - m * agg.mean_nonprivate * agg.mean_nonprivate) /
                         (m - 1.0)) /
            m);
      }
      priv_pts.emplace_back(static_cast<double>(n), agg.mean_private);
      nonpriv_pts.emplace_back(static_cast<double>(n), agg.mean_nonprivate);
    }
    result.aggregates.push_back(agg);
  }
  result.slope_private = detail::loglog_slope(priv_pts);
  result.slope_nonprivate = detail::loglog_slope(nonpriv_pts);
  return result;
}

}  // namespace dpest
