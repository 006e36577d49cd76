// Acceptance harness: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Each criterion carries its own runtime budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dpest/dpest.hpp"

using namespace dpest;

namespace {

struct Check {
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

int g_failed = 0;

void run_criterion(int id, const std::string& name, double time_limit_s,
                   const std::function<void(Check&)>& body) {
  Check check;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(check);
  } catch (const std::exception& e) {
    check.failures.push_back(std::string("exception: ") + e.what());
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (time_limit_s > 0.0 && elapsed > time_limit_s) {
    std::ostringstream ss;
    ss << "runtime " << elapsed << "s exceeds " << time_limit_s << "s";
    check.failures.push_back(ss.str());
  }
  std::ostringstream line;
  line.precision(3);
  if (check.failures.empty()) {
    line << "PASS criterion " << id << ": " << name << " (" << elapsed << "s)";
  } else {
    ++g_failed;
    line << "FAIL criterion " << id << ": " << name << " (" << elapsed
         << "s) --";
    for (const auto& f : check.failures) line << ' ' << f;
  }
  std::cout << line.str() << std::endl;
}

std::string spec_dir() {
  if (const char* env = std::getenv("SPEC_DIR")) return env;
  return "../specs";
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return json::parse(in);
}

// ---------------------------------------------------------------------------
// Independent optimization oracles for the zero-noise degenerations.

std::vector<double> half_grad_oracle(const RegressionData& data,
                                     const std::vector<double>& beta) {
  const std::size_t n = data.rows(), d = data.cols();
  std::vector<double> g(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double pred = 0.0;
    for (std::size_t j = 0; j < d; ++j) pred += data.x(i, j) * beta[j];
    const double resid = pred - data.y[i];
    for (std::size_t j = 0; j < d; ++j) g[j] += resid * data.x(i, j);
  }
  for (double& v : g) v /= static_cast<double>(n);
  return g;
}

std::vector<double> gd_oracle(const RegressionData& data, double eta,
                              std::size_t iters, double radius) {
  std::vector<double> beta(data.cols(), 0.0);
  for (std::size_t t = 0; t < iters; ++t) {
    const std::vector<double> g = half_grad_oracle(data, beta);
    for (std::size_t j = 0; j < beta.size(); ++j) beta[j] -= eta * g[j];
    beta = project_l2_ball(std::move(beta), radius);
  }
  return beta;
}

std::vector<double> iht_oracle(const RegressionData& data, double eta,
                               std::size_t iters, std::size_t s,
                               double radius) {
  std::vector<double> beta(data.cols(), 0.0);
  for (std::size_t t = 0; t < iters; ++t) {
    const std::vector<double> g = half_grad_oracle(data, beta);
    for (std::size_t j = 0; j < beta.size(); ++j) beta[j] -= eta * g[j];
    // keep the s largest magnitudes, lowest index on ties
    std::vector<std::size_t> idx(beta.size());
    for (std::size_t j = 0; j < beta.size(); ++j) idx[j] = j;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(beta[a]) > std::abs(beta[b]);
    });
    std::vector<double> kept(beta.size(), 0.0);
    for (std::size_t k = 0; k < s; ++k) kept[idx[k]] = beta[idx[k]];
    beta = project_l2_ball(std::move(kept), radius);
  }
  return beta;
}

// ---------------------------------------------------------------------------
// Criteria

void criterion_noise_calibration(Check& check) {
  // Private mean: realized per-coordinate noise over 1e4 seeded draws.
  {
    const std::size_t n = 50, d = 4;
    DataMatrix x(n, d);
    MeanConfig cfg;
    cfg.r = 1.0;
    cfg.budget = PrivacyBudget(0.7, 1e-4);
    const std::vector<double> base = truncated_mean(x, cfg.r);
    const double want =
        std::sqrt(private_mean_noise_variance(n, d, cfg.r, cfg.budget));
    std::vector<double> sumsq(d, 0.0);
    const std::size_t draws = 10000;
    for (std::uint64_t rep = 0; rep < draws; ++rep) {
      cfg.seed = Seed{rep};
      const MeanResult res = private_mean(x, cfg);
      for (std::size_t j = 0; j < d; ++j) {
        const double w = res.estimate[j] - base[j];
        sumsq[j] += w * w;
      }
    }
    for (std::size_t j = 0; j < d; ++j) {
      const double got = std::sqrt(sumsq[j] / static_cast<double>(draws));
      check.require(std::abs(got - want) <= 0.03 * want,
                    "mean noise stddev off at coordinate " + std::to_string(j));
    }
  }
  // Regression: on an all-zero instance the gradient vanishes, so one
  // unprojected iteration outputs exactly the per-step noise draw.
  {
    const std::size_t n = 20, d = 4;
    RegressionData data(DataMatrix(n, d), std::vector<double>(n, 0.0));
    RegressionConfig cfg;
    cfg.eta0 = 2.0;
    cfg.iterations = 1;
    cfg.r = 1.0;
    cfg.c = 1e9;
    cfg.b = 1.5;
    cfg.budget = PrivacyBudget(0.8, 1e-4);
    const double want = std::sqrt(regression_noise_variance(n, cfg));
    std::vector<double> sumsq(d, 0.0);
    const std::size_t draws = 10000;
    for (std::uint64_t rep = 0; rep < draws; ++rep) {
      cfg.seed = Seed{rep + 1};
      const auto [beta, trace] = private_linear_regression(data, cfg);
      for (std::size_t j = 0; j < d; ++j) sumsq[j] += beta[j] * beta[j];
    }
    for (std::size_t j = 0; j < d; ++j) {
      const double got = std::sqrt(sumsq[j] / static_cast<double>(draws));
      check.require(std::abs(got - want) <= 0.03 * want,
                    "regression noise stddev off at coordinate " +
                        std::to_string(j));
    }
  }
}

void criterion_sensitivity(Check& check) {
  Rng rng(Seed{4242});
  std::size_t violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 198);
    const std::size_t d = 1 + static_cast<std::size_t>(rng.uniform() * 49);
    const double r = 0.5 + 2.5 * rng.uniform();
    DataMatrix x(n, d);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) x(i, j) = 5.0 * rng.gaussian();
    }
    std::vector<double> repl(d);
    for (std::size_t j = 0; j < d; ++j) repl[j] = 5.0 * rng.gaussian();
    const std::size_t row = static_cast<std::size_t>(rng.uniform() * n);
    const DataMatrix xp = adjacent_datasets(x, row, repl);

    const std::vector<double> m1 = truncated_mean(x, r);
    const std::vector<double> m2 = truncated_mean(xp, r);
    const double l2_bound =
        2.0 * r * std::sqrt(static_cast<double>(d)) / static_cast<double>(n);
    const double linf_bound = 2.0 * r / static_cast<double>(n);
    std::vector<double> diff(d);
    for (std::size_t j = 0; j < d; ++j) diff[j] = m1[j] - m2[j];
    if (l2_distance(m1, m2) > l2_bound + 1e-12) ++violations;
    if (linf_norm(diff) > linf_bound + 1e-12) ++violations;
  }
  check.require(violations == 0,
                std::to_string(violations) + " sensitivity violations");
}

void criterion_peeling(Check& check) {
  Rng rng(Seed{99});
  const PrivacyBudget budget(1.0, 0.05);
  std::size_t violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> v(50);
    for (double& x : v) x = 4.0 * rng.gaussian();
    const double lambda = 0.05 + 0.3 * rng.uniform();
    const PeelingResult res = peel(v, 5, budget, lambda, rng, true);
    if (!verify_peeling_accuracy(v, res, 1.0)) ++violations;
  }
  check.require(violations == 0,
                std::to_string(violations) + " accuracy violations");
}

void criterion_zero_noise(Check& check) {
  // private_mean -> truncated mean, bit-exact.
  {
    Rng rng(Seed{10});
    DataMatrix x(30, 6);
    for (std::size_t i = 0; i < 30; ++i) {
      for (std::size_t j = 0; j < 6; ++j) x(i, j) = 3.0 * rng.gaussian();
    }
    MeanConfig cfg;
    cfg.r = 2.0;
    cfg.budget = PrivacyBudget(0.5, 1e-5);
    cfg.noise_multiplier = 0.0;
    check.require(private_mean(x, cfg).estimate == truncated_mean(x, 2.0),
                  "zero-noise mean != truncated mean");
  }
  // private_sparse_mean -> exact hard threshold on distinct magnitudes.
  {
    DataMatrix x(4, 5);
    const std::vector<double> mu{9.0, 0.1, -7.0, 0.2, 3.0};
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 5; ++j) x(i, j) = mu[j];
    }
    MeanConfig cfg;
    cfg.r = 20.0;
    cfg.s = 3;
    cfg.budget = PrivacyBudget(0.5, 1e-5);
    cfg.noise_multiplier = 0.0;
    const std::vector<double> want{9.0, 0.0, -7.0, 0.0, 3.0};
    check.require(private_sparse_mean(x, cfg).estimate == want,
                  "zero-noise sparse mean != hard-thresholded mean");
  }
  // private_linear_regression -> projected-GD oracle within 1e-8.
  {
    const auto [data, beta_star] =
        gen_regression_data(100, 5, std::nullopt, 0.1, Seed{11});
    RegressionConfig cfg;
    cfg.eta0 = 5.0;
    cfg.iterations = 60;
    cfg.r = 10.0;
    cfg.c = 2.0;
    cfg.b = 1.0;
    cfg.budget = PrivacyBudget(1.0, 1e-5);
    cfg.noise_multiplier = 0.0;
    const auto [beta, trace] = private_linear_regression(data, cfg);
    const std::vector<double> oracle = gd_oracle(data, 5.0, 60, 2.0);
    check.require(l2_distance(beta, oracle) < 1e-8,
                  "zero-noise GD deviates from the oracle");
  }
  // private_sparse_regression -> IHT oracle + exact support recovery on a
  // noiseless instance (n=200, d=400, s*=5).
  {
    const std::size_t n = 200, d = 400, s = 5;
    const auto [data, beta_star] =
        gen_regression_data(n, d, s, 0.0, Seed{12});
    RegressionConfig cfg;
    cfg.eta0 = 3.0 * static_cast<double>(d);
    cfg.iterations = 40;
    cfg.r = 10.0;
    cfg.c = 2.0;
    cfg.b = 1.0;
    cfg.s = s;
    cfg.budget = PrivacyBudget(1.0, 1e-5);
    cfg.noise_multiplier = 0.0;
    const auto [beta, trace] = private_sparse_regression(data, cfg);
    const std::vector<double> oracle = iht_oracle(data, cfg.eta0, 40, s, 2.0);
    check.require(l2_distance(beta, oracle) < 1e-9,
                  "zero-noise IHT deviates from the oracle");
    bool support_ok = true;
    for (std::size_t j = 0; j < d; ++j) {
      if ((beta_star[j] != 0.0) != (beta[j] != 0.0)) support_ok = false;
    }
    check.require(support_ok, "support recovery failed");
    check.require(l2_distance(beta, beta_star) < 1e-6,
                  "noiseless recovery error above 1e-6");
  }
}

void criterion_gradient(Check& check) {
  Rng rng(Seed{13});
  std::size_t violations = 0;
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t n = 5 + static_cast<std::size_t>(rng.uniform() * 20);
    const std::size_t d = 1 + static_cast<std::size_t>(rng.uniform() * 6);
    DataMatrix x(n, d);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) x(i, j) = rng.gaussian();
      y[i] = rng.gaussian();
    }
    RegressionData data(x, y);
    std::vector<double> beta(d);
    for (double& b : beta) b = 0.5 * rng.gaussian();

    // R far above max|y| keeps the clamp inactive.
    const std::vector<double> half = truncated_half_gradient(data, beta, 100.0);
    const double h = 1e-6;
    for (std::size_t j = 0; j < d; ++j) {
      std::vector<double> hi = beta, lo = beta;
      hi[j] += h;
      lo[j] -= h;
      const double fd =
          (least_squares_loss(data, hi) - least_squares_loss(data, lo)) /
          (2.0 * h);
      const double denom = std::max(1.0, std::abs(fd));
      if (std::abs(2.0 * half[j] - fd) / denom > 1e-5) ++violations;
    }
  }
  check.require(violations == 0,
                std::to_string(violations) + " gradient mismatches");
}

ExperimentResult run_bundled(const std::string& file) {
  const ExperimentSpec spec =
      parse_experiment_spec(load_json(spec_dir() + "/" + file));
  return run_experiment(spec);
}

void criterion_fig1a(Check& check) {
  const ExperimentResult res = run_bundled("fig1a.json");
  check.require(res.aggregates.size() == 3, "expected 3 grid points");
  for (std::size_t i = 0; i + 1 < res.aggregates.size(); ++i) {
    check.require(res.aggregates[i + 1].mean_private <
                      res.aggregates[i].mean_private,
                  "private error not strictly decreasing");
    const double gap_i =
        res.aggregates[i].mean_private - res.aggregates[i].mean_nonprivate;
    const double gap_n = res.aggregates[i + 1].mean_private -
                         res.aggregates[i + 1].mean_nonprivate;
    check.require(gap_n < gap_i, "privacy gap not decreasing");
  }
  check.require(std::abs(res.slope_nonprivate + 0.5) <= 0.1,
                "nonprivate slope outside -0.5 +/- 0.1 (got " +
                    std::to_string(res.slope_nonprivate) + ")");
}

void criterion_fig1cd(Check& check) {
  const ExperimentResult c = run_bundled("fig1c.json");
  for (std::size_t i = 0; i + 1 < c.aggregates.size(); ++i) {
    check.require(
        c.aggregates[i + 1].mean_private < c.aggregates[i].mean_private,
        "sparse-mean private error not decreasing");
  }
  const ExperimentResult d = run_bundled("fig1d.json");
  for (std::size_t i = 0; i + 1 < d.aggregates.size(); ++i) {
    check.require(
        d.aggregates[i + 1].mean_private < d.aggregates[i].mean_private,
        "sparse-regression private error not decreasing");
  }
  check.require(d.slope_private >= -2.2 && d.slope_private <= -0.5,
                "sparse-regression slope outside [-2.2, -0.5] (got " +
                    std::to_string(d.slope_private) + ")");
}

AttackReport run_bundled_audit(const std::string& file) {
  const json spec = load_json(spec_dir() + "/" + file);
  const auto n = spec.at("n").get<std::size_t>();
  const auto d = spec.at("d").get<std::size_t>();
  const auto reps = spec.at("reps").get<std::size_t>();
  const Seed seed{spec.value("seed", std::uint64_t{0})};
  const std::string estimator = spec.at("estimator").get<std::string>();

  MeanAuditProblem problem;
  problem.draw_mean = [d](Rng& rng) {
    std::vector<double> mu(d);
    for (double& m : mu) m = rng.uniform() < 0.5 ? -1.0 : 1.0;
    return mu;
  };
  problem.draw_row = [d](const std::vector<double>& mu, Rng& rng) {
    std::vector<double> row(d);
    for (std::size_t j = 0; j < d; ++j) row[j] = mu[j] + rng.gaussian();
    return row;
  };
  MeanEstimator fn;
  if (estimator == "sample_mean") {
    fn = [](const DataMatrix& x, Seed) {
      std::vector<double> mean(x.cols(), 0.0);
      for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j) mean[j] += x(i, j);
      }
      for (double& m : mean) m /= static_cast<double>(x.rows());
      return mean;
    };
  } else {
    fn = [d](const DataMatrix&, Seed) { return std::vector<double>(d, 0.0); };
  }
  return run_membership_audit(problem, fn, n, d, reps, seed);
}

void criterion_audit(Check& check) {
  const AttackReport traced = run_bundled_audit("audit_sample_mean.json");
  check.require(traced.z > 10.0,
                "sample-mean z = " + std::to_string(traced.z) + " <= 10");
  const double se_traced =
      traced.sd_out / std::sqrt(static_cast<double>(traced.n * traced.reps));
  check.require(std::abs(traced.mean_out) <= 4.0 * se_traced,
                "sample-mean out-of-sample mean beyond 4 SE of 0");

  const AttackReport flat = run_bundled_audit("audit_constant.json");
  check.require(std::abs(flat.z) < 3.0,
                "constant-estimator |z| = " + std::to_string(flat.z) + " >= 3");
  const double se_flat =
      flat.sd_out / std::sqrt(static_cast<double>(flat.n * flat.reps));
  check.require(std::abs(flat.mean_out) <= 4.0 * se_flat,
                "constant out-of-sample mean beyond 4 SE of 0");
}

void criterion_budget(Check& check) {
  const auto exact = [&](const BudgetLedger& ledger, const std::string& who) {
    const auto [num, den] = ledger.consumed_fraction();
    check.require(num == den && ledger.fully_consumed(),
                  who + " ledger does not sum exactly to the budget (" +
                      std::to_string(num) + "/" + std::to_string(den) + ")");
    check.require(ledger.to_json().at("fully_consumed").get<bool>(),
                  who + " json ledger not fully consumed");
  };

  Rng rng(Seed{14});
  DataMatrix x(60, 8);
  for (std::size_t i = 0; i < 60; ++i) {
    for (std::size_t j = 0; j < 8; ++j) x(i, j) = rng.gaussian();
  }

  MeanConfig mc;
  mc.r = 3.0;
  mc.budget = PrivacyBudget(0.5, 1e-4);
  mc.seed = Seed{1};
  exact(private_mean(x, mc).budget, "private_mean");

  mc.s = 3;
  exact(private_sparse_mean(x, mc).budget, "private_sparse_mean");

  // Data-driven composite, exactly as the CLI assembles it.
  {
    const double eps = 0.8, delta = 1e-4;
    BudgetLedger ledger(PrivacyBudget(eps, delta));
    const TruncationInterval iv = data_driven_truncation(
        x, PrivacyBudget(eps / 10.0, 0.0), Seed{2});
    exact(iv.ledger, "data_driven_truncation");
    ledger.absorb(iv.ledger, 1, 10, "truncation");
    MeanConfig dd;
    dd.r = std::max(std::abs(iv.lo), std::abs(iv.hi));
    dd.s = 3;
    dd.budget = PrivacyBudget(eps * 0.9, delta);
    dd.seed = Seed{3};
    const MeanResult res = private_sparse_mean(x, dd);
    ledger.absorb(res.budget, 9, 10, "estimator");
    exact(ledger, "data-driven composite");
  }

  const auto [data, beta_star] =
      gen_regression_data(80, 6, std::nullopt, 0.5, Seed{15});
  RegressionConfig rc;
  rc.eta0 = 6.0;
  rc.iterations = 7;
  rc.r = 3.0;
  rc.c = 2.0;
  rc.b = 1.0;
  rc.budget = PrivacyBudget(1.0, 1e-4);
  rc.seed = Seed{4};
  exact(private_linear_regression(data, rc).second.budget,
        "private_linear_regression");

  rc.iterations = 5;
  rc.s = 2;
  exact(private_sparse_regression(data, rc).second.budget,
        "private_sparse_regression");
}

void criterion_tuning(Check& check) {
  // Zero-noise quantile on 1e5 standard normals.
  {
    Rng rng(Seed{16});
    std::vector<double> x(100000);
    for (double& v : x) v = rng.gaussian();
    const double q = private_quantile(x, 0.975, PrivacyBudget(1.0, 0.0), -10.0,
                                      10.0, 2000, Seed{1}, 0.0);
    check.require(std::abs(q - 1.95996) < 0.1,
                  "q(0.975) = " + std::to_string(q) + " off by > 0.1");
  }
  // Zero-noise CV returns the argmin candidate.
  {
    const auto [x, mu] = gen_mean_data(100, 30, 5, Seed{17});
    MeanConfig base;
    base.r = 15.0;
    base.budget = PrivacyBudget(0.5, 1e-4);
    CvOptions opt;
    opt.clip_lo = 0.0;
    opt.clip_hi = 1000.0;
    opt.selection_epsilon_override = std::numeric_limits<double>::infinity();
    const std::vector<std::size_t> grid{1, 5, 25};
    const CvResult res =
        private_cv_sparsity(x, grid, base, PrivacyBudget(0.5, 1e-4), opt);
    std::size_t argmin = 0;
    for (std::size_t i = 1; i < res.scores.size(); ++i) {
      if (res.scores[i] < res.scores[argmin]) argmin = i;
    }
    check.require(res.chosen_s == grid[argmin],
                  "zero-noise CV did not return the argmin");
  }
  // Private CV run: grid s*/2 .. 2 s*, s* = 20, n = d = 1000, 20 reps.
  {
    const std::size_t n = 1000, d = 1000, s_star = 20;
    const std::vector<std::size_t> grid{10, 15, 20, 25, 30, 35, 40};
    const double eps = 0.5;
    const double delta = delta_rule(n);
    const double r = theoretical_truncation(1.0, n);

    double err_chosen_total = 0.0, err_star_total = 0.0;
    bool in_range = true;
    const std::size_t reps = 20;
    for (std::size_t rep = 0; rep < reps; ++rep) {
      const Seed data_seed{detail::mix_seed(0x5252, rep, 0)};
      const auto [x, mu] = gen_mean_data(n, d, s_star, data_seed);

      MeanConfig base;
      base.r = r;
      base.budget = PrivacyBudget(eps, delta);
      CvOptions opt;
      opt.clip_lo = 0.0;
      opt.clip_hi = 2000.0;
      opt.seed = Seed{detail::mix_seed(0x5252, rep, 1)};
      const CvResult cv =
          private_cv_sparsity(x, grid, base, PrivacyBudget(eps, delta), opt);
      if (cv.chosen_s < 10 || cv.chosen_s > 40) in_range = false;

      // The selection consumed eps/5; both final fits use the remaining 4/5.
      MeanConfig fit;
      fit.r = r;
      fit.budget = PrivacyBudget(0.8 * eps, delta);
      fit.seed = Seed{detail::mix_seed(0x5252, rep, 2)};
      fit.s = cv.chosen_s;
      err_chosen_total += l2_distance(private_sparse_mean(x, fit).estimate, mu);
      fit.s = s_star;
      err_star_total += l2_distance(private_sparse_mean(x, fit).estimate, mu);
    }
    check.require(in_range, "CV selected a sparsity outside [10, 40]");
    const double ratio = err_chosen_total / err_star_total;
    check.require(ratio <= 2.0,
                  "CV error ratio " + std::to_string(ratio) + " > 2");
  }
}

}  // namespace

int main() {
  run_criterion(1, "noise calibration within 3% over 1e4 draws", 10.0,
                criterion_noise_calibration);
  run_criterion(2, "truncated-mean sensitivity soundness (1000 pairs)", 5.0,
                criterion_sensitivity);
  run_criterion(3, "peeling accuracy inequality (1000 trials)", 10.0,
                criterion_peeling);
  run_criterion(4, "zero-noise degenerations match exact oracles", 30.0,
                criterion_zero_noise);
  run_criterion(5, "half-gradient matches finite differences", 5.0,
                criterion_gradient);
  run_criterion(6, "mean-estimation error trends (fig1a grid)", 180.0,
                criterion_fig1a);
  run_criterion(7, "sparse mean/regression trends (fig1c/fig1d grids)", 300.0,
                criterion_fig1cd);
  run_criterion(8, "membership-audit separation", 120.0, criterion_audit);
  run_criterion(9, "budget ledgers sum exactly to the requested budget", 0.0,
                criterion_budget);
  run_criterion(10, "tuning: quantiles, CV argmin, private CV run", 180.0,
                criterion_tuning);

  if (g_failed > 0) {
    std::cout << g_failed << " criterion(s) failed" << std::endl;
    return 1;
  }
  std::cout << "all criteria passed" << std::endl;
  return 0;
}
