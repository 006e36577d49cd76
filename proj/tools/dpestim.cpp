// dpestim: command-line front end for the private estimators.
//
// Commands:
//   estimate {mean, sparse-mean, regression, sparse-regression}
//   experiment --spec FILE
//   audit --spec FILE
//   tune {quantile, cv-sparsity}
//
// Exit codes: 0 success, 1 runtime/data failure, 2 usage/validation failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dpest/dpest.hpp"

namespace {

using dpest::json;

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

dpest::Seed resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag.has_value()) return dpest::Seed{*flag};
  if (const char* env = std::getenv("DP_ESTIM_SEED")) {
    try {
      return dpest::Seed{std::stoull(env)};
    } catch (const std::exception&) {
      throw UsageError("DP_ESTIM_SEED is not a valid unsigned integer");
    }
  }
  return dpest::Seed{0};
}

dpest::DataMatrix load_matrix(const std::string& path) {
  try {
    return dpest::read_matrix_csv(path);
  } catch (const std::exception& e) {
    throw DataError(e.what());
  }
}

dpest::RegressionData load_regression(const std::string& path) {
  try {
    return dpest::read_regression_csv(path);
  } catch (const std::exception& e) {
    throw DataError(e.what());
  }
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("bad JSON in " + path + ": " + e.what());
  }
}

void write_text(const std::optional<std::string>& path, const std::string& body) {
  if (path.has_value()) {
    std::ofstream out(*path);
    if (!out) throw DataError("cannot write " + *path);
    out << body;
  } else {
    std::cout << body;
  }
}

void write_sidecar(const std::optional<std::string>& sidecar,
                   const std::optional<std::string>& out, const json& body) {
  std::optional<std::string> path = sidecar;
  if (!path.has_value() && out.has_value()) path = *out + ".json";
  if (!path.has_value()) return;
  std::ofstream f(*path);
  if (!f) throw DataError("cannot write " + *path);
  f << body.dump(2) << '\n';
}

// -------------------------------------------------------------------------
// estimate

struct EstimateFlags {
  std::string in;
  double eps = 0.0;
  double delta = 0.0;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> sidecar;
  double r = 0.0;
  bool data_driven = false;
  std::size_t s = 0;
  std::size_t t = 10;
  double eta0 = 0.0;
  double c = 1.0;
  double b = 0.0;
  std::optional<double> c0;
};

void add_common_estimate_flags(CLI::App* cmd, EstimateFlags& f) {
  cmd->add_option("--in", f.in, "input CSV (one row per individual)")
      ->required();
  cmd->add_option("--eps", f.eps, "privacy epsilon")->required();
  cmd->add_option("--delta", f.delta, "privacy delta")->required();
  cmd->add_option("--seed", f.seed, "RNG seed (env DP_ESTIM_SEED if absent)");
  cmd->add_option("--out", f.out, "output CSV path (stdout if absent)");
  cmd->add_option("--sidecar", f.sidecar,
                  "budget-ledger JSON path (default: <out>.json)");
}

void check_budget(const EstimateFlags& f) {
  if (!(f.eps > 0.0)) throw UsageError("--eps must be positive");
  if (!(f.delta > 0.0) || !(f.delta < 1.0)) {
    throw UsageError("--delta must lie in (0, 1)");
  }
}

json estimate_config_echo(const std::string& kind, const EstimateFlags& f,
                          dpest::Seed seed) {
  json cfg{{"command", "estimate"}, {"kind", kind},  {"in", f.in},
           {"eps", f.eps},          {"delta", f.delta}, {"seed", seed.value}};
  if (f.r > 0.0) cfg["r"] = f.r;
  if (f.data_driven) cfg["data_driven"] = true;
  if (f.s > 0) cfg["s"] = f.s;
  return cfg;
}

int run_estimate_mean(const EstimateFlags& f, bool sparse) {
  check_budget(f);
  if (!f.data_driven && !(f.r > 0.0)) {
    throw UsageError("--r must be positive (or pass --data-driven)");
  }
  if (f.data_driven && f.r > 0.0) {
    throw UsageError("--r and --data-driven are mutually exclusive");
  }
  const dpest::Seed seed = resolve_seed(f.seed);
  const dpest::DataMatrix x = load_matrix(f.in);
  if (sparse) {
    if (f.s < 1) throw UsageError("--s must be >= 1");
    if (f.s > x.cols()) {
      throw UsageError("--s must be <= the number of data columns (" +
                       std::to_string(x.cols()) + ")");
    }
  }

  std::vector<double> estimate;
  dpest::BudgetLedger ledger(dpest::PrivacyBudget(f.eps, f.delta));
  dpest::MeanConfig cfg;
  cfg.seed = seed;
  if (f.data_driven) {
    // 10% of epsilon buys the truncation interval; the estimator keeps 90%
    // of epsilon and the whole delta.
    const dpest::PrivacyBudget trunc_budget(f.eps / 10.0, 0.0);
    const dpest::TruncationInterval iv = dpest::data_driven_truncation(
        x, trunc_budget, dpest::Seed{seed.value ^ 0x7475ULL});
    ledger.absorb(iv.ledger, 1, 10, "truncation");
    cfg.budget = dpest::PrivacyBudget(f.eps * 0.9, f.delta);
    if (sparse) {
      cfg.r = std::max(std::abs(iv.lo), std::abs(iv.hi));
      cfg.s = f.s;
      const dpest::MeanResult res = dpest::private_sparse_mean(x, cfg);
      estimate = res.estimate;
      ledger.absorb(res.budget, 9, 10, "estimator");
    } else {
      estimate = dpest::detail::interval_private_mean(x, iv.lo, iv.hi,
                                                      cfg.budget, seed, 1.0);
      ledger.charge("estimator/gaussian_release", 9, 10);
    }
  } else {
    cfg.budget = dpest::PrivacyBudget(f.eps, f.delta);
    cfg.r = f.r;
    if (sparse) cfg.s = f.s;
    const dpest::MeanResult res =
        sparse ? dpest::private_sparse_mean(x, cfg) : dpest::private_mean(x, cfg);
    estimate = res.estimate;
    ledger.absorb(res.budget, 1, 1, "estimator");
  }

  write_text(f.out, dpest::vector_to_csv(estimate));
  json sidecar{{"config", estimate_config_echo(sparse ? "sparse-mean" : "mean",
                                               f, seed)},
               {"budget", ledger.to_json()}};
  write_sidecar(f.sidecar, f.out, sidecar);
  return 0;
}

int run_estimate_regression(const EstimateFlags& f, bool sparse) {
  check_budget(f);
  if (!(f.r > 0.0)) throw UsageError("--r must be positive");
  if (!(f.eta0 > 0.0)) throw UsageError("--eta0 must be positive");
  if (!(f.c > 0.0)) throw UsageError("--c must be positive");
  if (!(f.b > 0.0)) throw UsageError("--b must be positive");
  if (f.t < 1) throw UsageError("--t must be >= 1");
  const dpest::Seed seed = resolve_seed(f.seed);
  const dpest::RegressionData data = load_regression(f.in);
  if (sparse) {
    if (f.s < 1) throw UsageError("--s must be >= 1");
    if (f.s > data.cols()) {
      throw UsageError("--s must be <= the number of design columns (" +
                       std::to_string(data.cols()) + ")");
    }
  }

  dpest::RegressionConfig cfg;
  cfg.eta0 = f.eta0;
  cfg.iterations = f.t;
  cfg.r = f.r;
  cfg.c = f.c;
  cfg.b = f.b;
  cfg.c0 = f.c0;
  cfg.budget = dpest::PrivacyBudget(f.eps, f.delta);
  cfg.seed = seed;
  if (sparse) cfg.s = f.s;

  auto [beta, trace] = sparse ? dpest::private_sparse_regression(data, cfg)
                              : dpest::private_linear_regression(data, cfg);
  write_text(f.out, dpest::vector_to_csv(beta));

  json cfg_echo = estimate_config_echo(
      sparse ? "sparse-regression" : "regression", f, seed);
  cfg_echo["t"] = f.t;
  cfg_echo["eta0"] = f.eta0;
  cfg_echo["c"] = f.c;
  cfg_echo["b"] = f.b;
  json sidecar{{"config", cfg_echo}, {"budget", trace.budget.to_json()}};
  write_sidecar(f.sidecar, f.out, sidecar);
  return 0;
}

// -------------------------------------------------------------------------
// experiment

int run_experiment_cmd(const std::string& spec_path,
                       std::optional<std::string> out_csv,
                       std::optional<std::string> out_json, bool dry_run,
                       int jobs) {
  (void)jobs;  // accepted for interface stability; execution is sequential
               // and results are seed-keyed, so N never changes the output
  dpest::ExperimentSpec spec;
  try {
    spec = dpest::parse_experiment_spec(load_json(spec_path));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  if (dry_run) {
    std::cout << "problem=" << spec.problem << " reps=" << spec.reps
              << " eps=" << dpest::format_double(spec.epsilon) << '\n';
    for (std::size_t n : spec.n_grid) {
      std::cout << "n=" << n << " d=" << spec.resolve_d(n)
                << " delta=" << dpest::format_double(spec.resolve_delta(n))
                << '\n';
    }
    return 0;
  }

  const dpest::ExperimentResult result = dpest::run_experiment(spec);

  std::string stem = spec_path;
  if (const auto slash = stem.find_last_of('/'); slash != std::string::npos) {
    stem = stem.substr(slash + 1);
  }
  if (const auto dot = stem.find_last_of('.'); dot != std::string::npos) {
    stem = stem.substr(0, dot);
  }
  const std::string csv_path = out_csv.value_or(stem + "_results.csv");
  const std::string json_path = out_json.value_or(stem + "_summary.json");
  write_text(csv_path, result.to_csv());
  write_text(json_path, result.summary_json().dump(2) + "\n");

  std::cout << "n,mean_private,se_private,mean_nonprivate,se_nonprivate\n";
  for (const auto& a : result.aggregates) {
    std::cout << a.n << ',' << dpest::format_double(a.mean_private) << ','
              << dpest::format_double(a.se_private) << ','
              << dpest::format_double(a.mean_nonprivate) << ','
              << dpest::format_double(a.se_nonprivate) << '\n';
  }
  std::cout << "slope_private=" << dpest::format_double(result.slope_private)
            << " slope_nonprivate="
            << dpest::format_double(result.slope_nonprivate) << '\n';
  return 0;
}

// -------------------------------------------------------------------------
// audit

int run_audit_cmd(const std::string& spec_path,
                  std::optional<std::string> out) {
  const json spec = load_json(spec_path);
  std::string generator, estimator;
  std::size_t n = 0, d = 0, reps = 0;
  double threshold = 0.0;
  std::uint64_t seed_val = 0;
  try {
    generator = spec.at("generator").get<std::string>();
    estimator = spec.at("estimator").get<std::string>();
    n = spec.at("n").get<std::size_t>();
    d = spec.at("d").get<std::size_t>();
    reps = spec.at("reps").get<std::size_t>();
    seed_val = spec.value("seed", std::uint64_t{0});
    threshold = spec.value("threshold", 0.0);
  } catch (const json::exception& e) {
    throw UsageError(std::string("audit spec: ") + e.what());
  }

  dpest::MeanAuditProblem problem;
  if (generator == "rademacher_mean") {
    problem.draw_mean = [d](dpest::Rng& rng) {
      std::vector<double> mu(d);
      for (auto& m : mu) m = rng.uniform() < 0.5 ? -1.0 : 1.0;
      return mu;
    };
  } else if (generator == "uniform_mean") {
    problem.draw_mean = [d](dpest::Rng& rng) {
      std::vector<double> mu(d);
      for (auto& m : mu) m = -10.0 + 20.0 * rng.uniform();
      return mu;
    };
  } else {
    throw UsageError("audit spec: unknown generator '" + generator + "'");
  }
  problem.draw_row = [d](const std::vector<double>& mu, dpest::Rng& rng) {
    std::vector<double> row(d);
    for (std::size_t j = 0; j < d; ++j) row[j] = mu[j] + rng.gaussian();
    return row;
  };

  dpest::MeanEstimator fn;
  if (estimator == "sample_mean") {
    fn = [](const dpest::DataMatrix& x, dpest::Seed) {
      std::vector<double> mean(x.cols(), 0.0);
      for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j) mean[j] += x(i, j);
      }
      for (double& m : mean) m /= static_cast<double>(x.rows());
      return mean;
    };
  } else if (estimator == "constant") {
    fn = [d](const dpest::DataMatrix&, dpest::Seed) {
      return std::vector<double>(d, 0.0);
    };
  } else if (estimator == "private_mean") {
    double eps = 0.0, delta = 0.0, r = 0.0;
    try {
      eps = spec.at("epsilon").get<double>();
      delta = spec.at("delta").get<double>();
      r = spec.at("r").get<double>();
    } catch (const json::exception& e) {
      throw UsageError(std::string("audit spec (private_mean): ") + e.what());
    }
    fn = [eps, delta, r](const dpest::DataMatrix& x, dpest::Seed s) {
      dpest::MeanConfig cfg;
      cfg.r = r;
      cfg.budget = dpest::PrivacyBudget(eps, delta);
      cfg.seed = s;
      return dpest::private_mean(x, cfg).estimate;
    };
  } else {
    throw UsageError("audit spec: unknown estimator '" + estimator + "'");
  }

  const dpest::AttackReport report = dpest::run_membership_audit(
      problem, fn, n, d, reps, dpest::Seed{seed_val}, threshold);
  write_text(out, report.to_json().dump(2) + "\n");
  std::cout << "z=" << dpest::format_double(report.z) << '\n';
  return 0;
}

// -------------------------------------------------------------------------
// tune

int run_tune_quantile(const std::string& in, double q, double eps, double lo,
                      double hi, std::size_t bins,
                      std::optional<std::uint64_t> seed_flag) {
  if (!(eps > 0.0)) throw UsageError("--eps must be positive");
  if (!(q > 0.0) || !(q < 1.0)) throw UsageError("--q must lie in (0, 1)");
  if (!(lo < hi)) throw UsageError("--lo must be below --hi");
  const dpest::DataMatrix x = load_matrix(in);
  const double value = dpest::private_quantile(
      x.values(), q, dpest::PrivacyBudget(eps, 0.0), lo, hi, bins,
      resolve_seed(seed_flag));
  std::cout << dpest::format_double(value) << '\n';
  return 0;
}

int run_tune_cv(const std::string& in, const std::vector<std::size_t>& grid,
                std::size_t folds, double clip_lo, double clip_hi, double eps,
                double delta, double r, std::optional<std::uint64_t> seed_flag,
                std::optional<std::string> out) {
  if (!(eps > 0.0)) throw UsageError("--eps must be positive");
  if (!(delta > 0.0) || !(delta < 1.0)) throw UsageError("--delta must lie in (0, 1)");
  if (!(r > 0.0)) throw UsageError("--r must be positive");
  if (grid.empty()) throw UsageError("--grid must be nonempty");
  const dpest::DataMatrix x = load_matrix(in);
  for (std::size_t s : grid) {
    if (s > x.cols()) {
      throw UsageError("grid candidate " + std::to_string(s) +
                       " exceeds the number of data columns (" +
                       std::to_string(x.cols()) + ")");
    }
  }

  dpest::MeanConfig base;
  base.r = r;
  base.budget = dpest::PrivacyBudget(eps, delta);
  dpest::CvOptions opt;
  opt.folds = folds;
  opt.clip_lo = clip_lo;
  opt.clip_hi = clip_hi;
  opt.seed = resolve_seed(seed_flag);
  const dpest::CvResult res = dpest::private_cv_sparsity(
      x, grid, base, dpest::PrivacyBudget(eps, delta), opt);

  std::cout << res.chosen_s << '\n';
  if (out.has_value()) {
    json scores = json::array();
    for (double s : res.scores) scores.push_back(s);
    write_text(out, json{{"chosen_s", res.chosen_s},
                         {"scores", scores},
                         {"budget", res.ledger.to_json()}}
                        .dump(2) +
                    "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"differentially private estimation toolkit"};
  app.require_subcommand(1);

  // estimate
  CLI::App* estimate = app.add_subcommand("estimate", "run an estimator");
  estimate->require_subcommand(1);
  EstimateFlags ef;
  CLI::App* est_mean = estimate->add_subcommand("mean", "private mean");
  add_common_estimate_flags(est_mean, ef);
  est_mean->add_option("--r", ef.r, "truncation level");
  est_mean->add_flag("--data-driven", ef.data_driven,
                     "private quantile truncation (10% of eps)");
  CLI::App* est_smean =
      estimate->add_subcommand("sparse-mean", "private sparse mean");
  add_common_estimate_flags(est_smean, ef);
  est_smean->add_option("--r", ef.r, "truncation level");
  est_smean->add_flag("--data-driven", ef.data_driven,
                      "private quantile truncation (10% of eps)");
  est_smean->add_option("--s", ef.s, "sparsity")->required();
  CLI::App* est_reg =
      estimate->add_subcommand("regression", "private linear regression");
  add_common_estimate_flags(est_reg, ef);
  est_reg->add_option("--r", ef.r, "response truncation level")->required();
  est_reg->add_option("--t", ef.t, "iterations");
  est_reg->add_option("--eta0", ef.eta0, "step size")->required();
  est_reg->add_option("--c", ef.c, "feasibility radius");
  est_reg->add_option("--b", ef.b, "gradient-sensitivity scale")->required();
  est_reg->add_option("--c0", ef.c0, "norm bound on the true parameter");
  CLI::App* est_sreg =
      estimate->add_subcommand("sparse-regression", "private sparse regression");
  add_common_estimate_flags(est_sreg, ef);
  est_sreg->add_option("--r", ef.r, "response truncation level")->required();
  est_sreg->add_option("--t", ef.t, "iterations");
  est_sreg->add_option("--eta0", ef.eta0, "step size")->required();
  est_sreg->add_option("--c", ef.c, "feasibility radius");
  est_sreg->add_option("--b", ef.b, "gradient-sensitivity scale")->required();
  est_sreg->add_option("--c0", ef.c0, "norm bound on the true parameter");
  est_sreg->add_option("--s", ef.s, "sparsity")->required();

  // experiment
  CLI::App* experiment =
      app.add_subcommand("experiment", "run a simulation grid");
  std::string exp_spec;
  std::optional<std::string> exp_csv, exp_json;
  bool dry_run = false;
  int jobs = 1;
  experiment->add_option("--spec", exp_spec, "experiment spec JSON")->required();
  experiment->add_option("--out-csv", exp_csv, "results CSV path");
  experiment->add_option("--out-json", exp_json, "summary JSON path");
  experiment->add_flag("--dry-run", dry_run, "print the resolved grid only");
  experiment->add_option("--jobs", jobs, "parallelism hint");

  // audit
  CLI::App* audit = app.add_subcommand("audit", "membership-inference audit");
  std::string audit_spec;
  std::optional<std::string> audit_out;
  audit->add_option("--spec", audit_spec, "audit spec JSON")->required();
  audit->add_option("--out", audit_out, "report JSON path (stdout if absent)");

  // tune
  CLI::App* tune = app.add_subcommand("tune", "hyperparameter selection");
  tune->require_subcommand(1);
  CLI::App* tq = tune->add_subcommand("quantile", "private quantile");
  std::string tq_in;
  double tq_q = 0.5, tq_eps = 0.0, tq_lo = 0.0, tq_hi = 0.0;
  std::size_t tq_bins = 2000;
  std::optional<std::uint64_t> tq_seed;
  tq->add_option("--in", tq_in, "input CSV")->required();
  tq->add_option("--q", tq_q, "quantile in (0, 1)")->required();
  tq->add_option("--eps", tq_eps, "privacy epsilon")->required();
  tq->add_option("--lo", tq_lo, "histogram lower bound")->required();
  tq->add_option("--hi", tq_hi, "histogram upper bound")->required();
  tq->add_option("--bins", tq_bins, "histogram cells");
  tq->add_option("--seed", tq_seed, "RNG seed");

  CLI::App* tcv = tune->add_subcommand("cv-sparsity", "private CV over sparsity");
  std::string tcv_in;
  std::vector<std::size_t> tcv_grid;
  std::size_t tcv_folds = 5;
  double tcv_clip_lo = 0.0, tcv_clip_hi = 0.0, tcv_eps = 0.0, tcv_delta = 0.0,
         tcv_r = 0.0;
  std::optional<std::uint64_t> tcv_seed;
  std::optional<std::string> tcv_out;
  tcv->add_option("--in", tcv_in, "input CSV")->required();
  tcv->add_option("--grid", tcv_grid, "sparsity candidates")->required();
  tcv->add_option("--folds", tcv_folds, "CV folds");
  tcv->add_option("--clip-lo", tcv_clip_lo, "score clip lower bound")->required();
  tcv->add_option("--clip-hi", tcv_clip_hi, "score clip upper bound")->required();
  tcv->add_option("--eps", tcv_eps, "privacy epsilon")->required();
  tcv->add_option("--delta", tcv_delta, "privacy delta")->required();
  tcv->add_option("--r", tcv_r, "estimator truncation level")->required();
  tcv->add_option("--seed", tcv_seed, "RNG seed");
  tcv->add_option("--out", tcv_out, "selection JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (est_mean->parsed()) return run_estimate_mean(ef, false);
    if (est_smean->parsed()) return run_estimate_mean(ef, true);
    if (est_reg->parsed()) return run_estimate_regression(ef, false);
    if (est_sreg->parsed()) return run_estimate_regression(ef, true);
    if (experiment->parsed()) {
      return run_experiment_cmd(exp_spec, exp_csv, exp_json, dry_run, jobs);
    }
    if (audit->parsed()) return run_audit_cmd(audit_spec, audit_out);
    if (tq->parsed()) {
      return run_tune_quantile(tq_in, tq_q, tq_eps, tq_lo, tq_hi, tq_bins,
                               tq_seed);
    }
    if (tcv->parsed()) {
      return run_tune_cv(tcv_in, tcv_grid, tcv_folds, tcv_clip_lo, tcv_clip_hi,
                         tcv_eps, tcv_delta, tcv_r, tcv_seed, tcv_out);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
