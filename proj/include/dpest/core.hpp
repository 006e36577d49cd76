#pragma once

// Shared domain types: privacy budgets with rational share accounting,
// data matrices (rows are individuals), seeded deterministic randomness,
// and the vector primitives used by every estimator.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace dpest {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Seed / Rng

struct Seed {
  std::uint64_t value = 0;
};

/// Deterministic random source. One instance per top-level estimator call;
/// draws happen in a documented canonical order (iteration-major, then
/// noise index, then coordinate) so that a fixed seed yields bit-identical
/// outputs on every platform.
///
/// mt19937_64 is fully specified by the standard; the transforms below
/// (53-bit uniform, Box-Muller, inverse-CDF Laplace) avoid the
/// implementation-defined std <random> distributions.
class Rng {
 public:
  explicit Rng(Seed seed) : gen_(seed.value) {}

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Uniform in (0, 1]; never zero, safe to pass to log().
  double uniform_pos() { return 1.0 - uniform(); }

  /// Standard normal via Box-Muller (cosine branch; two uniforms per draw).
  double gaussian() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
  }

  double gaussian(double stddev) { return stddev * gaussian(); }

  /// Laplace(scale) via inverse CDF of a single uniform draw.
  double laplace(double scale) {
    const double u = uniform() - 0.5;
    const double sign = (u < 0.0) ? -1.0 : 1.0;
    return -scale * sign * std::log1p(-2.0 * std::abs(u));
  }

  std::vector<double> gaussian_vector(std::size_t d, double stddev) {
    std::vector<double> out(d);
    for (auto& v : out) v = gaussian(stddev);
    return out;
  }

  std::vector<double> laplace_vector(std::size_t d, double scale) {
    std::vector<double> out(d);
    for (auto& v : out) v = laplace(scale);
    return out;
  }

  /// Derive an independent child stream (for parallelizable repetitions).
  Rng child(std::uint64_t index) {
    const std::uint64_t base = gen_();
    return Rng(Seed{base ^ (0x9e3779b97f4a7c15ULL * (index + 1))});
  }

 private:
  std::mt19937_64 gen_;
};

// ---------------------------------------------------------------------------
// PrivacyBudget

struct PrivacyBudget {
  double epsilon = 0.0;
  double delta = 0.0;

  PrivacyBudget() = default;
  PrivacyBudget(double eps, double del) : epsilon(eps), delta(del) {
    validate();
  }

  void validate() const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
      throw std::invalid_argument("PrivacyBudget: epsilon must be positive");
    }
    if (!(delta >= 0.0) || !(delta < 1.0)) {
      throw std::invalid_argument("PrivacyBudget: delta must lie in [0, 1)");
    }
  }

  bool operator==(const PrivacyBudget& o) const {
    return epsilon == o.epsilon && delta == o.delta;
  }
};

/// An even k-way split of a budget. Accounting is rational (k equal shares
/// of the recorded total), so compose() recovers the original exactly
/// regardless of floating-point rounding in the displayed shares.
struct BudgetSplit {
  PrivacyBudget total;
  int parts = 1;

  PrivacyBudget part() const {
    return PrivacyBudget(total.epsilon / parts, total.delta / parts);
  }
  PrivacyBudget compose() const { return total; }
};

inline BudgetSplit split_budget(const PrivacyBudget& b, int k) {
  if (k < 1) throw std::invalid_argument("split: k must be >= 1");
  return BudgetSplit{b, k};
}

/// Additive composition of independently calibrated budgets.
inline PrivacyBudget compose(const std::vector<PrivacyBudget>& parts) {
  double eps = 0.0, del = 0.0;
  for (const auto& p : parts) {
    eps += p.epsilon;
    del += p.delta;
  }
  return PrivacyBudget(eps, del);
}

// ---------------------------------------------------------------------------
// BudgetLedger
//
// Records which fraction of the caller's total (epsilon, delta) each private
// release consumed. Shares are exact rationals so the sum can be checked
// against the advertised total without floating-point slack.

struct BudgetEntry {
  std::string label;
  long long num = 0;  // fraction of the total budget, num/den
  long long den = 1;
};

class BudgetLedger {
 public:
  BudgetLedger() = default;
  explicit BudgetLedger(PrivacyBudget total) : total_(total) {}

  void charge(std::string label, long long num, long long den) {
    if (den <= 0 || num < 0) {
      throw std::invalid_argument("BudgetLedger: bad fraction");
    }
    entries_.push_back(BudgetEntry{std::move(label), num, den});
  }

  /// Fold a sub-ledger in, scaling its shares by num/den of this total.
  void absorb(const BudgetLedger& sub, long long num, long long den,
              const std::string& prefix) {
    for (const auto& e : sub.entries_) {
      charge(prefix + "/" + e.label, e.num * num, e.den * den);
    }
  }

  // Exact rational sum of all shares.
  std::pair<long long, long long> consumed_fraction() const {
    long long num = 0, den = 1;
    for (const auto& e : entries_) {
      const long long g = std::gcd(den, e.den);
      const long long nden = den / g * e.den;
      num = num * (nden / den) + e.num * (nden / e.den);
      den = nden;
      const long long g2 = std::gcd(num, den);
      if (g2 > 1) {
        num /= g2;
        den /= g2;
      }
    }
    return {num, den};
  }

  bool fully_consumed() const {
    auto [num, den] = consumed_fraction();
    return num == den;
  }

  const PrivacyBudget& total() const { return total_; }
  const std::vector<BudgetEntry>& entries() const { return entries_; }

  json to_json() const {
    json entries = json::array();
    for (const auto& e : entries_) {
      entries.push_back({{"label", e.label},
                         {"num", e.num},
                         {"den", e.den},
                         {"epsilon", total_.epsilon * e.num / e.den},
                         {"delta", total_.delta * e.num / e.den}});
    }
    auto [num, den] = consumed_fraction();
    return json{{"total", {{"epsilon", total_.epsilon}, {"delta", total_.delta}}},
                {"entries", entries},
                {"consumed_num", num},
                {"consumed_den", den},
                {"fully_consumed", num == den}};
  }

 private:
  PrivacyBudget total_{1.0, 0.0};
  std::vector<BudgetEntry> entries_;
};

// ---------------------------------------------------------------------------
// DataMatrix / RegressionData

/// n x d row-major sample; one row per individual (the unit of privacy).
class DataMatrix {
 public:
  DataMatrix() = default;
  DataMatrix(std::size_t n, std::size_t d)
      : n_(n), d_(d), values_(n * d, 0.0) {
    if (n < 1 || d < 1) {
      throw std::invalid_argument("DataMatrix: n and d must be >= 1");
    }
  }
  DataMatrix(std::size_t n, std::size_t d, std::vector<double> values)
      : n_(n), d_(d), values_(std::move(values)) {
    if (n < 1 || d < 1) {
      throw std::invalid_argument("DataMatrix: n and d must be >= 1");
    }
    if (values_.size() != n * d) {
      throw std::invalid_argument("DataMatrix: value count mismatch");
    }
    for (double v : values_) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("DataMatrix: entries must be finite");
      }
    }
  }

  std::size_t rows() const { return n_; }
  std::size_t cols() const { return d_; }

  double operator()(std::size_t i, std::size_t j) const {
    return values_[i * d_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) {
    return values_[i * d_ + j];
  }

  const double* row(std::size_t i) const { return values_.data() + i * d_; }
  double* row(std::size_t i) { return values_.data() + i * d_; }

  std::vector<double> row_copy(std::size_t i) const {
    return std::vector<double>(row(i), row(i) + d_);
  }

  const std::vector<double>& values() const { return values_; }

  bool operator==(const DataMatrix& o) const {
    return n_ == o.n_ && d_ == o.d_ && values_ == o.values_;
  }

 private:
  std::size_t n_ = 0, d_ = 0;
  std::vector<double> values_;
};

struct RegressionData {
  DataMatrix x;
  std::vector<double> y;

  RegressionData() = default;
  RegressionData(DataMatrix design, std::vector<double> response)
      : x(std::move(design)), y(std::move(response)) {
    if (x.rows() != y.size()) {
      throw std::invalid_argument("RegressionData: x.n must equal |y|");
    }
    for (double v : y) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("RegressionData: responses must be finite");
      }
    }
  }

  std::size_t rows() const { return x.rows(); }
  std::size_t cols() const { return x.cols(); }
};

// ---------------------------------------------------------------------------
// NoiseLedger

struct NoiseDraw {
  std::string tag;          // "selection", "output", "gradient", ...
  std::size_t iteration = 0;
  std::string distribution; // "laplace" or "gaussian"
  double scale = 0.0;       // Laplace scale or Gaussian stddev
  std::vector<double> values;
};

struct NoiseLedger {
  std::vector<NoiseDraw> draws;

  void record(NoiseDraw draw) { draws.push_back(std::move(draw)); }
  std::size_t size() const { return draws.size(); }
};

// ---------------------------------------------------------------------------
// Vector primitives

inline double clamp_scalar(double x, double r) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument("clamp_scalar: x must be finite");
  }
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument("clamp_scalar: R must be positive");
  }
  return std::min(std::max(x, -r), r);
}

inline double clamp_interval(double x, double lo, double hi) {
  return std::min(std::max(x, lo), hi);
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("dot: dimension mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double l2_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double l2_distance(const std::vector<double>& a,
                          const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("l2_distance: dimension mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return std::sqrt(s);
}

inline double linf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

/// Projection onto the l2 ball of radius C. Identity inside the ball,
/// radial rescale outside; idempotent and non-expansive.
inline std::vector<double> project_l2_ball(std::vector<double> v, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw std::invalid_argument("project_l2_ball: C must be positive");
  }
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument("project_l2_ball: v must be finite");
    }
  }
  const double norm = l2_norm(v);
  if (norm > c) {
    const double f = c / norm;
    for (double& x : v) x *= f;
  }
  return v;
}

/// Copy of x with one row replaced. Test/audit utility matching the
/// adjacency relation: outputs differ from x in at most one row.
inline DataMatrix adjacent_datasets(const DataMatrix& x, std::size_t row,
                                    const std::vector<double>& replacement) {
  if (row >= x.rows()) {
    throw std::invalid_argument("adjacent_datasets: row index out of range");
  }
  if (replacement.size() != x.cols()) {
    throw std::invalid_argument("adjacent_datasets: replacement length != d");
  }
  DataMatrix out = x;
  for (std::size_t j = 0; j < x.cols(); ++j) out(row, j) = replacement[j];
  return out;
}

}  // namespace dpest
