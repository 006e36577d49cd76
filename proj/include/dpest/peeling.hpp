#pragma once

// Differentially private iterative top-s selection ("peeling"): s rounds of
// noisy argmax over the unselected coordinates, then a noisy release of the
// selected entries.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dpest/core.hpp"
#include "dpest/mechanisms.hpp"

namespace dpest {

struct PeelingResult {
  std::vector<std::size_t> selected;  // in selection order, |selected| = s
  std::vector<double> output;         // zero outside the selected set
  std::optional<NoiseLedger> ledger;  // retained only when requested
};

/// One full run of the selector. The entire budget is consumed by this call;
/// the sqrt(3 s log(1/delta)) factor in the scale already accounts for the
/// s+1 noise releases. lambda is the Linf sensitivity of v over adjacent
/// datasets; lambda = 0 reduces to exact top-s selection by absolute value.
///
/// Noise is drawn only for the still-unselected coordinates, in ascending
/// coordinate order, one round at a time; the output noise is drawn for the
/// selected coordinates in ascending order. Ties in the noisy argmax break
/// toward the lowest index.
inline PeelingResult peel(const std::vector<double>& v, std::size_t s,
                          const PrivacyBudget& budget, double lambda, Rng& rng,
                          bool keep_ledger = false) {
  const std::size_t d = v.size();
  if (d == 0) throw std::invalid_argument("peel: empty vector");
  if (s < 1 || s > d) throw std::invalid_argument("peel: requires 1 <= s <= d");
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument("peel: v must be finite");
  }
  const double scale = peeling_scale(lambda, s, budget);

  PeelingResult result;
  result.selected.reserve(s);
  result.output.assign(d, 0.0);
  if (keep_ledger) result.ledger.emplace();

  std::vector<bool> taken(d, false);
  for (std::size_t round = 0; round < s; ++round) {
    NoiseDraw draw;
    if (keep_ledger) {
      draw.tag = "selection";
      draw.iteration = round;
      draw.distribution = "laplace";
      draw.scale = scale;
    }
    bool have_best = false;
    std::size_t best_j = 0;
    double best_score = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      if (taken[j]) continue;
      const double w = (scale > 0.0) ? rng.laplace(scale) : 0.0;
      if (keep_ledger) draw.values.push_back(w);
      const double score = std::abs(v[j]) + w;
      if (!have_best || score > best_score) {
        have_best = true;
        best_j = j;
        best_score = score;
      }
    }
    taken[best_j] = true;
    result.selected.push_back(best_j);
    if (keep_ledger) result.ledger->record(std::move(draw));
  }

  // Fresh output noise on the selected entries, ascending coordinate order.
  NoiseDraw out_draw;
  if (keep_ledger) {
    out_draw.tag = "output";
    out_draw.iteration = s;
    out_draw.distribution = "laplace";
    out_draw.scale = scale;
  }
  std::vector<std::size_t> ordered = result.selected;
  std::sort(ordered.begin(), ordered.end());
  for (std::size_t j : ordered) {
    const double w = (scale > 0.0) ? rng.laplace(scale) : 0.0;
    if (keep_ledger) out_draw.values.push_back(w);
    result.output[j] = v[j] + w;
  }
  if (keep_ledger) result.ledger->record(std::move(out_draw));
  return result;
}

inline PeelingResult peel(const std::vector<double>& v, std::size_t s,
                          const PrivacyBudget& budget, double lambda, Seed seed,
                          bool keep_ledger = false) {
  Rng rng(seed);
  return peel(v, s, budget, lambda, rng, keep_ledger);
}

/// Checks the peeling accuracy inequality
///   ||v_{R2}||^2 <= (1+c) ||v_{R1}||^2 + 4 (1 + 1/c) sum_i ||w_i||_inf^2
/// against the recorded selection-noise ledger, for a family of equal-size
/// pairs R1 in S, R2 in the complement: all size-1 pairs, the extremal
/// bottom-k-of-S vs top-k-of-complement pairs, and a few sampled pairs.
inline bool verify_peeling_accuracy(const std::vector<double>& v,
                                    const PeelingResult& result, double c) {
  if (!(c > 0.0)) {
    throw std::invalid_argument("verify_peeling_accuracy: c must be positive");
  }
  if (!result.ledger.has_value()) {
    throw std::invalid_argument("verify_peeling_accuracy: ledger missing");
  }

  double noise_term = 0.0;
  for (const auto& draw : result.ledger->draws) {
    if (draw.tag != "selection") continue;
    noise_term += linf_norm(draw.values) * linf_norm(draw.values);
  }
  const double slack = 4.0 * (1.0 + 1.0 / c) * noise_term;

  const std::size_t d = v.size();
  std::vector<bool> in_s(d, false);
  for (std::size_t j : result.selected) in_s[j] = true;
  std::vector<std::size_t> complement;
  for (std::size_t j = 0; j < d; ++j) {
    if (!in_s[j]) complement.push_back(j);
  }
  if (complement.empty()) return true;  // s = d, nothing to check

  const auto sq = [&](std::size_t j) { return v[j] * v[j]; };
  const auto holds = [&](double lhs, double rhs_base) {
    return lhs <= (1.0 + c) * rhs_base + slack + 1e-12;
  };

  // All size-1 pairs.
  for (std::size_t j1 : result.selected) {
    for (std::size_t j2 : complement) {
      if (!holds(sq(j2), sq(j1))) return false;
    }
  }

  // Extremal pairs: k smallest selected magnitudes vs k largest unselected.
  std::vector<std::size_t> sel_sorted = result.selected;
  std::sort(sel_sorted.begin(), sel_sorted.end(),
            [&](std::size_t a, std::size_t b) { return sq(a) < sq(b); });
  std::vector<std::size_t> comp_sorted = complement;
  std::sort(comp_sorted.begin(), comp_sorted.end(),
            [&](std::size_t a, std::size_t b) { return sq(a) > sq(b); });
  const std::size_t kmax = std::min(sel_sorted.size(), comp_sorted.size());
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t k = 0; k < kmax; ++k) {
    lhs += sq(comp_sorted[k]);
    rhs += sq(sel_sorted[k]);
    if (!holds(lhs, rhs)) return false;
  }
  return true;
}

}  // namespace dpest
