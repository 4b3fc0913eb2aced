#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "cafs/dataset.hpp"
#include "cafs/rng.hpp"

namespace cafs {

// The probability model the search evolves: a per-feature significance
// vector SV and a symmetric pairwise interaction matrix IM. Entries are
// clamped to [value_floor, value_cap] so roulette weights stay positive
// and products stay finite.
struct ProbabilityModel {
  std::vector<double> sv;               // length n
  std::vector<std::vector<double>> im;  // n x n, symmetric; diagonal unused
  double change_factor = 0.01;
  int strong_multiplier = 2;
  double value_floor = 1e-6;
  double value_cap = 1e6;

  std::size_t feature_count() const { return sv.size(); }
};

inline ProbabilityModel init_model(std::size_t n) {
  if (n < 2) throw std::invalid_argument("init_model: need at least 2 features");
  ProbabilityModel model;
  model.sv.assign(n, 1.0);
  model.im.assign(n, std::vector<double>(n, 1.0));
  return model;
}

// P(j) = SV(j) / sum_k SV(k).
inline std::vector<double> first_feature_distribution(const ProbabilityModel& model) {
  double total = 0.0;
  for (double v : model.sv) total += v;
  std::vector<double> p(model.sv);
  for (double& v : p) v /= total;
  return p;
}

// P(j | A) for unselected j, proportional to SV(j) * prod_{l in A} IM(j,l).
// Accumulated in log space and normalized after subtracting the max
// log-weight; products over |A| clamped entries overflow/underflow plain
// doubles for large subsets.
inline std::vector<double> conditional_distribution(const ProbabilityModel& model,
                                                    const FeatureSubset& selected) {
  const std::size_t n = model.feature_count();
  if (selected.indices.empty() || selected.size() >= n)
    throw std::invalid_argument("conditional_distribution: |A| must be in [1, n)");
  const std::vector<int> in_set = selected.binary_vector();

  std::vector<double> log_w(n, -std::numeric_limits<double>::infinity());
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    if (in_set[j]) continue;
    double lw = std::log(model.sv[j]);
    for (std::size_t l : selected.indices) lw += std::log(model.im[j][l]);
    log_w[j] = lw;
    max_log = std::max(max_log, lw);
  }

  std::vector<double> p(n, 0.0);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (in_set[j]) continue;
    p[j] = std::exp(log_w[j] - max_log);
    total += p[j];
  }
  for (double& v : p) v /= total;
  return p;
}

// Table-driven SV update on the winner/loser binary vectors.
inline void apply_sv_update(ProbabilityModel& model, const std::vector<int>& winner,
                            const std::vector<int>& loser) {
  const std::size_t n = model.feature_count();
  if (winner.size() != n || loser.size() != n)
    throw std::invalid_argument("apply_sv_update: length mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (winner[i] == loser[i]) continue;
    const double delta = winner[i] == 1 ? model.change_factor : -model.change_factor;
    model.sv[i] = std::clamp(model.sv[i] + delta, model.value_floor, model.value_cap);
  }
}

// Per-pair IM delta in units of the change factor. Rows index (w_i, w_j),
// columns (l_i, l_j), both encoded as 2*first + second:
//   00 -> [ 0,  0,  0, -1]
//   01 -> [ 0,  0,  0, -S]
//   10 -> [ 0,  0,  0, -S]
//   11 -> [+1, +S, +S,  0]
// with S the strong multiplier.
inline int im_delta_units(int wi, int wj, int li, int lj, int strong) {
  const int w = 2 * wi + wj;
  const int l = 2 * li + lj;
  if (w == 3) {
    if (l == 0) return 1;
    if (l == 3) return 0;
    return strong;
  }
  if (l == 3) return w == 0 ? -1 : -strong;
  return 0;
}

inline void apply_im_update(ProbabilityModel& model, const std::vector<int>& winner,
                            const std::vector<int>& loser) {
  const std::size_t n = model.feature_count();
  if (winner.size() != n || loser.size() != n)
    throw std::invalid_argument("apply_im_update: length mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const int units =
          im_delta_units(winner[i], winner[j], loser[i], loser[j], model.strong_multiplier);
      if (units == 0) continue;
      const double next = std::clamp(model.im[i][j] + units * model.change_factor,
                                     model.value_floor, model.value_cap);
      model.im[i][j] = next;
      model.im[j][i] = next;
    }
  }
}

}  // namespace cafs
