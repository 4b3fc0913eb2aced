#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace cafs {

// 1-based ranks with average ranks for ties; rank 1 = smallest value.
inline std::vector<double> tied_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

// Regularized incomplete gamma functions (series for x < a+1, continued
// fraction otherwise); used for the chi-square survival function.
namespace detail {

inline double gamma_series_p(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_cf_q(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace detail

// Upper regularized incomplete gamma Q(a, x).
inline double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_series_p(a, x);
  return detail::gamma_cf_q(a, x);
}

// P(X > x) for X ~ chi-square(dof).
inline double chi_square_sf(double x, double dof) {
  if (x <= 0.0) return 1.0;
  return gamma_q(0.5 * dof, 0.5 * x);
}

struct WilcoxonResult {
  double w_plus = 0.0;
  double w_minus = 0.0;
  double statistic = 0.0;  // min(W+, W-)
  std::size_t retained = 0;
  double p_value = 1.0;
};

// Exact two-sided Wilcoxon signed-rank test. Zero differences are dropped,
// tied |differences| get average ranks, and the p-value comes from the
// exact null distribution over all 2^n sign assignments (computed by a
// convolution over doubled integer ranks, not literal enumeration).
inline WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& x,
                                           const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("wilcoxon: length mismatch");
  std::vector<double> diffs;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    if (d != 0.0) diffs.push_back(d);
  }
  WilcoxonResult res;
  res.retained = diffs.size();
  if (diffs.empty()) return res;  // all differences zero -> p = 1
  if (diffs.size() > 25)
    throw std::invalid_argument("wilcoxon: exact regime limited to n <= 25");

  std::vector<double> abs_diffs(diffs.size());
  for (std::size_t i = 0; i < diffs.size(); ++i) abs_diffs[i] = std::fabs(diffs[i]);
  const std::vector<double> ranks = tied_ranks(abs_diffs);

  // Double ranks so that average-tie ranks become integers.
  std::vector<long> ranks2(ranks.size());
  long total2 = 0;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    ranks2[i] = std::llround(2.0 * ranks[i]);
    total2 += ranks2[i];
    if (diffs[i] > 0.0)
      res.w_plus += ranks[i];
    else
      res.w_minus += ranks[i];
  }
  res.statistic = std::min(res.w_plus, res.w_minus);

  // Null distribution of 2*W+ over all sign assignments.
  std::vector<double> counts(static_cast<std::size_t>(total2) + 1, 0.0);
  counts[0] = 1.0;
  long reach = 0;
  for (long r : ranks2) {
    for (long w = reach; w >= 0; --w)
      if (counts[w] > 0.0) counts[w + r] += counts[w];
    reach += r;
  }

  const long w_min2 = std::llround(2.0 * res.statistic);
  double tail = 0.0;
  for (long w = 0; w <= w_min2; ++w) tail += counts[w];
  const double assignments = std::ldexp(1.0, static_cast<int>(diffs.size()));
  res.p_value = std::min(1.0, 2.0 * tail / assignments);
  return res;
}

struct FriedmanResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::vector<double> mean_ranks;  // per method, rank 1 = best
};

struct RankSummary {
  std::vector<double> mean_ranks;
  std::vector<long> best_counts;  // datasets on which the method ties for best
};

// Per-dataset ranks, rank 1 = best according to higher_is_better.
inline std::vector<std::vector<double>> rank_matrix(
    const std::vector<std::vector<double>>& scores, bool higher_is_better) {
  // scores[method][dataset]
  const std::size_t k = scores.size();
  const std::size_t n_datasets = scores.empty() ? 0 : scores[0].size();
  for (const auto& row : scores)
    if (row.size() != n_datasets) throw std::invalid_argument("rank_matrix: ragged scores");
  std::vector<std::vector<double>> ranks(k, std::vector<double>(n_datasets, 0.0));
  for (std::size_t d = 0; d < n_datasets; ++d) {
    std::vector<double> column(k);
    for (std::size_t m = 0; m < k; ++m)
      column[m] = higher_is_better ? -scores[m][d] : scores[m][d];
    const std::vector<double> r = tied_ranks(column);
    for (std::size_t m = 0; m < k; ++m) ranks[m][d] = r[m];
  }
  return ranks;
}

inline RankSummary average_ranks(const std::vector<std::vector<double>>& scores,
                                 bool higher_is_better) {
  const auto ranks = rank_matrix(scores, higher_is_better);
  const std::size_t k = scores.size();
  const std::size_t n_datasets = ranks.empty() ? 0 : ranks[0].size();
  RankSummary out;
  out.mean_ranks.assign(k, 0.0);
  out.best_counts.assign(k, 0);
  for (std::size_t d = 0; d < n_datasets; ++d) {
    double best = ranks[0][d];
    for (std::size_t m = 1; m < k; ++m) best = std::min(best, ranks[m][d]);
    for (std::size_t m = 0; m < k; ++m) {
      out.mean_ranks[m] += ranks[m][d];
      if (ranks[m][d] == best) ++out.best_counts[m];
    }
  }
  for (double& r : out.mean_ranks) r /= static_cast<double>(n_datasets);
  return out;
}

// Friedman chi-square test over a methods x datasets score matrix.
inline FriedmanResult friedman(const std::vector<std::vector<double>>& scores,
                               bool higher_is_better = true) {
  const std::size_t k = scores.size();
  if (k < 3) throw std::invalid_argument("friedman: need at least 3 methods");
  const std::size_t n_datasets = scores[0].size();
  if (n_datasets < 5) throw std::invalid_argument("friedman: need at least 5 datasets");

  const auto ranks = rank_matrix(scores, higher_is_better);
  FriedmanResult res;
  res.mean_ranks.assign(k, 0.0);
  for (std::size_t m = 0; m < k; ++m) {
    for (double r : ranks[m]) res.mean_ranks[m] += r;
    res.mean_ranks[m] /= static_cast<double>(n_datasets);
  }
  double sum_sq = 0.0;
  for (double r : res.mean_ranks) sum_sq += r * r;
  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(n_datasets);
  res.statistic = 12.0 * nd / (kd * (kd + 1.0)) * (sum_sq - kd * (kd + 1.0) * (kd + 1.0) / 4.0);
  res.statistic = std::max(0.0, res.statistic);
  res.p_value = chi_square_sf(res.statistic, kd - 1.0);
  return res;
}

}  // namespace cafs
