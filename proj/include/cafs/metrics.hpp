#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace cafs {

// Cell (t, p) counts samples of true class t predicted as class p.
struct ConfusionMatrix {
  std::vector<std::vector<long>> counts;

  std::size_t class_count() const { return counts.size(); }

  long total() const {
    long t = 0;
    for (const auto& row : counts)
      for (long c : row) t += c;
    return t;
  }
};

inline ConfusionMatrix confusion(const std::vector<int>& truths,
                                 const std::vector<int>& predictions, int class_count) {
  if (truths.size() != predictions.size())
    throw std::invalid_argument("confusion: length mismatch");
  if (truths.empty()) throw std::invalid_argument("confusion: empty inputs");
  ConfusionMatrix cm;
  cm.counts.assign(class_count, std::vector<long>(class_count, 0));
  for (std::size_t i = 0; i < truths.size(); ++i) {
    if (truths[i] < 0 || truths[i] >= class_count || predictions[i] < 0 ||
        predictions[i] >= class_count)
      throw std::out_of_range("confusion: class id out of range");
    ++cm.counts[truths[i]][predictions[i]];
  }
  return cm;
}

struct BasicMetrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Binary: class 1 is positive. Multiclass: unweighted one-vs-rest (macro)
// mean per class; a class with zero predicted (actual) positives
// contributes precision (recall) 0.
inline BasicMetrics basic_metrics(const ConfusionMatrix& cm) {
  const long total = cm.total();
  if (total == 0) throw std::invalid_argument("basic_metrics: empty matrix");
  const std::size_t C = cm.class_count();

  BasicMetrics out;
  long diag = 0;
  for (std::size_t c = 0; c < C; ++c) diag += cm.counts[c][c];
  out.accuracy = static_cast<double>(diag) / static_cast<double>(total);

  auto one_vs_rest = [&](std::size_t pos, double& prec, double& rec, double& f1) {
    long tp = cm.counts[pos][pos], fp = 0, fn = 0;
    for (std::size_t c = 0; c < C; ++c) {
      if (c == pos) continue;
      fp += cm.counts[c][pos];
      fn += cm.counts[pos][c];
    }
    prec = (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    rec = (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    f1 = (2 * tp + fp + fn) > 0
             ? 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn)
             : 0.0;
  };

  if (C == 2) {
    one_vs_rest(1, out.precision, out.recall, out.f1);
  } else {
    for (std::size_t c = 0; c < C; ++c) {
      double p, r, f;
      one_vs_rest(c, p, r, f);
      out.precision += p;
      out.recall += r;
      out.f1 += f;
    }
    out.precision /= static_cast<double>(C);
    out.recall /= static_cast<double>(C);
    out.f1 /= static_cast<double>(C);
  }
  return out;
}

// Accuracy times the fraction of discarded features.
inline double acc_pdf(double accuracy, std::size_t subset_size, std::size_t n) {
  if (subset_size < 1 || subset_size > n)
    throw std::invalid_argument("acc_pdf: subset_size out of range");
  return accuracy * static_cast<double>(n - subset_size) / static_cast<double>(n);
}

struct MetricsReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double acc_pdf = 0.0;
  std::size_t subset_size = 0;
  double sfr = 0.0;
};

}  // namespace cafs
