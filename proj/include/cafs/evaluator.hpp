#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "cafs/dataset.hpp"
#include "cafs/metrics.hpp"
#include "cafs/rng.hpp"

namespace cafs {

struct KnnConfig {
  int k = 5;  // Euclidean distance on normalized features
};

// Majority class among the k nearest training samples. Distance ties break
// toward the lower sample index, vote ties toward the lowest class id.
inline int knn_classify(const Dataset& train, const std::vector<double>& query,
                        const KnnConfig& cfg) {
  if (train.sample_count() == 0) throw std::invalid_argument("knn_classify: empty train set");
  if (query.size() != train.feature_count())
    throw std::invalid_argument("knn_classify: dimension mismatch");
  const int k = std::min<int>(cfg.k, static_cast<int>(train.sample_count()));
  if (k < 1) throw std::invalid_argument("knn_classify: k must be >= 1");

  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(train.sample_count());
  for (std::size_t i = 0; i < train.sample_count(); ++i) {
    double d2 = 0.0;
    const auto& row = train.features[i];
    for (std::size_t j = 0; j < query.size(); ++j) {
      const double diff = row[j] - query[j];
      d2 += diff * diff;
    }
    dist.emplace_back(d2, i);
  }
  std::partial_sort(dist.begin(), dist.begin() + k, dist.end());

  std::vector<int> votes(train.class_count, 0);
  for (int i = 0; i < k; ++i) ++votes[train.labels[dist[i].second]];
  int best = 0;
  for (int c = 1; c < train.class_count; ++c)
    if (votes[c] > votes[best]) best = c;
  return best;
}

inline std::vector<int> knn_predict(const Dataset& train, const Dataset& queries,
                                    const KnnConfig& cfg) {
  std::vector<int> preds;
  preds.reserve(queries.sample_count());
  for (const auto& row : queries.features) preds.push_back(knn_classify(train, row, cfg));
  return preds;
}

enum class EvalProtocol {
  kHoldout,      // fitness accuracy from an internal 75/25 split of train
  kPaperMirror,  // fitness accuracy measured directly on the test split
};

// Wrapper accuracy oracle. One instance per run; the internal holdout is
// fixed once from the evaluator's seed so fitness is a pure function of
// (seed, split, subset).
class KnnSubsetEvaluator {
 public:
  KnnSubsetEvaluator(const SplitDataset& split, KnnConfig cfg, EvalProtocol protocol,
                     std::uint64_t seed)
      : split_(&split), cfg_(cfg), protocol_(protocol) {
    if (protocol_ == EvalProtocol::kHoldout) {
      RandomSource src(seed);
      const SplitIndices idx = split_indices(src, split.train.labels, 0.75);
      inner_train_ = select_rows(split.train, idx.train);
      inner_holdout_ = select_rows(split.train, idx.test);
    }
  }

  std::size_t feature_count() const { return split_->train.feature_count(); }
  long evaluation_count() const { return evaluations_; }

  double evaluate(const FeatureSubset& subset) {
    if (subset.indices.empty()) throw std::invalid_argument("evaluate: empty subset");
    ++evaluations_;
    if (protocol_ == EvalProtocol::kHoldout)
      return accuracy_on(inner_train_, inner_holdout_, subset);
    return accuracy_on(split_->train, split_->test, subset);
  }

  // Fit on the full train partition, report on the test partition.
  // Reporting, not search: the evaluation counter does not move.
  MetricsReport final_report(const FeatureSubset& subset) const {
    if (subset.indices.empty()) throw std::invalid_argument("final_report: empty subset");
    const Dataset fit = project(split_->train, subset);
    const Dataset query = project(split_->test, subset);
    const std::vector<int> preds = knn_predict(fit, query, cfg_);
    const ConfusionMatrix cm = confusion(query.labels, preds, query.class_count);
    const BasicMetrics bm = basic_metrics(cm);

    MetricsReport report;
    report.accuracy = bm.accuracy;
    report.precision = bm.precision;
    report.recall = bm.recall;
    report.f1 = bm.f1;
    report.subset_size = subset.size();
    report.sfr = static_cast<double>(subset.size()) / static_cast<double>(feature_count());
    report.acc_pdf = acc_pdf(bm.accuracy, subset.size(), feature_count());
    return report;
  }

 private:
  double accuracy_on(const Dataset& fit_part, const Dataset& eval_part,
                     const FeatureSubset& subset) const {
    const Dataset fit = project(fit_part, subset);
    const Dataset query = project(eval_part, subset);
    const std::vector<int> preds = knn_predict(fit, query, cfg_);
    long correct = 0;
    for (std::size_t i = 0; i < preds.size(); ++i)
      if (preds[i] == query.labels[i]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(preds.size());
  }

  const SplitDataset* split_;
  KnnConfig cfg_;
  EvalProtocol protocol_;
  Dataset inner_train_;
  Dataset inner_holdout_;
  long evaluations_ = 0;
};

}  // namespace cafs
