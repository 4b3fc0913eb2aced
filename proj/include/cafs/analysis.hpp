#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cafs/eda.hpp"
#include "cafs/model.hpp"

namespace cafs {

// HM(i,j) = P(select j | i already selected); diagonal fixed at 0 and each
// row normalized to sum 1 over its off-diagonal entries.
using HeatmapMatrix = std::vector<std::vector<double>>;

inline HeatmapMatrix conditional_heatmap(const ProbabilityModel& model) {
  const std::size_t n = model.feature_count();
  HeatmapMatrix hm(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    FeatureSubset given;
    given.n = n;
    given.indices = {i};
    hm[i] = conditional_distribution(model, given);
    hm[i][i] = 0.0;
  }
  return hm;
}

// Elementwise mean, rows re-normalized.
inline HeatmapMatrix aggregate_heatmaps(const std::vector<HeatmapMatrix>& runs) {
  if (runs.empty()) throw std::invalid_argument("aggregate_heatmaps: no matrices");
  const std::size_t n = runs[0].size();
  HeatmapMatrix mean(n, std::vector<double>(n, 0.0));
  for (const auto& hm : runs) {
    if (hm.size() != n) throw std::invalid_argument("aggregate_heatmaps: shape mismatch");
    for (std::size_t i = 0; i < n; ++i) {
      if (hm[i].size() != n) throw std::invalid_argument("aggregate_heatmaps: shape mismatch");
      for (std::size_t j = 0; j < n; ++j) mean[i][j] += hm[i][j];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) row_sum += mean[i][j];
    for (std::size_t j = 0; j < n; ++j) mean[i][j] = (j == i) ? 0.0 : mean[i][j] / row_sum;
  }
  return mean;
}

// Winner subset size per iteration.
inline std::vector<std::pair<long, double>> size_trajectory(
    const std::vector<TraceRecord>& trace) {
  if (trace.empty()) throw std::invalid_argument("size_trajectory: empty trace");
  std::vector<std::pair<long, double>> out;
  out.reserve(trace.size());
  for (const auto& rec : trace)
    out.emplace_back(rec.iteration, static_cast<double>(rec.winner_size));
  return out;
}

// Pointwise mean of winner sizes across runs; all traces must have equal length.
inline std::vector<std::pair<long, double>> mean_size_trajectory(
    const std::vector<std::vector<TraceRecord>>& traces) {
  if (traces.empty()) throw std::invalid_argument("mean_size_trajectory: no traces");
  const std::size_t len = traces[0].size();
  std::vector<std::pair<long, double>> out;
  for (std::size_t t = 0; t < len; ++t) {
    double sum = 0.0;
    for (const auto& trace : traces) {
      if (trace.size() != len)
        throw std::invalid_argument("mean_size_trajectory: ragged traces");
      sum += static_cast<double>(trace[t].winner_size);
    }
    out.emplace_back(traces[0][t].iteration, sum / static_cast<double>(traces.size()));
  }
  return out;
}

inline void write_heatmap_csv(const HeatmapMatrix& hm, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_heatmap_csv: cannot open " + path);
  char buf[32];
  for (const auto& row : hm) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.6f", row[j]);
      out << buf << (j + 1 < row.size() ? "," : "\n");
    }
  }
}

inline void write_trajectory_csv(const std::vector<std::pair<long, double>>& series,
                                 const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_trajectory_csv: cannot open " + path);
  out << "iteration,size\n";
  char buf[32];
  for (const auto& [iter, size] : series) {
    std::snprintf(buf, sizeof(buf), "%.6f", size);
    out << iter << ',' << buf << '\n';
  }
}

}  // namespace cafs
