#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cafs/rng.hpp"

namespace cafs {

// An ordered set of distinct selected feature indices out of n total.
struct FeatureSubset {
  std::vector<std::size_t> indices;
  std::size_t n = 0;

  std::size_t size() const { return indices.size(); }

  std::vector<int> binary_vector() const {
    std::vector<int> bits(n, 0);
    for (std::size_t i : indices) bits[i] = 1;
    return bits;
  }

  bool contains(std::size_t feature) const {
    return std::find(indices.begin(), indices.end(), feature) != indices.end();
  }
};

struct Dataset {
  std::vector<std::vector<double>> features;  // m x n, row major
  std::vector<int> labels;                    // m entries in [0, class_count)
  std::vector<std::string> feature_names;     // n entries
  int class_count = 0;

  std::size_t sample_count() const { return features.size(); }
  std::size_t feature_count() const { return feature_names.size(); }
};

struct SplitDataset {
  Dataset train;
  Dataset test;
  // Per-feature (min, max) from the train partition; applied to both sides.
  std::vector<double> norm_min;
  std::vector<double> norm_max;
};

inline std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    std::size_t start = cell.find_first_not_of(' ');
    cells.push_back(start == std::string::npos ? std::string() : cell.substr(start));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

// Comma-delimited, header row, '.' decimals. Label tokens are mapped to
// contiguous class ids by first appearance.
inline Dataset load_csv(const std::string& path, const std::string& label_column) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_csv: cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("load_csv: empty file " + path);
  const std::vector<std::string> header = split_line(line);

  for (std::size_t i = 0; i < header.size(); ++i)
    for (std::size_t j = i + 1; j < header.size(); ++j)
      if (header[i] == header[j])
        throw std::runtime_error("load_csv: duplicate header name '" + header[i] + "'");

  // Label column addressed by name, or by 0-based index if the token is numeric.
  std::size_t label_idx = header.size();
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == label_column) label_idx = i;
  if (label_idx == header.size()) {
    try {
      std::size_t pos = 0;
      long v = std::stol(label_column, &pos);
      if (pos == label_column.size() && v >= 0 && static_cast<std::size_t>(v) < header.size())
        label_idx = static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  if (label_idx == header.size())
    throw std::runtime_error("load_csv: label column '" + label_column + "' not found");

  Dataset ds;
  for (std::size_t i = 0; i < header.size(); ++i)
    if (i != label_idx) ds.feature_names.push_back(header[i]);

  std::map<std::string, int> class_ids;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> cells = split_line(line);
    if (cells.size() != header.size())
      throw std::runtime_error("load_csv: row " + std::to_string(row) + " has " +
                               std::to_string(cells.size()) + " cells, expected " +
                               std::to_string(header.size()));
    std::vector<double> feats;
    feats.reserve(header.size() - 1);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c == label_idx) continue;
      try {
        std::size_t pos = 0;
        double v = std::stod(cells[c], &pos);
        if (pos != cells[c].size()) throw std::invalid_argument("trailing junk");
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite");
        feats.push_back(v);
      } catch (const std::exception&) {
        throw std::runtime_error("load_csv: unparsable cell at row " + std::to_string(row) +
                                 ", column '" + header[c] + "'");
      }
    }
    auto [it, inserted] =
        class_ids.emplace(cells[label_idx], static_cast<int>(class_ids.size()));
    ds.labels.push_back(it->second);
    ds.features.push_back(std::move(feats));
  }
  ds.class_count = static_cast<int>(class_ids.size());
  if (ds.class_count < 2) throw std::runtime_error("load_csv: fewer than two classes in " + path);
  return ds;
}

// Dataset restricted to the subset's columns, in subset order.
inline Dataset project(const Dataset& ds, const FeatureSubset& subset) {
  if (subset.indices.empty()) throw std::invalid_argument("project: empty subset");
  std::vector<bool> seen(ds.feature_count(), false);
  for (std::size_t idx : subset.indices) {
    if (idx >= ds.feature_count()) throw std::out_of_range("project: feature index out of range");
    if (seen[idx]) throw std::invalid_argument("project: duplicate feature index");
    seen[idx] = true;
  }
  Dataset out;
  out.labels = ds.labels;
  out.class_count = ds.class_count;
  for (std::size_t idx : subset.indices) out.feature_names.push_back(ds.feature_names[idx]);
  out.features.reserve(ds.sample_count());
  for (const auto& row : ds.features) {
    std::vector<double> proj;
    proj.reserve(subset.size());
    for (std::size_t idx : subset.indices) proj.push_back(row[idx]);
    out.features.push_back(std::move(proj));
  }
  return out;
}

inline Dataset select_rows(const Dataset& ds, const std::vector<std::size_t>& rows) {
  Dataset out;
  out.feature_names = ds.feature_names;
  out.class_count = ds.class_count;
  for (std::size_t r : rows) {
    out.features.push_back(ds.features[r]);
    out.labels.push_back(ds.labels[r]);
  }
  return out;
}

inline SplitDataset split_dataset(RandomSource& src, const Dataset& ds, double train_fraction) {
  const SplitIndices idx = split_indices(src, ds.labels, train_fraction);
  SplitDataset out;
  out.train = select_rows(ds, idx.train);
  out.test = select_rows(ds, idx.test);
  return out;
}

// Min-max normalization with parameters from the train partition only.
// Constant train features map to 0 everywhere; test values are not clipped.
inline SplitDataset normalize_minmax(SplitDataset split) {
  if (split.train.sample_count() == 0)
    throw std::invalid_argument("normalize_minmax: empty train partition");
  const std::size_t n = split.train.feature_count();
  split.norm_min.assign(n, 0.0);
  split.norm_max.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double lo = split.train.features[0][j], hi = lo;
    for (const auto& row : split.train.features) {
      lo = std::min(lo, row[j]);
      hi = std::max(hi, row[j]);
    }
    split.norm_min[j] = lo;
    split.norm_max[j] = hi;
  }
  auto apply = [&](Dataset& ds) {
    for (auto& row : ds.features)
      for (std::size_t j = 0; j < n; ++j) {
        const double range = split.norm_max[j] - split.norm_min[j];
        row[j] = range > 0.0 ? (row[j] - split.norm_min[j]) / range : 0.0;
      }
  };
  apply(split.train);
  apply(split.test);
  return split;
}

// Synthetic two-class dataset with built-in feature duplication: f7 = 10*f1,
// f8 = f2 + 3*f3, f9 = f4, f10 = f5/1000; f6 carries no label signal. The
// label is a median threshold on a weighted score of f1..f5, with a small
// flip rate so the problem is not perfectly separable.
inline Dataset generate_synthetic(RandomSource& src, std::size_t m = 250,
                                  double noise_rate = 0.02) {
  if (m < 10) throw std::invalid_argument("generate_synthetic: m must be >= 10");
  Dataset ds;
  ds.class_count = 2;
  for (int j = 1; j <= 10; ++j) ds.feature_names.push_back("f" + std::to_string(j));

  std::vector<double> scores(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> row(10);
    for (int j = 0; j < 6; ++j) row[j] = src.next_uniform();
    row[6] = 10.0 * row[0];
    row[7] = row[1] + 3.0 * row[2];
    row[8] = row[3];
    row[9] = row[4] / 1000.0;
    scores[i] = row[0] + 0.8 * row[1] + 0.6 * row[2] + 0.4 * row[3] + 0.2 * row[4];
    ds.features.push_back(std::move(row));
  }
  std::vector<double> sorted = scores;
  std::nth_element(sorted.begin(), sorted.begin() + m / 2, sorted.end());
  const double median = sorted[m / 2];
  for (std::size_t i = 0; i < m; ++i) {
    int label = scores[i] > median ? 1 : 0;
    if (src.next_uniform() < noise_rate) label = 1 - label;
    ds.labels.push_back(label);
  }
  return ds;
}

inline void write_csv(const Dataset& ds, const std::string& path,
                      const std::string& label_name = "label") {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  for (const auto& name : ds.feature_names) out << name << ',';
  out << label_name << '\n';
  char buf[64];
  for (std::size_t i = 0; i < ds.sample_count(); ++i) {
    for (double v : ds.features[i]) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << buf << ',';
    }
    out << ds.labels[i] << '\n';
  }
  if (!out) throw std::runtime_error("write_csv: write failure on " + path);
}

}  // namespace cafs
