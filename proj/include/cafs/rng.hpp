#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace cafs {

// splitmix64; used to derive per-run seeds from (master seed, run index).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seedable random source backed by mt19937_64. All variates are derived
// from the raw 64-bit stream so sequences are identical across platforms
// (std::uniform_real_distribution and friends are not portable).
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Uniform on [0, 1), 53 bits of precision.
  double next_uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer on [0, bound).
  std::size_t next_index(std::size_t bound) {
    if (bound == 0) throw std::invalid_argument("next_index: bound must be positive");
    return static_cast<std::size_t>(next_uniform() * static_cast<double>(bound));
  }

  // Standard normal via Box-Muller (one variate per two uniforms; no
  // cached second value, so the stream layout stays obvious).
  double next_normal() {
    double u1 = next_uniform();
    double u2 = next_uniform();
    while (u1 <= 0.0) u1 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  // Gamma(shape, scale) by Marsaglia-Tsang; shape < 1 handled by the
  // usual boost-by-one step.
  double next_gamma(double shape, double scale) {
    if (!(shape > 0.0) || !(scale > 0.0))
      throw std::invalid_argument("next_gamma: shape and scale must be positive");
    if (shape < 1.0) {
      double u = next_uniform();
      while (u <= 0.0) u = next_uniform();
      return next_gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = next_normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = next_uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
      if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
        return d * v * scale;
    }
  }

  // Chi-square with d degrees of freedom, via the gamma(d/2, 2) identity.
  double next_chi_square(int dof) {
    if (dof < 1) throw std::invalid_argument("next_chi_square: d must be >= 1");
    return next_gamma(0.5 * dof, 2.0);
  }

  // Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[next_index(i)]);
    }
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

// Index i with probability weights[i] / sum(weights).
inline std::size_t roulette_select(RandomSource& src, const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) {
    if (std::isnan(w) || w < 0.0 || !std::isfinite(w))
      throw std::invalid_argument("roulette_select: invalid weight");
    total += w;
  }
  if (weights.empty() || total <= 0.0)
    throw std::invalid_argument("roulette_select: degenerate weight vector");
  const double target = src.next_uniform() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (target < acc) return i;
  }
  // target == total can only happen through rounding; return the last
  // positive-weight index.
  for (std::size_t i = weights.size(); i > 0; --i) {
    if (weights[i - 1] > 0.0) return i - 1;
  }
  throw std::logic_error("roulette_select: unreachable");
}

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Stratified random partition. Each class contributes floor or ceil of
// train_fraction * count to train, chosen by largest fractional remainder
// so the overall train size equals round(train_fraction * total); every
// class keeps at least one sample on each side.
inline SplitIndices split_indices(RandomSource& src, const std::vector<int>& labels,
                                  double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw std::invalid_argument("split_indices: train_fraction must be in (0,1)");
  const int class_count =
      labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::vector<std::size_t>> by_class(class_count);
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

  std::vector<std::size_t> n_train(class_count, 0);
  std::vector<std::pair<double, int>> remainders;
  long long base_total = 0;
  for (int c = 0; c < class_count; ++c) {
    if (by_class[c].size() < 2)
      throw std::invalid_argument("split_indices: class too small to split");
    const double target = train_fraction * static_cast<double>(by_class[c].size());
    n_train[c] = static_cast<std::size_t>(std::floor(target));
    base_total += static_cast<long long>(n_train[c]);
    remainders.push_back({-(target - std::floor(target)), c});
  }
  long long extras =
      std::llround(train_fraction * static_cast<double>(labels.size())) - base_total;
  std::sort(remainders.begin(), remainders.end());
  for (const auto& [neg_rem, c] : remainders) {
    if (extras <= 0) break;
    ++n_train[c];
    --extras;
  }

  SplitIndices out;
  for (int c = 0; c < class_count; ++c) {
    auto& members = by_class[c];
    src.shuffle(members);
    const std::size_t take = std::clamp<std::size_t>(n_train[c], 1, members.size() - 1);
    out.train.insert(out.train.end(), members.begin(), members.begin() + take);
    out.test.insert(out.test.end(), members.begin() + take, members.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

}  // namespace cafs
