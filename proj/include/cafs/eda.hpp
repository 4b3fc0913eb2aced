#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cafs/dataset.hpp"
#include "cafs/evaluator.hpp"
#include "cafs/model.hpp"
#include "cafs/rng.hpp"

namespace cafs {

// Guiding technique: subset size drawn from chi-square(d), rounded and
// clamped to [1, n].
inline std::size_t sample_subset_size(RandomSource& src, int d, std::size_t n) {
  if (d < 1 || static_cast<std::size_t>(d) > n)
    throw std::invalid_argument("sample_subset_size: d must be in [1, n]");
  const long long s = std::llround(src.next_chi_square(d));
  return static_cast<std::size_t>(std::clamp<long long>(s, 1, static_cast<long long>(n)));
}

// First feature from the SV marginal, each subsequent feature from the
// conditional distribution given the features selected so far.
inline FeatureSubset generate_individual(const ProbabilityModel& model, RandomSource& src,
                                         std::size_t s) {
  const std::size_t n = model.feature_count();
  if (s < 1 || s > n) throw std::invalid_argument("generate_individual: s must be in [1, n]");
  FeatureSubset subset;
  subset.n = n;
  subset.indices.push_back(roulette_select(src, first_feature_distribution(model)));
  while (subset.size() < s)
    subset.indices.push_back(roulette_select(src, conditional_distribution(model, subset)));
  return subset;
}

// fitness = accuracy / SFR.
inline double fitness(double accuracy, std::size_t subset_size, std::size_t n) {
  if (subset_size < 1 || subset_size > n)
    throw std::invalid_argument("fitness: subset_size out of range");
  return accuracy / (static_cast<double>(subset_size) / static_cast<double>(n));
}

// Higher fitness wins; exact ties go to the smaller subset, then to a.
inline bool a_beats_b(const FeatureSubset& a, double fit_a, const FeatureSubset& b,
                      double fit_b) {
  if (fit_a != fit_b) return fit_a > fit_b;
  return a.size() <= b.size();
}

enum class UpdateGate {
  kPreviousWinner,  // update only when winner beats the previous iteration's winner
  kBestSoFar,       // update only when winner beats the best fitness so far
};

struct RunConfig {
  std::uint64_t seed = 0;
  long eval_budget = 500;  // two evaluations per iteration
  double change_factor = 0.01;
  int strong_multiplier = 2;
  int knn_k = 5;
  EvalProtocol protocol = EvalProtocol::kHoldout;
  UpdateGate gate = UpdateGate::kPreviousWinner;
};

struct TraceRecord {
  long iteration = 0;
  std::size_t winner_size = 0;
  double winner_fitness = 0.0;
  double best_fitness = 0.0;
  bool model_updated = false;
};

struct RunState {
  ProbabilityModel model;
  int d = 1;  // chi-square degrees of freedom = current winner's feature count
  UpdateGate gate = UpdateGate::kPreviousWinner;
  std::optional<double> prev_winner_fitness;
  std::optional<FeatureSubset> best_subset;
  double best_fitness = 0.0;
  long iteration = 0;
  long eval_budget = 0;
  std::vector<TraceRecord> trace;
};

inline RunState init_run_state(std::size_t n, const RunConfig& config) {
  RunState state;
  state.model = init_model(n);
  state.model.change_factor = config.change_factor;
  state.model.strong_multiplier = config.strong_multiplier;
  state.d = std::max(1, static_cast<int>(std::llround(static_cast<double>(n) / 2.0)));
  state.gate = config.gate;
  state.eval_budget = config.eval_budget;
  return state;
}

struct RunResult {
  FeatureSubset best_subset;
  double best_fitness = 0.0;
  ProbabilityModel final_model;
  std::vector<TraceRecord> trace;
  long evaluation_count = 0;
  MetricsReport report;
};

// One loop body: sample two sizes, generate and evaluate two individuals,
// compete, track the best, and update the model behind the improvement
// gate. d follows the winner's size unconditionally.
template <typename Evaluator>
void step(RunState& state, Evaluator& evaluator, RandomSource& src) {
  if (evaluator.evaluation_count() + 2 > state.eval_budget)
    throw std::runtime_error("step: evaluation budget exhausted");
  const std::size_t n = state.model.feature_count();

  const std::size_t size_a = sample_subset_size(src, state.d, n);
  const std::size_t size_b = sample_subset_size(src, state.d, n);
  const FeatureSubset a = generate_individual(state.model, src, size_a);
  const FeatureSubset b = generate_individual(state.model, src, size_b);
  const double fit_a = fitness(evaluator.evaluate(a), a.size(), n);
  const double fit_b = fitness(evaluator.evaluate(b), b.size(), n);

  const bool a_wins = a_beats_b(a, fit_a, b, fit_b);
  const FeatureSubset& winner = a_wins ? a : b;
  const FeatureSubset& loser = a_wins ? b : a;
  const double winner_fitness = a_wins ? fit_a : fit_b;
  const double best_before = state.best_fitness;

  if (!state.best_subset || winner_fitness > state.best_fitness) {
    state.best_subset = winner;
    state.best_fitness = winner_fitness;
  }

  bool update;
  if (!state.prev_winner_fitness) {
    update = true;  // first iteration has no predecessor
  } else if (state.gate == UpdateGate::kPreviousWinner) {
    update = winner_fitness > *state.prev_winner_fitness;
  } else {
    update = winner_fitness > best_before;
  }
  if (update) {
    const std::vector<int> w = winner.binary_vector();
    const std::vector<int> l = loser.binary_vector();
    apply_sv_update(state.model, w, l);
    apply_im_update(state.model, w, l);
  }

  state.prev_winner_fitness = winner_fitness;
  state.d = static_cast<int>(winner.size());
  ++state.iteration;
  state.trace.push_back(
      {state.iteration, winner.size(), winner_fitness, state.best_fitness, update});
}

// Full search on an already-normalized split: budget/2 iterations, two
// evaluations each, then a test-set report for the best subset.
inline RunResult run(const SplitDataset& split, const RunConfig& config) {
  if (config.eval_budget < 2 || config.eval_budget % 2 != 0)
    throw std::invalid_argument("run: eval budget must be even and >= 2");
  const std::size_t n = split.train.feature_count();
  if (n < 2) throw std::invalid_argument("run: need at least 2 features");

  RandomSource src(config.seed);
  KnnSubsetEvaluator evaluator(split, KnnConfig{config.knn_k}, config.protocol,
                               mix_seed(config.seed, 0x5eedU));
  RunState state = init_run_state(n, config);

  const long iterations = config.eval_budget / 2;
  for (long i = 0; i < iterations; ++i) step(state, evaluator, src);

  RunResult result;
  result.best_subset = *state.best_subset;
  result.best_fitness = state.best_fitness;
  result.final_model = std::move(state.model);
  result.trace = std::move(state.trace);
  result.evaluation_count = evaluator.evaluation_count();
  result.report = evaluator.final_report(result.best_subset);
  return result;
}

}  // namespace cafs
