#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cafs/analysis.hpp"
#include "cafs/dataset.hpp"
#include "cafs/eda.hpp"
#include "cafs/rng.hpp"
#include "cafs/stats.hpp"

namespace cafs {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr double kTrainFraction = 0.75;

struct ExperimentConfig {
  std::string dataset = "synthetic";  // path to a CSV, or "synthetic"
  std::string label_column = "label";
  std::uint64_t master_seed = 1;
  int runs = 10;
  long eval_budget = 500;
  double change_factor = 0.01;
  int strong_multiplier = 2;
  int knn_k = 5;
  EvalProtocol protocol = EvalProtocol::kHoldout;
  UpdateGate gate = UpdateGate::kPreviousWinner;
};

inline Dataset load_experiment_dataset(const ExperimentConfig& config) {
  if (config.dataset == "synthetic") {
    RandomSource src(mix_seed(config.master_seed, 0xda7aU));
    return generate_synthetic(src);
  }
  return load_csv(config.dataset, config.label_column);
}

inline RunConfig make_run_config(const ExperimentConfig& config, int run_index) {
  RunConfig rc;
  rc.seed = mix_seed(config.master_seed, static_cast<std::uint64_t>(run_index));
  rc.eval_budget = config.eval_budget;
  rc.change_factor = config.change_factor;
  rc.strong_multiplier = config.strong_multiplier;
  rc.knn_k = config.knn_k;
  rc.protocol = config.protocol;
  rc.gate = config.gate;
  return rc;
}

// One independent run: re-split from the run seed, normalize, search.
inline RunResult execute_run(const Dataset& dataset, const ExperimentConfig& config,
                             int run_index) {
  const RunConfig rc = make_run_config(config, run_index);
  RandomSource split_src(mix_seed(rc.seed, 0x5b117U));
  const SplitDataset split =
      normalize_minmax(split_dataset(split_src, dataset, kTrainFraction));
  return run(split, rc);
}

inline nlohmann::json metrics_to_json(const MetricsReport& m) {
  return {{"accuracy", m.accuracy}, {"precision", m.precision}, {"recall", m.recall},
          {"f1", m.f1},             {"acc_pdf", m.acc_pdf},     {"subset_size", m.subset_size},
          {"sfr", m.sfr}};
}

inline nlohmann::json config_to_json(const ExperimentConfig& c) {
  return {{"dataset", c.dataset},
          {"label_column", c.label_column},
          {"master_seed", c.master_seed},
          {"runs", c.runs},
          {"eval_budget", c.eval_budget},
          {"change_factor", c.change_factor},
          {"strong_multiplier", c.strong_multiplier},
          {"knn_k", c.knn_k},
          {"protocol", c.protocol == EvalProtocol::kHoldout ? "holdout" : "paper-mirror"},
          {"gate", c.gate == UpdateGate::kPreviousWinner ? "prev-winner" : "best-so-far"}};
}

// Full experiment: `runs` independent runs plus aggregates.
inline nlohmann::json run_experiment(const Dataset& dataset, const ExperimentConfig& config) {
  if (config.runs < 1) throw std::invalid_argument("run_experiment: runs must be >= 1");
  nlohmann::json report;
  report["schema_version"] = kReportSchemaVersion;
  report["config"] = config_to_json(config);
  report["feature_count"] = dataset.feature_count();
  report["sample_count"] = dataset.sample_count();
  report["class_count"] = dataset.class_count;

  nlohmann::json runs = nlohmann::json::array();
  double mean_size = 0.0;
  std::size_t best_size = dataset.feature_count();
  MetricsReport mean{};
  for (int r = 0; r < config.runs; ++r) {
    const RunResult result = execute_run(dataset, config, r);
    nlohmann::json entry;
    entry["run_index"] = r;
    entry["seed"] = make_run_config(config, r).seed;
    entry["subset_indices"] = result.best_subset.indices;
    nlohmann::json names = nlohmann::json::array();
    for (std::size_t idx : result.best_subset.indices)
      names.push_back(dataset.feature_names[idx]);
    entry["subset_names"] = names;
    entry["best_fitness"] = result.best_fitness;
    entry["evaluation_count"] = result.evaluation_count;
    entry["metrics"] = metrics_to_json(result.report);
    nlohmann::json sizes = nlohmann::json::array();
    for (const auto& rec : result.trace) sizes.push_back(rec.winner_size);
    entry["winner_size_trajectory"] = sizes;
    runs.push_back(std::move(entry));

    mean_size += static_cast<double>(result.best_subset.size());
    best_size = std::min(best_size, result.best_subset.size());
    mean.accuracy += result.report.accuracy;
    mean.precision += result.report.precision;
    mean.recall += result.report.recall;
    mean.f1 += result.report.f1;
    mean.acc_pdf += result.report.acc_pdf;
    mean.sfr += result.report.sfr;
  }
  const double nr = static_cast<double>(config.runs);
  report["runs"] = std::move(runs);
  report["aggregates"] = {{"mean_subset_size", mean_size / nr},
                          {"best_subset_size", best_size},
                          {"mean_accuracy", mean.accuracy / nr},
                          {"mean_precision", mean.precision / nr},
                          {"mean_recall", mean.recall / nr},
                          {"mean_f1", mean.f1 / nr},
                          {"mean_acc_pdf", mean.acc_pdf / nr},
                          {"mean_sfr", mean.sfr / nr}};
  return report;
}

struct ScoreTable {
  std::vector<std::string> methods;
  std::vector<std::vector<double>> scores;  // scores[method][dataset]
  std::vector<std::string> datasets;        // optional row labels
};

// CSV score table: header = method names; an optional leading "dataset"
// column carries row labels.
inline ScoreTable load_score_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_score_table: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("load_score_table: empty file");
  std::vector<std::string> header = split_line(line);
  ScoreTable table;
  const bool labeled = !header.empty() && header[0] == "dataset";
  const std::size_t first_col = labeled ? 1 : 0;
  for (std::size_t c = first_col; c < header.size(); ++c) table.methods.push_back(header[c]);
  if (table.methods.size() < 2)
    throw std::runtime_error("load_score_table: need at least 2 method columns");
  table.scores.assign(table.methods.size(), {});
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> cells = split_line(line);
    if (cells.size() != header.size())
      throw std::runtime_error("load_score_table: ragged row " + std::to_string(row));
    if (labeled) table.datasets.push_back(cells[0]);
    for (std::size_t c = first_col; c < cells.size(); ++c) {
      try {
        table.scores[c - first_col].push_back(std::stod(cells[c]));
      } catch (const std::exception&) {
        throw std::runtime_error("load_score_table: unparsable cell at row " +
                                 std::to_string(row) + ", column '" + header[c] + "'");
      }
    }
  }
  return table;
}

// Pairwise Wilcoxon tests, Friedman test, and rank summary for a score table.
inline nlohmann::json stats_report(const ScoreTable& table, bool higher_is_better) {
  nlohmann::json report;
  report["schema_version"] = kReportSchemaVersion;
  report["methods"] = table.methods;
  report["higher_is_better"] = higher_is_better;

  nlohmann::json pairwise = nlohmann::json::array();
  for (std::size_t a = 0; a < table.methods.size(); ++a) {
    for (std::size_t b = a + 1; b < table.methods.size(); ++b) {
      const WilcoxonResult w = wilcoxon_signed_rank(table.scores[a], table.scores[b]);
      pairwise.push_back({{"method_a", table.methods[a]},
                          {"method_b", table.methods[b]},
                          {"statistic", w.statistic},
                          {"p_value", w.p_value}});
    }
  }
  report["wilcoxon_pairwise"] = std::move(pairwise);

  if (table.methods.size() >= 3) {
    const FriedmanResult fr = friedman(table.scores, higher_is_better);
    report["friedman"] = {{"statistic", fr.statistic}, {"p_value", fr.p_value}};
  }

  const RankSummary ranks = average_ranks(table.scores, higher_is_better);
  report["mean_ranks"] = ranks.mean_ranks;
  report["best_rank_counts"] = ranks.best_counts;
  return report;
}

inline void write_json(const nlohmann::json& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_json: cannot open " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write_json: write failure on " + path);
}

}  // namespace cafs
