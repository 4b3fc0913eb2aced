// Command-line experiment harness for the correlation-aware EDA feature
// selector: run the search, generate the synthetic dataset, export
// conditional-probability heatmaps, and compare methods statistically.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cafs/analysis.hpp"
#include "cafs/dataset.hpp"
#include "cafs/eda.hpp"
#include "cafs/report.hpp"
#include "cafs/rng.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

cafs::EvalProtocol parse_protocol(const std::string& name) {
  if (name == "holdout") return cafs::EvalProtocol::kHoldout;
  if (name == "paper-mirror") return cafs::EvalProtocol::kPaperMirror;
  throw CLI::ValidationError("--protocol must be 'holdout' or 'paper-mirror'");
}

cafs::UpdateGate parse_gate(const std::string& name) {
  if (name == "prev-winner") return cafs::UpdateGate::kPreviousWinner;
  if (name == "best-so-far") return cafs::UpdateGate::kBestSoFar;
  throw CLI::ValidationError("--gate must be 'prev-winner' or 'best-so-far'");
}

struct CommonOpts {
  cafs::ExperimentConfig config;
  std::string protocol = "holdout";
  std::string gate = "prev-winner";
  std::string out;
};

void add_common_flags(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--dataset", opts.config.dataset, "CSV path or 'synthetic'");
  cmd->add_option("--label", opts.config.label_column, "label column name or index");
  cmd->add_option("--seed", opts.config.master_seed, "master seed");
  cmd->add_option("--runs", opts.config.runs, "number of independent runs");
  cmd->add_option("--evals", opts.config.eval_budget, "fitness evaluations per run");
  cmd->add_option("--change-factor", opts.config.change_factor, "SV/IM change factor");
  cmd->add_option("--strong-mult", opts.config.strong_multiplier, "strong IM multiplier");
  cmd->add_option("--k", opts.config.knn_k, "k-NN neighbor count");
  cmd->add_option("--protocol", opts.protocol, "holdout | paper-mirror");
  cmd->add_option("--gate", opts.gate, "prev-winner | best-so-far");
}

void finalize_config(CommonOpts& opts) {
  opts.config.protocol = parse_protocol(opts.protocol);
  opts.config.gate = parse_gate(opts.gate);
}

int cmd_run(CommonOpts& opts) {
  finalize_config(opts);
  const cafs::Dataset dataset = cafs::load_experiment_dataset(opts.config);
  const nlohmann::json report = cafs::run_experiment(dataset, opts.config);
  cafs::write_json(report, opts.out);
  std::cout << "wrote " << opts.out << " (" << opts.config.runs << " runs, "
            << dataset.feature_count() << " features)\n";
  return 0;
}

int cmd_synth(std::uint64_t seed, const std::string& out) {
  cafs::RandomSource src(seed);
  const cafs::Dataset ds = cafs::generate_synthetic(src);
  cafs::write_csv(ds, out);
  std::cout << "wrote " << out << " (" << ds.sample_count() << " samples)\n";
  return 0;
}

int cmd_heatmap(CommonOpts& opts, const std::string& heatmap_out) {
  finalize_config(opts);
  const cafs::Dataset dataset = cafs::load_experiment_dataset(opts.config);
  std::vector<cafs::HeatmapMatrix> heatmaps;
  heatmaps.reserve(opts.config.runs);
  for (int r = 0; r < opts.config.runs; ++r) {
    const cafs::RunResult result = cafs::execute_run(dataset, opts.config, r);
    heatmaps.push_back(cafs::conditional_heatmap(result.final_model));
  }
  cafs::write_heatmap_csv(cafs::aggregate_heatmaps(heatmaps), heatmap_out);
  std::cout << "wrote " << heatmap_out << " (aggregated over " << opts.config.runs
            << " runs)\n";
  return 0;
}

int cmd_stats(const std::string& scores_path, const std::string& out, bool lower_is_better) {
  const cafs::ScoreTable table = cafs::load_score_table(scores_path);
  const nlohmann::json report = cafs::stats_report(table, !lower_is_better);
  cafs::write_json(report, out);
  std::cout << "wrote " << out << " (" << table.methods.size() << " methods, "
            << table.scores[0].size() << " datasets)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Correlation-aware EDA feature selection harness"};
  app.require_subcommand(1);

  CommonOpts run_opts;
  run_opts.out = "report.json";
  auto* run_cmd = app.add_subcommand("run", "run the selector and write a JSON report");
  add_common_flags(run_cmd, run_opts);
  run_cmd->add_option("--out", run_opts.out, "report output path");

  std::uint64_t synth_seed = 1;
  std::string synth_out = "synthetic.csv";
  auto* synth_cmd = app.add_subcommand("synth", "write the synthetic correlated dataset");
  synth_cmd->add_option("--seed", synth_seed, "generator seed");
  synth_cmd->add_option("--out", synth_out, "CSV output path");

  CommonOpts heatmap_opts;
  heatmap_opts.config.runs = 100;
  std::string heatmap_out = "heatmap.csv";
  auto* heatmap_cmd =
      app.add_subcommand("heatmap", "aggregate conditional-probability heatmaps");
  add_common_flags(heatmap_cmd, heatmap_opts);
  heatmap_cmd->add_option("--heatmap-out", heatmap_out, "heatmap CSV output path");

  std::string scores_path;
  std::string stats_out = "stats.json";
  bool lower_is_better = false;
  auto* stats_cmd = app.add_subcommand("stats", "Wilcoxon/Friedman comparison of methods");
  stats_cmd->add_option("--scores", scores_path, "CSV score table (columns = methods)")
      ->required();
  stats_cmd->add_option("--out", stats_out, "stats report output path");
  stats_cmd->add_flag("--lower-better", lower_is_better, "lower scores are better");

  try {
    app.parse(argc, argv);
    if (run_cmd->parsed()) return cmd_run(run_opts);
    if (synth_cmd->parsed()) return cmd_synth(synth_seed, synth_out);
    if (heatmap_cmd->parsed()) return cmd_heatmap(heatmap_opts, heatmap_out);
    if (stats_cmd->parsed()) return cmd_stats(scores_path, stats_out, lower_is_better);
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}
