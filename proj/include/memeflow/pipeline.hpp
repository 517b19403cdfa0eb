#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "memeflow/features.hpp"
#include "memeflow/learn.hpp"
#include "memeflow/simulate.hpp"
#include "memeflow/trajectory.hpp"

namespace memeflow {

/// One config drives every command; all randomness fans out from rng_seed.
struct RunConfig {
  // inputs / outputs
  std::string graph_path;
  std::string trajectories_path;
  std::string texts_path;  // optional JSONL {"meme_id", "paragraphs": [...]}
  std::array<std::string, 4> lexicon_paths{};  // happiness, arousal, dominance, polarity
  std::string sensor_list_path;
  std::string model_path;
  std::string out_dir = ".";

  std::vector<double> horizons = {12.0, 24.0, 48.0, 120.0};

  LabelThresholds thresholds;      // success_min 1000, failure_max 100
  double early_frac = 0.03;
  int avoid_threshold = 25;
  double alpha = 0.05;
  double min_gain = 1e-6;
  double core_fraction = 0.001;

  std::uint64_t rng_seed = 1;

  // gen / simulate
  NetworkSpec network;
  CorpusSpec corpus;
  int n_memes = 500;

  // learn
  std::string model_kind = "tree_ensemble";
  int n_trees = 100;
  int max_depth = 0;
  int k_folds = 10;
};

// Each command reads its inputs, writes its artifacts under out_dir
// (atomically: temp + rename), and throws std::runtime_error on failure.
void cmd_gen(const RunConfig& cfg);        // network.tsv, network_manifest.json
void cmd_simulate(const RunConfig& cfg);   // trajectories.jsonl, corpus_manifest.json
void cmd_decompose(const RunConfig& cfg);  // partition.csv, shells.csv, decompose_stats.json
void cmd_features(const RunConfig& cfg, bool timing = false);  // features_tau*.csv [, timing.csv]
void cmd_sensors(const RunConfig& cfg);    // sensor_report.csv, sensors.txt
void cmd_train(const RunConfig& cfg);      // model_tau*.json
void cmd_eval(const RunConfig& cfg);       // eval_report.csv, eval_folds.csv
void cmd_predict(const RunConfig& cfg);    // predictions.csv (model_path + horizons[0])
void cmd_report(const RunConfig& cfg);     // report.txt from eval/timing artifacts

// Shared artifact helpers (also used by tests).
void atomic_write(const std::string& path, const std::string& content);
std::string features_csv_path(const std::string& out_dir, double tau);
Dataset load_feature_dataset(const std::string& csv_path);
VertexCommunities load_partition_csv(const std::string& path);
VertexShells load_shells_csv(const std::string& path);
SensorSet load_sensor_list(const std::string& path);
GeneratedNetwork load_network(const std::string& graph_path,
                              const std::string& manifest_path);

}  // namespace memeflow
