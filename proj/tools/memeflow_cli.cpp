#include <cstdio>
#include <exception>
#include <functional>
#include <string>

#include "CLI11.hpp"

#include "memeflow/pipeline.hpp"

using memeflow::RunConfig;

namespace {

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--out-dir", cfg.out_dir, "output directory");
  cmd->add_option("--rng-seed", cfg.rng_seed, "root RNG seed");
  cmd->add_option("--graph", cfg.graph_path, "edge-list file (TAB separated)");
  cmd->add_option("--trajectories", cfg.trajectories_path, "trajectory JSONL");
}

void add_thresholds(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--success-min", cfg.thresholds.success_min,
                  "posts for a successful label");
  cmd->add_option("--failure-max", cfg.thresholds.failure_max,
                  "posts cap for an unsuccessful label");
  cmd->add_option("--horizons", cfg.horizons, "feature horizons in hours");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"memeflow: early prediction of online cascade success"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML-style key=value config; flags win");
  app.config_formatter(std::make_shared<CLI::ConfigTOML>());

  RunConfig cfg;
  std::function<void()> run;

  auto* gen = app.add_subcommand("gen", "generate a synthetic network");
  add_common(gen, cfg);
  gen->add_option("--communities", cfg.network.n_communities, "planted blocks");
  gen->add_option("--community-size", cfg.network.community_size, "block size");
  gen->add_option("--p-intra", cfg.network.p_intra, "intra-block edge prob");
  gen->add_option("--p-inter", cfg.network.p_inter, "inter-block edge prob");
  gen->add_option("--core-size", cfg.network.core_size, "dense core vertices");
  gen->add_option("--p-core", cfg.network.p_core, "core attachment prob");
  gen->add_option("--p-tri", cfg.network.p_tri, "triangle-closing prob");
  gen->callback([&] { run = [&] { memeflow::cmd_gen(cfg); }; });

  auto* sim = app.add_subcommand("simulate", "simulate a meme corpus");
  add_common(sim, cfg);
  add_thresholds(sim, cfg);
  sim->add_option("--memes", cfg.n_memes, "corpus size");
  sim->add_option("--p-min", cfg.corpus.transmit_prob_min, "min transmit prob");
  sim->add_option("--p-max", cfg.corpus.transmit_prob_max, "max transmit prob");
  sim->add_option("--seeds-min", cfg.corpus.n_seeds_min, "min seeds per meme");
  sim->add_option("--seeds-max", cfg.corpus.n_seeds_max, "max seeds per meme");
  sim->add_option("--dt-hours", cfg.corpus.dt_hours, "round spacing in hours");
  sim->callback([&] { run = [&] { memeflow::cmd_simulate(cfg); }; });

  auto* dec = app.add_subcommand("decompose",
                                 "k-shell + community decomposition");
  add_common(dec, cfg);
  dec->add_option("--min-gain", cfg.min_gain, "minimum modularity gain per split");
  dec->callback([&] { run = [&] { memeflow::cmd_decompose(cfg); }; });

  bool timing = false;
  auto* feat = app.add_subcommand("features", "extract per-horizon features");
  add_common(feat, cfg);
  add_thresholds(feat, cfg);
  feat->add_option("--sensors", cfg.sensor_list_path, "sensor id list file");
  feat->add_option("--texts", cfg.texts_path, "meme texts JSONL");
  feat->add_option("--lexicon-happiness", cfg.lexicon_paths[0], "TSV lexicon");
  feat->add_option("--lexicon-arousal", cfg.lexicon_paths[1], "TSV lexicon");
  feat->add_option("--lexicon-dominance", cfg.lexicon_paths[2], "TSV lexicon");
  feat->add_option("--lexicon-polarity", cfg.lexicon_paths[3], "TSV lexicon");
  feat->add_flag("--timing", timing, "also emit the timing table");
  feat->callback([&] { run = [&] { memeflow::cmd_features(cfg, timing); }; });

  auto* sens = app.add_subcommand("sensors", "discover early-sensor blogs");
  add_common(sens, cfg);
  add_thresholds(sens, cfg);
  sens->add_option("--early-frac", cfg.early_frac, "early window as lifespan fraction");
  sens->add_option("--alpha", cfg.alpha, "significance level");
  sens->add_option("--avoid-threshold", cfg.avoid_threshold,
                   "sub-threshold meme size for the avoidance test");
  sens->add_option("--core-fraction", cfg.core_fraction,
                   "top fraction by shell rank counted as core");
  sens->callback([&] { run = [&] { memeflow::cmd_sensors(cfg); }; });

  auto add_learn = [&](CLI::App* cmd) {
    add_common(cmd, cfg);
    add_thresholds(cmd, cfg);
    cmd->add_option("--model-kind", cfg.model_kind,
                    "naive_bayes or tree_ensemble");
    cmd->add_option("--trees", cfg.n_trees, "ensemble size");
    cmd->add_option("--max-depth", cfg.max_depth, "tree depth cap (0 = none)");
    cmd->add_option("--folds", cfg.k_folds, "cross-validation folds");
  };
  auto* train = app.add_subcommand("train", "train and serialize models");
  add_learn(train);
  train->add_option("--model", cfg.model_path, "model output path");
  train->callback([&] { run = [&] { memeflow::cmd_train(cfg); }; });

  auto* eval = app.add_subcommand("eval", "cross-validate and rank features");
  add_learn(eval);
  eval->callback([&] { run = [&] { memeflow::cmd_eval(cfg); }; });

  auto* pred = app.add_subcommand("predict", "score memes with a saved model");
  add_common(pred, cfg);
  add_thresholds(pred, cfg);
  pred->add_option("--model", cfg.model_path, "model JSON path")->required();
  pred->callback([&] { run = [&] { memeflow::cmd_predict(cfg); }; });

  auto* rep = app.add_subcommand("report", "format evaluation and timing tables");
  add_common(rep, cfg);
  rep->callback([&] { run = [&] { memeflow::cmd_report(cfg); }; });

  CLI11_PARSE(app, argc, argv);

  try {
    run();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "memeflow: error: %s\n", e.what());
    return 1;
  }
  return 0;
}
