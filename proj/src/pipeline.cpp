#include "memeflow/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "memeflow/community.hpp"
#include "memeflow/rng.hpp"
#include "memeflow/kshell.hpp"
#include "memeflow/sensors.hpp"
#include "memeflow/textfeat.hpp"

namespace memeflow {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string tau_tag(double tau) {
  if (tau == std::floor(tau))
    return std::to_string(static_cast<long long>(tau));
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", tau);
  return buf;
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

// Lines of a CSV artifact, header comment and column row stripped.
std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing input: " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;  // column names
      continue;
    }
    rows.push_back(split_csv(line));
  }
  return rows;
}

struct MemeTexts {
  std::map<std::string, std::vector<std::string>> paragraphs;
};

MemeTexts load_texts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing input: " + path);
  MemeTexts out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto j = nlohmann::json::parse(line);
    out.paragraphs[j.at("meme_id").get<std::string>()] =
        j.at("paragraphs").get<std::vector<std::string>>();
  }
  return out;
}

std::string default_path(const RunConfig& cfg, const std::string& configured,
                         const std::string& name) {
  return configured.empty() ? join_path(cfg.out_dir, name) : configured;
}

ModelKind parse_kind(const std::string& s) {
  if (s == "naive_bayes") return ModelKind::naive_bayes;
  if (s == "tree_ensemble") return ModelKind::tree_ensemble;
  throw std::runtime_error("unknown model kind: " + s);
}

}  // namespace

void atomic_write(const std::string& path, const std::string& content) {
  std::filesystem::path target(path);
  if (target.has_parent_path())
    std::filesystem::create_directories(target.parent_path());
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write: " + tmp);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::string features_csv_path(const std::string& out_dir, double tau) {
  return join_path(out_dir, "features_tau" + tau_tag(tau) + ".csv");
}

void cmd_gen(const RunConfig& cfg) {
  NetworkSpec spec = cfg.network;
  spec.seed = derive_seed(cfg.rng_seed, "network");
  GeneratedNetwork net = generate_network(spec);

  std::ostringstream edges;
  edges << "# memeflow edge list v1\n";
  const int n = static_cast<int>(net.graph.vertex_count());
  for (int u = 0; u < n; ++u)
    for (int v : net.graph.neighbors(u))
      if (u < v) edges << net.graph.id_of(u) << '\t' << net.graph.id_of(v) << '\n';
  atomic_write(default_path(cfg, cfg.graph_path, "network.tsv"), edges.str());

  nlohmann::json manifest;
  manifest["schema_version"] = 1;
  manifest["spec"] = {{"n_communities", spec.n_communities},
                      {"community_size", spec.community_size},
                      {"p_intra", spec.p_intra},
                      {"p_inter", spec.p_inter},
                      {"core_size", spec.core_size},
                      {"p_core", spec.p_core},
                      {"p_tri", spec.p_tri},
                      {"seed", spec.seed}};
  manifest["n_vertices"] = net.graph.vertex_count();
  manifest["n_edges"] = net.graph.edge_count();
  manifest["blocks"] = net.blocks;
  manifest["core"] = net.core;
  atomic_write(join_path(cfg.out_dir, "network_manifest.json"),
               manifest.dump(2) + "\n");
}

GeneratedNetwork load_network(const std::string& graph_path,
                              const std::string& manifest_path) {
  GeneratedNetwork net;
  net.graph = load_graph(graph_path);
  std::ifstream in(manifest_path);
  if (!in) throw std::runtime_error("missing input: " + manifest_path);
  nlohmann::json j;
  in >> j;
  net.blocks = j.at("blocks").get<std::vector<std::vector<std::string>>>();
  net.core = j.at("core").get<std::vector<std::string>>();
  return net;
}

void cmd_simulate(const RunConfig& cfg) {
  GeneratedNetwork net =
      load_network(default_path(cfg, cfg.graph_path, "network.tsv"),
                   join_path(cfg.out_dir, "network_manifest.json"));
  CorpusSpec spec = cfg.corpus;
  spec.rng_seed = derive_seed(cfg.rng_seed, "corpus");
  auto corpus = generate_corpus(cfg.n_memes, net, spec);

  std::vector<MemeTrajectory> trajectories;
  trajectories.reserve(corpus.size());
  nlohmann::json memes = nlohmann::json::array();
  std::vector<double> sizes;
  for (const auto& entry : corpus) {
    trajectories.push_back(entry.trajectory);
    sizes.push_back(entry.trajectory.total_posts());
    memes.push_back({{"meme_id", entry.trajectory.meme_id},
                     {"transmit_prob", entry.params.transmit_prob},
                     {"n_seeds", entry.params.n_seeds},
                     {"seed_strategy", to_string(entry.params.seed_strategy)},
                     {"dt_hours", entry.params.dt_hours},
                     {"rng_seed", entry.params.rng_seed},
                     {"final_size", entry.trajectory.total_posts()}});
  }

  std::ostringstream jsonl;
  for (const auto& t : trajectories) {
    nlohmann::json j;
    j["meme_id"] = t.meme_id;
    auto& events = j["events"] = nlohmann::json::array();
    for (const auto& [tt, src] : t.events)
      events.push_back(nlohmann::json::array({tt, src}));
    jsonl << j.dump() << '\n';
  }
  atomic_write(default_path(cfg, cfg.trajectories_path, "trajectories.jsonl"),
               jsonl.str());

  // size-distribution summary
  double mean = 0.0;
  for (double s : sizes) mean += s;
  mean /= sizes.size();
  double m2 = 0.0, m3 = 0.0;
  for (double s : sizes) {
    m2 += (s - mean) * (s - mean);
    m3 += (s - mean) * (s - mean) * (s - mean);
  }
  m2 /= sizes.size();
  m3 /= sizes.size();
  double skew = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  std::vector<double> sorted = sizes;
  std::sort(sorted.begin(), sorted.end());
  double med = sorted[sorted.size() / 2];

  nlohmann::json manifest;
  manifest["schema_version"] = 1;
  manifest["n_memes"] = cfg.n_memes;
  manifest["rng_seed"] = spec.rng_seed;
  manifest["size_summary"] = {{"mean", mean},
                              {"median", med},
                              {"max", sorted.back()},
                              {"skewness", skew}};
  manifest["memes"] = std::move(memes);
  atomic_write(join_path(cfg.out_dir, "corpus_manifest.json"),
               manifest.dump(2) + "\n");
}

void cmd_decompose(const RunConfig& cfg) {
  Graph g = load_graph(default_path(cfg, cfg.graph_path, "network.tsv"));
  KShellIndex shells = k_shell_decompose(g);
  CommunityOptions opts;
  opts.min_gain = cfg.min_gain;
  CommunityPartition part = detect_communities(g, opts);

  std::ostringstream pcsv, scsv;
  pcsv << "# memeflow partition v1\nvertex,community\n";
  scsv << "# memeflow shells v1\nvertex,shell\n";
  for (int v = 0; v < static_cast<int>(g.vertex_count()); ++v) {
    pcsv << g.id_of(v) << ',' << part.community[v] << '\n';
    scsv << g.id_of(v) << ',' << shells.shell[v] << '\n';
  }
  atomic_write(join_path(cfg.out_dir, "partition.csv"), pcsv.str());
  atomic_write(join_path(cfg.out_dir, "shells.csv"), scsv.str());

  nlohmann::json stats;
  stats["schema_version"] = 1;
  stats["n_vertices"] = g.vertex_count();
  stats["n_edges"] = g.edge_count();
  stats["dropped_self_loops"] = g.dropped_self_loops();
  stats["modularity_Q"] = part.modularity_q;
  stats["n_communities"] = part.n_communities;
  stats["k_max"] = shells.k_max;
  if (part.edgeless_warning) stats["warning"] = "edgeless graph; Q reported as 0";
  atomic_write(join_path(cfg.out_dir, "decompose_stats.json"),
               stats.dump(2) + "\n");
}

VertexCommunities load_partition_csv(const std::string& path) {
  VertexCommunities out;
  for (const auto& row : read_csv(path)) {
    if (row.size() != 2) throw std::runtime_error("bad partition row in " + path);
    int c = std::stoi(row[1]);
    out.community[row[0]] = c;
    out.n_communities = std::max(out.n_communities, c + 1);
  }
  return out;
}

VertexShells load_shells_csv(const std::string& path) {
  VertexShells out;
  for (const auto& row : read_csv(path)) {
    if (row.size() != 2) throw std::runtime_error("bad shells row in " + path);
    int s = std::stoi(row[1]);
    out.shell[row[0]] = s;
    out.k_max = std::max(out.k_max, s);
  }
  return out;
}

SensorSet load_sensor_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing input: " + path);
  SensorSet out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    out.insert(line);
  }
  return out;
}

void cmd_features(const RunConfig& cfg, bool timing) {
  auto corpus = load_trajectories(
      default_path(cfg, cfg.trajectories_path, "trajectories.jsonl"));
  VertexCommunities partition =
      load_partition_csv(join_path(cfg.out_dir, "partition.csv"));
  VertexShells shells = load_shells_csv(join_path(cfg.out_dir, "shells.csv"));
  SensorSet sensors;
  if (!cfg.sensor_list_path.empty())
    sensors = load_sensor_list(cfg.sensor_list_path);

  // per-meme language features, constant across horizons
  std::map<std::string, std::array<double, 4>> language;
  if (!cfg.texts_path.empty()) {
    bool have_lex = true;
    for (const auto& p : cfg.lexicon_paths)
      if (p.empty()) have_lex = false;
    if (!have_lex)
      throw std::runtime_error("texts provided but lexicon paths incomplete");
    std::array<Lexicon, 4> lexicons = {
        load_lexicon(cfg.lexicon_paths[0], "happiness"),
        load_lexicon(cfg.lexicon_paths[1], "arousal"),
        load_lexicon(cfg.lexicon_paths[2], "dominance"),
        load_lexicon(cfg.lexicon_paths[3], "polarity")};
    MemeTexts texts = load_texts(cfg.texts_path);
    for (const auto& [meme_id, paragraphs] : texts.paragraphs)
      if (!paragraphs.empty())
        language[meme_id] = language_features(paragraphs, lexicons);
  }

  for (double tau : cfg.horizons) {
    std::ostringstream csv;
    csv << "# memeflow features v1\n";
    csv << "meme_id,tau_hours";
    for (const auto& name : feature_names()) csv << ',' << name;
    csv << ",label\n";
    for (const auto& traj : corpus) {
      std::array<double, 4> lang{};
      if (auto it = language.find(traj.meme_id); it != language.end())
        lang = it->second;
      FeatureVector fv =
          extract(traj, tau, partition, shells, sensors, lang, cfg.thresholds);
      csv << fv.meme_id << ',' << num(fv.tau_hours);
      for (double v : fv.values()) csv << ',' << num(v);
      csv << ',' << to_string(fv.label) << '\n';
    }
    atomic_write(features_csv_path(cfg.out_dir, tau), csv.str());
  }

  if (timing) {
    std::ostringstream csv;
    csv << "# memeflow timing v1\n";
    csv << "label,posts_mark,memes,mean_hours,median_hours\n";
    for (const auto& row : timing_table(corpus, {5, 10}, cfg.thresholds)) {
      csv << row.label << ','
          << (row.n == 0 ? std::string("total") : std::to_string(row.n)) << ','
          << row.memes << ',' << num(row.mean_hours) << ','
          << num(row.median_hours) << '\n';
    }
    atomic_write(join_path(cfg.out_dir, "timing.csv"), csv.str());
  }
}

void cmd_sensors(const RunConfig& cfg) {
  auto corpus = load_trajectories(
      default_path(cfg, cfg.trajectories_path, "trajectories.jsonl"));
  std::vector<MemeTrajectory> successful;
  for (const auto& t : corpus)
    if (label(t, cfg.thresholds) == MemeLabel::Successful) successful.push_back(t);
  if (successful.size() < 2)
    throw std::runtime_error("need at least 2 successful memes for sensor test");

  SensorTestOptions opts;
  opts.early_frac = cfg.early_frac;
  opts.alpha = cfg.alpha;
  SensorReport report = sensor_test(successful, opts);
  avoidance_test(report, corpus, cfg.avoid_threshold, cfg.alpha);

  Graph g = load_graph(default_path(cfg, cfg.graph_path, "network.tsv"));
  KShellIndex shells = k_shell_decompose(g);
  SensorSummary summary = characterize(report, g, shells, cfg.core_fraction);

  std::ostringstream csv;
  csv << "# memeflow sensor report v1\n";
  csv << "source_id,n_memes_posted,n_early,p_value,is_sensor,avoidance_p,"
         "in_core_top_fraction,in_kmax_shell\n";
  std::ostringstream ids;
  ids << "# memeflow sensor list v1\n";
  for (const auto& row : report.rows) {
    csv << row.source_id << ',' << row.n_memes_posted << ',' << row.n_early
        << ',' << num(row.p_value) << ',' << (row.is_sensor ? 1 : 0) << ','
        << (row.avoidance_p ? num(*row.avoidance_p) : std::string("absent"))
        << ',' << (row.in_core_top_fraction ? 1 : 0) << ','
        << (row.in_kmax_shell ? 1 : 0) << '\n';
    if (row.is_sensor) ids << row.source_id << '\n';
  }
  atomic_write(join_path(cfg.out_dir, "sensor_report.csv"), csv.str());
  atomic_write(join_path(cfg.out_dir, "sensors.txt"), ids.str());

  nlohmann::json js;
  js["schema_version"] = 1;
  js["n_sensors"] = summary.n_sensors;
  js["n_strong"] = summary.n_strong;
  js["frac_sensors_in_top_core"] = summary.frac_sensors_in_top_core;
  js["frac_strong_in_kmax"] = summary.frac_strong_in_kmax;
  js["frac_strong_in_top_degree"] = summary.frac_strong_in_top_degree;
  js["degenerate_warning"] = report.degenerate_warning;
  atomic_write(join_path(cfg.out_dir, "sensor_summary.json"),
               js.dump(2) + "\n");
}

Dataset load_feature_dataset(const std::string& csv_path) {
  Dataset ds;
  ds.feature_names = feature_names();
  for (const auto& row : read_csv(csv_path)) {
    if (row.size() != 2 + feature_names().size() + 1)
      throw std::runtime_error("bad feature row in " + csv_path);
    const std::string& lbl = row.back();
    if (lbl == "excluded") continue;
    std::vector<double> x;
    for (std::size_t i = 2; i + 1 < row.size(); ++i) x.push_back(std::stod(row[i]));
    ds.rows.push_back(std::move(x));
    ds.labels.push_back(lbl == "successful" ? 1 : 0);
  }
  return ds;
}

void cmd_train(const RunConfig& cfg) {
  ModelKind kind = parse_kind(cfg.model_kind);
  for (double tau : cfg.horizons) {
    Dataset ds = load_feature_dataset(features_csv_path(cfg.out_dir, tau));
    CvResult cv = cross_validate(ds, kind, cfg.k_folds, cfg.rng_seed,
                                 cfg.n_trees, cfg.max_depth);
    TrainedModel model =
        kind == ModelKind::naive_bayes
            ? train_nb(ds)
            : train_ensemble(ds, cfg.n_trees, cfg.max_depth,
                             derive_seed(cfg.rng_seed, "train-final"));
    model.cv_accuracy = cv.accuracy;
    std::string path = cfg.model_path.empty()
                           ? join_path(cfg.out_dir, "model_tau" + tau_tag(tau) + ".json")
                           : cfg.model_path;
    atomic_write(path, serialize_model(model) + "\n");
  }
}

void cmd_eval(const RunConfig& cfg) {
  ModelKind kind = parse_kind(cfg.model_kind);
  std::ostringstream report, folds;
  report << "# memeflow evaluation v1\n";
  report << "tau_hours,cv_accuracy,top1,top2,top3\n";
  folds << "# memeflow fold accuracies v1\n";
  folds << "tau_hours,fold,accuracy\n";
  for (double tau : cfg.horizons) {
    Dataset ds = load_feature_dataset(features_csv_path(cfg.out_dir, tau));
    CvResult cv = cross_validate(ds, kind, cfg.k_folds, cfg.rng_seed,
                                 cfg.n_trees, cfg.max_depth);
    TrainedModel model =
        kind == ModelKind::naive_bayes
            ? train_nb(ds)
            : train_ensemble(ds, cfg.n_trees, cfg.max_depth,
                             derive_seed(cfg.rng_seed, "eval-final"));
    auto ranked = feature_importance(model, ds, 10,
                                     derive_seed(cfg.rng_seed, "importance"));
    report << num(tau) << ',' << num(cv.accuracy);
    for (int i = 0; i < 3; ++i)
      report << ',' << (i < static_cast<int>(ranked.size()) ? ranked[i].first
                                                            : std::string());
    report << '\n';
    for (std::size_t f = 0; f < cv.fold_accuracies.size(); ++f)
      folds << num(tau) << ',' << f << ',' << num(cv.fold_accuracies[f]) << '\n';
  }
  atomic_write(join_path(cfg.out_dir, "eval_report.csv"), report.str());
  atomic_write(join_path(cfg.out_dir, "eval_folds.csv"), folds.str());
}

void cmd_predict(const RunConfig& cfg) {
  if (cfg.model_path.empty())
    throw std::runtime_error("predict requires --model");
  TrainedModel model = load_model(cfg.model_path);
  double tau = cfg.horizons.empty() ? 12.0 : cfg.horizons.front();
  std::string path = features_csv_path(cfg.out_dir, tau);

  std::ostringstream csv;
  csv << "# memeflow predictions v1\n";
  csv << "meme_id,label_true,label_pred,score\n";
  for (const auto& row : read_csv(path)) {
    if (row.size() != 2 + feature_names().size() + 1)
      throw std::runtime_error("bad feature row in " + path);
    std::vector<double> x;
    for (std::size_t i = 2; i + 1 < row.size(); ++i) x.push_back(std::stod(row[i]));
    Prediction p = predict(model, x);
    csv << row.front() << ',' << row.back() << ','
        << (p.label == 1 ? "successful" : "unsuccessful") << ',' << num(p.score)
        << '\n';
  }
  atomic_write(join_path(cfg.out_dir, "predictions.csv"), csv.str());
}

void cmd_report(const RunConfig& cfg) {
  std::ostringstream out;
  out << "Prediction summary\n";
  out << "tau (hours)  accuracy  ranked predictive features\n";
  for (const auto& row : read_csv(join_path(cfg.out_dir, "eval_report.csv"))) {
    if (row.size() < 5) continue;
    char acc[16];
    std::snprintf(acc, sizeof(acc), "%.1f%%", std::stod(row[1]) * 100.0);
    out << row[0] << "  " << acc << "  1.) " << row[2] << ", 2.) " << row[3]
        << ", 3.) " << row[4] << ".\n";
  }

  std::string timing_path = join_path(cfg.out_dir, "timing.csv");
  if (std::filesystem::exists(timing_path)) {
    out << "\nEarly meme dynamics\n";
    out << "class  #posts  memes  mean (hr)  median (hr)\n";
    for (const auto& row : read_csv(timing_path)) {
      if (row.size() < 5) continue;
      out << row[0] << "  " << row[1] << "  " << row[2] << "  " << row[3]
          << "  " << row[4] << '\n';
    }
  }
  atomic_write(join_path(cfg.out_dir, "report.txt"), out.str());
}

}  // namespace memeflow
