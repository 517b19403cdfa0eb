#include "memeflow/learn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

#include "memeflow/rng.hpp"

namespace memeflow {

namespace {

void validate(const Dataset& data) {
  if (data.rows.size() != data.labels.size())
    throw std::invalid_argument("rows/labels size mismatch");
  if (data.rows.empty()) throw std::invalid_argument("empty dataset");
  bool has[2] = {false, false};
  for (int y : data.labels) {
    if (y != 0 && y != 1) throw std::invalid_argument("labels must be 0/1");
    has[y] = true;
  }
  if (!has[0] || !has[1])
    throw std::invalid_argument("training data must contain both classes");
  for (const auto& r : data.rows) {
    if (r.size() != data.n_features())
      throw std::invalid_argument("row width does not match feature_names");
    for (double x : r)
      if (!std::isfinite(x)) throw std::invalid_argument("non-finite feature value");
  }
}

double gini(int c0, int c1) {
  double n = c0 + c1;
  if (n == 0.0) return 0.0;
  double p0 = c0 / n, p1 = c1 / n;
  return 1.0 - p0 * p0 - p1 * p1;
}

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

Split best_split(const Dataset& data, const std::vector<int>& idx) {
  int total[2] = {0, 0};
  for (int i : idx) ++total[data.labels[i]];
  const double parent = gini(total[0], total[1]);
  const double n = static_cast<double>(idx.size());

  Split best;
  std::vector<std::pair<double, int>> vals(idx.size());
  for (std::size_t f = 0; f < data.n_features(); ++f) {
    for (std::size_t j = 0; j < idx.size(); ++j)
      vals[j] = {data.rows[idx[j]][f], data.labels[idx[j]]};
    std::sort(vals.begin(), vals.end());
    int left[2] = {0, 0};
    for (std::size_t j = 0; j + 1 < vals.size(); ++j) {
      ++left[vals[j].second];
      if (vals[j].first == vals[j + 1].first) continue;
      double nl = static_cast<double>(j + 1);
      double nr = n - nl;
      double g = parent -
                 (nl / n) * gini(left[0], left[1]) -
                 (nr / n) * gini(total[0] - left[0], total[1] - left[1]);
      if (g > best.gain) {  // strict: ties keep lowest (feature, threshold)
        best.feature = static_cast<int>(f);
        best.threshold = 0.5 * (vals[j].first + vals[j + 1].first);
        best.gain = g;
      }
    }
  }
  return best;
}

int build_tree(const Dataset& data, const std::vector<int>& idx, int depth,
               int max_depth, std::vector<TreeNode>& pool) {
  int counts[2] = {0, 0};
  for (int i : idx) ++counts[data.labels[i]];

  auto make_leaf = [&]() {
    TreeNode leaf;
    leaf.leaf_label = counts[1] > counts[0] ? 1 : 0;  // tie predicts 0
    leaf.leaf_score = static_cast<double>(counts[1]) / idx.size();
    pool.push_back(leaf);
    return static_cast<int>(pool.size()) - 1;
  };

  if (counts[0] == 0 || counts[1] == 0 || idx.size() < 2 ||
      (max_depth > 0 && depth >= max_depth))
    return make_leaf();

  Split split = best_split(data, idx);
  if (split.feature < 0 || split.gain <= 0.0) return make_leaf();

  std::vector<int> li, ri;
  for (int i : idx)
    (data.rows[i][split.feature] <= split.threshold ? li : ri).push_back(i);
  if (li.empty() || ri.empty()) return make_leaf();

  int node = static_cast<int>(pool.size());
  pool.emplace_back();
  pool[node].feature = split.feature;
  pool[node].threshold = split.threshold;
  int l = build_tree(data, li, depth + 1, max_depth, pool);
  int r = build_tree(data, ri, depth + 1, max_depth, pool);
  pool[node].left = l;
  pool[node].right = r;
  return node;
}

double tree_score(const std::vector<TreeNode>& pool,
                  const std::vector<double>& x) {
  int node = 0;
  while (pool[node].feature >= 0)
    node = x[pool[node].feature] <= pool[node].threshold ? pool[node].left
                                                         : pool[node].right;
  return static_cast<double>(pool[node].leaf_label);
}

}  // namespace

TrainedModel train_nb(const Dataset& data) {
  validate(data);
  const std::size_t d = data.n_features();
  TrainedModel m;
  m.kind = ModelKind::naive_bayes;
  m.feature_names = data.feature_names;

  // global per-feature variance, for the floor
  std::vector<double> gmean(d, 0.0), gvar(d, 0.0);
  for (const auto& r : data.rows)
    for (std::size_t f = 0; f < d; ++f) gmean[f] += r[f];
  for (std::size_t f = 0; f < d; ++f) gmean[f] /= data.size();
  for (const auto& r : data.rows)
    for (std::size_t f = 0; f < d; ++f)
      gvar[f] += (r[f] - gmean[f]) * (r[f] - gmean[f]);
  for (std::size_t f = 0; f < d; ++f) gvar[f] /= data.size();

  int count[2] = {0, 0};
  for (int c = 0; c < 2; ++c) {
    m.mean[c].assign(d, 0.0);
    m.variance[c].assign(d, 0.0);
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    int c = data.labels[i];
    ++count[c];
    for (std::size_t f = 0; f < d; ++f) m.mean[c][f] += data.rows[i][f];
  }
  for (int c = 0; c < 2; ++c)
    for (std::size_t f = 0; f < d; ++f) m.mean[c][f] /= count[c];
  for (std::size_t i = 0; i < data.size(); ++i) {
    int c = data.labels[i];
    for (std::size_t f = 0; f < d; ++f) {
      double diff = data.rows[i][f] - m.mean[c][f];
      m.variance[c][f] += diff * diff;
    }
  }
  for (int c = 0; c < 2; ++c) {
    m.prior[c] = static_cast<double>(count[c]) / data.size();
    for (std::size_t f = 0; f < d; ++f) {
      double floor = 1e-9 * (gvar[f] + 1e-12);
      m.variance[c][f] = std::max(m.variance[c][f] / count[c], floor);
    }
  }
  return m;
}

TrainedModel train_ensemble(const Dataset& data, int n_trees, int max_depth,
                            std::uint64_t rng_seed) {
  validate(data);
  if (n_trees < 1) throw std::invalid_argument("n_trees must be >= 1");
  TrainedModel m;
  m.kind = ModelKind::tree_ensemble;
  m.feature_names = data.feature_names;
  m.max_depth = max_depth;
  m.rng_seed = rng_seed;
  m.trees.resize(n_trees);

  const int n = static_cast<int>(data.size());
  for (int t = 0; t < n_trees; ++t) {
    auto rng = make_rng(rng_seed, "tree-bootstrap", t);
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::vector<int> sample(n);
    for (int i = 0; i < n; ++i) sample[i] = pick(rng);
    bool has[2] = {false, false};
    for (int i : sample) has[data.labels[i]] = true;
    if (!has[0] || !has[1]) {
      // degenerate bootstrap; force one row of the missing class in
      int missing = has[0] ? 1 : 0;
      for (int i = 0; i < n; ++i)
        if (data.labels[i] == missing) {
          sample[0] = i;
          break;
        }
    }
    build_tree(data, sample, 0, max_depth, m.trees[t]);
  }
  return m;
}

Prediction predict(const TrainedModel& model, const std::vector<double>& x) {
  if (x.size() != model.feature_names.size())
    throw std::invalid_argument("feature count does not match model");
  Prediction out;
  if (model.kind == ModelKind::naive_bayes) {
    double logp[2];
    for (int c = 0; c < 2; ++c) {
      logp[c] = std::log(model.prior[c]);
      for (std::size_t f = 0; f < x.size(); ++f) {
        double var = model.variance[c][f];
        double diff = x[f] - model.mean[c][f];
        logp[c] += -0.5 * std::log(2.0 * M_PI * var) - diff * diff / (2.0 * var);
      }
    }
    double mx = std::max(logp[0], logp[1]);
    double z = std::exp(logp[0] - mx) + std::exp(logp[1] - mx);
    out.score = std::exp(logp[1] - mx) / z;
  } else {
    double votes = 0.0;
    for (const auto& tree : model.trees) votes += tree_score(tree, x);
    out.score = votes / static_cast<double>(model.trees.size());
  }
  out.label = out.score > 0.5 ? 1 : 0;
  return out;
}

double accuracy(const TrainedModel& model, const Dataset& data) {
  if (data.rows.empty()) throw std::invalid_argument("empty dataset");
  int correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i)
    if (predict(model, data.rows[i]).label == data.labels[i]) ++correct;
  return static_cast<double>(correct) / data.size();
}

CvResult cross_validate(const Dataset& data, ModelKind kind, int k_folds,
                        std::uint64_t rng_seed, int n_trees, int max_depth) {
  validate(data);
  if (k_folds < 2) throw std::invalid_argument("k_folds must be >= 2");
  if (static_cast<std::size_t>(k_folds) > data.size())
    throw std::invalid_argument("more folds than rows");

  // stratified assignment: shuffle within each class, deal round-robin
  std::vector<int> fold_of(data.size());
  auto rng = make_rng(rng_seed, "cv-folds");
  for (int c = 0; c < 2; ++c) {
    std::vector<int> idx;
    for (std::size_t i = 0; i < data.size(); ++i)
      if (data.labels[i] == c) idx.push_back(static_cast<int>(i));
    std::shuffle(idx.begin(), idx.end(), rng);
    for (std::size_t j = 0; j < idx.size(); ++j)
      fold_of[idx[j]] = static_cast<int>(j % k_folds);
  }

  CvResult result;
  for (int fold = 0; fold < k_folds; ++fold) {
    Dataset train{{}, {}, data.feature_names}, test{{}, {}, data.feature_names};
    for (std::size_t i = 0; i < data.size(); ++i) {
      Dataset& dst = fold_of[i] == fold ? test : train;
      dst.rows.push_back(data.rows[i]);
      dst.labels.push_back(data.labels[i]);
    }
    bool has[2] = {false, false};
    for (int y : train.labels) has[y] = true;
    if (!has[0] || !has[1])
      throw std::runtime_error("too few rows for stratified folds");
    TrainedModel m =
        kind == ModelKind::naive_bayes
            ? train_nb(train)
            : train_ensemble(train, n_trees, max_depth,
                             derive_seed(rng_seed, "cv-train", fold));
    result.fold_accuracies.push_back(
        test.rows.empty() ? 1.0 : accuracy(m, test));
  }
  double sum = 0.0;
  for (double a : result.fold_accuracies) sum += a;
  result.accuracy = sum / result.fold_accuracies.size();
  return result;
}

std::vector<std::pair<std::string, double>> feature_importance(
    const TrainedModel& model, const Dataset& data, int n_permutations,
    std::uint64_t rng_seed) {
  const double baseline = accuracy(model, data);
  std::vector<std::pair<std::string, double>> out;
  Dataset shuffled = data;
  for (std::size_t f = 0; f < model.feature_names.size(); ++f) {
    double drop = 0.0;
    for (int p = 0; p < n_permutations; ++p) {
      auto rng = make_rng(rng_seed, "perm-importance", f * 1000 + p);
      std::vector<double> col(data.size());
      for (std::size_t i = 0; i < data.size(); ++i) col[i] = data.rows[i][f];
      std::shuffle(col.begin(), col.end(), rng);
      for (std::size_t i = 0; i < data.size(); ++i) shuffled.rows[i][f] = col[i];
      drop += baseline - accuracy(model, shuffled);
    }
    for (std::size_t i = 0; i < data.size(); ++i)
      shuffled.rows[i][f] = data.rows[i][f];
    out.emplace_back(model.feature_names[f], drop / n_permutations);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

std::string serialize_model(const TrainedModel& m) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["kind"] = m.kind == ModelKind::naive_bayes ? "naive_bayes" : "tree_ensemble";
  j["feature_names"] = m.feature_names;
  j["metadata"] = {{"rng_seed", m.rng_seed},
                   {"cv_accuracy", m.cv_accuracy},
                   {"n_trees", m.trees.size()},
                   {"max_depth", m.max_depth}};
  if (m.kind == ModelKind::naive_bayes) {
    j["parameters"] = {{"prior", {m.prior[0], m.prior[1]}},
                       {"mean", {m.mean[0], m.mean[1]}},
                       {"variance", {m.variance[0], m.variance[1]}}};
  } else {
    nlohmann::json trees = nlohmann::json::array();
    for (const auto& tree : m.trees) {
      nlohmann::json nodes = nlohmann::json::array();
      for (const auto& n : tree)
        nodes.push_back({n.feature, n.threshold, n.left, n.right, n.leaf_label,
                         n.leaf_score});
      trees.push_back(std::move(nodes));
    }
    j["parameters"] = {{"trees", std::move(trees)}};
  }
  return j.dump(2);
}

TrainedModel deserialize_model(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.at("schema_version").get<int>() != 1)
    throw std::runtime_error("unsupported model schema_version");
  TrainedModel m;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "naive_bayes")
    m.kind = ModelKind::naive_bayes;
  else if (kind == "tree_ensemble")
    m.kind = ModelKind::tree_ensemble;
  else
    throw std::runtime_error("unknown model kind: " + kind);
  m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  m.rng_seed = j.at("metadata").at("rng_seed").get<std::uint64_t>();
  m.cv_accuracy = j.at("metadata").at("cv_accuracy").get<double>();
  m.max_depth = j.at("metadata").at("max_depth").get<int>();
  const auto& p = j.at("parameters");
  if (m.kind == ModelKind::naive_bayes) {
    m.prior[0] = p.at("prior").at(0).get<double>();
    m.prior[1] = p.at("prior").at(1).get<double>();
    for (int c = 0; c < 2; ++c) {
      m.mean[c] = p.at("mean").at(c).get<std::vector<double>>();
      m.variance[c] = p.at("variance").at(c).get<std::vector<double>>();
    }
  } else {
    for (const auto& tree : p.at("trees")) {
      std::vector<TreeNode> pool;
      for (const auto& n : tree) {
        TreeNode node;
        node.feature = n.at(0).get<int>();
        node.threshold = n.at(1).get<double>();
        node.left = n.at(2).get<int>();
        node.right = n.at(3).get<int>();
        node.leaf_label = n.at(4).get<int>();
        node.leaf_score = n.at(5).get<double>();
        pool.push_back(node);
      }
      m.trees.push_back(std::move(pool));
    }
  }
  return m;
}

void save_model(const TrainedModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model: " + path);
  out << serialize_model(model) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return deserialize_model(text);
}

}  // namespace memeflow
