#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace memeflow {

/// Binary classification rows; label 1 = successful, 0 = unsuccessful.
struct Dataset {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::vector<std::string> feature_names;

  std::size_t size() const { return rows.size(); }
  std::size_t n_features() const { return feature_names.size(); }
};

enum class ModelKind { naive_bayes, tree_ensemble };

struct TreeNode {
  int feature = -1;        // -1 marks a leaf
  double threshold = 0.0;  // go left when value <= threshold
  int left = -1, right = -1;
  int leaf_label = 0;
  double leaf_score = 0.0;  // fraction of class-1 samples at the leaf
};

struct TrainedModel {
  ModelKind kind = ModelKind::naive_bayes;
  std::vector<std::string> feature_names;

  // naive_bayes: per class c in {0,1}, per feature
  double prior[2] = {0.5, 0.5};
  std::vector<double> mean[2], variance[2];

  // tree_ensemble: flat node pools, one per tree
  std::vector<std::vector<TreeNode>> trees;
  int max_depth = 0;  // 0 = unlimited

  std::uint64_t rng_seed = 0;
  double cv_accuracy = -1.0;  // filled when trained through cross_validate
};

struct Prediction {
  int label = 0;
  double score = 0.0;  // P(successful) estimate in [0, 1]; ties predict 0
};

/// Gaussian naive Bayes; variances floored at
/// 1e-9 * (global feature variance + 1e-12).
TrainedModel train_nb(const Dataset& data);

/// Bagged CART trees: bootstrap resample per tree, axis-aligned splits by
/// Gini impurity decrease, thresholds at midpoints between sorted distinct
/// values, ties broken by (feature index, threshold). Majority vote.
TrainedModel train_ensemble(const Dataset& data, int n_trees = 100,
                            int max_depth = 0, std::uint64_t rng_seed = 1);

Prediction predict(const TrainedModel& model, const std::vector<double>& features);

double accuracy(const TrainedModel& model, const Dataset& data);

struct CvResult {
  double accuracy = 0.0;  // mean of fold accuracies
  std::vector<double> fold_accuracies;
};

/// Stratified k-fold cross-validation; fold assignment deterministic given
/// rng_seed. Ensemble hyperparameters apply when kind == tree_ensemble.
CvResult cross_validate(const Dataset& data, ModelKind kind, int k_folds = 10,
                        std::uint64_t rng_seed = 1, int n_trees = 100,
                        int max_depth = 0);

/// Permutation importance: mean accuracy drop over n_permutations shuffles
/// of each feature column; sorted by (importance desc, name asc).
std::vector<std::pair<std::string, double>> feature_importance(
    const TrainedModel& model, const Dataset& data, int n_permutations = 10,
    std::uint64_t rng_seed = 1);

// Versioned JSON document round-trip.
std::string serialize_model(const TrainedModel& model);
TrainedModel deserialize_model(const std::string& json_text);
void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

}  // namespace memeflow
