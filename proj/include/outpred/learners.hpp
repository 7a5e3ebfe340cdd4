/* Copyright 2026 the outpred authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "outpred/cohort.hpp"
#include "outpred/matrix.hpp"
#include "outpred/rng.hpp"

namespace outpred {

enum class ModelFamily {
  logistic_regression,
  linear_svm,
  knn,
  decision_tree,
  random_forest,
};

const char* to_string(ModelFamily family);
ModelFamily family_from_string(const std::string& s);
std::vector<ModelFamily> all_families();

struct LogisticParams {
  double l2 = 1e-4;       // ridge on weights, not the intercept
  double grad_tol = 1e-8;  // max absolute gradient component
  int max_iter = 100;
};

struct SvmParams {
  double cost = 1.0;      // hinge penalty C
  double gap_tol = 1e-6;  // relative duality gap
  int max_sweeps = 1000;
};

struct KnnParams {
  int k = 5;
};

struct TreeParams {
  int max_depth = 3;
  int min_leaf = 5;
};

struct ForestParams {
  int n_trees = 100;
  int max_depth = 8;
  int min_leaf = 1;
  int mtry = 0;  // features sampled per split; 0 = ceil(sqrt(p))
  bool bootstrap = true;
};

struct ModelSpec {
  ModelFamily family = ModelFamily::logistic_regression;
  LogisticParams logistic;
  SvmParams svm;
  KnnParams knn;
  TreeParams tree;
  ForestParams forest;

  static ModelSpec defaults(ModelFamily family);
  void validate() const;
};

/// feature < 0 marks a leaf. Routing rule: value <= threshold goes left.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double positive_fraction = 0.0;
  std::size_t n_train = 0;

  bool is_leaf() const { return feature < 0; }
};

struct TreeModel {
  std::vector<TreeNode> nodes;  // root at index 0, pre-order
};

struct LinearModel {
  std::vector<double> weights;
  double intercept = 0.0;
  bool probability = false;  // sigmoid applied when scoring
};

struct KnnModel {
  Matrix train;
  std::vector<TriState> labels;
  int k = 5;
};

struct ForestModel {
  std::vector<TreeModel> trees;
};

struct TrainedScorer {
  ModelFamily family = ModelFamily::logistic_regression;
  /// Column indices, in the original grid, the model was fit on; grids given
  /// to score() must carry exactly these columns in this order.
  std::vector<std::size_t> feature_subset;
  std::variant<LinearModel, KnnModel, TreeModel, ForestModel> model;
};

/// Penalized negative log-likelihood of a logistic model with parameters
/// theta = (weights..., intercept); l2 applies to the weights only. When
/// grad is non-null it is resized and filled with the analytic gradient.
double logistic_loss(const Matrix& x, const std::vector<TriState>& y,
                     const std::vector<double>& theta, double l2,
                     std::vector<double>* grad = nullptr);

/// Fits one model. x must already be standardized and complete; its columns
/// are the features listed in feature_subset (defaulted to 0..cols-1).
/// Only random_forest consumes rng.
TrainedScorer fit(const ModelSpec& spec, const Matrix& x,
                  const std::vector<TriState>& y, Rng rng,
                  std::vector<std::size_t> feature_subset = {});

/// Continuous risk scores, higher = more likely positive.
std::vector<double> score(const TrainedScorer& model, const Matrix& x);

struct CartConfig {
  int max_depth = 3;
  std::size_t min_leaf = 5;
  int mtry = 0;  // 0 = consider every feature
};

/// Grows one CART tree on the given rows. Gini impurity; candidate
/// thresholds are midpoints of consecutive distinct sorted values; a split
/// must improve impurity by more than 1e-12 and leave min_leaf rows on each
/// side; ties take the lower feature index, then the lower threshold. When
/// mtry > 0, each node draws that many distinct features from rng.
TreeModel grow_tree(const Matrix& x, const std::vector<TriState>& y,
                    const std::vector<std::size_t>& rows,
                    const CartConfig& config, Rng* rng);

}  // namespace outpred
