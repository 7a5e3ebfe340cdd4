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

#include "outpred/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "outpred/error.hpp"
#include "outpred/linalg.hpp"

namespace outpred {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double log1pexp(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

void check_training_input(const Matrix& x, const std::vector<TriState>& y) {
  if (x.rows != y.size())
    fail(errc::internal, "fit: row/label count mismatch");
  std::size_t pos = 0, neg = 0;
  for (TriState v : y) {
    if (v == 1)
      ++pos;
    else if (v == 0)
      ++neg;
    else
      fail(errc::fit, "fit: missing label in training data");
  }
  if (pos == 0 || neg == 0)
    fail(errc::fit, "fit: training labels contain a single class");
  for (double v : x.data)
    if (!std::isfinite(v)) fail(errc::fit, "fit: non-finite training value");
}

// ---- logistic regression: damped Newton on penalized likelihood ----

LinearModel fit_logistic(const Matrix& x, const std::vector<TriState>& y,
                         const LogisticParams& prm) {
  const std::size_t p = x.cols;
  const std::size_t d = p + 1;  // weights then intercept
  std::vector<double> theta(d, 0.0);
  double obj = logistic_loss(x, y, theta, prm.l2);

  std::vector<double> grad(d), h(d * d), step(d), trial(d);
  for (int iter = 0; iter < prm.max_iter; ++iter) {
    std::fill(grad.begin(), grad.end(), 0.0);
    std::fill(h.begin(), h.end(), 0.0);
    for (std::size_t i = 0; i < x.rows; ++i) {
      const double* row = x.row(i);
      double z = theta[p];
      for (std::size_t j = 0; j < p; ++j) z += theta[j] * row[j];
      const double pr = sigmoid(z);
      const double r = pr - (y[i] == 1 ? 1.0 : 0.0);
      const double wgt = pr * (1.0 - pr);
      for (std::size_t j = 0; j < p; ++j) grad[j] += r * row[j];
      grad[p] += r;
      for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b <= a; ++b)
          h[a * d + b] += wgt * row[a] * row[b];
      for (std::size_t a = 0; a < p; ++a) h[p * d + a] += wgt * row[a];
      h[p * d + p] += wgt;
    }
    for (std::size_t j = 0; j < p; ++j) {
      grad[j] += prm.l2 * theta[j];
      h[j * d + j] += prm.l2;
    }
    double gmax = 0.0;
    for (double g : grad) gmax = std::max(gmax, std::fabs(g));
    if (gmax < prm.grad_tol) break;

    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a + 1; b < d; ++b) h[a * d + b] = h[b * d + a];
    std::vector<double> hs = h;
    step = grad;
    if (!cholesky_solve(hs, step, d)) {
      hs = h;
      for (std::size_t a = 0; a < d; ++a) hs[a * d + a] += 1e-8;
      step = grad;
      if (!cholesky_solve(hs, step, d))
        fail(errc::fit, "logistic: Hessian not positive definite");
    }
    // Backtracking keeps the penalized objective non-increasing.
    double scale = 1.0;
    bool accepted = false;
    for (int half = 0; half < 60; ++half) {
      for (std::size_t j = 0; j < d; ++j) trial[j] = theta[j] - scale * step[j];
      const double cand = logistic_loss(x, y, trial, prm.l2);
      if (cand <= obj) {
        theta = trial;
        obj = cand;
        accepted = true;
        break;
      }
      scale *= 0.5;
    }
    if (!accepted) break;
  }
  LinearModel m;
  m.weights.assign(theta.begin(), theta.begin() + static_cast<long>(p));
  m.intercept = theta[p];
  m.probability = true;
  return m;
}

// ---- linear SVM: dual coordinate descent, bias as an always-1 feature ----

LinearModel fit_svm(const Matrix& x, const std::vector<TriState>& y,
                    const SvmParams& prm) {
  const std::size_t n = x.rows;
  const std::size_t p = x.cols;
  const std::size_t d = p + 1;
  const double c = prm.cost;

  std::vector<double> sign(n);
  for (std::size_t i = 0; i < n; ++i) sign[i] = y[i] == 1 ? 1.0 : -1.0;
  std::vector<double> qdiag(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = x.row(i);
    double q = 1.0;  // bias feature
    for (std::size_t j = 0; j < p; ++j) q += row[j] * row[j];
    qdiag[i] = q;
  }

  std::vector<double> alpha(n, 0.0), w(d, 0.0);
  auto margin = [&](std::size_t i) {
    const double* row = x.row(i);
    double z = w[p];
    for (std::size_t j = 0; j < p; ++j) z += w[j] * row[j];
    return z;
  };

  for (int sweep = 0; sweep < prm.max_sweeps; ++sweep) {
    for (std::size_t i = 0; i < n; ++i) {
      const double g = sign[i] * margin(i) - 1.0;
      const double next =
          std::min(c, std::max(0.0, alpha[i] - g / qdiag[i]));
      const double delta = next - alpha[i];
      if (delta != 0.0) {
        const double* row = x.row(i);
        const double f = delta * sign[i];
        for (std::size_t j = 0; j < p; ++j) w[j] += f * row[j];
        w[p] += f;
        alpha[i] = next;
      }
    }
    double wnorm = 0.0;
    for (double v : w) wnorm += v * v;
    double hinge = 0.0, asum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      hinge += std::max(0.0, 1.0 - sign[i] * margin(i));
      asum += alpha[i];
    }
    const double primal = 0.5 * wnorm + c * hinge;
    const double dual = asum - 0.5 * wnorm;
    if (primal - dual <= prm.gap_tol * std::max(1.0, std::fabs(primal))) break;
  }
  LinearModel m;
  m.weights.assign(w.begin(), w.begin() + static_cast<long>(p));
  m.intercept = w[p];
  m.probability = false;
  return m;
}

// ---- CART ----

double gini(std::size_t pos, std::size_t n) {
  if (n == 0) return 0.0;
  const double fp = static_cast<double>(pos) / static_cast<double>(n);
  const double fn = 1.0 - fp;
  return 1.0 - fp * fp - fn * fn;
}

struct BestSplit {
  int feature = -1;
  double threshold = 0.0;
  double weighted = std::numeric_limits<double>::infinity();
};

std::vector<int> sample_features(std::size_t p, int mtry, Rng& rng) {
  std::vector<int> feats(p);
  std::iota(feats.begin(), feats.end(), 0);
  const std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(mtry), p);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j =
        i + static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(p - i)));
    std::swap(feats[i], feats[j]);
  }
  feats.resize(m);
  std::sort(feats.begin(), feats.end());
  return feats;
}

BestSplit find_best_split(const Matrix& x, const std::vector<TriState>& y,
                          const std::vector<std::size_t>& rows,
                          const CartConfig& cfg, Rng* rng) {
  const std::size_t p = x.cols;
  std::vector<int> feats;
  if (cfg.mtry > 0 && rng) {
    feats = sample_features(p, cfg.mtry, *rng);
  } else {
    feats.resize(p);
    std::iota(feats.begin(), feats.end(), 0);
  }

  const std::size_t n = rows.size();
  std::size_t pos_total = 0;
  for (std::size_t r : rows) pos_total += y[r] == 1 ? 1u : 0u;
  const double parent = gini(pos_total, n);

  BestSplit best;
  std::vector<std::pair<double, int>> col(n);  // (value, label)
  for (int f : feats) {
    for (std::size_t i = 0; i < n; ++i)
      col[i] = {x(rows[i], static_cast<std::size_t>(f)), y[rows[i]] == 1 ? 1 : 0};
    std::sort(col.begin(), col.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t pos_left = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      pos_left += static_cast<std::size_t>(col[i].second);
      if (!(col[i].first < col[i + 1].first)) continue;
      const std::size_t n_left = i + 1;
      const std::size_t n_right = n - n_left;
      if (n_left < cfg.min_leaf || n_right < cfg.min_leaf) continue;
      const double mid = col[i].first + (col[i + 1].first - col[i].first) / 2.0;
      if (!(mid < col[i + 1].first)) continue;  // not representable between
      const double weighted =
          (static_cast<double>(n_left) * gini(pos_left, n_left) +
           static_cast<double>(n_right) * gini(pos_total - pos_left, n_right)) /
          static_cast<double>(n);
      if (weighted < best.weighted) {
        best.feature = f;
        best.threshold = mid;
        best.weighted = weighted;
      }
    }
  }
  if (best.feature >= 0 && !(parent - best.weighted > 1e-12)) best.feature = -1;
  return best;
}

int build_node(TreeModel& tree, const Matrix& x, const std::vector<TriState>& y,
               const std::vector<std::size_t>& rows, int depth,
               const CartConfig& cfg, Rng* rng) {
  const int idx = static_cast<int>(tree.nodes.size());
  tree.nodes.emplace_back();
  std::size_t pos = 0;
  for (std::size_t r : rows) pos += y[r] == 1 ? 1u : 0u;
  tree.nodes[static_cast<std::size_t>(idx)].n_train = rows.size();
  tree.nodes[static_cast<std::size_t>(idx)].positive_fraction =
      rows.empty() ? 0.0
                   : static_cast<double>(pos) / static_cast<double>(rows.size());
  if (depth >= cfg.max_depth || rows.size() < 2 * cfg.min_leaf || pos == 0 ||
      pos == rows.size())
    return idx;
  const BestSplit split = find_best_split(x, y, rows, cfg, rng);
  if (split.feature < 0) return idx;

  std::vector<std::size_t> left, right;
  for (std::size_t r : rows)
    (x(r, static_cast<std::size_t>(split.feature)) <= split.threshold ? left
                                                                      : right)
        .push_back(r);
  tree.nodes[static_cast<std::size_t>(idx)].feature = split.feature;
  tree.nodes[static_cast<std::size_t>(idx)].threshold = split.threshold;
  const int l = build_node(tree, x, y, left, depth + 1, cfg, rng);
  const int r = build_node(tree, x, y, right, depth + 1, cfg, rng);
  tree.nodes[static_cast<std::size_t>(idx)].left = l;
  tree.nodes[static_cast<std::size_t>(idx)].right = r;
  return idx;
}

double route(const TreeModel& tree, const double* row) {
  const TreeNode* node = &tree.nodes[0];
  while (!node->is_leaf()) {
    const double v = row[node->feature];
    node = &tree.nodes[static_cast<std::size_t>(v <= node->threshold
                                                    ? node->left
                                                    : node->right)];
  }
  return node->positive_fraction;
}

int effective_mtry(int mtry, std::size_t p) {
  if (mtry > 0) return std::min<int>(mtry, static_cast<int>(p));
  return static_cast<int>(
      std::ceil(std::sqrt(static_cast<double>(p))));
}

ForestModel fit_forest(const Matrix& x, const std::vector<TriState>& y,
                       const ForestParams& prm, const Rng& rng) {
  const std::size_t n = x.rows;
  CartConfig cfg;
  cfg.max_depth = prm.max_depth;
  cfg.min_leaf = static_cast<std::size_t>(prm.min_leaf);
  cfg.mtry = effective_mtry(prm.mtry, x.cols);
  ForestModel forest;
  forest.trees.resize(static_cast<std::size_t>(prm.n_trees));
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  for (int t = 0; t < prm.n_trees; ++t) {
    Rng tree_rng = rng.fork(static_cast<std::uint64_t>(t));
    std::vector<std::size_t> rows;
    if (prm.bootstrap) {
      rows.resize(n);
      for (std::size_t i = 0; i < n; ++i)
        rows[i] = static_cast<std::size_t>(
            tree_rng.below(static_cast<std::uint64_t>(n)));
    } else {
      rows = all;
    }
    forest.trees[static_cast<std::size_t>(t)] =
        grow_tree(x, y, rows, cfg, &tree_rng);
  }
  return forest;
}

}  // namespace

double logistic_loss(const Matrix& x, const std::vector<TriState>& y,
                     const std::vector<double>& theta, double l2,
                     std::vector<double>* grad) {
  const std::size_t p = x.cols;
  if (theta.size() != p + 1)
    fail(errc::internal, "logistic_loss: parameter length mismatch");
  if (grad) grad->assign(p + 1, 0.0);
  double obj = 0.0;
  for (std::size_t i = 0; i < x.rows; ++i) {
    const double* row = x.row(i);
    double z = theta[p];
    for (std::size_t j = 0; j < p; ++j) z += theta[j] * row[j];
    obj += log1pexp(z) - (y[i] == 1 ? z : 0.0);
    if (grad) {
      const double r = sigmoid(z) - (y[i] == 1 ? 1.0 : 0.0);
      for (std::size_t j = 0; j < p; ++j) (*grad)[j] += r * row[j];
      (*grad)[p] += r;
    }
  }
  double pen = 0.0;
  for (std::size_t j = 0; j < p; ++j) pen += theta[j] * theta[j];
  if (grad)
    for (std::size_t j = 0; j < p; ++j) (*grad)[j] += l2 * theta[j];
  return obj + 0.5 * l2 * pen;
}

const char* to_string(ModelFamily family) {
  switch (family) {
    case ModelFamily::logistic_regression: return "logistic_regression";
    case ModelFamily::linear_svm: return "linear_svm";
    case ModelFamily::knn: return "knn";
    case ModelFamily::decision_tree: return "decision_tree";
    case ModelFamily::random_forest: return "random_forest";
  }
  return "logistic_regression";
}

ModelFamily family_from_string(const std::string& s) {
  for (ModelFamily f : all_families())
    if (s == to_string(f)) return f;
  fail(errc::config, "unknown model family '" + s + "'");
}

std::vector<ModelFamily> all_families() {
  return {ModelFamily::logistic_regression, ModelFamily::linear_svm,
          ModelFamily::knn, ModelFamily::decision_tree,
          ModelFamily::random_forest};
}

ModelSpec ModelSpec::defaults(ModelFamily family) {
  ModelSpec spec;
  spec.family = family;
  return spec;
}

void ModelSpec::validate() const {
  switch (family) {
    case ModelFamily::logistic_regression:
      if (logistic.l2 < 0.0 || logistic.grad_tol <= 0.0 || logistic.max_iter < 1)
        fail(errc::config, "logistic_regression: invalid hyperparameters");
      break;
    case ModelFamily::linear_svm:
      if (svm.cost <= 0.0 || svm.gap_tol <= 0.0 || svm.max_sweeps < 1)
        fail(errc::config, "linear_svm: invalid hyperparameters");
      break;
    case ModelFamily::knn:
      if (knn.k < 1) fail(errc::config, "knn: k must be at least 1");
      break;
    case ModelFamily::decision_tree:
      if (tree.max_depth < 1 || tree.min_leaf < 1)
        fail(errc::config, "decision_tree: invalid hyperparameters");
      break;
    case ModelFamily::random_forest:
      if (forest.n_trees < 1 || forest.max_depth < 1 || forest.min_leaf < 1 ||
          forest.mtry < 0)
        fail(errc::config, "random_forest: invalid hyperparameters");
      break;
  }
}

TreeModel grow_tree(const Matrix& x, const std::vector<TriState>& y,
                    const std::vector<std::size_t>& rows,
                    const CartConfig& config, Rng* rng) {
  if (rows.empty()) fail(errc::fit, "tree: no training rows");
  TreeModel tree;
  build_node(tree, x, y, rows, 0, config, rng);
  return tree;
}

TrainedScorer fit(const ModelSpec& spec, const Matrix& x,
                  const std::vector<TriState>& y, Rng rng,
                  std::vector<std::size_t> feature_subset) {
  spec.validate();
  check_training_input(x, y);
  if (feature_subset.empty()) {
    feature_subset.resize(x.cols);
    std::iota(feature_subset.begin(), feature_subset.end(), std::size_t{0});
  }
  if (feature_subset.size() != x.cols)
    fail(errc::internal, "fit: feature subset does not match grid width");

  TrainedScorer out;
  out.family = spec.family;
  out.feature_subset = std::move(feature_subset);
  switch (spec.family) {
    case ModelFamily::logistic_regression:
      out.model = fit_logistic(x, y, spec.logistic);
      break;
    case ModelFamily::linear_svm:
      out.model = fit_svm(x, y, spec.svm);
      break;
    case ModelFamily::knn: {
      KnnModel m;
      m.train = x;
      m.labels = y;
      m.k = spec.knn.k;
      out.model = std::move(m);
      break;
    }
    case ModelFamily::decision_tree: {
      CartConfig cfg;
      cfg.max_depth = spec.tree.max_depth;
      cfg.min_leaf = static_cast<std::size_t>(spec.tree.min_leaf);
      cfg.mtry = 0;
      std::vector<std::size_t> rows(x.rows);
      std::iota(rows.begin(), rows.end(), std::size_t{0});
      out.model = grow_tree(x, y, rows, cfg, nullptr);
      break;
    }
    case ModelFamily::random_forest:
      out.model = fit_forest(x, y, spec.forest, rng);
      break;
  }
  return out;
}

std::vector<double> score(const TrainedScorer& model, const Matrix& x) {
  if (x.cols != model.feature_subset.size())
    fail(errc::validation,
         "score: grid has " + std::to_string(x.cols) +
             " columns, model expects " +
             std::to_string(model.feature_subset.size()));
  std::vector<double> out(x.rows, 0.0);
  if (const auto* lin = std::get_if<LinearModel>(&model.model)) {
    for (std::size_t i = 0; i < x.rows; ++i) {
      const double* row = x.row(i);
      double z = lin->intercept;
      for (std::size_t j = 0; j < x.cols; ++j) z += lin->weights[j] * row[j];
      out[i] = lin->probability ? sigmoid(z) : z;
    }
  } else if (const auto* knn = std::get_if<KnnModel>(&model.model)) {
    const std::size_t n = knn->train.rows;
    const std::size_t k = std::min<std::size_t>(
        static_cast<std::size_t>(knn->k), n);
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < x.rows; ++i) {
      const double* q = x.row(i);
      for (std::size_t t = 0; t < n; ++t) {
        const double* r = knn->train.row(t);
        double d2 = 0.0;
        for (std::size_t j = 0; j < x.cols; ++j) {
          const double diff = q[j] - r[j];
          d2 += diff * diff;
        }
        dist[t] = {d2, t};
      }
      std::sort(dist.begin(), dist.end());
      std::size_t pos = 0;
      for (std::size_t t = 0; t < k; ++t)
        pos += knn->labels[dist[t].second] == 1 ? 1u : 0u;
      out[i] = static_cast<double>(pos) / static_cast<double>(k);
    }
  } else if (const auto* tree = std::get_if<TreeModel>(&model.model)) {
    for (std::size_t i = 0; i < x.rows; ++i) out[i] = route(*tree, x.row(i));
  } else {
    const auto& forest = std::get<ForestModel>(model.model);
    const double m = static_cast<double>(forest.trees.size());
    for (std::size_t i = 0; i < x.rows; ++i) {
      double sum = 0.0;
      for (const TreeModel& t : forest.trees) sum += route(t, x.row(i));
      out[i] = sum / m;
    }
  }
  return out;
}

}  // namespace outpred
