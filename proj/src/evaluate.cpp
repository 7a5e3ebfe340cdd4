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

#include "outpred/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "outpred/error.hpp"
#include "outpred/parallel.hpp"

namespace outpred {

namespace {

// Substream tags so fold draws and fit draws never collide.
constexpr std::uint64_t kFoldsTag = 1;
constexpr std::uint64_t kFitTag = 2;

}  // namespace

double auc(const std::vector<double>& scores,
           const std::vector<TriState>& labels) {
  if (scores.size() != labels.size())
    fail(errc::internal, "auc: score/label count mismatch");
  const std::size_t n = scores.size();
  std::size_t pos = 0, neg = 0;
  for (TriState v : labels) {
    if (v == 1)
      ++pos;
    else if (v == 0)
      ++neg;
    else
      fail(errc::metric, "auc: missing label");
  }
  if (pos == 0 || neg == 0)
    fail(errc::metric, "auc: both outcome classes required");
  for (double s : scores)
    if (std::isnan(s)) fail(errc::metric, "auc: NaN score");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });
  // Average ranks over tied scores; positives' rank sum gives the statistic.
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t t = i; t <= j; ++t)
      if (labels[order[t]] == 1) rank_sum_pos += avg_rank;
    i = j + 1;
  }
  const double p = static_cast<double>(pos);
  const double u = rank_sum_pos - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(neg));
}

EvaluationResult evaluate_feature_set(const std::vector<std::size_t>& features,
                                      const ModelSpec& spec,
                                      const std::vector<ImputedCohort>& imputed,
                                      Outcome outcome, int k, const Rng& rng) {
  if (features.empty()) fail(errc::config, "evaluate: empty feature set");
  if (imputed.empty()) fail(errc::config, "evaluate: no imputed cohorts");
  if (k < 2) fail(errc::config, "evaluate: k must be at least 2");
  spec.validate();
  const FeatureSchema& schema = imputed.front().base->schema;
  for (std::size_t f : features)
    if (f >= schema.size())
      fail(errc::config, "evaluate: feature index " + std::to_string(f) +
                             " out of range");

  const std::size_t m_count = imputed.size();
  const std::size_t kk = static_cast<std::size_t>(k);

  // Fold assignments depend only on (rng, m), not on the candidate feature
  // set, so every candidate in a selection step sees the same folds.
  std::vector<std::optional<FoldAssignment>> folds(m_count);
  const Rng folds_rng = rng.fork(kFoldsTag);
  for (std::size_t m = 0; m < m_count; ++m) {
    const std::vector<TriState>& y = imputed[m].outcome(outcome);
    std::size_t pos = 0;
    for (TriState v : y) pos += v == 1 ? 1u : 0u;
    const std::size_t neg = y.size() - pos;
    if (pos < kk || neg < kk) continue;  // all runs of m become exclusions
    folds[m] = stratified_folds(y, k, folds_rng.fork(m));
  }

  std::vector<FeatureKind> kinds;
  const std::vector<FeatureKind> all_kinds = schema.kinds();
  for (std::size_t f : features) kinds.push_back(all_kinds[f]);

  EvaluationResult result;
  result.run_count = m_count * kk;
  result.per_run.resize(result.run_count);
  const Rng fit_rng = rng.fork(kFitTag);

  parallel_for(result.run_count, [&](std::size_t t) {
    const std::size_t m = t / kk;
    const int f = static_cast<int>(t % kk);
    RunAuc& run = result.per_run[t];
    run.imputation = m;
    run.fold = f;
    if (!folds[m]) return;

    const std::vector<TriState>& y = imputed[m].outcome(outcome);
    const std::vector<std::size_t> train_rows = folds[m]->rows_not_in(f);
    const std::vector<std::size_t> test_rows = folds[m]->rows_in(f);
    std::vector<TriState> y_test(test_rows.size());
    for (std::size_t i = 0; i < test_rows.size(); ++i)
      y_test[i] = y[test_rows[i]];
    const bool has_pos = std::count(y_test.begin(), y_test.end(), TriState{1}) > 0;
    const bool has_neg = std::count(y_test.begin(), y_test.end(), TriState{0}) > 0;
    if (!has_pos || !has_neg) return;

    std::vector<TriState> y_train(train_rows.size());
    for (std::size_t i = 0; i < train_rows.size(); ++i)
      y_train[i] = y[train_rows[i]];

    try {
      Matrix x_train = take(imputed[m].values, train_rows, features);
      Matrix x_test = take(imputed[m].values, test_rows, features);
      const Standardizer std_params = fit_standardizer(x_train, kinds);
      apply_standardizer(std_params, x_train);
      apply_standardizer(std_params, x_test);

      const Rng cell_rng = fit_rng.fork(m).fork(static_cast<std::uint64_t>(f));
      const TrainedScorer model = fit(spec, x_train, y_train, cell_rng, features);
      run.auc = auc(score(model, x_test), y_test);
    } catch (const Error& e) {
      fail(e.code(), "imputation " + std::to_string(m) + ", fold " +
                         std::to_string(f) + ": " + e.what());
    }
  });

  double sum = 0.0;
  std::size_t present = 0;
  for (const RunAuc& run : result.per_run) {
    if (run.auc) {
      sum += *run.auc;
      ++present;
    }
  }
  result.excluded = result.run_count - present;
  if (present == 0)
    fail(errc::metric, "evaluate: every run of the grid was excluded");
  result.pooled_auc = sum / static_cast<double>(present);
  return result;
}

}  // namespace outpred
