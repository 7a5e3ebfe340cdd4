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
#include <optional>
#include <vector>

#include "outpred/impute.hpp"
#include "outpred/learners.hpp"

namespace outpred {

/// Mann-Whitney AUC: over all (positive, negative) pairs, the fraction won
/// by the positive, ties counting one half. Rank-based, O(n log n).
double auc(const std::vector<double>& scores,
           const std::vector<TriState>& labels);

struct RunAuc {
  std::size_t imputation = 0;
  int fold = 0;
  std::optional<double> auc;  // absent when the run was excluded
};

struct EvaluationResult {
  std::vector<RunAuc> per_run;  // ordered by (imputation, fold)
  double pooled_auc = 0.0;      // mean over present runs, summed in order
  std::size_t run_count = 0;    // M x k
  std::size_t excluded = 0;
};

/// Runs the imputation x fold grid for one feature subset. Folds are drawn
/// per imputation from that imputation's completed outcome; standardization
/// is fit on the training folds only. A test fold holding a single outcome
/// class is excluded and counted, as is every fold of an imputation whose
/// outcome class counts fall below k. All RNG substreams are pre-assigned
/// per cell, so per_run is identical for any worker count. Fails with a
/// metric error if every run is excluded.
EvaluationResult evaluate_feature_set(const std::vector<std::size_t>& features,
                                      const ModelSpec& spec,
                                      const std::vector<ImputedCohort>& imputed,
                                      Outcome outcome, int k, const Rng& rng);

}  // namespace outpred
