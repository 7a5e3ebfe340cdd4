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

#include <optional>
#include <vector>

#include "outpred/evaluate.hpp"

namespace outpred {

struct SelectionStep {
  std::size_t feature = 0;
  double pooled_auc_after = 0.0;
};

struct RejectedCandidate {
  std::size_t feature = 0;
  double best_auc_achieved = 0.0;
};

struct SelectionTrace {
  std::vector<SelectionStep> steps;
  /// Every remaining candidate at the step where the gate failed, with the
  /// pooled AUC it achieved there. Empty when candidates ran out or the
  /// step cap stopped the loop.
  std::vector<RejectedCandidate> rejected_at_final_step;
  double gate = 0.05;
  double baseline_auc = 0.5;
};

struct SelectOptions {
  double gate = 0.05;
  int k = 5;
  /// Accept at most this many features; 0 = no cap.
  int max_steps = 0;
};

struct ForwardSelectResult {
  SelectionTrace trace;
  /// Full-grid evaluation of the final selected set (the last accepted
  /// step's result, reused rather than re-run). Absent when the trace is
  /// empty.
  std::optional<EvaluationResult> selected_eval;
};

/// Greedy forward selection. At each step every remaining candidate is
/// appended to the current set and evaluated on the full imputation x fold
/// grid; the best pooled AUC (ties: lowest feature index) is accepted iff
/// it reaches the previous value plus the gate, starting from chance 0.5.
/// The same rng is handed to every evaluation, so candidate order cannot
/// change any result.
ForwardSelectResult forward_select(const std::vector<std::size_t>& candidates,
                                   const ModelSpec& spec,
                                   const std::vector<ImputedCohort>& imputed,
                                   Outcome outcome, const SelectOptions& options,
                                   const Rng& rng);

}  // namespace outpred
