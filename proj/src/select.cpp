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

#include "outpred/select.hpp"

#include <algorithm>

#include "outpred/error.hpp"

namespace outpred {

ForwardSelectResult forward_select(const std::vector<std::size_t>& candidates,
                                   const ModelSpec& spec,
                                   const std::vector<ImputedCohort>& imputed,
                                   Outcome outcome, const SelectOptions& options,
                                   const Rng& rng) {
  if (candidates.empty()) fail(errc::config, "select: no candidate features");
  if (options.gate < 0.0) fail(errc::config, "select: gate must be >= 0");
  {
    std::vector<std::size_t> sorted = candidates;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      fail(errc::config, "select: duplicate candidate feature");
  }

  ForwardSelectResult result;
  result.trace.gate = options.gate;
  result.trace.baseline_auc = 0.5;

  std::vector<std::size_t> remaining = candidates;
  std::vector<std::size_t> current;
  double prev_auc = result.trace.baseline_auc;

  while (!remaining.empty()) {
    if (options.max_steps > 0 &&
        static_cast<int>(result.trace.steps.size()) >= options.max_steps)
      break;

    std::vector<std::pair<std::size_t, EvaluationResult>> evaluated;
    evaluated.reserve(remaining.size());
    for (std::size_t f : remaining) {
      std::vector<std::size_t> trial = current;
      trial.push_back(f);
      evaluated.emplace_back(
          f, evaluate_feature_set(trial, spec, imputed, outcome, options.k, rng));
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < evaluated.size(); ++i) {
      const double a = evaluated[i].second.pooled_auc;
      const double b = evaluated[best].second.pooled_auc;
      if (a > b || (a == b && evaluated[i].first < evaluated[best].first))
        best = i;
    }
    const double best_auc = evaluated[best].second.pooled_auc;
    if (best_auc >= prev_auc + options.gate) {
      const std::size_t f = evaluated[best].first;
      result.trace.steps.push_back(SelectionStep{f, best_auc});
      result.selected_eval = std::move(evaluated[best].second);
      current.push_back(f);
      remaining.erase(std::find(remaining.begin(), remaining.end(), f));
      prev_auc = best_auc;
    } else {
      for (const auto& [f, eval] : evaluated)
        result.trace.rejected_at_final_step.push_back(
            RejectedCandidate{f, eval.pooled_auc});
      break;
    }
  }
  return result;
}

}  // namespace outpred
