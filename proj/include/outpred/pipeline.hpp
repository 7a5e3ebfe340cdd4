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

#include <vector>

#include "outpred/report.hpp"

namespace outpred {

struct CutpointAggregate {
  double cutpoint = 0.0;  // median of the pooled raw cutpoints
  int integer_cut = 0;    // floor(cutpoint)
  double frequency = 0.0;
};

/// Majority-vote cutpoint aggregation across per-tree threshold lists. A
/// candidate integer level v is supported by a tree if the tree holds any
/// cutpoint with floor in {v-1, v, v+1}; levels reaching min_frequency are
/// accepted greedily by (frequency, then lower v), suppressing neighbors
/// within one step. Results are sorted by cutpoint.
std::vector<CutpointAggregate> aggregate_cutpoints(
    const std::vector<std::vector<double>>& per_tree_cutpoints,
    double min_frequency);

/// Full protocol: load or generate the cohort, impute M copies, run forward
/// selection for every configured (model, outcome) pair, then refit
/// interpretation trees and compute threshold statistics. Deterministic
/// given (config, seed) for any worker count.
RunReport run_pipeline(const PipelineConfig& config);

}  // namespace outpred
