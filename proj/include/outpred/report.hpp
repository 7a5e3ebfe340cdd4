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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "outpred/config.hpp"
#include "outpred/impute.hpp"
#include "outpred/interpret.hpp"
#include "outpred/select.hpp"

namespace outpred {

struct ModelOutcomeReport {
  ModelFamily family = ModelFamily::logistic_regression;
  Outcome outcome = Outcome::response;
  SelectionTrace trace;
  /// Full-grid evaluation of the selected set; absent when nothing cleared
  /// the gate.
  std::optional<EvaluationResult> eval;
};

struct ThresholdRow {
  ThresholdReport report;
  /// Fraction of per-imputation trees carrying this cutpoint (within one
  /// integer step).
  double frequency = 0.0;
};

/// Per-outcome interpretation bundle: depth-3 trees refit on each completed
/// imputation (raw scale) plus the aggregated threshold statistics.
struct OutcomeTrees {
  Outcome outcome = Outcome::response;
  std::vector<std::size_t> feature_set;
  std::vector<std::optional<TreeModel>> trees;  // per imputation
  std::vector<ThresholdRow> rows;
};

struct RunReport {
  PipelineConfig config;
  std::shared_ptr<const Cohort> cohort;
  std::vector<ImputedCohort> imputed;
  std::vector<ModelOutcomeReport> results;
  std::vector<OutcomeTrees> trees;
};

std::uint64_t fnv1a64(const std::string& bytes);

nlohmann::ordered_json tree_to_json(const TreeModel& tree,
                                    const std::vector<std::string>& names);

/// Writes results_<outcome>.csv, thresholds.csv, selection_trace.json,
/// scatter.csv, trees.json, and manifest.json (plus per-imputation CSV dumps
/// when asked) into output_dir, creating it if needed. Returns the manifest:
/// file names, sizes, content hashes, and the config echo.
nlohmann::ordered_json emit_report(const RunReport& report,
                                   const std::string& output_dir,
                                   bool dump_imputations = false);

}  // namespace outpred
