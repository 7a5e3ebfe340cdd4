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
#include <vector>

#include "outpred/cohort.hpp"
#include "outpred/learners.hpp"
#include "outpred/schema.hpp"
#include "outpred/synthgen.hpp"

namespace outpred {

/// Pipeline settings, read from a flat `key = value` text file with `#`
/// comments. Unknown or repeated keys are rejected. The run seed also seeds
/// the generator; generator.* keys configure everything else about it. A
/// custom feature roster can replace the default schema through contiguous
/// `schema.feature.N = name:kind[:lower:upper]` entries.
struct PipelineConfig {
  std::size_t m_imputations = 100;
  int k_folds = 5;
  double auc_gate = 0.05;
  std::vector<ModelFamily> models = all_families();
  std::vector<Outcome> outcomes = {Outcome::response, Outcome::remission};
  std::uint64_t seed = 1;
  FeatureSchema schema;
  bool use_generator = true;  // false: read input_csv
  std::string input_csv;
  GeneratorConfig generator;
  std::string output_dir;  // may stay empty; the CLI resolves a default
  std::string tree_report_feature = "credibility";
  std::string missing_sentinel = "NA";
  int imputation_sweeps = 10;

  void validate() const;
};

PipelineConfig parse_config(const std::string& text);
PipelineConfig load_config(const std::string& path);

}  // namespace outpred
