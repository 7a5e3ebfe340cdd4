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

#include "outpred/cohort.hpp"

namespace outpred {

enum class MissingMechanism { mcar, mar };

const char* to_string(MissingMechanism mechanism);
MissingMechanism mechanism_from_string(const std::string& s);

/// Planted-structure cohort generator. Credibility and expectancy come from
/// a correlated Gaussian pair discretized to the 3..27 integer scale;
/// response probability is constant within the credibility bands <= 16,
/// (16, 22], > 22; remission follows
///   logit q = intercept + coef_credibility * (credibility - 16)
///           + coef_baseline * (baseline - 32).
/// The final score is then drawn inside the interval consistent with the
/// sampled (response, remission) pair; when the pair is infeasible for the
/// patient's baseline, remission is flipped (response is authoritative).
struct GeneratorConfig {
  std::size_t n_patients = 300;
  double cred_expect_corr = 0.67;
  double p_low = 0.10;   // response probability, credibility <= 16
  double p_mid = 0.45;   // 16 < credibility <= 22
  double p_high = 0.85;  // credibility > 22
  double cred_mean = 17.0;
  double cred_sd = 5.0;
  double remission_intercept = -0.2;
  double remission_coef_credibility = 0.38;
  double remission_coef_baseline = -0.05;
  double missing_rate = 0.10;
  MissingMechanism mechanism = MissingMechanism::mcar;
  /// MAR only: per-patient missingness rate scales with this feature's
  /// standardized value; the feature itself stays fully observed.
  std::string mar_covariate = "age";
  std::uint64_t seed = 1;

  void validate() const;
};

/// Deterministic given config.seed. Baseline severity is drawn N(32, 5)
/// clipped to [20, 46] and written to both the bdd_ybocs_baseline feature
/// and the ybocs_baseline score column. Missingness is injected last, over
/// the feature grid and both score columns; masked cells are zeroed and
/// outcomes are then re-derived.
Cohort generate(const GeneratorConfig& config,
                const FeatureSchema& schema = FeatureSchema());

}  // namespace outpred
