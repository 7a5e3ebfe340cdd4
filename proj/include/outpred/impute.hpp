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
#include <vector>

#include "outpred/cohort.hpp"
#include "outpred/matrix.hpp"
#include "outpred/rng.hpp"

namespace outpred {

/// One completed copy of a cohort: no missing entries, outcomes re-derived
/// from the completed scores.
struct ImputedCohort {
  std::shared_ptr<const Cohort> base;
  Matrix values;  // n x p, observed cells equal the source exactly
  std::vector<double> ybocs_baseline;
  std::vector<double> ybocs_final;
  std::vector<TriState> response;   // always 0/1
  std::vector<TriState> remission;  // always 0/1
  std::size_t imputation_index = 0;

  const std::vector<TriState>& outcome(Outcome o) const {
    return o == Outcome::response ? response : remission;
  }
};

struct ImputeOptions {
  int sweeps = 10;
  double ridge = 1e-6;
};

/// Chained-equations multiple imputation over the feature grid plus both
/// score columns. Missing cells start as draws from the column's observed
/// values; each sweep regresses every incomplete column on all others plus
/// an intercept and redraws its missing cells as fit + sigma * z (round and
/// clip for binary/ordinal features). Columns with fewer than 3 observed
/// values, or a non-invertible design, fall back to an intercept-only draw.
/// Each imputation m uses the substream rng.fork(m); results do not depend
/// on execution order or worker count.
std::vector<ImputedCohort> impute_many(std::shared_ptr<const Cohort> cohort,
                                       std::size_t m_count, const Rng& rng,
                                       const ImputeOptions& opts = {});

/// Expands a completed copy back into a standalone Cohort (nothing missing).
Cohort materialize(const ImputedCohort& imputed);

}  // namespace outpred
