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
#include <utility>
#include <vector>

#include "outpred/matrix.hpp"
#include "outpred/rng.hpp"
#include "outpred/schema.hpp"

namespace outpred {

enum class Outcome { response, remission };

const char* to_string(Outcome outcome);
Outcome outcome_from_string(const std::string& s);

/// Tri-state outcome value: 1 true, 0 false, -1 missing.
using TriState = std::int8_t;
inline constexpr TriState kTriMissing = -1;

/// Patient cohort. Immutable after construction; values(i, j) is meaningful
/// only where missing(i, j) is false.
struct Cohort {
  FeatureSchema schema;
  std::size_t n = 0;
  Matrix values;                       // n x schema.size()
  std::vector<std::uint8_t> missing;   // n x schema.size(), row-major
  std::vector<double> ybocs_baseline;  // severity score before treatment
  std::vector<double> ybocs_final;     // severity score after treatment
  std::vector<std::uint8_t> baseline_missing;
  std::vector<std::uint8_t> final_missing;
  std::vector<TriState> response;
  std::vector<TriState> remission;
  /// Patients whose observed baseline is <= 0 while the final score is
  /// observed; their response stays missing.
  std::vector<std::size_t> degenerate_baseline;

  Cohort() = default;
  Cohort(FeatureSchema s, std::size_t n_patients);

  bool is_missing(std::size_t i, std::size_t j) const {
    return missing[i * values.cols + j] != 0;
  }
  void set_missing(std::size_t i, std::size_t j, bool v) {
    missing[i * values.cols + j] = v ? 1 : 0;
  }
};

/// Reduction fraction counting as response; boundary inclusive.
inline constexpr double kResponseReduction = 0.30;
/// Tolerance on the reduction ratio at the boundary.
inline constexpr double kResponseEps = 1e-12;
/// Final score at or below this counts as remission.
inline constexpr double kRemissionCutoff = 16.0;

/// Reads a cohort from CSV. The header must contain every schema feature
/// plus ybocs_baseline and ybocs_final, in any order. Empty cells and the
/// sentinel token are missing. Observed values of bounded features must lie
/// inside their bounds.
Cohort load_csv(const std::string& path, const FeatureSchema& schema,
                const std::string& sentinel = "NA");

/// CSV text for a cohort, missing cells as the sentinel token.
std::string cohort_to_csv(const Cohort& cohort,
                          const std::string& sentinel = "NA");

/// Writes a cohort as CSV, missing cells as the sentinel token.
void write_csv(const std::string& path, const Cohort& cohort,
               const std::string& sentinel = "NA");

/// Fills response/remission from the score columns. Response is true when
/// (baseline - final) / baseline >= 0.30 (inclusive, 1e-12 ratio tolerance)
/// with both scores observed and baseline > 0; remission is true when the
/// observed final score is <= 16. An outcome is missing exactly when a score
/// it depends on is missing. Idempotent.
void derive_outcomes(Cohort& cohort);

/// Per-feature affine transform fit on training data.
struct Standardizer {
  std::vector<double> offset;        // subtracted
  std::vector<double> scale;         // divided by
  std::vector<std::uint8_t> scaled;  // 0 = pass-through
  std::vector<std::string> warnings;
};

/// Fits location/scale on the given rows (all rows when rows is null),
/// skipping cells flagged in `missing` (none when null). Continuous and
/// ordinal features map to mean 0, population SD 1; binary features pass
/// through; zero-variance features pass through with a warning.
Standardizer fit_standardizer(const Matrix& x,
                              const std::vector<FeatureKind>& kinds,
                              const std::vector<std::size_t>* rows = nullptr,
                              const std::vector<std::uint8_t>* missing = nullptr);

void apply_standardizer(const Standardizer& s, Matrix& x);

/// Fits on the training cohort's observed values and returns apply_to's
/// grid under the fitted transform, plus the parameters.
std::pair<Matrix, Standardizer> standardize(const Cohort& train,
                                            const Cohort& apply_to);

struct FoldAssignment {
  std::vector<int> fold_of;  // per patient, in [0, k)
  int k = 0;

  std::vector<std::size_t> rows_in(int fold) const;
  std::vector<std::size_t> rows_not_in(int fold) const;
};

/// Stratified k-fold assignment: fold sizes differ by at most one, and each
/// fold's positive count stays within one patient of the global proportion.
/// Both classes are shuffled, then dealt round-robin with a fold cursor that
/// continues across classes. Deterministic for a given rng state.
FoldAssignment stratified_folds(const std::vector<TriState>& outcome, int k,
                                Rng rng);

}  // namespace outpred
