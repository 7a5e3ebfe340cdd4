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

namespace outpred {

enum class Direction { le, gt };

const char* to_string(Direction direction);

/// 2x2 outcome table: a = exposed positive, b = exposed negative,
/// c = unexposed positive, d = unexposed negative. Degenerate when every
/// analyzed patient falls on one side of the threshold.
struct Table2x2 {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t c = 0;
  std::int64_t d = 0;
  bool degenerate = false;

  std::int64_t total() const { return a + b + c + d; }
};

struct OddsRatioResult {
  double value = 0.0;
  bool correction_applied = false;
  bool infinite = false;
};

struct ThresholdReport {
  std::string feature;
  double cutpoint = 0.0;
  int integer_cut = 0;  // "<= v" form, v = floor(cutpoint)
  Direction direction = Direction::le;
  Outcome outcome = Outcome::response;
  Table2x2 table;
  OddsRatioResult odds;
  double p_value = 1.0;
};

/// All split thresholds on one feature, in root-to-leaf depth-first order,
/// deduplicated within 1e-9. Empty if the tree never splits on it.
std::vector<double> extract_thresholds(const TreeModel& tree, int feature);

/// Complete-case 2x2 table for the threshold predicate against a tri-state
/// outcome; patients with a missing value or outcome are dropped. Pass a
/// null mask when every value is observed.
Table2x2 contingency(const std::vector<double>& value,
                     const std::vector<std::uint8_t>* value_missing,
                     const std::vector<TriState>& outcome, double cutpoint,
                     Direction direction);

/// ad/bc, with the Haldane-Anscombe +0.5 added to every cell when any cell
/// is zero (flagged as correction_applied).
OddsRatioResult odds_ratio(const Table2x2& table);

/// Two-sided Fisher exact p: total hypergeometric probability of tables
/// with the observed margins no more likely than the observed one (1e-12
/// relative tolerance on the inclusion test).
double fisher_exact_p(const Table2x2& table);

}  // namespace outpred
