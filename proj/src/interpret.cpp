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

#include "outpred/interpret.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "outpred/error.hpp"

namespace outpred {

namespace {

void collect_thresholds(const TreeModel& tree, int node, int feature,
                        std::vector<double>& out) {
  const TreeNode& n = tree.nodes[static_cast<std::size_t>(node)];
  if (n.is_leaf()) return;
  if (n.feature == feature) {
    bool seen = false;
    for (double v : out)
      if (std::fabs(v - n.threshold) <= 1e-9) {
        seen = true;
        break;
      }
    if (!seen) out.push_back(n.threshold);
  }
  collect_thresholds(tree, n.left, feature, out);
  collect_thresholds(tree, n.right, feature, out);
}

double log_choose(std::int64_t n, std::int64_t k) {
  return std::lgamma(static_cast<double>(n + 1)) -
         std::lgamma(static_cast<double>(k + 1)) -
         std::lgamma(static_cast<double>(n - k + 1));
}

}  // namespace

const char* to_string(Direction direction) {
  return direction == Direction::le ? "le" : "gt";
}

std::vector<double> extract_thresholds(const TreeModel& tree, int feature) {
  std::vector<double> out;
  if (!tree.nodes.empty()) collect_thresholds(tree, 0, feature, out);
  return out;
}

Table2x2 contingency(const std::vector<double>& value,
                     const std::vector<std::uint8_t>* value_missing,
                     const std::vector<TriState>& outcome, double cutpoint,
                     Direction direction) {
  if (value.size() != outcome.size())
    fail(errc::internal, "contingency: value/outcome count mismatch");
  Table2x2 t;
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (value_missing && (*value_missing)[i]) continue;
    if (outcome[i] == kTriMissing) continue;
    const bool exposed =
        direction == Direction::le ? value[i] <= cutpoint : value[i] > cutpoint;
    const bool positive = outcome[i] == 1;
    if (exposed)
      ++(positive ? t.a : t.b);
    else
      ++(positive ? t.c : t.d);
  }
  t.degenerate = (t.a + t.b == 0) || (t.c + t.d == 0);
  return t;
}

OddsRatioResult odds_ratio(const Table2x2& table) {
  OddsRatioResult r;
  double a = static_cast<double>(table.a);
  double b = static_cast<double>(table.b);
  double c = static_cast<double>(table.c);
  double d = static_cast<double>(table.d);
  if (table.a == 0 || table.b == 0 || table.c == 0 || table.d == 0) {
    a += 0.5;
    b += 0.5;
    c += 0.5;
    d += 0.5;
    r.correction_applied = true;
  }
  const double denom = b * c;
  if (denom == 0.0) {
    r.infinite = true;
    r.value = std::numeric_limits<double>::infinity();
    return r;
  }
  r.value = (a * d) / denom;
  return r;
}

double fisher_exact_p(const Table2x2& table) {
  const std::int64_t r1 = table.a + table.b;
  const std::int64_t r2 = table.c + table.d;
  const std::int64_t c1 = table.a + table.c;
  const std::int64_t n = r1 + r2;
  if (r1 == 0 || r2 == 0 || c1 == 0 || c1 == n) return 1.0;

  const double log_denom = log_choose(n, c1);
  auto log_prob = [&](std::int64_t x) {
    return log_choose(r1, x) + log_choose(r2, c1 - x) - log_denom;
  };
  const double p0 = std::exp(log_prob(table.a));
  const std::int64_t lo = std::max<std::int64_t>(0, c1 - r2);
  const std::int64_t hi = std::min(r1, c1);
  double sum = 0.0;
  for (std::int64_t x = lo; x <= hi; ++x) {
    const double p = std::exp(log_prob(x));
    if (p <= p0 * (1.0 + 1e-12)) sum += p;
  }
  return std::min(1.0, sum);
}

}  // namespace outpred
