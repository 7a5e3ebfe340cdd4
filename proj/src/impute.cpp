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

#include "outpred/impute.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "outpred/error.hpp"
#include "outpred/linalg.hpp"
#include "outpred/parallel.hpp"

namespace outpred {

namespace {

// Chained system layout: schema features first, then the two score columns.
struct ChainPlan {
  std::size_t n = 0;
  std::size_t q = 0;  // feature count + 2
  std::vector<FeatureKind> kinds;
  std::vector<std::optional<Bounds>> bounds;
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> observed_rows;  // per column
  std::vector<std::vector<std::size_t>> missing_rows;   // per column
  std::vector<std::size_t> incomplete;                  // columns to impute
};

ChainPlan make_plan(const Cohort& c) {
  const std::size_t p = c.schema.size();
  ChainPlan plan;
  plan.n = c.n;
  plan.q = p + 2;
  plan.kinds.resize(plan.q, FeatureKind::continuous);
  plan.bounds.resize(plan.q);
  plan.names.resize(plan.q);
  for (std::size_t j = 0; j < p; ++j) {
    plan.kinds[j] = c.schema.at(j).kind;
    plan.bounds[j] = c.schema.at(j).bounds;
    plan.names[j] = c.schema.at(j).name;
  }
  plan.names[p] = "ybocs_baseline";
  plan.names[p + 1] = "ybocs_final";
  plan.observed_rows.resize(plan.q);
  plan.missing_rows.resize(plan.q);
  for (std::size_t j = 0; j < plan.q; ++j) {
    for (std::size_t i = 0; i < c.n; ++i) {
      bool miss;
      if (j < p)
        miss = c.is_missing(i, j);
      else if (j == p)
        miss = c.baseline_missing[i] != 0;
      else
        miss = c.final_missing[i] != 0;
      (miss ? plan.missing_rows[j] : plan.observed_rows[j]).push_back(i);
    }
    if (c.n > 0 && plan.observed_rows[j].empty())
      fail(errc::imputation,
           "impute: column '" + plan.names[j] + "' has no observed values");
    if (!plan.missing_rows[j].empty()) plan.incomplete.push_back(j);
  }
  return plan;
}

double source_value(const Cohort& c, std::size_t i, std::size_t j) {
  const std::size_t p = c.schema.size();
  if (j < p) return c.values(i, j);
  return j == p ? c.ybocs_baseline[i] : c.ybocs_final[i];
}

double round_clip(double v, FeatureKind kind,
                  const std::optional<Bounds>& bounds) {
  if (kind == FeatureKind::continuous) return v;
  v = std::round(v);
  double lo = 0.0, hi = 1.0;  // implicit binary bounds
  if (bounds) {
    lo = bounds->lower;
    hi = bounds->upper;
  } else if (kind == FeatureKind::ordinal) {
    return v;
  }
  return std::min(hi, std::max(lo, v));
}

// One sweep update of column c: ridge regression on all other columns plus
// an intercept over the rows where c is observed, then redraw the missing
// cells as fit + sigma * z. Falls back to an intercept-only draw when there
// are under 3 observed rows or the normal equations are not solvable.
void redraw_column(Matrix& z, const ChainPlan& plan, std::size_t c,
                   double ridge, Rng& rng) {
  const std::vector<std::size_t>& obs = plan.observed_rows[c];
  const std::vector<std::size_t>& mis = plan.missing_rows[c];
  const std::size_t d = plan.q;  // intercept + q - 1 regressors
  bool solved = false;
  std::vector<double> w;

  std::vector<double> x(d);
  auto fill_design_row = [&](std::size_t row) {
    x[0] = 1.0;
    std::size_t k = 1;
    for (std::size_t j = 0; j < plan.q; ++j)
      if (j != c) x[k++] = z(row, j);
  };

  double sigma = 0.0;
  if (obs.size() >= 3) {
    std::vector<double> a(d * d, 0.0);
    std::vector<double> b(d, 0.0);
    for (std::size_t row : obs) {
      fill_design_row(row);
      const double y = z(row, c);
      for (std::size_t r = 0; r < d; ++r) {
        b[r] += x[r] * y;
        for (std::size_t s = 0; s <= r; ++s) a[r * d + s] += x[r] * x[s];
      }
    }
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t s = r + 1; s < d; ++s) a[r * d + s] = a[s * d + r];
      a[r * d + r] += ridge;
    }
    if (cholesky_solve(a, b, d)) {
      w = std::move(b);
      double rss = 0.0;
      for (std::size_t row : obs) {
        fill_design_row(row);
        double pred = 0.0;
        for (std::size_t r = 0; r < d; ++r) pred += w[r] * x[r];
        const double e = z(row, c) - pred;
        rss += e * e;
      }
      const double df = std::max<double>(1.0, static_cast<double>(obs.size()) -
                                                  static_cast<double>(d));
      sigma = std::sqrt(rss / df);
      solved = true;
    }
  }
  if (!solved) {
    double sum = 0.0;
    for (std::size_t row : obs) sum += z(row, c);
    const double mean = sum / static_cast<double>(obs.size());
    double ss = 0.0;
    for (std::size_t row : obs) {
      const double e = z(row, c) - mean;
      ss += e * e;
    }
    const double sd =
        obs.size() >= 2
            ? std::sqrt(ss / static_cast<double>(obs.size() - 1))
            : 0.0;
    for (std::size_t row : mis) {
      const double v = mean + sd * rng.normal();
      z(row, c) = round_clip(v, plan.kinds[c], plan.bounds[c]);
    }
    return;
  }
  for (std::size_t row : mis) {
    fill_design_row(row);
    double mu = 0.0;
    for (std::size_t r = 0; r < d; ++r) mu += w[r] * x[r];
    const double v = mu + sigma * rng.normal();
    z(row, c) = round_clip(v, plan.kinds[c], plan.bounds[c]);
  }
}

ImputedCohort impute_one(const std::shared_ptr<const Cohort>& cohort,
                         const ChainPlan& plan, std::size_t m, Rng rng,
                         const ImputeOptions& opts) {
  const Cohort& c = *cohort;
  Matrix z(plan.n, plan.q);
  for (std::size_t j = 0; j < plan.q; ++j)
    for (std::size_t i = 0; i < plan.n; ++i) z(i, j) = source_value(c, i, j);

  // Initialize every missing cell from the column's observed pool.
  for (std::size_t j : plan.incomplete) {
    const std::vector<std::size_t>& obs = plan.observed_rows[j];
    for (std::size_t row : plan.missing_rows[j]) {
      const std::size_t pick = static_cast<std::size_t>(
          rng.below(static_cast<std::uint64_t>(obs.size())));
      z(row, j) = z(obs[pick], j);
    }
  }
  for (int sweep = 0; sweep < opts.sweeps; ++sweep)
    for (std::size_t j : plan.incomplete) redraw_column(z, plan, j, opts.ridge, rng);

  ImputedCohort out;
  out.base = cohort;
  out.imputation_index = m;
  const std::size_t p = c.schema.size();
  out.values = Matrix(plan.n, p);
  for (std::size_t i = 0; i < plan.n; ++i)
    for (std::size_t j = 0; j < p; ++j) out.values(i, j) = z(i, j);
  out.ybocs_baseline.resize(plan.n);
  out.ybocs_final.resize(plan.n);
  out.response.resize(plan.n);
  out.remission.resize(plan.n);
  for (std::size_t i = 0; i < plan.n; ++i) {
    const double b = z(i, p);
    const double f = z(i, p + 1);
    out.ybocs_baseline[i] = b;
    out.ybocs_final[i] = f;
    // A completed baseline at or below zero cannot show a reduction, so it
    // counts as non-response; completed outcomes must stay binary.
    out.response[i] =
        (b > 0.0 && (b - f) / b >= kResponseReduction - kResponseEps) ? 1 : 0;
    out.remission[i] = f <= kRemissionCutoff ? 1 : 0;
  }
  return out;
}

}  // namespace

std::vector<ImputedCohort> impute_many(std::shared_ptr<const Cohort> cohort,
                                       std::size_t m_count, const Rng& rng,
                                       const ImputeOptions& opts) {
  if (!cohort) fail(errc::internal, "impute: null cohort");
  if (m_count < 1) fail(errc::config, "impute: m_count must be at least 1");
  if (opts.sweeps < 1) fail(errc::config, "impute: sweeps must be at least 1");
  const ChainPlan plan = make_plan(*cohort);
  std::vector<ImputedCohort> out(m_count);
  parallel_for(m_count, [&](std::size_t m) {
    out[m] = impute_one(cohort, plan, m,
                        rng.fork(static_cast<std::uint64_t>(m)), opts);
  });
  return out;
}

Cohort materialize(const ImputedCohort& imputed) {
  const Cohort& base = *imputed.base;
  Cohort out(base.schema, base.n);
  out.values = imputed.values;
  out.ybocs_baseline = imputed.ybocs_baseline;
  out.ybocs_final = imputed.ybocs_final;
  derive_outcomes(out);
  return out;
}

}  // namespace outpred
