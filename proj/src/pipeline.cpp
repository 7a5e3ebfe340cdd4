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

#include "outpred/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "outpred/error.hpp"
#include "outpred/synthgen.hpp"

namespace outpred {

namespace {

// Master-stream tags for the pipeline stages.
constexpr std::uint64_t kImputeTag = 1;
constexpr std::uint64_t kSelectTag = 2;

std::vector<std::vector<double>> per_tree_cutpoints(
    const std::vector<std::optional<TreeModel>>& trees, int sub_index) {
  std::vector<std::vector<double>> out;
  for (const auto& tree : trees) {
    if (!tree) continue;
    out.push_back(sub_index < 0 ? std::vector<double>{}
                                : extract_thresholds(*tree, sub_index));
  }
  return out;
}

}  // namespace

std::vector<CutpointAggregate> aggregate_cutpoints(
    const std::vector<std::vector<double>>& per_tree_cutpoints,
    double min_frequency) {
  const std::size_t t_count = per_tree_cutpoints.size();
  if (t_count == 0) return {};

  std::vector<std::set<long long>> floors(t_count);
  std::set<long long> candidates;
  for (std::size_t t = 0; t < t_count; ++t) {
    for (double c : per_tree_cutpoints[t]) {
      const long long v = static_cast<long long>(std::floor(c));
      floors[t].insert(v);
      candidates.insert(v);
    }
  }

  std::vector<std::pair<double, long long>> eligible;  // (frequency, level)
  for (long long v : candidates) {
    std::size_t support = 0;
    for (const auto& f : floors)
      if (f.count(v - 1) || f.count(v) || f.count(v + 1)) ++support;
    const double freq = static_cast<double>(support) / static_cast<double>(t_count);
    if (freq >= min_frequency) eligible.emplace_back(freq, v);
  }
  std::sort(eligible.begin(), eligible.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });

  std::vector<std::pair<long long, double>> accepted;  // (level, frequency)
  for (const auto& [freq, v] : eligible) {
    bool clashes = false;
    for (const auto& [w, unused] : accepted)
      if (std::llabs(v - w) <= 1) {
        clashes = true;
        break;
      }
    if (!clashes) accepted.emplace_back(v, freq);
  }

  std::vector<CutpointAggregate> out;
  for (const auto& [v, freq] : accepted) {
    std::vector<double> pool;
    for (std::size_t t = 0; t < t_count; ++t)
      for (double c : per_tree_cutpoints[t]) {
        const long long f = static_cast<long long>(std::floor(c));
        if (f >= v - 1 && f <= v + 1) pool.push_back(c);
      }
    std::sort(pool.begin(), pool.end());
    CutpointAggregate agg;
    agg.cutpoint = pool[(pool.size() - 1) / 2];
    agg.integer_cut = static_cast<int>(std::floor(agg.cutpoint));
    agg.frequency = freq;
    out.push_back(agg);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.cutpoint < b.cutpoint;
  });
  return out;
}

RunReport run_pipeline(const PipelineConfig& config) {
  config.validate();
  const Rng master(config.seed);

  std::shared_ptr<const Cohort> cohort;
  if (config.use_generator) {
    GeneratorConfig gen = config.generator;
    gen.seed = config.seed;
    cohort = std::make_shared<const Cohort>(generate(gen, config.schema));
  } else {
    cohort = std::make_shared<const Cohort>(
        load_csv(config.input_csv, config.schema, config.missing_sentinel));
  }

  RunReport report;
  report.config = config;
  report.cohort = cohort;
  ImputeOptions iopts;
  iopts.sweeps = config.imputation_sweeps;
  report.imputed =
      impute_many(cohort, config.m_imputations, master.fork(kImputeTag), iopts);

  std::vector<std::size_t> candidates(config.schema.size());
  std::iota(candidates.begin(), candidates.end(), std::size_t{0});
  SelectOptions sopt;
  sopt.gate = config.auc_gate;
  sopt.k = config.k_folds;

  const Rng select_rng = master.fork(kSelectTag);
  for (ModelFamily family : config.models) {
    for (Outcome outcome : config.outcomes) {
      // Substreams keyed by identity, not list position, so reordering the
      // config lists cannot change any result.
      const Rng rng_mo =
          select_rng.fork(static_cast<std::uint64_t>(family))
              .fork(outcome == Outcome::response ? 0u : 1u);
      try {
        ForwardSelectResult sel =
            forward_select(candidates, ModelSpec::defaults(family),
                           report.imputed, outcome, sopt, rng_mo);
        ModelOutcomeReport r;
        r.family = family;
        r.outcome = outcome;
        r.trace = std::move(sel.trace);
        r.eval = std::move(sel.selected_eval);
        report.results.push_back(std::move(r));
      } catch (const Error& e) {
        fail(e.code(), std::string("model ") + to_string(family) +
                           ", outcome " + to_string(outcome) + ": " + e.what());
      }
    }
  }

  const int report_feature = config.schema.index_of(config.tree_report_feature);
  for (Outcome outcome : config.outcomes) {
    OutcomeTrees ot;
    ot.outcome = outcome;
    ot.feature_set = {static_cast<std::size_t>(report_feature)};
    for (const ModelOutcomeReport& r : report.results) {
      if (r.family != ModelFamily::decision_tree || r.outcome != outcome ||
          r.trace.steps.empty())
        continue;
      ot.feature_set.clear();
      for (const SelectionStep& step : r.trace.steps)
        ot.feature_set.push_back(step.feature);
    }
    int sub_index = -1;
    for (std::size_t i = 0; i < ot.feature_set.size(); ++i)
      if (ot.feature_set[i] == static_cast<std::size_t>(report_feature))
        sub_index = static_cast<int>(i);

    std::vector<std::size_t> all_rows(cohort->n);
    std::iota(all_rows.begin(), all_rows.end(), std::size_t{0});
    CartConfig cart;  // interpretation trees mirror the decision_tree family
    cart.max_depth = TreeParams{}.max_depth;
    cart.min_leaf = static_cast<std::size_t>(TreeParams{}.min_leaf);
    for (const ImputedCohort& imp : report.imputed) {
      const std::vector<TriState>& y = imp.outcome(outcome);
      const auto pos = std::count(y.begin(), y.end(), TriState{1});
      if (pos == 0 || static_cast<std::size_t>(pos) == y.size()) {
        ot.trees.emplace_back(std::nullopt);
        continue;
      }
      const Matrix sub = take(imp.values, all_rows, ot.feature_set);
      ot.trees.emplace_back(grow_tree(sub, y, all_rows, cart, nullptr));
    }

    const std::vector<CutpointAggregate> aggregates =
        aggregate_cutpoints(per_tree_cutpoints(ot.trees, sub_index), 0.5);

    std::vector<double> value(cohort->n);
    std::vector<std::uint8_t> value_missing(cohort->n);
    for (std::size_t i = 0; i < cohort->n; ++i) {
      value[i] = cohort->values(i, static_cast<std::size_t>(report_feature));
      value_missing[i] =
          cohort->is_missing(i, static_cast<std::size_t>(report_feature)) ? 1 : 0;
    }
    const std::vector<TriState>& source_outcome =
        outcome == Outcome::response ? cohort->response : cohort->remission;
    for (const CutpointAggregate& agg : aggregates) {
      for (Direction dir : {Direction::le, Direction::gt}) {
        ThresholdRow row;
        row.frequency = agg.frequency;
        row.report.feature = config.tree_report_feature;
        row.report.cutpoint = agg.cutpoint;
        row.report.integer_cut = agg.integer_cut;
        row.report.direction = dir;
        row.report.outcome = outcome;
        row.report.table =
            contingency(value, &value_missing, source_outcome, agg.cutpoint, dir);
        row.report.odds = odds_ratio(row.report.table);
        row.report.p_value = fisher_exact_p(row.report.table);
        ot.rows.push_back(std::move(row));
      }
    }
    report.trees.push_back(std::move(ot));
  }
  return report;
}

}  // namespace outpred
