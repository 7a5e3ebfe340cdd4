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

#include <algorithm>
#include <memory>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "outpred/impute.hpp"
#include "outpred/select.hpp"
#include "outpred/synthgen.hpp"

using namespace outpred;
using testsupport::thrown_code;

namespace {

/// Every accepted step clears the gate; every final-step candidate missed it.
void check_gate_property(const SelectionTrace& trace) {
  double prev = trace.baseline_auc;
  for (const auto& step : trace.steps) {
    CHECK(step.pooled_auc_after >= prev + trace.gate);
    prev = step.pooled_auc_after;
  }
  for (const auto& rej : trace.rejected_at_final_step)
    CHECK(rej.best_auc_achieved < prev + trace.gate);
}

/// One complete cohort wrapped as m identical-shape imputation copies.
std::vector<ImputedCohort> as_imputations(std::shared_ptr<Cohort> base,
                                          std::size_t m_count) {
  std::vector<ImputedCohort> imputed(m_count);
  for (std::size_t m = 0; m < m_count; ++m) {
    auto& imp = imputed[m];
    imp.base = base;
    imp.imputation_index = m;
    imp.values = base->values;
    imp.ybocs_baseline = base->ybocs_baseline;
    imp.ybocs_final = base->ybocs_final;
    imp.response = base->response;
    imp.remission = base->remission;
  }
  return imputed;
}

/// Signal on feature 0; feature 1 is a near-copy of it, features 2+ noise.
std::shared_ptr<Cohort> redundant_pair_cohort(std::size_t n, std::size_t p,
                                              std::uint64_t seed) {
  std::vector<Feature> feats;
  for (std::size_t j = 0; j < p; ++j)
    feats.push_back(Feature{"f" + std::to_string(j), FeatureKind::continuous,
                            std::optional<Bounds>{}});
  auto base = std::make_shared<Cohort>(FeatureSchema(feats), n);
  Rng r(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = r.normal();
    base->values(i, 0) = z + 0.25 * r.normal();
    base->values(i, 1) = base->values(i, 0) + 0.01 * r.normal();
    for (std::size_t j = 2; j < p; ++j) base->values(i, j) = r.normal();
    const bool responder = z > 0.0;
    base->ybocs_baseline[i] = 40.0;
    base->ybocs_final[i] = responder ? 20.0 : 35.0;
  }
  derive_outcomes(*base);
  return base;
}

}  // namespace

TEST_CASE("a redundant near-copy is rejected at the second step") {
  auto base = redundant_pair_cohort(200, 2, 151);
  const auto imputed = as_imputations(base, 1);
  SelectOptions opt;
  opt.k = 5;
  const auto result =
      forward_select({0, 1}, ModelSpec::defaults(ModelFamily::logistic_regression),
                     imputed, Outcome::response, opt, Rng(157));

  REQUIRE(result.trace.steps.size() == 1);
  CHECK(result.trace.steps[0].pooled_auc_after >= 0.55);
  REQUIRE(result.trace.rejected_at_final_step.size() == 1);
  const std::size_t kept = result.trace.steps[0].feature;
  const std::size_t dropped = result.trace.rejected_at_final_step[0].feature;
  CHECK(kept + dropped == 1);  // the pair {0, 1}
  CHECK(result.trace.rejected_at_final_step[0].best_auc_achieved <
        result.trace.steps[0].pooled_auc_after + opt.gate);

  REQUIRE(result.selected_eval.has_value());
  CHECK(result.selected_eval->pooled_auc ==
        result.trace.steps[0].pooled_auc_after);
  check_gate_property(result.trace);
}

TEST_CASE("selection replays the greedy oracle on four candidates") {
  auto base = redundant_pair_cohort(120, 4, 163);
  const auto imputed = as_imputations(base, 2);
  const auto spec = ModelSpec::defaults(ModelFamily::knn);
  SelectOptions opt;
  opt.gate = 0.02;
  opt.k = 3;
  const Rng rng(167);
  const auto result =
      forward_select({0, 1, 2, 3}, spec, imputed, Outcome::response, opt, rng);

  // independent greedy replay with the same evaluation calls
  std::vector<std::size_t> remaining = {0, 1, 2, 3};
  std::vector<std::size_t> current;
  std::vector<SelectionStep> steps;
  std::vector<RejectedCandidate> rejected;
  double prev = 0.5;
  while (!remaining.empty()) {
    std::size_t best_f = 0;
    double best_auc = -1.0;
    std::vector<std::pair<std::size_t, double>> seen;
    for (std::size_t f : remaining) {
      auto trial = current;
      trial.push_back(f);
      const auto eval =
          evaluate_feature_set(trial, spec, imputed, Outcome::response, opt.k, rng);
      seen.emplace_back(f, eval.pooled_auc);
      if (eval.pooled_auc > best_auc) {
        best_auc = eval.pooled_auc;
        best_f = f;
      }
    }
    if (best_auc >= prev + opt.gate) {
      steps.push_back(SelectionStep{best_f, best_auc});
      current.push_back(best_f);
      remaining.erase(std::find(remaining.begin(), remaining.end(), best_f));
      prev = best_auc;
    } else {
      for (const auto& [f, a] : seen)
        rejected.push_back(RejectedCandidate{f, a});
      break;
    }
  }

  REQUIRE(result.trace.steps.size() == steps.size());
  for (std::size_t s = 0; s < steps.size(); ++s) {
    CHECK(result.trace.steps[s].feature == steps[s].feature);
    CHECK(result.trace.steps[s].pooled_auc_after == steps[s].pooled_auc_after);
  }
  REQUIRE(result.trace.rejected_at_final_step.size() == rejected.size());
  for (std::size_t s = 0; s < rejected.size(); ++s) {
    CHECK(result.trace.rejected_at_final_step[s].feature == rejected[s].feature);
    CHECK(result.trace.rejected_at_final_step[s].best_auc_achieved ==
          rejected[s].best_auc_achieved);
  }
  check_gate_property(result.trace);
}

TEST_CASE("trace length is monotone in the gate") {
  GeneratorConfig gen;
  gen.n_patients = 200;
  gen.missing_rate = 0.0;
  gen.seed = 171;
  auto base = std::make_shared<Cohort>(generate(gen));
  const auto imputed = as_imputations(base, 2);
  const auto spec = ModelSpec::defaults(ModelFamily::decision_tree);

  std::vector<std::size_t> candidates(base->schema.size());
  for (std::size_t j = 0; j < candidates.size(); ++j) candidates[j] = j;

  std::vector<std::size_t> lengths;
  for (const double gate : {0.01, 0.05, 0.10}) {
    SelectOptions opt;
    opt.gate = gate;
    opt.k = 5;
    const auto result = forward_select(candidates, spec, imputed,
                                       Outcome::response, opt, Rng(173));
    lengths.push_back(result.trace.steps.size());
    CHECK(result.trace.gate == gate);
    check_gate_property(result.trace);
  }
  CHECK(lengths[0] >= lengths[1]);
  CHECK(lengths[1] >= lengths[2]);
}

TEST_CASE("selection is deterministic") {
  auto base = redundant_pair_cohort(100, 3, 179);
  const auto imputed = as_imputations(base, 2);
  SelectOptions opt;
  opt.k = 3;
  const auto spec = ModelSpec::defaults(ModelFamily::logistic_regression);
  const auto a =
      forward_select({0, 1, 2}, spec, imputed, Outcome::response, opt, Rng(181));
  const auto b =
      forward_select({0, 1, 2}, spec, imputed, Outcome::response, opt, Rng(181));
  REQUIRE(a.trace.steps.size() == b.trace.steps.size());
  for (std::size_t s = 0; s < a.trace.steps.size(); ++s) {
    CHECK(a.trace.steps[s].feature == b.trace.steps[s].feature);
    CHECK(a.trace.steps[s].pooled_auc_after == b.trace.steps[s].pooled_auc_after);
  }
}

TEST_CASE("max_steps caps acceptance without recording rejections") {
  GeneratorConfig gen;
  gen.n_patients = 250;
  gen.missing_rate = 0.0;
  gen.seed = 191;
  auto base = std::make_shared<Cohort>(generate(gen));
  const auto imputed = as_imputations(base, 2);
  std::vector<std::size_t> candidates(base->schema.size());
  for (std::size_t j = 0; j < candidates.size(); ++j) candidates[j] = j;

  SelectOptions opt;
  opt.k = 5;
  opt.max_steps = 1;
  const auto result =
      forward_select(candidates, ModelSpec::defaults(ModelFamily::decision_tree),
                     imputed, Outcome::response, opt, Rng(193));
  REQUIRE(result.trace.steps.size() == 1);
  CHECK(result.trace.rejected_at_final_step.empty());
  CHECK(result.selected_eval.has_value());
}

TEST_CASE("argument errors") {
  auto base = redundant_pair_cohort(40, 2, 197);
  const auto imputed = as_imputations(base, 1);
  const auto spec = ModelSpec::defaults(ModelFamily::knn);
  SelectOptions opt;
  opt.k = 2;

  CHECK(thrown_code([&] {
          forward_select({}, spec, imputed, Outcome::response, opt, Rng(1));
        }) == errc::config);
  CHECK(thrown_code([&] {
          forward_select({0, 0}, spec, imputed, Outcome::response, opt, Rng(1));
        }) == errc::config);
  SelectOptions bad = opt;
  bad.gate = -0.1;
  CHECK(thrown_code([&] {
          forward_select({0}, spec, imputed, Outcome::response, bad, Rng(1));
        }) == errc::config);
}

TEST_CASE("pure noise yields mostly empty traces") {
  // Near-flat response probability removes the planted signal. The roster is
  // kept small on purpose: the best-of-candidates pooled AUC grows with the
  // roster, so wide rosters clear a 0.05 gate by chance alone far too often
  // at this cohort size.
  const FeatureSchema noise_schema({
      {"credibility", FeatureKind::ordinal, Bounds{3.0, 27.0}},
      {"expectancy", FeatureKind::ordinal, Bounds{3.0, 27.0}},
      {"bdd_ybocs_baseline", FeatureKind::continuous, Bounds{20.0, 46.0}},
      {"qids", FeatureKind::continuous, Bounds{0.0, 27.0}},
      {"treatment_group", FeatureKind::binary, std::nullopt},
  });
  int empty = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    GeneratorConfig gen;
    gen.n_patients = 500;
    gen.missing_rate = 0.20;
    gen.p_low = 0.449;
    gen.p_mid = 0.450;
    gen.p_high = 0.451;
    gen.seed = 211 + seed;
    auto base = std::make_shared<Cohort>(generate(gen, noise_schema));
    const auto imputed = impute_many(base, 10, Rng(307 + seed));
    std::vector<std::size_t> candidates(base->schema.size());
    for (std::size_t j = 0; j < candidates.size(); ++j) candidates[j] = j;

    SelectOptions opt;
    opt.k = 5;
    const auto result = forward_select(
        candidates, ModelSpec::defaults(ModelFamily::decision_tree), imputed,
        Outcome::response, opt, Rng(223 + seed));
    check_gate_property(result.trace);
    if (result.trace.steps.empty()) ++empty;
  }
  CHECK(empty >= 4);
}

TEST_CASE("the planted dominant predictor is selected first") {
  GeneratorConfig gen;
  gen.n_patients = 300;
  gen.missing_rate = 0.05;
  gen.seed = 227;
  auto cohort = std::make_shared<Cohort>(generate(gen));
  const auto imputed = impute_many(cohort, 3, Rng(229));
  const auto cred =
      static_cast<std::size_t>(cohort->schema.index_of("credibility"));
  std::vector<std::size_t> candidates(cohort->schema.size());
  for (std::size_t j = 0; j < candidates.size(); ++j) candidates[j] = j;

  for (const auto family :
       {ModelFamily::logistic_regression, ModelFamily::decision_tree}) {
    for (const auto outcome : {Outcome::response, Outcome::remission}) {
      SelectOptions opt;
      opt.k = 5;
      opt.max_steps = 1;
      const auto result = forward_select(candidates, ModelSpec::defaults(family),
                                         imputed, outcome, opt, Rng(233));
      REQUIRE_FALSE(result.trace.steps.empty());
      CHECK(result.trace.steps[0].feature == cred);
    }
  }
}
