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

#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "outpred/evaluate.hpp"
#include "outpred/parallel.hpp"
#include "outpred/synthgen.hpp"

using namespace outpred;
using testsupport::thrown_code;

namespace {

/// Hand-built list of completed copies around one base cohort; values are
/// distinct reals, outcome vectors are provided per copy.
std::vector<ImputedCohort> fixture(
    std::shared_ptr<Cohort> base,
    const std::vector<std::vector<TriState>>& outcomes) {
  std::vector<ImputedCohort> imputed(outcomes.size());
  Rng r(3);
  for (std::size_t m = 0; m < outcomes.size(); ++m) {
    auto& imp = imputed[m];
    imp.base = base;
    imp.imputation_index = m;
    imp.values = base->values;
    for (auto& v : imp.values.data) v += r.uniform(-0.01, 0.01);
    imp.ybocs_baseline = base->ybocs_baseline;
    imp.ybocs_final = base->ybocs_final;
    imp.response = outcomes[m];
    imp.remission = outcomes[m];
  }
  return imputed;
}

std::shared_ptr<Cohort> plain_base(std::size_t n) {
  auto schema = FeatureSchema(
      {Feature{"x", FeatureKind::continuous, std::optional<Bounds>{}}});
  auto base = std::make_shared<Cohort>(schema, n);
  Rng r(17);
  for (std::size_t i = 0; i < n; ++i) {
    base->values(i, 0) = r.normal();
    base->ybocs_baseline[i] = 30.0;
    base->ybocs_final[i] = 20.0;
  }
  derive_outcomes(*base);
  return base;
}

}  // namespace

TEST_CASE("auc on the textbook examples") {
  CHECK(auc({0.9, 0.8, 0.1, 0.2}, {1, 1, 0, 0}) == 1.0);
  CHECK(auc({0.3, 0.3, 0.3, 0.3}, {1, 1, 0, 0}) == 0.5);
  CHECK(auc({0.8, 0.3, 0.5, 0.1}, {1, 1, 0, 0}) == 0.75);
  CHECK(auc({0.1, 0.2, 0.9, 0.8}, {1, 1, 0, 0}) == 0.0);
  // one tie across the class boundary counts one half
  CHECK(auc({0.5, 0.5}, {1, 0}) == 0.5);
}

TEST_CASE("auc error cases") {
  CHECK(thrown_code([] { auc({0.1, 0.2}, {1, 1}); }) == errc::metric);
  CHECK(thrown_code([] { auc({0.1, 0.2}, {0, 0}); }) == errc::metric);
  CHECK(thrown_code([] { auc({0.1, 0.2, 0.3}, {1, 0, kTriMissing}); }) ==
        errc::metric);
  CHECK(thrown_code([] {
          auc({0.1, std::numeric_limits<double>::quiet_NaN()}, {1, 0});
        }) == errc::metric);
  CHECK(thrown_code([] { auc({0.1}, {1, 0}); }) == errc::internal);
}

TEST_CASE("auc equals brute-force pairwise counting, ties included") {
  Rng rng(139);
  for (int rep = 0; rep < 200; ++rep) {
    Rng r = rng.fork(static_cast<std::uint64_t>(rep));
    const std::size_t n = 2 + r.below(49);
    std::vector<double> scores(n);
    std::vector<TriState> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      // small integer grid forces plenty of ties
      scores[i] = static_cast<double>(r.below(8)) / 2.0;
      labels[i] = r.bernoulli(0.5) ? 1 : 0;
    }
    labels[0] = 1;
    labels[n - 1] = 0;
    CHECK(auc(scores, labels) == testsupport::brute_auc(scores, labels));
  }
}

TEST_CASE("auc negation symmetry without ties") {
  Rng rng(149);
  for (int rep = 0; rep < 50; ++rep) {
    Rng r = rng.fork(static_cast<std::uint64_t>(rep));
    const std::size_t n = 4 + r.below(30);
    std::vector<double> scores(n);
    std::vector<TriState> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = r.normal();
      labels[i] = r.bernoulli(0.5) ? 1 : 0;
    }
    labels[0] = 1;
    labels[1] = 0;
    std::vector<double> negated(n);
    for (std::size_t i = 0; i < n; ++i) negated[i] = -scores[i];
    CHECK(auc(scores, labels) + auc(negated, labels) == 1.0);
  }
}

TEST_CASE("grid size is imputations times folds") {
  auto base = plain_base(60);
  std::vector<TriState> y(60);
  for (std::size_t i = 0; i < 60; ++i) y[i] = i % 2 == 0 ? 1 : 0;

  const auto spec = ModelSpec::defaults(ModelFamily::logistic_regression);
  const auto one = fixture(base, {y});
  const auto r1 =
      evaluate_feature_set({0}, spec, one, Outcome::response, 5, Rng(7));
  CHECK(r1.run_count == 5);
  CHECK(r1.per_run.size() == 5);

  std::vector<std::vector<TriState>> many(100, y);
  const auto r100 = evaluate_feature_set({0}, spec, fixture(base, many),
                                         Outcome::response, 5, Rng(7));
  CHECK(r100.run_count == 500);
  CHECK(r100.excluded == 0);
}

TEST_CASE("argument errors") {
  auto base = plain_base(20);
  std::vector<TriState> y(20);
  for (std::size_t i = 0; i < 20; ++i) y[i] = i % 2 == 0 ? 1 : 0;
  const auto imputed = fixture(base, {y});
  const auto spec = ModelSpec::defaults(ModelFamily::knn);

  CHECK(thrown_code([&] {
          evaluate_feature_set({}, spec, imputed, Outcome::response, 5, Rng(1));
        }) == errc::config);
  CHECK(thrown_code([&] {
          evaluate_feature_set({0}, spec, {}, Outcome::response, 5, Rng(1));
        }) == errc::config);
  CHECK(thrown_code([&] {
          evaluate_feature_set({0}, spec, imputed, Outcome::response, 1, Rng(1));
        }) == errc::config);
  CHECK(thrown_code([&] {
          evaluate_feature_set({9}, spec, imputed, Outcome::response, 5, Rng(1));
        }) == errc::config);
}

TEST_CASE("imputations with a class below k are excluded and counted") {
  auto base = plain_base(8);
  std::vector<TriState> balanced = {1, 0, 1, 0, 1, 0, 1, 0};
  std::vector<TriState> lopsided = {1, 0, 0, 0, 0, 0, 0, 0};
  const auto imputed = fixture(base, {balanced, lopsided});
  const auto spec = ModelSpec::defaults(ModelFamily::knn);

  const auto result =
      evaluate_feature_set({0}, spec, imputed, Outcome::response, 2, Rng(5));
  CHECK(result.run_count == 4);
  CHECK(result.excluded == 2);
  CHECK(result.per_run[0].auc.has_value());
  CHECK(result.per_run[1].auc.has_value());
  CHECK_FALSE(result.per_run[2].auc.has_value());
  CHECK_FALSE(result.per_run[3].auc.has_value());
  CHECK(result.per_run[2].imputation == 1);
  CHECK(result.per_run[2].fold == 0);

  const double mean =
      (*result.per_run[0].auc + *result.per_run[1].auc) / 2.0;
  CHECK(result.pooled_auc == mean);
}

TEST_CASE("a grid with every run excluded is a metric error") {
  auto base = plain_base(6);
  std::vector<TriState> lopsided = {1, 0, 0, 0, 0, 0};
  const auto imputed = fixture(base, {lopsided});
  CHECK(thrown_code([&] {
          evaluate_feature_set({0}, ModelSpec::defaults(ModelFamily::knn),
                               imputed, Outcome::response, 2, Rng(5));
        }) == errc::metric);
}

TEST_CASE("cell failures carry imputation and fold coordinates") {
  auto base = plain_base(8);
  std::vector<TriState> y = {1, 0, 1, 0, 1, 0, 1, 0};
  auto imputed = fixture(base, {y, y});
  for (auto& v : imputed[1].values.data)
    v = std::numeric_limits<double>::quiet_NaN();

  try {
    evaluate_feature_set({0}, ModelSpec::defaults(ModelFamily::knn), imputed,
                         Outcome::response, 2, Rng(5));
    FAIL("expected fit error");
  } catch (const Error& e) {
    CHECK(e.code() == errc::fit);
    CHECK(std::string(e.what()).find("imputation 1, fold 0") !=
          std::string::npos);
  }
}

TEST_CASE("per-run results are identical for any worker count") {
  GeneratorConfig gen;
  gen.n_patients = 80;
  gen.missing_rate = 0.1;
  gen.seed = 19;
  auto cohort = std::make_shared<Cohort>(generate(gen));
  const auto imputed = impute_many(cohort, 6, Rng(23));

  const std::vector<std::size_t> feats = {
      static_cast<std::size_t>(cohort->schema.index_of("credibility")),
      static_cast<std::size_t>(cohort->schema.index_of("age"))};
  for (const auto family :
       {ModelFamily::logistic_regression, ModelFamily::random_forest}) {
    ModelSpec spec = ModelSpec::defaults(family);
    if (family == ModelFamily::random_forest) spec.forest.n_trees = 20;
    set_jobs(1);
    const auto serial = evaluate_feature_set(feats, spec, imputed,
                                             Outcome::response, 3, Rng(29));
    set_jobs(4);
    const auto parallel = evaluate_feature_set(feats, spec, imputed,
                                               Outcome::response, 3, Rng(29));
    set_jobs(1);
    REQUIRE(serial.per_run.size() == parallel.per_run.size());
    for (std::size_t t = 0; t < serial.per_run.size(); ++t) {
      CHECK(serial.per_run[t].auc.has_value() ==
            parallel.per_run[t].auc.has_value());
      if (serial.per_run[t].auc)
        CHECK(*serial.per_run[t].auc == *parallel.per_run[t].auc);
    }
    CHECK(serial.pooled_auc == parallel.pooled_auc);
  }
}

TEST_CASE("a planted single feature scores far above chance") {
  GeneratorConfig gen;
  gen.n_patients = 300;
  gen.missing_rate = 0.0;
  gen.p_low = 0.02;
  gen.p_mid = 0.50;
  gen.p_high = 0.98;
  gen.seed = 31;
  auto cohort = std::make_shared<Cohort>(generate(gen));
  const auto imputed = impute_many(cohort, 3, Rng(37));
  const std::vector<std::size_t> cred = {
      static_cast<std::size_t>(cohort->schema.index_of("credibility"))};

  const auto result = evaluate_feature_set(
      cred, ModelSpec::defaults(ModelFamily::logistic_regression), imputed,
      Outcome::response, 5, Rng(41));
  CHECK(result.excluded == 0);
  CHECK(result.pooled_auc > 0.85);
}

TEST_CASE("an uninformative feature stays near chance") {
  GeneratorConfig gen;
  gen.n_patients = 500;
  gen.missing_rate = 0.0;
  gen.seed = 43;
  auto cohort = std::make_shared<Cohort>(generate(gen));
  const auto imputed = impute_many(cohort, 10, Rng(47));
  // covid_impact is independent noise in the generator
  const std::vector<std::size_t> noise = {
      static_cast<std::size_t>(cohort->schema.index_of("covid_impact"))};

  const auto result = evaluate_feature_set(
      noise, ModelSpec::defaults(ModelFamily::logistic_regression), imputed,
      Outcome::response, 5, Rng(53));
  CHECK(result.run_count == 50);
  CHECK(result.pooled_auc >= 0.45);
  CHECK(result.pooled_auc <= 0.55);
}
