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

// Times the imputation and evaluation kernels with one worker (the serial
// reference path) against the OpenMP path, and checks that both produce
// identical results. Exits nonzero on any mismatch.

#include <chrono>
#include <cstdio>
#include <memory>
#include <thread>
#include <vector>

#include "outpred/evaluate.hpp"
#include "outpred/impute.hpp"
#include "outpred/parallel.hpp"
#include "outpred/synthgen.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double best_of(int reps, double (*run)(const void*), const void* arg) {
  double best = 0.0;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    run(arg);
    const auto t1 = Clock::now();
    const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    if (r == 0 || ms < best) best = ms;
  }
  return best;
}

bool same_runs(const outpred::EvaluationResult& a,
               const outpred::EvaluationResult& b) {
  if (a.per_run.size() != b.per_run.size()) return false;
  for (std::size_t i = 0; i < a.per_run.size(); ++i) {
    const auto& ra = a.per_run[i];
    const auto& rb = b.per_run[i];
    if (ra.imputation != rb.imputation || ra.fold != rb.fold) return false;
    if (ra.auc.has_value() != rb.auc.has_value()) return false;
    if (ra.auc && *ra.auc != *rb.auc) return false;
  }
  return a.pooled_auc == b.pooled_auc && a.excluded == b.excluded;
}

}  // namespace

int main() {
  using namespace outpred;

  GeneratorConfig gen;
  gen.n_patients = 300;
  gen.missing_rate = 0.15;
  gen.seed = 7;
  auto cohort = std::make_shared<Cohort>(generate(gen));

  const Rng rng(gen.seed);
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  const int par_jobs = hw > 1 ? hw : 4;
  const int reps = 3;

  struct ImputeArgs {
    std::shared_ptr<const Cohort> cohort;
    Rng rng;
    std::vector<ImputedCohort>* out;
  };
  std::vector<ImputedCohort> imp_serial, imp_parallel;
  ImputeArgs ia{cohort, rng, &imp_serial};
  auto run_impute = [](const void* p) {
    const auto* a = static_cast<const ImputeArgs*>(p);
    *a->out = impute_many(a->cohort, 16, a->rng);
    return 0.0;
  };

  set_jobs(1);
  const double imp_ms1 = best_of(reps, run_impute, &ia);
  ia.out = &imp_parallel;
  set_jobs(par_jobs);
  const double imp_msn = best_of(reps, run_impute, &ia);

  bool ok = imp_serial.size() == imp_parallel.size();
  for (std::size_t m = 0; ok && m < imp_serial.size(); ++m)
    ok = imp_serial[m].values.data == imp_parallel[m].values.data &&
         imp_serial[m].ybocs_final == imp_parallel[m].ybocs_final;
  std::printf("%-28s %4d pts  jobs=1 %8.1f ms  jobs=%d %8.1f ms  %s\n",
              "impute_many (M=16)", static_cast<int>(cohort->n), imp_ms1,
              par_jobs, imp_msn, ok ? "identical" : "MISMATCH");
  if (!ok) return 1;

  set_jobs(1);
  auto imputed = impute_many(cohort, 10, rng);

  struct EvalArgs {
    const std::vector<ImputedCohort>* imputed;
    ModelSpec spec;
    std::vector<std::size_t> features;
    Rng rng;
    EvaluationResult* out;
  };
  auto run_eval = [](const void* p) {
    const auto* a = static_cast<const EvalArgs*>(p);
    *a->out = evaluate_feature_set(a->features, a->spec, *a->imputed,
                                   Outcome::response, 5, a->rng);
    return 0.0;
  };

  const FeatureSchema schema;
  std::vector<std::size_t> all_features(schema.size());
  for (std::size_t j = 0; j < all_features.size(); ++j) all_features[j] = j;
  const std::vector<std::size_t> trio = {
      static_cast<std::size_t>(schema.index_of("credibility")),
      static_cast<std::size_t>(schema.index_of("age")),
      static_cast<std::size_t>(schema.index_of("qids"))};

  struct GridCase {
    const char* name;
    ModelSpec spec;
    std::vector<std::size_t> features;
  };
  const GridCase cases[] = {
      {"logistic grid (p=17)", ModelSpec::defaults(ModelFamily::logistic_regression),
       all_features},
      {"svm grid (p=17)", ModelSpec::defaults(ModelFamily::linear_svm),
       all_features},
      {"forest grid (p=3)", ModelSpec::defaults(ModelFamily::random_forest),
       trio},
  };

  for (const auto& c : cases) {
    EvaluationResult serial, parallel;
    EvalArgs ea{&imputed, c.spec, c.features, rng, &serial};
    set_jobs(1);
    const double ms1 = best_of(reps, run_eval, &ea);
    ea.out = &parallel;
    set_jobs(par_jobs);
    const double msn = best_of(reps, run_eval, &ea);
    ok = same_runs(serial, parallel);
    std::printf("%-28s M=10 k=5  jobs=1 %8.1f ms  jobs=%d %8.1f ms  %s\n",
                c.name, ms1, par_jobs, msn, ok ? "identical" : "MISMATCH");
    if (!ok) return 1;
  }

  set_jobs(1);
  return 0;
}
