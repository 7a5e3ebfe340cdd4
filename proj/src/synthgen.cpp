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

#include "outpred/synthgen.hpp"

#include <algorithm>
#include <cmath>

#include "outpred/error.hpp"

namespace outpred {

namespace {

// Keeps strict-inequality sides of the final-score intervals strict even
// after floating-point rounding of the outcome predicates.
constexpr double kEdge = 1e-9;

double clamp(double v, double lo, double hi) {
  return std::min(hi, std::max(lo, v));
}

double discretize_cred(double latent, double mean, double sd) {
  return clamp(std::round(mean + sd * latent), 3.0, 27.0);
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double draw_known_feature(const std::string& name, const Feature& feature,
                          Rng& rng) {
  if (name == "age") return rng.uniform(18.0, 65.0);
  if (name == "gender_identity") return rng.bernoulli(0.65) ? 1.0 : 0.0;
  if (name == "sexual_minority") return rng.bernoulli(0.25) ? 1.0 : 0.0;
  if (name == "race_ethnicity") return rng.bernoulli(0.60) ? 1.0 : 0.0;
  if (name == "postgrad_education") return rng.bernoulli(0.35) ? 1.0 : 0.0;
  if (name == "urica") return rng.normal(9.0, 1.5);
  if (name == "babs_tot_recalc") return clamp(rng.normal(13.0, 4.0), 0.0, 24.0);
  if (name == "qids") return clamp(rng.normal(12.0, 4.0), 0.0, 27.0);
  if (name == "bdd_duration") return clamp(rng.normal(15.0, 8.0), 0.0, 100.0);
  if (name == "treatment_group") return rng.bernoulli(0.5) ? 1.0 : 0.0;
  if (name == "ssri_use") return rng.bernoulli(0.4) ? 1.0 : 0.0;
  if (name == "any_comorbidity") return rng.bernoulli(0.55) ? 1.0 : 0.0;
  if (name == "covid_impact") return rng.normal(0.0, 1.0);
  // Unlisted features fall back to kind-shaped noise.
  switch (feature.kind) {
    case FeatureKind::binary:
      return rng.bernoulli(0.5) ? 1.0 : 0.0;
    case FeatureKind::ordinal: {
      if (feature.bounds) {
        const double mid = (feature.bounds->lower + feature.bounds->upper) / 2.0;
        const double spread = (feature.bounds->upper - feature.bounds->lower) / 6.0;
        return clamp(std::round(rng.normal(mid, spread)), feature.bounds->lower,
                     feature.bounds->upper);
      }
      return std::round(rng.normal(0.0, 1.0));
    }
    case FeatureKind::continuous:
    default: {
      double v = rng.normal(0.0, 1.0);
      if (feature.bounds) v = clamp(v, feature.bounds->lower, feature.bounds->upper);
      return v;
    }
  }
}

}  // namespace

const char* to_string(MissingMechanism mechanism) {
  return mechanism == MissingMechanism::mcar ? "mcar" : "mar";
}

MissingMechanism mechanism_from_string(const std::string& s) {
  if (s == "mcar") return MissingMechanism::mcar;
  if (s == "mar") return MissingMechanism::mar;
  fail(errc::config, "generator: unknown missing mechanism '" + s + "'");
}

void GeneratorConfig::validate() const {
  if (!(cred_expect_corr > -1.0 && cred_expect_corr < 1.0))
    fail(errc::config, "generator: cred_expect_corr must lie in (-1, 1)");
  if (!(0.0 <= p_low && p_low < p_mid && p_mid < p_high && p_high <= 1.0))
    fail(errc::config,
         "generator: response probabilities must satisfy 0 <= low < mid < high <= 1");
  if (!(missing_rate >= 0.0 && missing_rate < 1.0))
    fail(errc::config, "generator: missing_rate must lie in [0, 1)");
  if (!(cred_sd > 0.0))
    fail(errc::config, "generator: cred_sd must be positive");
  if (mechanism == MissingMechanism::mar && mar_covariate.empty())
    fail(errc::config, "generator: mar mechanism needs a covariate name");
}

Cohort generate(const GeneratorConfig& config, const FeatureSchema& schema) {
  config.validate();
  int mar_col = -1;
  if (config.mechanism == MissingMechanism::mar) {
    mar_col = schema.index_of(config.mar_covariate);
    if (mar_col < 0)
      fail(errc::config, "generator: mar covariate '" + config.mar_covariate +
                             "' not in schema");
  }
  const int cred_col = schema.index_of("credibility");
  const int expect_col = schema.index_of("expectancy");
  const int baseline_col = schema.index_of("bdd_ybocs_baseline");

  Rng rng(config.seed);
  Cohort cohort(schema, config.n_patients);
  const double rho = config.cred_expect_corr;
  const double resid = std::sqrt(1.0 - rho * rho);

  for (std::size_t i = 0; i < config.n_patients; ++i) {
    const double z1 = rng.normal();
    const double z0 = rng.normal();
    const double cred = discretize_cred(z1, config.cred_mean, config.cred_sd);
    const double expect =
        discretize_cred(rho * z1 + resid * z0, config.cred_mean, config.cred_sd);
    const double baseline = clamp(rng.normal(32.0, 5.0), 20.0, 46.0);

    for (std::size_t j = 0; j < schema.size(); ++j) {
      const Feature& f = schema.at(j);
      if (static_cast<int>(j) == cred_col) {
        cohort.values(i, j) = cred;
      } else if (static_cast<int>(j) == expect_col) {
        cohort.values(i, j) = expect;
      } else if (static_cast<int>(j) == baseline_col) {
        cohort.values(i, j) = baseline;
      } else {
        cohort.values(i, j) = draw_known_feature(f.name, f, rng);
      }
    }

    const double p_resp = cred <= 16.0 ? config.p_low
                          : cred <= 22.0 ? config.p_mid
                                         : config.p_high;
    const bool responds = rng.bernoulli(p_resp);
    const double q_rem = sigmoid(config.remission_intercept +
                                 config.remission_coef_credibility * (cred - 16.0) +
                                 config.remission_coef_baseline * (baseline - 32.0));
    bool remits = rng.bernoulli(q_rem);

    const double resp_cut = 0.7 * baseline;  // final at or below => response
    double final_score;
    if (responds) {
      if (remits || !(resp_cut > kRemissionCutoff + 2.0 * kEdge)) {
        remits = true;  // response forces final <= 16 for low baselines
        final_score = rng.uniform(0.0, std::min(resp_cut, kRemissionCutoff));
      } else {
        final_score = rng.uniform(kRemissionCutoff + kEdge, resp_cut);
      }
    } else {
      if (remits && resp_cut < kRemissionCutoff - 2.0 * kEdge) {
        final_score = rng.uniform(resp_cut + kEdge, kRemissionCutoff);
      } else {
        remits = false;  // non-response forces final > 16 for high baselines
        final_score =
            rng.uniform(std::max(resp_cut, kRemissionCutoff) + kEdge, 48.0);
      }
    }
    cohort.ybocs_baseline[i] = baseline;
    cohort.ybocs_final[i] = final_score;
  }

  if (config.missing_rate > 0.0) {
    const std::size_t p = schema.size();
    std::vector<double> rate(config.n_patients, config.missing_rate);
    if (config.mechanism == MissingMechanism::mar) {
      double sum = 0.0;
      for (std::size_t i = 0; i < config.n_patients; ++i)
        sum += cohort.values(i, static_cast<std::size_t>(mar_col));
      const double mean = sum / static_cast<double>(std::max<std::size_t>(1, config.n_patients));
      double ss = 0.0;
      for (std::size_t i = 0; i < config.n_patients; ++i) {
        const double d = cohort.values(i, static_cast<std::size_t>(mar_col)) - mean;
        ss += d * d;
      }
      const double sd =
          std::sqrt(ss / static_cast<double>(std::max<std::size_t>(1, config.n_patients)));
      for (std::size_t i = 0; i < config.n_patients; ++i) {
        const double z =
            sd > 0.0
                ? (cohort.values(i, static_cast<std::size_t>(mar_col)) - mean) / sd
                : 0.0;
        rate[i] = clamp(config.missing_rate * (1.0 + 0.8 * z), 0.0, 1.0);
      }
    }
    // Masked cells are zeroed so the cohort carries no trace of the hidden
    // draw; consumers must honor the missing flags.
    for (std::size_t i = 0; i < config.n_patients; ++i) {
      for (std::size_t j = 0; j < p; ++j) {
        if (static_cast<int>(j) == mar_col) continue;
        if (rng.bernoulli(rate[i])) {
          cohort.set_missing(i, j, true);
          cohort.values(i, j) = 0.0;
        }
      }
      if (rng.bernoulli(rate[i])) {
        cohort.baseline_missing[i] = 1;
        cohort.ybocs_baseline[i] = 0.0;
      }
      if (rng.bernoulli(rate[i])) {
        cohort.final_missing[i] = 1;
        cohort.ybocs_final[i] = 0.0;
      }
    }
  }
  derive_outcomes(cohort);
  return cohort;
}

}  // namespace outpred
