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
#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "outpred/error.hpp"
#include "outpred/synthgen.hpp"

using namespace outpred;

namespace {

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const auto n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

std::vector<double> column(const Cohort& c, const char* name) {
  const auto j = static_cast<std::size_t>(c.schema.index_of(name));
  std::vector<double> out(c.n);
  for (std::size_t i = 0; i < c.n; ++i) out[i] = c.values(i, j);
  return out;
}

}  // namespace

TEST_CASE("zero missing rate yields a complete cohort with outcomes") {
  GeneratorConfig gen;
  gen.n_patients = 400;
  gen.missing_rate = 0.0;
  gen.seed = 5;
  const Cohort c = generate(gen);
  REQUIRE(c.n == 400);
  for (std::size_t i = 0; i < c.n; ++i) {
    for (std::size_t j = 0; j < c.schema.size(); ++j)
      CHECK_FALSE(c.is_missing(i, j));
    CHECK(c.baseline_missing[i] == 0);
    CHECK(c.final_missing[i] == 0);
    CHECK(c.response[i] != kTriMissing);
    CHECK(c.remission[i] != kTriMissing);
  }
}

TEST_CASE("scale columns are integral, bounded, and score-consistent") {
  GeneratorConfig gen;
  gen.n_patients = 1000;
  gen.missing_rate = 0.0;
  gen.seed = 13;
  const Cohort c = generate(gen);
  const auto cred = column(c, "credibility");
  const auto expect = column(c, "expectancy");
  const auto base = column(c, "bdd_ybocs_baseline");
  for (std::size_t i = 0; i < c.n; ++i) {
    CHECK(cred[i] == std::floor(cred[i]));
    CHECK(expect[i] == std::floor(expect[i]));
    CHECK(cred[i] >= 3.0);
    CHECK(cred[i] <= 27.0);
    CHECK(expect[i] >= 3.0);
    CHECK(expect[i] <= 27.0);
    CHECK(base[i] == c.ybocs_baseline[i]);
    CHECK(c.ybocs_baseline[i] >= 20.0);
    CHECK(c.ybocs_baseline[i] <= 46.0);
    CHECK(c.ybocs_final[i] >= 0.0);
    CHECK(c.ybocs_final[i] <= 48.0);
  }
}

TEST_CASE("outcomes agree with the score columns they are derived from") {
  GeneratorConfig gen;
  gen.n_patients = 1500;
  gen.missing_rate = 0.0;
  gen.seed = 17;
  const Cohort c = generate(gen);
  for (std::size_t i = 0; i < c.n; ++i) {
    const double ratio = c.ybocs_final[i] / c.ybocs_baseline[i];
    if (c.response[i] == 1)
      CHECK(ratio <= 0.7 + 1e-9);
    else
      CHECK(ratio > 0.7);
    if (c.remission[i] == 1)
      CHECK(c.ybocs_final[i] <= kRemissionCutoff);
    else
      CHECK(c.ybocs_final[i] > kRemissionCutoff);
  }
}

TEST_CASE("credibility and expectancy carry the planted correlation") {
  GeneratorConfig gen;
  gen.n_patients = 5000;
  gen.missing_rate = 0.0;
  gen.seed = 19;
  const Cohort c = generate(gen);
  const double r = pearson(column(c, "credibility"), column(c, "expectancy"));
  // discretizing to the 3..27 grid attenuates the latent 0.67 slightly
  CHECK(r > 0.60);
  CHECK(r < 0.72);
}

TEST_CASE("response rates track the configured credibility bands") {
  GeneratorConfig gen;
  gen.n_patients = 5000;
  gen.missing_rate = 0.0;
  gen.seed = 21;
  gen.p_low = 0.15;
  gen.p_mid = 0.40;
  gen.p_high = 0.75;
  const Cohort c = generate(gen);
  const auto cred = column(c, "credibility");

  const auto check_band = [&](double lo, double hi, double want) {
    std::size_t count = 0, hits = 0;
    for (std::size_t i = 0; i < c.n; ++i) {
      if (cred[i] <= lo || cred[i] > hi) continue;
      ++count;
      if (c.response[i] == 1) ++hits;
    }
    REQUIRE(count >= 300);
    const double rate = static_cast<double>(hits) / static_cast<double>(count);
    const double sigma =
        std::sqrt(want * (1.0 - want) / static_cast<double>(count));
    CHECK(std::fabs(rate - want) <= 3.0 * sigma);
  };
  check_band(2.0, 16.0, gen.p_low);
  check_band(16.0, 22.0, gen.p_mid);
  check_band(22.0, 28.0, gen.p_high);
}

TEST_CASE("mar missingness loads on high values of the covariate") {
  GeneratorConfig gen;
  gen.n_patients = 4000;
  gen.missing_rate = 0.15;
  gen.mechanism = MissingMechanism::mar;
  gen.mar_covariate = "age";
  gen.seed = 31;
  const Cohort c = generate(gen);
  const auto age_col = static_cast<std::size_t>(c.schema.index_of("age"));

  std::vector<double> ages = column(c, "age");
  std::vector<double> sorted = ages;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2,
                   sorted.end());
  const double median = sorted[sorted.size() / 2];

  double rate_hi = 0.0, rate_lo = 0.0;
  std::size_t n_hi = 0, n_lo = 0;
  for (std::size_t i = 0; i < c.n; ++i) {
    CHECK_FALSE(c.is_missing(i, age_col));
    std::size_t holes = 0, cells = 0;
    for (std::size_t j = 0; j < c.schema.size(); ++j) {
      if (j == age_col) continue;
      ++cells;
      if (c.is_missing(i, j)) ++holes;
    }
    const double frac = static_cast<double>(holes) / static_cast<double>(cells);
    if (ages[i] > median) {
      rate_hi += frac;
      ++n_hi;
    } else {
      rate_lo += frac;
      ++n_lo;
    }
  }
  rate_hi /= static_cast<double>(n_hi);
  rate_lo /= static_cast<double>(n_lo);
  CHECK(rate_hi - rate_lo > 0.02);
}

TEST_CASE("mcar missingness is independent of the covariates") {
  // chi-square independence of missing(qids) vs age <= median at the 0.001
  // level; 100 seeds should produce almost no rejections
  int rejections = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    GeneratorConfig gen;
    gen.n_patients = 2000;
    gen.missing_rate = 0.20;
    gen.seed = seed;
    const Cohort c = generate(gen);
    const auto qids = static_cast<std::size_t>(c.schema.index_of("qids"));
    const auto ages = column(c, "age");
    std::vector<double> sorted = ages;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2,
                     sorted.end());
    const double median = sorted[sorted.size() / 2];

    double a = 0, b = 0, cc = 0, d = 0;
    for (std::size_t i = 0; i < c.n; ++i) {
      const bool young = ages[i] <= median;
      const bool hole = c.is_missing(i, qids);
      (young ? (hole ? a : b) : (hole ? cc : d)) += 1.0;
    }
    const double n = a + b + cc + d;
    const double denom = (a + b) * (cc + d) * (a + cc) * (b + d);
    REQUIRE(denom > 0.0);
    const double chi2 = n * (a * d - b * cc) * (a * d - b * cc) / denom;
    if (chi2 > 10.828) ++rejections;
  }
  CHECK(rejections <= 3);
}

TEST_CASE("generation is deterministic in the seed") {
  GeneratorConfig gen;
  gen.n_patients = 120;
  gen.seed = 41;
  const Cohort a = generate(gen);
  const Cohort b = generate(gen);
  CHECK(a.values.data == b.values.data);
  CHECK(a.missing == b.missing);
  CHECK(a.ybocs_final == b.ybocs_final);
  CHECK(a.response == b.response);

  gen.seed = 42;
  const Cohort c = generate(gen);
  CHECK(a.values.data != c.values.data);
}

TEST_CASE("generator configuration is validated") {
  using testsupport::thrown_code;
  const auto tweak = [](auto fn) {
    GeneratorConfig gen;
    fn(gen);
    return thrown_code([&] { gen.validate(); });
  };
  CHECK(tweak([](GeneratorConfig& g) { g.p_low = g.p_mid; }) == errc::config);
  CHECK(tweak([](GeneratorConfig& g) { g.p_mid = 0.9; g.p_high = 0.8; }) ==
        errc::config);
  CHECK(tweak([](GeneratorConfig& g) { g.p_high = 1.2; }) == errc::config);
  CHECK(tweak([](GeneratorConfig& g) { g.missing_rate = 1.0; }) == errc::config);
  CHECK(tweak([](GeneratorConfig& g) { g.missing_rate = -0.1; }) == errc::config);
  CHECK(tweak([](GeneratorConfig& g) { g.cred_expect_corr = 1.0; }) ==
        errc::config);
  CHECK(tweak([](GeneratorConfig& g) { g.cred_sd = 0.0; }) == errc::config);
  CHECK(tweak([](GeneratorConfig& g) {
          g.mechanism = MissingMechanism::mar;
          g.mar_covariate.clear();
        }) == errc::config);

  GeneratorConfig gen;
  gen.mechanism = MissingMechanism::mar;
  gen.mar_covariate = "shoe_size";
  CHECK(thrown_code([&] { (void)generate(gen); }) == errc::config);
}

TEST_CASE("missing mechanism names round-trip") {
  CHECK(mechanism_from_string("mcar") == MissingMechanism::mcar);
  CHECK(mechanism_from_string("mar") == MissingMechanism::mar);
  CHECK(std::string(to_string(MissingMechanism::mar)) == "mar");
  CHECK(std::string(to_string(MissingMechanism::mcar)) == "mcar");
  CHECK(testsupport::thrown_code([] { (void)mechanism_from_string("mnar"); }) ==
        errc::config);
}
