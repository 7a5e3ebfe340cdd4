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

#include "outpred/schema.hpp"

#include <unordered_set>

#include "outpred/error.hpp"

namespace outpred {

FeatureSchema::FeatureSchema(std::vector<Feature> features)
    : features_(std::move(features)) {
  if (features_.empty()) fail(errc::schema, "schema: feature list is empty");
  std::unordered_set<std::string> seen;
  for (const Feature& f : features_) {
    if (f.name.empty()) fail(errc::schema, "schema: empty feature name");
    if (!seen.insert(f.name).second)
      fail(errc::schema, "schema: duplicate feature name '" + f.name + "'");
    if (f.bounds && !(f.bounds->lower < f.bounds->upper))
      fail(errc::schema, "schema: feature '" + f.name +
                             "' bounds must satisfy lower < upper");
  }
}

int FeatureSchema::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < features_.size(); ++i)
    if (features_[i].name == name) return static_cast<int>(i);
  return -1;
}

std::vector<FeatureKind> FeatureSchema::kinds() const {
  std::vector<FeatureKind> out;
  out.reserve(features_.size());
  for (const Feature& f : features_) out.push_back(f.kind);
  return out;
}

std::vector<std::string> FeatureSchema::names() const {
  std::vector<std::string> out;
  out.reserve(features_.size());
  for (const Feature& f : features_) out.push_back(f.name);
  return out;
}

std::vector<Feature> FeatureSchema::defaults_roster() {
  const FeatureKind c = FeatureKind::continuous;
  const FeatureKind b = FeatureKind::binary;
  return {
      {"age", c, Bounds{18.0, 100.0}},
      {"gender_identity", b, std::nullopt},
      {"sexual_minority", b, std::nullopt},
      {"race_ethnicity", b, std::nullopt},
      {"postgrad_education", b, std::nullopt},
      {"bdd_ybocs_baseline", c, Bounds{0.0, 48.0}},
      {"urica", c, std::nullopt},
      {"babs_tot_recalc", c, Bounds{0.0, 24.0}},
      {"qids", c, Bounds{0.0, 27.0}},
      {"credibility", FeatureKind::ordinal, Bounds{3.0, 27.0}},
      {"expectancy", c, std::nullopt},
      {"bdd_duration", c, Bounds{0.0, 100.0}},
      {"treatment_group", b, std::nullopt},
      {"ssri_use", b, std::nullopt},
      {"any_comorbidity", b, std::nullopt},
      {"covid_impact", c, std::nullopt},
      {"extra_predictor", c, std::nullopt},
  };
}

const char* to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::continuous: return "continuous";
    case FeatureKind::binary: return "binary";
    case FeatureKind::ordinal: return "ordinal";
  }
  return "continuous";
}

FeatureKind feature_kind_from_string(const std::string& s) {
  if (s == "continuous") return FeatureKind::continuous;
  if (s == "binary") return FeatureKind::binary;
  if (s == "ordinal") return FeatureKind::ordinal;
  fail(errc::schema, "schema: unknown feature kind '" + s + "'");
}

}  // namespace outpred
