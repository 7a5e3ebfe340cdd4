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

#include <optional>
#include <string>
#include <vector>

namespace outpred {

enum class FeatureKind { continuous, binary, ordinal };

struct Bounds {
  double lower;
  double upper;
};

struct Feature {
  std::string name;
  FeatureKind kind = FeatureKind::continuous;
  std::optional<Bounds> bounds;
};

/// Ordered candidate-predictor roster. Names are unique; bounds are closed
/// intervals with lower < upper.
class FeatureSchema {
 public:
  FeatureSchema() : FeatureSchema(defaults_roster()) {}
  explicit FeatureSchema(std::vector<Feature> features);

  static FeatureSchema defaults() { return FeatureSchema(); }

  std::size_t size() const { return features_.size(); }
  const Feature& at(std::size_t i) const { return features_[i]; }
  const std::vector<Feature>& features() const { return features_; }

  /// Index of a feature name, or -1.
  int index_of(const std::string& name) const;

  std::vector<FeatureKind> kinds() const;
  std::vector<std::string> names() const;

 private:
  static std::vector<Feature> defaults_roster();
  std::vector<Feature> features_;
};

const char* to_string(FeatureKind kind);
FeatureKind feature_kind_from_string(const std::string& s);

}  // namespace outpred
