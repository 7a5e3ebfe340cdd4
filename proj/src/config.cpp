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

#include "outpred/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "outpred/error.hpp"

namespace outpred {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(trim(s.substr(start)));
      break;
    }
    out.push_back(trim(s.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  const char* first = value.data();
  const char* last = first + value.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    fail(errc::config, "config: key '" + key + "': '" + value +
                           "' is not a number");
  return v;
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  const char* first = value.data();
  const char* last = first + value.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    fail(errc::config, "config: key '" + key + "': '" + value +
                           "' is not a non-negative integer");
  return v;
}

int parse_int(const std::string& key, const std::string& value, int lo) {
  const std::uint64_t v = parse_uint(key, value);
  if (v < static_cast<std::uint64_t>(lo) || v > 1000000000ull)
    fail(errc::config, "config: key '" + key + "': value out of range");
  return static_cast<int>(v);
}

FeatureSchema schema_from_entries(const std::map<int, std::string>& entries) {
  std::vector<Feature> features;
  for (int i = 0; i < static_cast<int>(entries.size()); ++i) {
    auto it = entries.find(i);
    if (it == entries.end())
      fail(errc::config,
           "config: schema.feature indices must be contiguous from 0; missing " +
               std::to_string(i));
    const std::vector<std::string> parts = split_list(it->second, ':');
    if (parts.size() != 2 && parts.size() != 4)
      fail(errc::config,
           "config: schema.feature." + std::to_string(i) +
               " must be name:kind or name:kind:lower:upper");
    Feature f;
    f.name = parts[0];
    f.kind = feature_kind_from_string(parts[1]);
    if (parts.size() == 4)
      f.bounds = Bounds{parse_double("schema.feature", parts[2]),
                        parse_double("schema.feature", parts[3])};
    features.push_back(std::move(f));
  }
  return FeatureSchema(std::move(features));
}

}  // namespace

void PipelineConfig::validate() const {
  if (m_imputations < 1)
    fail(errc::config, "config: m_imputations must be at least 1");
  if (k_folds < 2) fail(errc::config, "config: k_folds must be at least 2");
  if (auc_gate < 0.0) fail(errc::config, "config: auc_gate must be >= 0");
  if (models.empty()) fail(errc::config, "config: models list is empty");
  if (outcomes.empty()) fail(errc::config, "config: outcomes list is empty");
  if (imputation_sweeps < 1)
    fail(errc::config, "config: imputation_sweeps must be at least 1");
  if (!use_generator && input_csv.empty())
    fail(errc::config, "config: input = csv requires input_csv");
  if (schema.index_of(tree_report_feature) < 0)
    fail(errc::config, "config: tree_report_feature '" + tree_report_feature +
                           "' not in schema");
  if (use_generator) generator.validate();
}

PipelineConfig parse_config(const std::string& text) {
  PipelineConfig config;
  std::map<std::string, std::string> seen;
  std::map<int, std::string> schema_entries;

  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(errc::config, "config: line " + std::to_string(line_no) +
                             ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      fail(errc::config, "config: line " + std::to_string(line_no) +
                             ": empty key");
    if (!seen.emplace(key, value).second)
      fail(errc::config, "config: repeated key '" + key + "'");

    if (key == "m_imputations") {
      config.m_imputations = static_cast<std::size_t>(parse_int(key, value, 1));
    } else if (key == "k_folds") {
      config.k_folds = parse_int(key, value, 2);
    } else if (key == "auc_gate") {
      config.auc_gate = parse_double(key, value);
    } else if (key == "seed") {
      config.seed = parse_uint(key, value);
    } else if (key == "models") {
      config.models.clear();
      for (const std::string& item : split_list(value, ','))
        config.models.push_back(family_from_string(item));
      for (std::size_t i = 0; i < config.models.size(); ++i)
        for (std::size_t j = i + 1; j < config.models.size(); ++j)
          if (config.models[i] == config.models[j])
            fail(errc::config, "config: repeated model in list");
    } else if (key == "outcomes") {
      config.outcomes.clear();
      for (const std::string& item : split_list(value, ','))
        config.outcomes.push_back(outcome_from_string(item));
      if (config.outcomes.size() > 2 ||
          (config.outcomes.size() == 2 &&
           config.outcomes[0] == config.outcomes[1]))
        fail(errc::config, "config: repeated outcome in list");
    } else if (key == "input") {
      if (value == "generator")
        config.use_generator = true;
      else if (value == "csv")
        config.use_generator = false;
      else
        fail(errc::config, "config: input must be 'generator' or 'csv'");
    } else if (key == "input_csv") {
      config.input_csv = value;
    } else if (key == "output_dir") {
      config.output_dir = value;
    } else if (key == "tree_report_feature") {
      config.tree_report_feature = value;
    } else if (key == "missing_sentinel") {
      if (value.empty())
        fail(errc::config, "config: missing_sentinel must be non-empty");
      config.missing_sentinel = value;
    } else if (key == "imputation_sweeps") {
      config.imputation_sweeps = parse_int(key, value, 1);
    } else if (key == "generator.n_patients") {
      config.generator.n_patients =
          static_cast<std::size_t>(parse_int(key, value, 0));
    } else if (key == "generator.cred_expect_corr") {
      config.generator.cred_expect_corr = parse_double(key, value);
    } else if (key == "generator.p_low") {
      config.generator.p_low = parse_double(key, value);
    } else if (key == "generator.p_mid") {
      config.generator.p_mid = parse_double(key, value);
    } else if (key == "generator.p_high") {
      config.generator.p_high = parse_double(key, value);
    } else if (key == "generator.cred_mean") {
      config.generator.cred_mean = parse_double(key, value);
    } else if (key == "generator.cred_sd") {
      config.generator.cred_sd = parse_double(key, value);
    } else if (key == "generator.remission_intercept") {
      config.generator.remission_intercept = parse_double(key, value);
    } else if (key == "generator.remission_coef_credibility") {
      config.generator.remission_coef_credibility = parse_double(key, value);
    } else if (key == "generator.remission_coef_baseline") {
      config.generator.remission_coef_baseline = parse_double(key, value);
    } else if (key == "generator.missing_rate") {
      config.generator.missing_rate = parse_double(key, value);
    } else if (key == "generator.mechanism") {
      config.generator.mechanism = mechanism_from_string(value);
    } else if (key == "generator.mar_covariate") {
      config.generator.mar_covariate = value;
    } else if (key.rfind("schema.feature.", 0) == 0) {
      const std::string idx = key.substr(std::string("schema.feature.").size());
      schema_entries[parse_int(key, idx, 0)] = value;
    } else {
      fail(errc::config, "config: unknown key '" + key + "'");
    }
  }
  if (!schema_entries.empty())
    config.schema = schema_from_entries(schema_entries);
  config.validate();
  return config;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io, "config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace outpred
