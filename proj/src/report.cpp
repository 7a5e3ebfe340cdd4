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

#include "outpred/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "outpred/error.hpp"

namespace outpred {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) fail(errc::internal, "report: number formatting failed");
  return std::string(buf, ptr);
}

std::string tri_to_text(TriState v, const std::string& sentinel) {
  if (v == kTriMissing) return sentinel;
  return v == 1 ? "1" : "0";
}

nlohmann::ordered_json node_to_json(const TreeModel& tree, int index,
                                    const std::vector<std::string>& names) {
  const TreeNode& node = tree.nodes[static_cast<std::size_t>(index)];
  nlohmann::ordered_json j;
  j["type"] = node.is_leaf() ? "leaf" : "split";
  j["n_train"] = node.n_train;
  j["positive_fraction"] = node.positive_fraction;
  if (!node.is_leaf()) {
    j["feature"] = names[static_cast<std::size_t>(node.feature)];
    j["threshold"] = node.threshold;
    j["left"] = node_to_json(tree, node.left, names);
    j["right"] = node_to_json(tree, node.right, names);
  }
  return j;
}

nlohmann::ordered_json config_echo(const PipelineConfig& config) {
  nlohmann::ordered_json j;
  j["m_imputations"] = config.m_imputations;
  j["k_folds"] = config.k_folds;
  j["auc_gate"] = config.auc_gate;
  j["seed"] = config.seed;
  nlohmann::ordered_json models = nlohmann::ordered_json::array();
  for (ModelFamily f : config.models) models.push_back(to_string(f));
  j["models"] = std::move(models);
  nlohmann::ordered_json outcomes = nlohmann::ordered_json::array();
  for (Outcome o : config.outcomes) outcomes.push_back(to_string(o));
  j["outcomes"] = std::move(outcomes);
  j["input"] = config.use_generator ? "generator" : "csv";
  if (!config.use_generator) j["input_csv"] = config.input_csv;
  j["tree_report_feature"] = config.tree_report_feature;
  j["missing_sentinel"] = config.missing_sentinel;
  j["imputation_sweeps"] = config.imputation_sweeps;
  if (config.use_generator) {
    const GeneratorConfig& g = config.generator;
    nlohmann::ordered_json gen;
    gen["n_patients"] = g.n_patients;
    gen["cred_expect_corr"] = g.cred_expect_corr;
    gen["p_low"] = g.p_low;
    gen["p_mid"] = g.p_mid;
    gen["p_high"] = g.p_high;
    gen["cred_mean"] = g.cred_mean;
    gen["cred_sd"] = g.cred_sd;
    gen["remission_intercept"] = g.remission_intercept;
    gen["remission_coef_credibility"] = g.remission_coef_credibility;
    gen["remission_coef_baseline"] = g.remission_coef_baseline;
    gen["missing_rate"] = g.missing_rate;
    gen["mechanism"] = to_string(g.mechanism);
    if (g.mechanism == MissingMechanism::mar) gen["mar_covariate"] = g.mar_covariate;
    j["generator"] = std::move(gen);
  }
  nlohmann::ordered_json schema = nlohmann::ordered_json::array();
  for (const Feature& f : config.schema.features()) {
    nlohmann::ordered_json entry;
    entry["name"] = f.name;
    entry["kind"] = to_string(f.kind);
    if (f.bounds) {
      entry["lower"] = f.bounds->lower;
      entry["upper"] = f.bounds->upper;
    }
    schema.push_back(std::move(entry));
  }
  j["schema"] = std::move(schema);
  return j;
}

std::string results_csv(const RunReport& report, Outcome outcome) {
  std::string out = "model,pooled_auc,run_count,excluded_runs,selected_features\n";
  const FeatureSchema& schema = report.config.schema;
  for (ModelFamily family : report.config.models) {
    for (const ModelOutcomeReport& r : report.results) {
      if (r.family != family || r.outcome != outcome) continue;
      out += to_string(family);
      out += ',';
      out += format_real(r.eval ? r.eval->pooled_auc : r.trace.baseline_auc);
      out += ',';
      out += std::to_string(r.eval ? r.eval->run_count : 0);
      out += ',';
      out += std::to_string(r.eval ? r.eval->excluded : 0);
      out += ',';
      for (std::size_t i = 0; i < r.trace.steps.size(); ++i) {
        if (i) out += ';';
        out += schema.at(r.trace.steps[i].feature).name;
      }
      out += '\n';
    }
  }
  return out;
}

std::string thresholds_csv(const RunReport& report) {
  std::string out =
      "feature,cutpoint,integer_rule,direction,outcome,frequency,"
      "exposed_positive,exposed_negative,unexposed_positive,"
      "unexposed_negative,odds_ratio,p_value,correction_applied,degenerate\n";
  for (const OutcomeTrees& ot : report.trees) {
    for (const ThresholdRow& row : ot.rows) {
      const ThresholdReport& r = row.report;
      out += r.feature;
      out += ',';
      out += format_real(r.cutpoint);
      out += ',';
      out += (r.direction == Direction::le ? "<= " : "> ") +
             std::to_string(r.integer_cut);
      out += ',';
      out += to_string(r.direction);
      out += ',';
      out += to_string(r.outcome);
      out += ',';
      out += format_real(row.frequency);
      out += ',';
      out += std::to_string(r.table.a);
      out += ',';
      out += std::to_string(r.table.b);
      out += ',';
      out += std::to_string(r.table.c);
      out += ',';
      out += std::to_string(r.table.d);
      out += ',';
      out += r.odds.infinite ? "inf" : format_real(r.odds.value);
      out += ',';
      out += format_real(r.p_value);
      out += ',';
      out += r.odds.correction_applied ? "true" : "false";
      out += ',';
      out += r.table.degenerate ? "true" : "false";
      out += '\n';
    }
  }
  return out;
}

std::string scatter_csv(const RunReport& report) {
  const Cohort& c = *report.cohort;
  const std::string& sentinel = report.config.missing_sentinel;
  const int feat = report.config.schema.index_of(report.config.tree_report_feature);
  std::string out = "patient," + report.config.tree_report_feature +
                    ",ybocs_baseline,response,remission\n";
  for (std::size_t i = 0; i < c.n; ++i) {
    out += std::to_string(i);
    out += ',';
    out += c.is_missing(i, static_cast<std::size_t>(feat))
               ? sentinel
               : format_real(c.values(i, static_cast<std::size_t>(feat)));
    out += ',';
    out += c.baseline_missing[i] ? sentinel : format_real(c.ybocs_baseline[i]);
    out += ',';
    out += tri_to_text(c.response[i], sentinel);
    out += ',';
    out += tri_to_text(c.remission[i], sentinel);
    out += '\n';
  }
  return out;
}

std::string selection_trace_json(const RunReport& report) {
  const FeatureSchema& schema = report.config.schema;
  nlohmann::ordered_json traces = nlohmann::ordered_json::array();
  for (const ModelOutcomeReport& r : report.results) {
    nlohmann::ordered_json t;
    t["model"] = to_string(r.family);
    t["outcome"] = to_string(r.outcome);
    t["gate"] = r.trace.gate;
    t["baseline_auc"] = r.trace.baseline_auc;
    nlohmann::ordered_json steps = nlohmann::ordered_json::array();
    for (const SelectionStep& s : r.trace.steps) {
      nlohmann::ordered_json step;
      step["feature"] = schema.at(s.feature).name;
      step["pooled_auc_after"] = s.pooled_auc_after;
      steps.push_back(std::move(step));
    }
    t["steps"] = std::move(steps);
    nlohmann::ordered_json rejected = nlohmann::ordered_json::array();
    for (const RejectedCandidate& c : r.trace.rejected_at_final_step) {
      nlohmann::ordered_json item;
      item["feature"] = schema.at(c.feature).name;
      item["best_auc_achieved"] = c.best_auc_achieved;
      rejected.push_back(std::move(item));
    }
    t["rejected_at_final_step"] = std::move(rejected);
    if (r.eval) {
      t["selected_run_count"] = r.eval->run_count;
      t["selected_excluded_runs"] = r.eval->excluded;
    }
    traces.push_back(std::move(t));
  }
  nlohmann::ordered_json j;
  j["traces"] = std::move(traces);
  return j.dump(2) + "\n";
}

std::string trees_json(const RunReport& report) {
  const FeatureSchema& schema = report.config.schema;
  nlohmann::ordered_json outcomes = nlohmann::ordered_json::array();
  for (const OutcomeTrees& ot : report.trees) {
    nlohmann::ordered_json entry;
    entry["outcome"] = to_string(ot.outcome);
    std::vector<std::string> names;
    nlohmann::ordered_json feature_set = nlohmann::ordered_json::array();
    for (std::size_t f : ot.feature_set) {
      names.push_back(schema.at(f).name);
      feature_set.push_back(schema.at(f).name);
    }
    entry["feature_set"] = std::move(feature_set);
    nlohmann::ordered_json cuts = nlohmann::ordered_json::array();
    for (const ThresholdRow& row : ot.rows) {
      if (row.report.direction != Direction::le) continue;
      nlohmann::ordered_json cut;
      cut["cutpoint"] = row.report.cutpoint;
      cut["integer_cut"] = row.report.integer_cut;
      cut["frequency"] = row.frequency;
      cuts.push_back(std::move(cut));
    }
    entry["aggregated_cutpoints"] = std::move(cuts);
    nlohmann::ordered_json trees = nlohmann::ordered_json::array();
    for (std::size_t m = 0; m < ot.trees.size(); ++m) {
      if (!ot.trees[m]) continue;
      nlohmann::ordered_json item;
      item["imputation"] = m;
      item["tree"] = tree_to_json(*ot.trees[m], names);
      trees.push_back(std::move(item));
    }
    entry["trees"] = std::move(trees);
    outcomes.push_back(std::move(entry));
  }
  nlohmann::ordered_json j;
  j["report_feature"] = report.config.tree_report_feature;
  j["outcomes"] = std::move(outcomes);
  return j.dump(2) + "\n";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io, "report: cannot open '" + path.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out.good()) fail(errc::io, "report: write to '" + path.string() + "' failed");
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

nlohmann::ordered_json tree_to_json(const TreeModel& tree,
                                    const std::vector<std::string>& names) {
  if (tree.nodes.empty()) return nlohmann::ordered_json();
  return node_to_json(tree, 0, names);
}

nlohmann::ordered_json emit_report(const RunReport& report,
                                   const std::string& output_dir,
                                   bool dump_imputations) {
  report.config.validate();
  if (output_dir.empty()) fail(errc::io, "report: empty output directory");

  std::vector<std::pair<std::string, std::string>> files;  // name, content
  for (Outcome outcome : report.config.outcomes)
    files.emplace_back(std::string("results_") + to_string(outcome) + ".csv",
                       results_csv(report, outcome));
  files.emplace_back("thresholds.csv", thresholds_csv(report));
  files.emplace_back("selection_trace.json", selection_trace_json(report));
  files.emplace_back("scatter.csv", scatter_csv(report));
  files.emplace_back("trees.json", trees_json(report));
  if (dump_imputations) {
    for (const ImputedCohort& imp : report.imputed) {
      char name[48];
      std::snprintf(name, sizeof(name), "imputation_%04zu.csv",
                    imp.imputation_index);
      files.emplace_back(name, cohort_to_csv(materialize(imp),
                                             report.config.missing_sentinel));
    }
  }

  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  if (ec)
    fail(errc::io, "report: cannot create directory '" + output_dir + "': " +
                       ec.message());

  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  nlohmann::ordered_json listed = nlohmann::ordered_json::array();
  for (const auto& [name, content] : files) {
    write_file(std::filesystem::path(output_dir) / name, content);
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(content)));
    nlohmann::ordered_json entry;
    entry["name"] = name;
    entry["bytes"] = content.size();
    entry["fnv1a64"] = hex;
    listed.push_back(std::move(entry));
  }

  nlohmann::ordered_json manifest;
  manifest["version"] = kVersion;
  manifest["seed"] = report.config.seed;
  manifest["files"] = std::move(listed);
  manifest["config"] = config_echo(report.config);
  write_file(std::filesystem::path(output_dir) / "manifest.json",
             manifest.dump(2) + "\n");
  return manifest;
}

}  // namespace outpred
