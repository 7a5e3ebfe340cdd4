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

#include "outpred/cohort.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
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

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

double parse_real(const std::string& cell, std::size_t line_no,
                  const std::string& column) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = first + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    fail(errc::parse, "csv: line " + std::to_string(line_no) + ", column '" +
                          column + "': cannot parse '" + cell + "' as a number");
  return v;
}

std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) fail(errc::internal, "csv: number formatting failed");
  return std::string(buf, ptr);
}

}  // namespace

const char* to_string(Outcome outcome) {
  return outcome == Outcome::response ? "response" : "remission";
}

Outcome outcome_from_string(const std::string& s) {
  if (s == "response") return Outcome::response;
  if (s == "remission") return Outcome::remission;
  fail(errc::config, "unknown outcome '" + s + "'");
}

Cohort::Cohort(FeatureSchema s, std::size_t n_patients)
    : schema(std::move(s)),
      n(n_patients),
      values(n_patients, schema.size()),
      missing(n_patients * schema.size(), 0),
      ybocs_baseline(n_patients, 0.0),
      ybocs_final(n_patients, 0.0),
      baseline_missing(n_patients, 0),
      final_missing(n_patients, 0),
      response(n_patients, kTriMissing),
      remission(n_patients, kTriMissing) {}

Cohort load_csv(const std::string& path, const FeatureSchema& schema,
                const std::string& sentinel) {
  std::ifstream in(path);
  if (!in) fail(errc::io, "csv: cannot open '" + path + "'");
  std::string header_line;
  if (!std::getline(in, header_line))
    fail(errc::parse, "csv: '" + path + "' is empty, header row required");

  const std::vector<std::string> header = split_csv_line(header_line);
  const std::size_t p = schema.size();
  // column index in the file for each schema feature, then the two scores
  std::vector<int> col_of(p + 2, -1);
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string& name = header[c];
    int slot = schema.index_of(name);
    if (slot < 0) {
      if (name == "ybocs_baseline")
        slot = static_cast<int>(p);
      else if (name == "ybocs_final")
        slot = static_cast<int>(p + 1);
      else
        fail(errc::schema, "csv: unknown column '" + name + "'");
    }
    if (col_of[slot] >= 0)
      fail(errc::schema, "csv: duplicate column '" + name + "'");
    col_of[slot] = static_cast<int>(c);
  }
  for (std::size_t j = 0; j < p; ++j)
    if (col_of[j] < 0)
      fail(errc::schema, "csv: missing column '" + schema.at(j).name + "'");
  if (col_of[p] < 0) fail(errc::schema, "csv: missing column 'ybocs_baseline'");
  if (col_of[p + 1] < 0) fail(errc::schema, "csv: missing column 'ybocs_final'");

  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size())
      fail(errc::parse, "csv: line " + std::to_string(line_no) + " has " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(header.size()));
    rows.push_back(std::move(fields));
  }

  Cohort cohort(schema, rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t file_line = i + 2;
    for (std::size_t slot = 0; slot < p + 2; ++slot) {
      const std::string& cell = rows[i][static_cast<std::size_t>(col_of[slot])];
      const bool miss = cell.empty() || cell == sentinel;
      const std::string column =
          slot < p ? schema.at(slot).name
                   : (slot == p ? std::string("ybocs_baseline")
                                : std::string("ybocs_final"));
      double v = 0.0;
      if (!miss) {
        v = parse_real(cell, file_line, column);
        if (slot < p && schema.at(slot).bounds) {
          const Bounds& b = *schema.at(slot).bounds;
          if (v < b.lower || v > b.upper)
            fail(errc::validation,
                 "csv: line " + std::to_string(file_line) + ", column '" +
                     column + "': value " + format_real(v) + " outside [" +
                     format_real(b.lower) + ", " + format_real(b.upper) + "]");
        }
      }
      if (slot < p) {
        cohort.values(i, slot) = v;
        cohort.set_missing(i, slot, miss);
      } else if (slot == p) {
        cohort.ybocs_baseline[i] = v;
        cohort.baseline_missing[i] = miss ? 1 : 0;
      } else {
        cohort.ybocs_final[i] = v;
        cohort.final_missing[i] = miss ? 1 : 0;
      }
    }
  }
  derive_outcomes(cohort);
  return cohort;
}

std::string cohort_to_csv(const Cohort& cohort, const std::string& sentinel) {
  std::string out;
  const std::size_t p = cohort.schema.size();
  for (std::size_t j = 0; j < p; ++j) {
    if (j) out += ',';
    out += cohort.schema.at(j).name;
  }
  out += ",ybocs_baseline,ybocs_final\n";
  for (std::size_t i = 0; i < cohort.n; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      if (j) out += ',';
      out += cohort.is_missing(i, j) ? sentinel : format_real(cohort.values(i, j));
    }
    out += ',';
    out += cohort.baseline_missing[i] ? sentinel
                                      : format_real(cohort.ybocs_baseline[i]);
    out += ',';
    out += cohort.final_missing[i] ? sentinel
                                   : format_real(cohort.ybocs_final[i]);
    out += '\n';
  }
  return out;
}

void write_csv(const std::string& path, const Cohort& cohort,
               const std::string& sentinel) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io, "csv: cannot open '" + path + "' for writing");
  out << cohort_to_csv(cohort, sentinel);
  if (!out.good()) fail(errc::io, "csv: write to '" + path + "' failed");
}

void derive_outcomes(Cohort& cohort) {
  cohort.degenerate_baseline.clear();
  for (std::size_t i = 0; i < cohort.n; ++i) {
    if (cohort.final_missing[i]) {
      cohort.remission[i] = kTriMissing;
    } else {
      cohort.remission[i] = cohort.ybocs_final[i] <= kRemissionCutoff ? 1 : 0;
    }
    if (cohort.baseline_missing[i] || cohort.final_missing[i]) {
      cohort.response[i] = kTriMissing;
      continue;
    }
    const double b = cohort.ybocs_baseline[i];
    if (b <= 0.0) {
      cohort.degenerate_baseline.push_back(i);
      cohort.response[i] = kTriMissing;
      continue;
    }
    const double ratio = (b - cohort.ybocs_final[i]) / b;
    cohort.response[i] = ratio >= kResponseReduction - kResponseEps ? 1 : 0;
  }
}

Standardizer fit_standardizer(const Matrix& x,
                              const std::vector<FeatureKind>& kinds,
                              const std::vector<std::size_t>* rows,
                              const std::vector<std::uint8_t>* missing) {
  const std::size_t p = x.cols;
  if (kinds.size() != p)
    fail(errc::internal, "standardize: kinds/columns size mismatch");
  Standardizer s;
  s.offset.assign(p, 0.0);
  s.scale.assign(p, 1.0);
  s.scaled.assign(p, 0);

  std::vector<std::size_t> all;
  if (!rows) {
    all.resize(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) all[i] = i;
    rows = &all;
  }
  for (std::size_t j = 0; j < p; ++j) {
    if (kinds[j] == FeatureKind::binary) continue;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i : *rows) {
      if (missing && (*missing)[i * p + j]) continue;
      sum += x(i, j);
      ++count;
    }
    if (count < 2)
      fail(errc::validation, "standardize: column " + std::to_string(j) +
                                 " has fewer than 2 observed values");
    const double mean = sum / static_cast<double>(count);
    double ss = 0.0;
    for (std::size_t i : *rows) {
      if (missing && (*missing)[i * p + j]) continue;
      const double d = x(i, j) - mean;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(count));
    if (!(sd > 1e-12 * std::max(1.0, std::fabs(mean)))) {
      s.warnings.push_back("column " + std::to_string(j) +
                           " has zero training variance, passed through");
      continue;
    }
    s.offset[j] = mean;
    s.scale[j] = sd;
    s.scaled[j] = 1;
  }
  return s;
}

void apply_standardizer(const Standardizer& s, Matrix& x) {
  if (s.scale.size() != x.cols)
    fail(errc::internal, "standardize: parameter/column size mismatch");
  for (std::size_t j = 0; j < x.cols; ++j) {
    if (!s.scaled[j]) continue;
    for (std::size_t i = 0; i < x.rows; ++i)
      x(i, j) = (x(i, j) - s.offset[j]) / s.scale[j];
  }
}

std::pair<Matrix, Standardizer> standardize(const Cohort& train,
                                            const Cohort& apply_to) {
  Standardizer s =
      fit_standardizer(train.values, train.schema.kinds(), nullptr, &train.missing);
  Matrix grid = apply_to.values;
  apply_standardizer(s, grid);
  return {std::move(grid), std::move(s)};
}

std::vector<std::size_t> FoldAssignment::rows_in(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i)
    if (fold_of[i] == fold) out.push_back(i);
  return out;
}

std::vector<std::size_t> FoldAssignment::rows_not_in(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i)
    if (fold_of[i] != fold) out.push_back(i);
  return out;
}

FoldAssignment stratified_folds(const std::vector<TriState>& outcome, int k,
                                Rng rng) {
  if (k < 2) fail(errc::config, "folds: k must be at least 2");
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < outcome.size(); ++i) {
    if (outcome[i] == 1)
      pos.push_back(i);
    else if (outcome[i] == 0)
      neg.push_back(i);
    else
      fail(errc::validation, "folds: outcome missing for patient " +
                                 std::to_string(i));
  }
  if (pos.size() < static_cast<std::size_t>(k) ||
      neg.size() < static_cast<std::size_t>(k))
    fail(errc::config, "folds: each outcome class needs at least k = " +
                           std::to_string(k) + " patients (have " +
                           std::to_string(pos.size()) + " positive, " +
                           std::to_string(neg.size()) + " negative)");
  rng.shuffle(pos);
  rng.shuffle(neg);
  FoldAssignment a;
  a.k = k;
  a.fold_of.assign(outcome.size(), -1);
  // Dealing both classes round-robin off one continuing cursor balances the
  // per-fold class counts and the fold sizes at the same time.
  std::size_t cursor = 0;
  for (const auto* cls : {&pos, &neg})
    for (std::size_t idx : *cls)
      a.fold_of[idx] = static_cast<int>(cursor++ % static_cast<std::size_t>(k));
  return a;
}

}  // namespace outpred
