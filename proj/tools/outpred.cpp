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

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "outpred/config.hpp"
#include "outpred/error.hpp"
#include "outpred/parallel.hpp"
#include "outpred/pipeline.hpp"
#include "outpred/synthgen.hpp"

namespace {

std::string resolve_output_dir(const std::string& flag_value,
                               const std::string& config_value) {
  if (!flag_value.empty()) return flag_value;
  if (!config_value.empty()) return config_value;
  if (const char* env = std::getenv("OUTPRED_OUTPUT_DIR"); env && *env)
    return env;
  outpred::fail(outpred::errc::config,
                "no output directory: pass --out, set output_dir in the "
                "config, or set OUTPRED_OUTPUT_DIR");
}

int run_command(const std::string& config_path, bool seed_given,
                std::uint64_t seed, const std::string& out_dir,
                bool dump_imputations) {
  outpred::PipelineConfig config = outpred::load_config(config_path);
  if (seed_given) config.seed = seed;
  const std::string dir = resolve_output_dir(out_dir, config.output_dir);
  const outpred::RunReport report = outpred::run_pipeline(config);
  outpred::emit_report(report, dir, dump_imputations);
  for (const outpred::ModelOutcomeReport& r : report.results) {
    std::cout << to_string(r.family) << " / " << to_string(r.outcome)
              << ": pooled AUC ";
    if (r.eval) {
      std::cout << r.eval->pooled_auc << " over " << r.eval->run_count
                << " runs (" << r.eval->excluded << " excluded), "
                << r.trace.steps.size() << " feature(s) selected\n";
    } else {
      std::cout << r.trace.baseline_auc << " (no feature cleared the gate)\n";
    }
  }
  std::cout << "reports written to " << dir << "\n";
  return 0;
}

int generate_command(const std::string& config_path, bool seed_given,
                     std::uint64_t seed, const std::string& out_file) {
  outpred::PipelineConfig config = outpred::load_config(config_path);
  if (seed_given) config.seed = seed;
  outpred::GeneratorConfig gen = config.generator;
  gen.seed = config.seed;
  const outpred::Cohort cohort = outpred::generate(gen, config.schema);
  outpred::write_csv(out_file, cohort, config.missing_sentinel);
  std::cout << "wrote " << cohort.n << " patients to " << out_file << "\n";
  return 0;
}

int validate_command(const std::string& config_path) {
  const outpred::PipelineConfig config = outpred::load_config(config_path);
  if (!config.use_generator) {
    const outpred::Cohort cohort = outpred::load_csv(
        config.input_csv, config.schema, config.missing_sentinel);
    std::cout << "config ok; input csv has " << cohort.n << " patients\n";
  } else {
    std::cout << "config ok; generator will produce "
              << config.generator.n_patients << " patients\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"treatment-outcome prediction pipeline"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  unsigned jobs = 0;
  std::string out;
  bool dump_imputations = false;

  CLI::App* run = app.add_subcommand("run", "run the full pipeline");
  run->add_option("--config", config_path, "pipeline config file")->required();
  CLI::Option* run_seed = run->add_option("--seed", seed, "override the run seed");
  run->add_option("--jobs", jobs, "worker threads (0 = library default)");
  run->add_option("--out", out, "output directory");
  run->add_flag("--dump-imputations", dump_imputations,
                "write each completed imputation as CSV");

  CLI::App* generate = app.add_subcommand("generate", "write a synthetic cohort CSV");
  generate->add_option("--config", config_path, "pipeline config file")->required();
  CLI::Option* gen_seed = generate->add_option("--seed", seed, "override the run seed");
  generate->add_option("--out", out, "output CSV path")->required();

  CLI::App* validate = app.add_subcommand("validate", "check a config file");
  validate->add_option("--config", config_path, "pipeline config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(run)) {
      outpred::set_jobs(static_cast<int>(jobs));
      return run_command(config_path, run_seed->count() > 0, seed, out,
                         dump_imputations);
    }
    if (app.got_subcommand(generate))
      return generate_command(config_path, gen_seed->count() > 0, seed, out);
    return validate_command(config_path);
  } catch (const outpred::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return static_cast<int>(outpred::errc::internal);
  }
}
