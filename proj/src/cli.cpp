#include "vcot/cli.hpp"

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vcot/configio.hpp"
#include "vcot/errors.hpp"
#include "vcot/report.hpp"
#include "vcot/runner.hpp"
#include "vcot/templates.hpp"
#include "vcot/util.hpp"

namespace vcot {

namespace {

struct CommonFlags {
  std::string backend_config;
  std::string text_backend_config;
  std::string judge_config;
  std::string templates_path;
  std::string extractor_path;
  std::string cache_dir;
  int workers = 1;
  int limit = -1;

  void add_backends(CLI::App* cmd, bool with_text, bool with_judge, bool with_main = true) {
    if (with_main) {
      cmd->add_option("--backend-config", backend_config, "JSON config of the evaluated backend")
          ->required();
      cmd->add_option("--workers", workers, "parallel sample workers")
          ->check(CLI::PositiveNumber);
      cmd->add_option("--limit", limit, "process only the first L samples");
    }
    if (with_text)
      cmd->add_option("--text-backend-config", text_backend_config,
                      "JSON config of the text-only rephrase backend (default: main backend)");
    if (with_judge)
      cmd->add_option("--judge-config", judge_config,
                      "JSON config of the judge backend (default: rule-only extraction)");
    cmd->add_option("--templates", templates_path, "JSON file overriding prompt templates");
    cmd->add_option("--cache-dir", cache_dir,
                    "response cache root (default: $VCOT_CACHE_DIR, then <run_dir>/cache)");
  }

  PromptTemplates templates() const {
    return templates_path.empty() ? PromptTemplates{} : PromptTemplates::load(templates_path);
  }
  ExtractorConfig extractor() const {
    return extractor_path.empty() ? ExtractorConfig{} : load_extractor_config(extractor_path);
  }
  std::optional<BackendConfig> text_backend() const {
    if (text_backend_config.empty()) return std::nullopt;
    return load_backend_config(text_backend_config);
  }
  std::optional<BackendConfig> judge_backend() const {
    if (judge_config.empty()) return std::nullopt;
    return load_backend_config(judge_config);
  }
  std::optional<std::filesystem::path> cache() const {
    if (cache_dir.empty()) return std::nullopt;
    return std::filesystem::path(cache_dir);
  }
  std::optional<int> limit_opt() const {
    if (limit < 0) return std::nullopt;
    return limit;
  }
};

void print_failures(const RunResult& result) {
  for (const auto& [id, error] : result.failures)
    std::cerr << "FAIL " << id << ": " << error << "\n";
}

int finish(const RunResult& result) {
  print_failures(result);
  if (!result.plan.empty()) {
    std::cout << result.plan.dump(2) << "\n";
  } else {
    std::cout << result.stats.to_json().dump(2) << "\n";
  }
  return result.exit_code;
}

void write_table(const ReportTable& table, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  util::atomic_write_file(out_dir / "report.md", emit(table, ReportFormat::markdown));
  util::atomic_write_file(out_dir / "report.csv", emit(table, ReportFormat::csv));
  util::atomic_write_file(out_dir / "report.json", table.to_json().dump(2) + "\n");
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Video-QA evaluation pipeline: transitional-infill generation, interleaved "
               "prompting, shuffle perturbations, scoring and report tables"};
  app.require_subcommand(1);

  // infill
  auto* infill_cmd = app.add_subcommand("infill", "precompute infill chains for a manifest");
  CommonFlags infill_flags;
  std::string infill_manifest, infill_out, infill_kind = "vcot";
  SamplingSpec infill_sampling{5, 1};
  infill_cmd->add_option("--manifest", infill_manifest, "JSONL sample manifest")->required();
  infill_cmd->add_option("--out", infill_out, "output run directory")->required();
  infill_cmd->add_option("--kind", infill_kind, "chain kind: vcot or caption");
  infill_cmd->add_option("--num-frames", infill_sampling.count, "frames per sample (N)");
  infill_cmd->add_option("--stride", infill_sampling.stride, "sampling stride (s)");
  infill_flags.add_backends(infill_cmd, true, false);
  infill_cmd->add_option("--extractor", infill_flags.extractor_path,
                         "JSON config of the external frame extractor");

  // run
  auto* run_cmd = app.add_subcommand("run", "evaluate a manifest under one condition");
  CommonFlags run_flags;
  std::string run_manifest, run_dir, run_mode = "base", run_perturb = "none";
  SamplingSpec run_sampling{5, 1};
  long long run_seed = 0;
  bool run_dry = false;
  run_cmd->add_option("--manifest", run_manifest, "JSONL sample manifest")->required();
  run_cmd->add_option("--run-dir", run_dir, "run directory for records and artifacts")
      ->required();
  run_cmd->add_option("--mode", run_mode, "prompt mode: base, vcot or captions");
  run_cmd->add_option("--perturb", run_perturb,
                      "perturbation: none, visual-shuffle or text-shuffle");
  run_cmd->add_option("--seed", run_seed, "donor-assignment seed");
  run_cmd->add_option("--num-frames", run_sampling.count, "frames per sample (N)");
  run_cmd->add_option("--stride", run_sampling.stride, "sampling stride (s)");
  run_cmd->add_flag("--dry-run", run_dry, "print the request plan without any backend calls");
  run_flags.add_backends(run_cmd, true, true);
  run_cmd->add_option("--extractor", run_flags.extractor_path,
                      "JSON config of the external frame extractor");

  // raven
  auto* raven_cmd = app.add_subcommand("raven", "evaluate an i-RAVEN puzzle tree");
  CommonFlags raven_flags;
  std::string raven_root, raven_run_dir, raven_categories;
  bool raven_dry = false;
  raven_cmd->add_option("--raven-root", raven_root, "root of the puzzle directory tree")
      ->required();
  raven_cmd->add_option("--run-dir", raven_run_dir, "run directory")->required();
  raven_cmd->add_option("--categories", raven_categories,
                        "comma-separated category filter (e.g. center,left_right)");
  raven_cmd->add_flag("--dry-run", raven_dry, "print the request plan without backend calls");
  raven_flags.add_backends(raven_cmd, false, true);

  // score
  auto* score_cmd = app.add_subcommand("score", "re-extract and re-score a records file");
  CommonFlags score_flags;
  std::string score_records, score_manifest, score_out;
  score_cmd->add_option("--records", score_records, "records.jsonl to rescore")->required();
  score_cmd->add_option("--manifest", score_manifest, "manifest supplying options and answers")
      ->required();
  score_cmd->add_option("--out", score_out, "path for the rescored records")->required();
  score_flags.add_backends(score_cmd, false, true, false);  // rescoring has no main backend

  // report
  auto* report_cmd = app.add_subcommand("report", "build accuracy/delta tables from records");
  std::string report_spec_path, report_out_dir;
  report_cmd->add_option("--spec", report_spec_path, "JSON table layout (see docs)")->required();
  report_cmd->add_option("--out-dir", report_out_dir, "directory for report.md/.csv/.json")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*infill_cmd) {
      InfillOptions options;
      options.manifest_path = infill_manifest;
      options.run_dir = infill_out;
      options.kind = chain_kind_from_string(infill_kind);
      options.sampling = infill_sampling;
      options.vlm = load_backend_config(infill_flags.backend_config);
      options.text = infill_flags.text_backend();
      options.templates = infill_flags.templates();
      options.extractor = infill_flags.extractor();
      options.cache_dir = infill_flags.cache();
      options.workers = infill_flags.workers;
      options.limit = infill_flags.limit_opt();
      return finish(run_infill(options));
    }
    if (*run_cmd) {
      EvalOptions options;
      options.manifest_path = run_manifest;
      options.run_dir = run_dir;
      options.condition.mode = mode_from_string(run_mode);
      options.condition.perturbation = perturbation_from_string(run_perturb);
      options.condition.sampling = run_sampling;
      options.condition.seed = run_seed;
      options.vlm = load_backend_config(run_flags.backend_config);
      options.text = run_flags.text_backend();
      options.judge = run_flags.judge_backend();
      options.templates = run_flags.templates();
      options.extractor = run_flags.extractor();
      options.cache_dir = run_flags.cache();
      options.workers = run_flags.workers;
      options.limit = run_flags.limit_opt();
      options.dry_run = run_dry;
      return finish(run_eval(options));
    }
    if (*raven_cmd) {
      RavenOptions options;
      options.raven_root = raven_root;
      options.run_dir = raven_run_dir;
      if (!raven_categories.empty()) {
        std::set<RavenCategory> filter;
        for (const auto& name : util::split(raven_categories, ','))
          filter.insert(raven_category_from_string(util::trim(name)));
        options.categories = filter;
      }
      options.vlm = load_backend_config(raven_flags.backend_config);
      options.judge = raven_flags.judge_backend();
      options.templates = raven_flags.templates();
      options.cache_dir = raven_flags.cache();
      options.workers = raven_flags.workers;
      options.limit = raven_flags.limit_opt();
      options.dry_run = raven_dry;
      auto result = run_raven(options);
      if (!options.dry_run) {
        auto records = load_records(options.run_dir / "records.jsonl");
        if (!records.empty()) {
          auto table = raven_table(records, options.vlm.model);
          write_table(table, options.run_dir);
          std::cout << emit(table, ReportFormat::markdown) << "\n";
        }
      }
      return finish(result);
    }
    if (*score_cmd) {
      ScoreOptions options;
      options.records_path = score_records;
      options.manifest_path = score_manifest;
      options.out_path = score_out;
      options.judge = score_flags.judge_backend();
      options.templates = score_flags.templates();
      options.cache_dir = score_flags.cache();
      auto result = run_score(options);
      nlohmann::json summary{
          {"total", result.stats.samples_total},
          {"correct", result.stats.correct},
          {"invalid", result.stats.invalid},
          {"accuracy",
           format_tenths(accuracy_tenths(result.stats.correct, result.stats.samples_total))},
          {"backend_calls", result.stats.backend_calls},
          {"cache_hits", result.stats.cache_hits}};
      std::cout << summary.dump(2) << "\n";
      return result.exit_code;
    }
    if (*report_cmd) {
      auto spec = load_report_spec(report_spec_path);
      auto table =
          build_report(spec, std::filesystem::path(report_spec_path).parent_path());
      write_table(table, report_out_dir);
      std::cout << emit(table, ReportFormat::markdown) << "\n";
      return kExitOk;
    }
  } catch (const TransportError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBackendExhausted;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace vcot
