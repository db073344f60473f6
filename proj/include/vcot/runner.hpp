#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "vcot/backend.hpp"
#include "vcot/client.hpp"
#include "vcot/frames.hpp"
#include "vcot/manifest.hpp"
#include "vcot/raven.hpp"
#include "vcot/templates.hpp"
#include "vcot/types.hpp"

namespace vcot {

// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitBackendExhausted = 2;
inline constexpr int kExitPartial = 3;

struct RunStats {
  long long backend_calls = 0;
  long long cache_hits = 0;
  std::map<std::string, ClientStats> per_backend;
  long long samples_total = 0;
  long long samples_done = 0;
  long long samples_failed = 0;
  long long samples_skipped = 0;  // resumed or filtered before work
  long long correct = 0;
  long long invalid = 0;

  nlohmann::json to_json() const;
};

struct RunResult {
  int exit_code = kExitOk;
  RunStats stats;
  std::vector<std::pair<std::string, std::string>> failures;  // sample id -> error text
  nlohmann::json plan;  // dry-run request plan, empty otherwise
};

struct LoadedSamples {
  std::vector<VideoSample> samples;
  std::vector<std::pair<std::string, std::string>> failures;
};

// Resolves manifest entries to sampled frames: pre-extracted directories are
// listed, videos go through the external extractor (idempotent per out_dir
// under frames_root). Entries that fail to load become per-sample failures
// rather than aborting the batch.
LoadedSamples load_samples(const Manifest& manifest, const SamplingSpec& spec,
                           const ExtractorConfig& extractor,
                           const std::filesystem::path& frames_root,
                           std::optional<int> limit = std::nullopt);

struct InfillOptions {
  std::filesystem::path manifest_path;
  std::filesystem::path run_dir;
  ChainKind kind = ChainKind::vcot;
  SamplingSpec sampling;
  BackendConfig vlm;
  std::optional<BackendConfig> text;  // rephraser, defaults to vlm
  PromptTemplates templates;
  ExtractorConfig extractor;
  std::optional<std::filesystem::path> cache_dir;
  int workers = 1;
  std::optional<int> limit;
};

// Precomputes chains under <run_dir>/infills/. Chains already on disk with a
// matching generator fingerprint are kept.
RunResult run_infill(const InfillOptions& options);

struct EvalOptions {
  std::filesystem::path manifest_path;
  std::filesystem::path run_dir;
  Condition condition;
  BackendConfig vlm;                 // evaluated model: chains + answering
  std::optional<BackendConfig> text;
  std::optional<BackendConfig> judge;
  PromptTemplates templates;
  ExtractorConfig extractor;
  std::optional<std::filesystem::path> cache_dir;
  int workers = 1;
  std::optional<int> limit;
  bool dry_run = false;
};

// Full evaluation pass: ensure chains, apply the configured perturbation,
// assemble, answer, extract, score; records stream to <run_dir>/records.jsonl
// in manifest order. Samples already recorded are skipped on resume.
RunResult run_eval(const EvalOptions& options);

struct RavenOptions {
  std::filesystem::path raven_root;
  std::filesystem::path run_dir;
  std::optional<std::set<RavenCategory>> categories;
  BackendConfig vlm;
  std::optional<BackendConfig> judge;
  PromptTemplates templates;
  std::optional<std::filesystem::path> cache_dir;
  int workers = 1;
  std::optional<int> limit;
  bool dry_run = false;
};

RunResult run_raven(const RavenOptions& options);

struct ScoreOptions {
  std::filesystem::path records_path;
  std::filesystem::path manifest_path;  // supplies options + gold indices
  std::filesystem::path out_path;       // rescored records
  std::optional<BackendConfig> judge;
  PromptTemplates templates;
  std::optional<std::filesystem::path> cache_dir;
};

// Offline re-extraction over an existing records file; judge lookups come
// from the cache, so a previously scored run replays without network calls.
RunResult run_score(const ScoreOptions& options);

std::vector<EvalRecord> load_records(const std::filesystem::path& path);

}  // namespace vcot
