#include "vcot/runner.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <mutex>
#include <thread>

#include "vcot/cache.hpp"
#include "vcot/errors.hpp"
#include "vcot/infill.hpp"
#include "vcot/judge.hpp"
#include "vcot/perturb.hpp"
#include "vcot/prompt.hpp"
#include "vcot/sampling.hpp"
#include "vcot/util.hpp"

namespace vcot {

nlohmann::json RunStats::to_json() const {
  nlohmann::json per = nlohmann::json::object();
  for (const auto& [id, s] : per_backend)
    per[id] = {{"calls", s.backend_calls}, {"hits", s.cache_hits}};
  return nlohmann::json{{"backend_calls", backend_calls},
                        {"cache_hits", cache_hits},
                        {"per_backend", per},
                        {"samples_total", samples_total},
                        {"samples_done", samples_done},
                        {"samples_failed", samples_failed},
                        {"samples_skipped", samples_skipped},
                        {"correct", correct},
                        {"invalid", invalid}};
}

std::vector<EvalRecord> load_records(const std::filesystem::path& path) {
  std::vector<EvalRecord> records;
  if (!std::filesystem::exists(path)) return records;
  auto lines = util::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (util::trim(lines[i]).empty()) continue;
    try {
      records.push_back(nlohmann::json::parse(lines[i]).get<EvalRecord>());
    } catch (const std::exception& e) {
      throw ParseError(std::string("record: ") + e.what(), i + 1);
    }
  }
  return records;
}

LoadedSamples load_samples(const Manifest& manifest, const SamplingSpec& spec,
                           const ExtractorConfig& extractor,
                           const std::filesystem::path& frames_root, std::optional<int> limit) {
  spec.validate();
  LoadedSamples out;
  std::size_t take = manifest.entries.size();
  if (limit && *limit >= 0) take = std::min<std::size_t>(take, static_cast<std::size_t>(*limit));
  for (std::size_t i = 0; i < take; ++i) {
    const auto& entry = manifest.entries[i];
    try {
      std::vector<std::string> files;
      if (entry.frames_dir) {
        files = list_frame_files(*entry.frames_dir);
      } else {
        files = extract_frames(*entry.video_path, frames_root / entry.id, extractor);
      }
      VideoSample sample;
      sample.id = entry.id;
      sample.frames = sample_frames(entry.id, files, spec);
      sample.question = entry.question;
      sample.options = entry.options;
      sample.gold_index = entry.gold_index;
      sample.validate();
      out.samples.push_back(std::move(sample));
    } catch (const std::exception& e) {
      out.failures.emplace_back(entry.id, e.what());
    }
  }
  return out;
}

namespace {

// Streams lines to an append-only file in task order: results may arrive out
// of order from the worker pool, but line i is written only after 0..i-1
// have been written or marked absent.
class OrderedRecordWriter {
 public:
  OrderedRecordWriter(const std::filesystem::path& path)
      : out_(path, std::ios::app | std::ios::binary) {
    if (!out_) throw Error("cannot open " + path.string() + " for appending");
  }

  void deliver(std::size_t index, std::optional<std::string> line) {
    std::lock_guard<std::mutex> lock(mu_);
    pending_[index] = std::move(line);
    while (!pending_.empty() && pending_.begin()->first == next_) {
      auto& slot = pending_.begin()->second;
      if (slot) {
        out_ << *slot << '\n';
        out_.flush();
      }
      pending_.erase(pending_.begin());
      ++next_;
    }
  }

 private:
  std::ofstream out_;
  std::mutex mu_;
  std::map<std::size_t, std::optional<std::string>> pending_;
  std::size_t next_ = 0;
};

void parallel_for(std::size_t count, int workers, std::atomic<bool>& stop,
                  const std::function<void(std::size_t)>& fn) {
  int w = std::max(1, std::min<int>(workers, static_cast<int>(count)));
  if (w == 1) {
    for (std::size_t i = 0; i < count && !stop.load(); ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> cursor{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < w; ++t) {
    pool.emplace_back([&] {
      while (!stop.load()) {
        std::size_t i = cursor.fetch_add(1);
        if (i >= count) break;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

struct Clients {
  std::shared_ptr<CachingClient> vlm;
  std::shared_ptr<CachingClient> text;   // == vlm unless a separate rephraser is configured
  std::shared_ptr<CachingClient> judge;  // may be null
};

Clients build_clients(const BackendConfig& vlm, const std::optional<BackendConfig>& text,
                      const std::optional<BackendConfig>& judge,
                      const std::shared_ptr<ResponseCache>& cache) {
  std::map<std::string, const BackendConfig*> by_id;
  std::map<std::string, std::shared_ptr<CachingClient>> made;
  auto get = [&](const BackendConfig& config) {
    config.validate();
    auto it = by_id.find(config.id);
    if (it != by_id.end()) {
      if (!(*it->second == config))
        throw ValidationError("two backend configs share id \"" + config.id +
                              "\" but differ; give them distinct ids");
      return made.at(config.id);
    }
    by_id[config.id] = &config;
    auto client = std::make_shared<CachingClient>(config, cache);
    made[config.id] = client;
    return client;
  };
  Clients c;
  c.vlm = get(vlm);
  c.text = text ? get(*text) : c.vlm;
  if (judge) c.judge = get(*judge);
  return c;
}

void fill_backend_stats(RunStats& stats, const Clients& clients) {
  std::map<std::string, std::shared_ptr<CachingClient>> unique;
  unique[clients.vlm->config().id] = clients.vlm;
  unique[clients.text->config().id] = clients.text;
  if (clients.judge) unique[clients.judge->config().id] = clients.judge;
  for (const auto& [id, client] : unique) {
    auto s = client->stats();
    stats.per_backend[id] = s;
    stats.backend_calls += s.backend_calls;
    stats.cache_hits += s.cache_hits;
  }
}

// Chain lookup/build with a per-sample lock so a sample that is both
// evaluated and used as a text-shuffle donor is only generated once.
class ChainStore {
 public:
  ChainStore(std::filesystem::path run_dir, ChainKind kind, Clients clients,
             PromptTemplates templates)
      : run_dir_(std::move(run_dir)),
        kind_(kind),
        clients_(std::move(clients)),
        templates_(templates),
        fingerprint_(kind == ChainKind::vcot
                         ? generator_fingerprint(clients_.vlm->config(),
                                                 clients_.text->config(), templates_)
                         : generator_fingerprint(clients_.vlm->config(), std::nullopt,
                                                 templates_)) {}

  const std::string& fingerprint() const { return fingerprint_; }

  bool stored(const std::string& sample_id) const {
    return load_chain(run_dir_, sample_id, fingerprint_).has_value();
  }

  InfillChain get(const VideoSample& sample) {
    std::lock_guard<std::mutex> lock(lock_for(sample.id));
    if (auto chain = load_chain(run_dir_, sample.id, fingerprint_)) return *chain;
    InfillChain chain = kind_ == ChainKind::vcot
                            ? build_infill_chain(*clients_.vlm, *clients_.text, sample,
                                                 templates_)
                            : build_caption_chain(*clients_.vlm, sample, templates_);
    save_chain(run_dir_, chain);
    return chain;
  }

 private:
  std::mutex& lock_for(const std::string& sample_id) {
    std::lock_guard<std::mutex> lock(map_mu_);
    return locks_[sample_id];
  }

  std::filesystem::path run_dir_;
  ChainKind kind_;
  Clients clients_;
  PromptTemplates templates_;
  std::string fingerprint_;
  std::mutex map_mu_;
  std::map<std::string, std::mutex> locks_;
};

int exit_code_for(bool exhausted, std::size_t failures) {
  if (exhausted) return kExitBackendExhausted;
  if (failures) return kExitPartial;
  return kExitOk;
}

bool is_transport_failure(const std::exception& e) {
  if (dynamic_cast<const TransportError*>(&e)) return true;
  if (auto* aborted = dynamic_cast<const ChainAbortedError*>(&e)) return aborted->transport();
  return false;
}

void write_stats(const std::filesystem::path& run_dir, const RunStats& stats,
                 const std::vector<std::pair<std::string, std::string>>& failures) {
  nlohmann::json j = stats.to_json();
  nlohmann::json jf = nlohmann::json::array();
  for (const auto& [id, error] : failures) jf.push_back({{"sample_id", id}, {"error", error}});
  j["failures"] = jf;
  util::atomic_write_file(run_dir / "stats.json", j.dump(2) + "\n");
}

}  // namespace

RunResult run_infill(const InfillOptions& options) {
  options.sampling.validate();
  options.templates.validate();
  std::filesystem::create_directories(options.run_dir);

  Manifest manifest = load_manifest(options.manifest_path);
  auto loaded = load_samples(manifest, options.sampling, options.extractor,
                             options.run_dir / "frames", options.limit);
  auto cache = std::make_shared<ResponseCache>(
      ResponseCache::resolve_root(options.cache_dir, options.run_dir));
  auto clients = build_clients(options.vlm, options.text, std::nullopt, cache);
  ChainStore chains(options.run_dir, options.kind, clients, options.templates);

  RunResult result;
  result.failures = loaded.failures;
  std::mutex failures_mu;
  std::atomic<bool> stop{false};
  std::atomic<bool> exhausted{false};
  std::atomic<long long> done{0};
  std::atomic<long long> skipped{0};

  parallel_for(loaded.samples.size(), options.workers, stop, [&](std::size_t i) {
    const auto& sample = loaded.samples[i];
    try {
      if (chains.stored(sample.id)) {
        ++skipped;
        return;
      }
      chains.get(sample);
      ++done;
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(failures_mu);
      result.failures.emplace_back(sample.id, e.what());
      if (is_transport_failure(e)) {
        exhausted = true;
        stop = true;
      }
    }
  });

  fill_backend_stats(result.stats, clients);
  result.stats.samples_total = static_cast<long long>(loaded.samples.size()) +
                               static_cast<long long>(loaded.failures.size());
  result.stats.samples_done = done.load();
  result.stats.samples_skipped = skipped.load();
  result.stats.samples_failed = static_cast<long long>(result.failures.size());
  write_stats(options.run_dir, result.stats, result.failures);
  result.exit_code = exit_code_for(exhausted.load(), result.failures.size());
  return result;
}

RunResult run_eval(const EvalOptions& options) {
  options.condition.validate();
  options.templates.validate();
  if (!options.dry_run) std::filesystem::create_directories(options.run_dir);

  Manifest manifest = load_manifest(options.manifest_path);
  auto loaded = load_samples(manifest, options.condition.sampling, options.extractor,
                             options.run_dir / "frames", options.limit);
  if (loaded.samples.empty())
    throw EmptyInputError("no loadable samples in " + options.manifest_path.string());

  auto cache_root = ResponseCache::resolve_root(options.cache_dir, options.run_dir);
  auto cache = std::make_shared<ResponseCache>(cache_root);
  auto clients = build_clients(options.vlm, options.text, options.judge, cache);

  const bool need_chain = options.condition.mode != Mode::base;
  const ChainKind kind =
      options.condition.mode == Mode::captions ? ChainKind::caption : ChainKind::vcot;
  ChainStore chains(options.run_dir, kind, clients, options.templates);

  // Donor assignment for the shuffle diagnostics, persisted for exact replay.
  std::map<std::string, const VideoSample*> by_id;
  for (const auto& s : loaded.samples) by_id[s.id] = &s;
  DonorMap donors;
  if (options.condition.perturbation != Perturbation::none) {
    auto map_path = options.run_dir / "donor_map.json";
    if (std::filesystem::exists(map_path)) {
      donors = load_donor_map(options.run_dir);
    } else {
      std::vector<std::string> ids;
      for (const auto& s : loaded.samples) ids.push_back(s.id);
      donors = make_donor_map(ids, options.condition.seed);
      if (!options.dry_run) save_donor_map(options.run_dir, donors);
    }
  }

  auto records_path = options.run_dir / "records.jsonl";
  std::set<std::string> recorded;
  for (const auto& r : load_records(records_path)) recorded.insert(r.sample_id);

  std::vector<const VideoSample*> tasks;
  long long resumed = 0;
  for (const auto& s : loaded.samples) {
    if (recorded.count(s.id)) {
      ++resumed;
      continue;
    }
    tasks.push_back(&s);
  }

  RunResult result;
  result.failures = loaded.failures;

  if (options.dry_run) {
    long long chain_calls = 0;
    long long chains_missing = 0;
    for (const auto* s : tasks) {
      if (!need_chain) continue;
      std::vector<const VideoSample*> needed = {s};
      if (options.condition.perturbation == Perturbation::text_shuffle) {
        auto it = by_id.find(donors.donor_of(s->id));
        if (it != by_id.end()) needed.push_back(it->second);
      }
      for (const auto* n : needed) {
        if (chains.stored(n->id)) continue;
        long long per = kind == ChainKind::vcot
                            ? 3 * (static_cast<long long>(n->frames.size()) - 1)
                            : static_cast<long long>(n->frames.size());
        chain_calls += per;
        ++chains_missing;
      }
    }
    result.plan = {{"samples", loaded.samples.size()},
                   {"resumed", resumed},
                   {"pending", tasks.size()},
                   {"mode", to_string(options.condition.mode)},
                   {"perturbation", to_string(options.condition.perturbation)},
                   {"chains_missing", chains_missing},
                   {"planned_chain_calls", chain_calls},
                   {"planned_answer_calls", tasks.size()},
                   {"cache_dir", cache_root.string()}};
    result.stats.samples_total = static_cast<long long>(loaded.samples.size()) +
                                 static_cast<long long>(loaded.failures.size());
    result.stats.samples_skipped = resumed;
    result.exit_code = result.failures.empty() ? kExitOk : kExitPartial;
    return result;
  }

  // Provenance: effective config echo + manifest snapshot.
  nlohmann::json echo{{"manifest", options.manifest_path.string()},
                      {"run_dir", options.run_dir.string()},
                      {"condition", nlohmann::json(options.condition)},
                      {"backends", nlohmann::json::object()},
                      {"templates", options.templates.to_json()},
                      {"workers", options.workers},
                      {"cache_dir", cache_root.string()}};
  echo["backends"]["vlm"] = options.vlm.to_json();
  if (options.text) echo["backends"]["text"] = options.text->to_json();
  if (options.judge) echo["backends"]["judge"] = options.judge->to_json();
  if (options.limit) echo["limit"] = *options.limit;
  util::atomic_write_file(options.run_dir / "config.json", echo.dump(2) + "\n");
  save_manifest(manifest, options.run_dir / "manifest.jsonl");

  OrderedRecordWriter writer(records_path);
  std::mutex failures_mu;
  std::atomic<bool> stop{false};
  std::atomic<bool> exhausted{false};
  std::atomic<long long> done{0};

  parallel_for(tasks.size(), options.workers, stop, [&](std::size_t i) {
    const VideoSample& sample = *tasks[i];
    try {
      std::optional<InfillChain> chain;
      if (need_chain) chain = chains.get(sample);

      VideoSample eval_sample = sample;
      std::optional<InfillChain> eval_chain = chain;
      if (options.condition.perturbation == Perturbation::visual_shuffle) {
        auto it = by_id.find(donors.donor_of(sample.id));
        if (it == by_id.end())
          throw KeyMismatchError("donor " + donors.donor_of(sample.id) +
                                 " of sample " + sample.id + " was not loaded");
        eval_sample = visual_shuffle(sample, *it->second);
      } else if (options.condition.perturbation == Perturbation::text_shuffle) {
        auto it = by_id.find(donors.donor_of(sample.id));
        if (it == by_id.end())
          throw KeyMismatchError("donor " + donors.donor_of(sample.id) +
                                 " of sample " + sample.id + " was not loaded");
        eval_chain = text_shuffle(sample, *chain, chains.get(*it->second));
      }

      auto prompt = assemble(eval_sample, need_chain ? eval_chain : std::nullopt,
                             options.condition, options.templates);
      auto completion = clients.vlm->complete_prompt(prompt);
      auto extraction = extract_answer(completion.response, sample.question, sample.options,
                                       clients.judge.get(), options.templates);

      EvalRecord record;
      record.sample_id = sample.id;
      record.condition = options.condition;
      record.raw_response = completion.response;
      record.extracted_index = extraction.index;
      record.extraction_method = extraction.method;
      if (sample.gold_index)
        record.correct = score_record(extraction.index, *sample.gold_index).correct;
      record.request_fingerprints.push_back(completion.fingerprint);
      for (const auto& fp : extraction.judge_fingerprints)
        record.request_fingerprints.push_back(fp);

      writer.deliver(i, to_jsonl_line(nlohmann::json(record)));
      ++done;
    } catch (const std::exception& e) {
      writer.deliver(i, std::nullopt);
      std::lock_guard<std::mutex> lock(failures_mu);
      result.failures.emplace_back(sample.id, e.what());
      if (is_transport_failure(e)) {
        exhausted = true;
        stop = true;
      }
    }
  });

  fill_backend_stats(result.stats, clients);
  result.stats.samples_total = static_cast<long long>(loaded.samples.size()) +
                               static_cast<long long>(loaded.failures.size());
  result.stats.samples_done = done.load();
  result.stats.samples_skipped = resumed;
  result.stats.samples_failed = static_cast<long long>(result.failures.size());
  auto all_records = load_records(records_path);
  for (const auto& r : all_records) {
    if (r.correct.value_or(false)) ++result.stats.correct;
    if (!r.extracted_index) ++result.stats.invalid;
  }
  write_stats(options.run_dir, result.stats, result.failures);
  result.exit_code = exit_code_for(exhausted.load(), result.failures.size());
  return result;
}

RunResult run_raven(const RavenOptions& options) {
  options.templates.validate();
  if (!options.dry_run) std::filesystem::create_directories(options.run_dir);

  auto puzzles = load_raven(options.raven_root, options.categories);
  if (puzzles.empty()) throw EmptyInputError("no puzzles under " + options.raven_root.string());
  if (options.limit && *options.limit >= 0 &&
      puzzles.size() > static_cast<std::size_t>(*options.limit))
    puzzles.resize(static_cast<std::size_t>(*options.limit));

  auto cache_root = ResponseCache::resolve_root(options.cache_dir, options.run_dir);
  auto cache = std::make_shared<ResponseCache>(cache_root);
  auto clients = build_clients(options.vlm, std::nullopt, options.judge, cache);

  // Candidates are addressed by letter; extraction works over these labels.
  std::vector<std::string> letters;
  for (int i = 0; i < 8; ++i) letters.push_back(std::string(1, option_letter(i)));

  Condition condition;  // mode base / no perturbation: puzzles carry no chains

  auto records_path = options.run_dir / "records.jsonl";
  std::set<std::string> recorded;
  for (const auto& r : load_records(records_path)) recorded.insert(r.sample_id);

  std::vector<const RavenPuzzle*> tasks;
  long long resumed = 0;
  for (const auto& p : puzzles) {
    if (recorded.count(p.id)) {
      ++resumed;
      continue;
    }
    tasks.push_back(&p);
  }

  RunResult result;
  if (options.dry_run) {
    result.plan = {{"puzzles", puzzles.size()},
                   {"resumed", resumed},
                   {"planned_answer_calls", tasks.size()},
                   {"cache_dir", cache_root.string()}};
    result.stats.samples_total = static_cast<long long>(puzzles.size());
    result.stats.samples_skipped = resumed;
    return result;
  }

  nlohmann::json echo{{"raven_root", options.raven_root.string()},
                      {"run_dir", options.run_dir.string()},
                      {"backends", {{"vlm", options.vlm.to_json()}}},
                      {"templates", options.templates.to_json()},
                      {"workers", options.workers},
                      {"cache_dir", cache_root.string()}};
  if (options.judge) echo["backends"]["judge"] = options.judge->to_json();
  util::atomic_write_file(options.run_dir / "config.json", echo.dump(2) + "\n");

  OrderedRecordWriter writer(records_path);
  std::mutex failures_mu;
  std::atomic<bool> stop{false};
  std::atomic<bool> exhausted{false};
  std::atomic<long long> done{0};

  parallel_for(tasks.size(), options.workers, stop, [&](std::size_t i) {
    const RavenPuzzle& puzzle = *tasks[i];
    try {
      auto prompt = assemble_raven(puzzle, options.templates);
      auto completion = clients.vlm->complete_prompt(prompt);
      auto extraction = extract_answer(completion.response, options.templates.raven, letters,
                                       clients.judge.get(), options.templates);

      EvalRecord record;
      record.sample_id = puzzle.id;
      record.condition = condition;
      record.raw_response = completion.response;
      record.extracted_index = extraction.index;
      record.extraction_method = extraction.method;
      record.correct = score_record(extraction.index, puzzle.gold_index).correct;
      record.request_fingerprints.push_back(completion.fingerprint);
      for (const auto& fp : extraction.judge_fingerprints)
        record.request_fingerprints.push_back(fp);

      writer.deliver(i, to_jsonl_line(nlohmann::json(record)));
      ++done;
    } catch (const std::exception& e) {
      writer.deliver(i, std::nullopt);
      std::lock_guard<std::mutex> lock(failures_mu);
      result.failures.emplace_back(puzzle.id, e.what());
      if (is_transport_failure(e)) {
        exhausted = true;
        stop = true;
      }
    }
  });

  fill_backend_stats(result.stats, clients);
  result.stats.samples_total = static_cast<long long>(puzzles.size());
  result.stats.samples_done = done.load();
  result.stats.samples_skipped = resumed;
  result.stats.samples_failed = static_cast<long long>(result.failures.size());
  auto all_records = load_records(records_path);
  for (const auto& r : all_records) {
    if (r.correct.value_or(false)) ++result.stats.correct;
    if (!r.extracted_index) ++result.stats.invalid;
  }
  write_stats(options.run_dir, result.stats, result.failures);
  result.exit_code = exit_code_for(exhausted.load(), result.failures.size());
  return result;
}

RunResult run_score(const ScoreOptions& options) {
  options.templates.validate();
  auto records = load_records(options.records_path);
  if (records.empty())
    throw EmptyInputError("no records in " + options.records_path.string());

  Manifest manifest = load_manifest(options.manifest_path);
  std::map<std::string, const ManifestEntry*> entries;
  for (const auto& e : manifest.entries) entries[e.id] = &e;

  auto run_dir = options.records_path.parent_path();
  auto cache = std::make_shared<ResponseCache>(
      ResponseCache::resolve_root(options.cache_dir, run_dir));
  std::shared_ptr<CachingClient> judge;
  if (options.judge) judge = std::make_shared<CachingClient>(*options.judge, cache);

  RunResult result;
  std::string out;
  for (auto& record : records) {
    auto it = entries.find(record.sample_id);
    if (it == entries.end())
      throw KeyMismatchError("record sample " + record.sample_id + " not in manifest " +
                             options.manifest_path.string());
    const auto& entry = *it->second;
    auto extraction = extract_answer(record.raw_response, entry.question, entry.options,
                                     judge.get(), options.templates);
    record.extracted_index = extraction.index;
    record.extraction_method = extraction.method;
    record.correct.reset();
    if (entry.gold_index)
      record.correct = score_record(extraction.index, *entry.gold_index).correct;
    out += to_jsonl_line(nlohmann::json(record));
    out += '\n';

    ++result.stats.samples_total;
    ++result.stats.samples_done;
    if (record.correct.value_or(false)) ++result.stats.correct;
    if (!record.extracted_index) ++result.stats.invalid;
  }
  util::atomic_write_file(options.out_path, out);
  if (judge) {
    auto s = judge->stats();
    result.stats.per_backend[judge->config().id] = s;
    result.stats.backend_calls = s.backend_calls;
    result.stats.cache_hits = s.cache_hits;
  }
  return result;
}

}  // namespace vcot
