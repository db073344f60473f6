// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Every check runs against the scripted mock backend; the frozen
// accuracy fixtures pin the report arithmetic bit-for-bit.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "vcot/cache.hpp"
#include "vcot/client.hpp"
#include "vcot/errors.hpp"
#include "vcot/infill.hpp"
#include "vcot/judge.hpp"
#include "vcot/perturb.hpp"
#include "vcot/prompt.hpp"
#include "vcot/report.hpp"
#include "vcot/runner.hpp"
#include "vcot/sampling.hpp"
#include "vcot/templates.hpp"
#include "vcot/util.hpp"

using namespace vcot;

namespace {

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw CheckFailure(message);
}

template <typename T>
void require_eq(const T& got, const T& want, const std::string& what) {
  if (got == want) return;
  std::ostringstream ss;
  ss << what << ": got " << got << ", want " << want;
  throw CheckFailure(ss.str());
}

Aggregate agg(long long correct, long long total) {
  Aggregate a;
  a.correct = correct;
  a.total = total;
  return a;
}

void check_cells(const ReportTable& table,
                 const std::vector<std::vector<std::string>>& expected) {
  require(table.rows.size() == expected.size(), table.title + ": row count mismatch");
  for (std::size_t r = 0; r < expected.size(); ++r) {
    require(table.rows[r].cells.size() == expected[r].size(),
            table.title + " row " + table.rows[r].label + ": cell count mismatch");
    for (std::size_t c = 0; c < expected[r].size(); ++c)
      require_eq(table.rows[r].cells[c].text(), expected[r][c],
                 table.title + " row " + table.rows[r].label + " column " + table.columns[c]);
  }
}

int failures = 0;

void criterion(int number, const std::string& label, std::optional<double> budget_s,
               const std::function<void()>& body) {
  auto start = std::chrono::steady_clock::now();
  std::string failure;
  try {
    body();
  } catch (const std::exception& e) {
    failure = e.what();
  } catch (...) {
    failure = "unknown error";
  }
  double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (failure.empty() && budget_s && elapsed > *budget_s) {
    std::ostringstream ss;
    ss << "over time budget (" << elapsed << "s > " << *budget_s << "s)";
    failure = ss.str();
  }
  char timing[32];
  std::snprintf(timing, sizeof(timing), "%.2fs", elapsed);
  if (failure.empty()) {
    std::cout << "PASS criterion " << number << ": " << label << " (" << timing << ")\n";
  } else {
    std::cout << "FAIL criterion " << number << ": " << label << ": " << failure << "\n";
    ++failures;
  }
  std::cout.flush();
}

// ---- criterion bodies ------------------------------------------------------

void frozen_table_arithmetic() {
  std::vector<std::string> models = {"model-1", "model-2", "model-3", "model-4"};

  // main comparison at two frame counts: second column carries the delta
  auto stride1 = delta_table(
      "main comparison, stride 1", "Model", models, {"base", "with-infills"},
      {{agg(220, 500), agg(257, 500)},
       {agg(235, 500), agg(243, 500)},
       {agg(246, 500), agg(277, 500)},
       {agg(245, 500), agg(257, 500)}},
      {-1, 0});
  check_cells(stride1, {{"44.0", "51.4 (+7.4)"},
                        {"47.0", "48.6 (+1.6)"},
                        {"49.2", "55.4 (+6.2)"},
                        {"49.0", "51.4 (+2.4)"}});

  auto stride1_n2 = delta_table(
      "main comparison, two frames", "Model", models, {"base", "with-infills"},
      {{agg(192, 500), agg(202, 500)},
       {agg(223, 500), agg(212, 500)},
       {agg(187, 500), agg(213, 500)},
       {agg(229, 500), agg(245, 500)}},
      {-1, 0});
  check_cells(stride1_n2, {{"38.4", "40.4 (+2.0)"},
                           {"44.6", "42.4 (-2.2)"},
                           {"37.4", "42.6 (+5.2)"},
                           {"45.8", "49.0 (+3.2)"}});

  // shuffle diagnostics: both perturbed columns measured against the intact one
  auto shuffles = delta_table(
      "shuffle diagnostics", "Model", models,
      {"with-infills", "visual-shuffle", "text-shuffle"},
      {{agg(257, 500), agg(199, 500), agg(210, 500)},
       {agg(243, 500), agg(208, 500), agg(235, 500)},
       {agg(277, 500), agg(259, 500), agg(225, 500)},
       {agg(257, 500), agg(232, 500), agg(227, 500)}},
      {-1, 0, 0});
  check_cells(shuffles, {{"51.4", "39.8 (-11.6)", "42.0 (-9.4)"},
                         {"48.6", "41.6 (-7.0)", "47.0 (-1.6)"},
                         {"55.4", "51.8 (-3.6)", "45.0 (-10.4)"},
                         {"51.4", "46.4 (-5.0)", "45.4 (-6.0)"}});

  // transitional infills vs plain per-frame captions
  auto captions = delta_table(
      "infills vs captions", "Model", models, {"base", "captions", "with-infills"},
      {{agg(220, 500), agg(241, 500), agg(257, 500)},
       {agg(235, 500), agg(225, 500), agg(243, 500)},
       {agg(246, 500), agg(273, 500), agg(277, 500)},
       {agg(245, 500), agg(250, 500), agg(257, 500)}},
      {-1, -1, 1});
  check_cells(captions, {{"44.0", "48.2", "51.4 (+3.2)"},
                         {"47.0", "45.0", "48.6 (+3.6)"},
                         {"49.2", "54.6", "55.4 (+0.8)"},
                         {"49.0", "50.0", "51.4 (+1.4)"}});

  // frame count / stride sweep; one setting was measured over 1000 answers
  std::vector<std::string> settings;
  for (int i = 1; i <= 8; ++i) settings.push_back("setting-" + std::to_string(i));
  auto sweep = delta_table(
      "sampling sweep", "Setting", settings, {"base", "with-infills"},
      {{agg(229, 500), agg(225, 500)},
       {agg(235, 500), agg(243, 500)},
       {agg(181, 500), agg(187, 500)},
       {agg(184, 500), agg(211, 500)},
       {agg(246, 500), agg(553, 1000)},
       {agg(245, 500), agg(257, 500)},
       {agg(199, 500), agg(215, 500)},
       {agg(199, 500), agg(227, 500)}},
      {-1, 0});
  check_cells(sweep, {{"45.8", "45.0 (-0.8)"},
                      {"47.0", "48.6 (+1.6)"},
                      {"36.2", "37.4 (+1.2)"},
                      {"36.8", "42.2 (+5.4)"},
                      {"49.2", "55.3 (+6.1)"},
                      {"49.0", "51.4 (+2.4)"},
                      {"39.8", "43.0 (+3.2)"},
                      {"39.8", "45.4 (+5.6)"}});
}

void puzzle_category_averages() {
  const std::vector<std::string> categories = {"center",      "dist_4",     "dist_9", "in_out",
                                               "indist4_out", "left_right", "up_down"};
  auto make_records = [&](const std::vector<long long>& counts) {
    std::vector<EvalRecord> records;
    for (std::size_t c = 0; c < categories.size(); ++c) {
      for (int i = 0; i < 500; ++i) {
        EvalRecord r;
        r.sample_id = categories[c] + "/p_" + std::to_string(i);
        r.raw_response = "A";
        r.extracted_index = 0;
        r.extraction_method = ExtractionMethod::rule;
        r.correct = i < counts[c];
        records.push_back(std::move(r));
      }
    }
    return records;
  };
  auto check = [&](const std::vector<long long>& counts,
                   const std::vector<std::string>& expected_cells, const std::string& label) {
    auto table = raven_table(make_records(counts), label);
    require(table.columns.size() == 8 && table.columns.back() == "Avg.",
            label + ": unexpected column layout");
    check_cells(table, {expected_cells});
  };
  check({74, 72, 76, 58, 66, 76, 72},
        {"14.8", "14.4", "15.2", "11.6", "13.2", "15.2", "14.4", "14.1"}, "image-model");
  check({78, 80, 79, 69, 85, 70, 71},
        {"15.6", "16.0", "15.8", "13.8", "17.0", "14.0", "14.2", "15.2"}, "video-model");
}

void mock_run_call_accounting() {
  test::TempDir tmp;
  auto manifest = test::write_sample_tree(tmp.path(), tmp / "manifest.jsonl", 20, 5);
  auto fixtures = test::write_fixtures(tmp / "fx.json", test::standard_fixtures());

  EvalOptions options;
  options.manifest_path = manifest;
  options.run_dir = tmp / "cold";
  options.condition.mode = Mode::vcot;
  options.condition.sampling = SamplingSpec{5, 1};
  options.vlm = test::mock_config("vlm", fixtures);
  options.cache_dir = tmp / "cache";
  options.workers = 2;

  auto cold = run_eval(options);
  require(cold.exit_code == 0, "cold run failed: " +
                                   (cold.failures.empty() ? std::string("?")
                                                          : cold.failures.front().second));
  require_eq(cold.stats.samples_done, 20LL, "cold run samples done");
  // 12 chain-building calls plus 1 answer call per sample
  require_eq(cold.stats.backend_calls, 260LL, "cold run backend calls");

  options.run_dir = tmp / "warm";
  auto warm = run_eval(options);
  require(warm.exit_code == 0, "warm run failed");
  require_eq(warm.stats.backend_calls, 0LL, "warm run backend calls");
  require_eq(warm.stats.cache_hits, 260LL, "warm run cache hits");
  require(test::slurp(tmp / "warm" / "records.jsonl") ==
              test::slurp(tmp / "cold" / "records.jsonl"),
          "warm rerun records differ from the cold run");
}

void chain_shape_invariants() {
  test::TempDir tmp;
  auto fixtures = test::write_fixtures(tmp / "fx.json", test::standard_fixtures());
  auto cache = std::make_shared<ResponseCache>(tmp / "cache");
  CachingClient client(test::mock_config("vlm", fixtures), cache);
  PromptTemplates templates;

  std::mt19937_64 rng(20250816u);
  for (int t = 0; t < 100; ++t) {
    int n = 2 + static_cast<int>(util::uniform_below(rng, 15));  // 2..16
    auto sample = test::disk_sample(tmp.path(), "p_" + std::to_string(t), n,
                                    5000u + static_cast<std::uint32_t>(t));
    auto infills = build_infill_chain(client, client, sample, templates);
    require_eq(static_cast<int>(infills.items.size()), n - 1,
               "trial " + std::to_string(t) + ": infill count for n=" + std::to_string(n));
    infills.validate(n);
    auto captions = build_caption_chain(client, sample, templates);
    require_eq(static_cast<int>(captions.captions.size()), n,
               "trial " + std::to_string(t) + ": caption count for n=" + std::to_string(n));
    captions.validate(n);
  }
}

void interleaving_goldens() {
  const std::filesystem::path golden_dir = VCOT_GOLDEN_DIR;
  const PromptTemplates templates;
  for (int n : {2, 5, 10}) {
    for (Mode mode : {Mode::base, Mode::vcot, Mode::captions}) {
      auto sample = test::golden_sample(n);
      std::optional<InfillChain> chain;
      if (mode == Mode::vcot) chain = test::golden_chain(sample.id, ChainKind::vcot, n);
      if (mode == Mode::captions) chain = test::golden_chain(sample.id, ChainKind::caption, n);
      Condition condition;
      condition.mode = mode;
      condition.sampling = SamplingSpec{n, 1};
      auto prompt = assemble(sample, chain, condition, templates);
      auto serialized = nlohmann::json(prompt).dump(2) + "\n";
      auto path = golden_dir / ("prompt_" + to_string(mode) + "_n" + std::to_string(n) + ".json");
      require(std::filesystem::exists(path), "missing golden file " + path.string());
      require(test::slurp(path) == serialized,
              "assembled prompt differs from golden " + path.filename().string());
    }
  }
}

void donor_shuffle_properties() {
  auto make_sample = [](const std::string& id) {
    VideoSample s;
    s.id = id;
    for (int i = 0; i < 3; ++i)
      s.frames.push_back(FrameRef{id, i, "frames/" + id + "/" + test::frame_name(i), 2 * i});
    s.question = "What happens in " + id + "?";
    s.options = test::standard_options();
    s.gold_index = 1;
    return s;
  };
  auto make_chain = [](const std::string& id) {
    InfillChain c;
    c.sample_id = id;
    c.kind = ChainKind::vcot;
    c.generator_fingerprint = "property-fingerprint";
    for (int i = 0; i < 2; ++i) {
      Infill f;
      f.pair_index = i;
      f.common_attributes = id + " common " + std::to_string(i);
      f.raw_event = id + " raw event " + std::to_string(i);
      f.caption = id + " bridge " + std::to_string(i) + ".";
      c.items.push_back(std::move(f));
    }
    return c;
  };

  std::mt19937_64 rng(6021023u);
  for (int t = 0; t < 200; ++t) {
    int m = 2 + static_cast<int>(util::uniform_below(rng, 49));  // 2..50
    auto seed = static_cast<long long>(rng());
    std::vector<std::string> ids;
    for (int i = 0; i < m; ++i) ids.push_back("s" + std::to_string(i));

    auto map = make_donor_map(ids, seed);
    require_eq(static_cast<int>(map.assignment.size()), m,
               "trial " + std::to_string(t) + ": assignment size");
    map.validate();  // fixed-point-free bijection over the id set
    auto replay = make_donor_map(ids, seed);
    require(replay.assignment == map.assignment,
            "trial " + std::to_string(t) + ": donor map is not seed-reproducible");

    std::map<std::string, VideoSample> samples;
    std::map<std::string, InfillChain> chains;
    for (const auto& id : ids) {
      samples.emplace(id, make_sample(id));
      chains.emplace(id, make_chain(id));
    }
    for (const auto& id : ids) {
      const auto& donor = map.donor_of(id);
      const auto before = nlohmann::json(samples.at(id)).dump();

      auto shuffled = visual_shuffle(samples.at(id), samples.at(donor));
      auto got = nlohmann::json(shuffled);
      auto own = nlohmann::json(samples.at(id));
      auto donated = nlohmann::json(samples.at(donor));
      require(got.at("frames") == donated.at("frames"),
              "trial " + std::to_string(t) + ": visual shuffle did not take donor frames");
      got.erase("frames");
      own.erase("frames");
      require(got.dump() == own.dump(),
              "trial " + std::to_string(t) + ": visual shuffle changed the text side");

      auto swapped = text_shuffle(samples.at(id), chains.at(id), chains.at(donor));
      auto expected = nlohmann::json(chains.at(donor));
      expected["sample_id"] = id;
      require(nlohmann::json(swapped).dump() == expected.dump(),
              "trial " + std::to_string(t) + ": text shuffle is not the re-tagged donor chain");
      require(nlohmann::json(samples.at(id)).dump() == before,
              "trial " + std::to_string(t) + ": text shuffle touched the frame side");
    }
  }
}

void sampling_oracle() {
  auto expect = [](int total, int count, int stride, const std::vector<int>& want) {
    auto got = sample_frame_indices(total, SamplingSpec{count, stride});
    if (got != want) {
      std::ostringstream ss;
      ss << "indices for (" << total << "," << count << "," << stride << "): got [";
      for (std::size_t i = 0; i < got.size(); ++i) ss << (i ? "," : "") << got[i];
      ss << "]";
      throw CheckFailure(ss.str());
    }
  };
  expect(100, 5, 1, {0, 25, 50, 74, 99});
  expect(100, 5, 2, {0, 12, 25, 37, 50});
  expect(100, 10, 1, {0, 11, 22, 33, 44, 55, 66, 77, 88, 99});
  expect(5, 5, 1, {0, 1, 2, 3, 4});
  expect(181, 10, 2, {0, 10, 20, 30, 40, 50, 60, 70, 80, 90});

  bool threw = false;
  try {
    sample_frame_indices(5, SamplingSpec{5, 2});
  } catch (const InsufficientFramesError&) {
    threw = true;
  }
  require(threw, "(5,5,2) should not be samplable");

  // random sweep: whatever is accepted must be strictly increasing and in range
  std::mt19937_64 rng(97u);
  int checked = 0;
  while (checked < 500) {
    int total = 2 + static_cast<int>(util::uniform_below(rng, 2000));
    SamplingSpec spec{2 + static_cast<int>(util::uniform_below(rng, 15)),
                      1 + static_cast<int>(util::uniform_below(rng, 3))};
    std::vector<int> got;
    try {
      got = sample_frame_indices(total, spec);
    } catch (const InsufficientFramesError&) {
      continue;
    }
    ++checked;
    require(static_cast<int>(got.size()) == spec.count, "sampled index count mismatch");
    require(got.front() == 0, "first sampled index must be 0");
    for (std::size_t i = 0; i + 1 < got.size(); ++i)
      require(got[i] < got[i + 1], "sampled indices must be strictly increasing");
    require(got.back() < total, "sampled index out of range");
  }
}

void extraction_corpus() {
  auto corpus_path = std::filesystem::path(VCOT_TEST_DATA_DIR) / "extraction_corpus.jsonl";
  int total = 0;
  int agree = 0;
  for (const auto& line : util::read_lines(corpus_path)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    auto options = j.at("options").get<std::vector<std::string>>();
    std::optional<int> expected;
    if (!j.at("expected").is_null()) expected = j.at("expected").get<int>();
    auto got = extract_rule(j.at("raw").get<std::string>(), options);
    if (got) require(*got >= 0 && *got < static_cast<int>(options.size()),
                     "corpus line " + std::to_string(total + 1) + ": index out of range");
    ++total;
    if (got == expected) ++agree;
  }
  require_eq(total, 40, "corpus size");
  require(agree * 100 >= total * 95,
          "agreement below 95%: " + std::to_string(agree) + "/" + std::to_string(total));

  const std::vector<std::string> pool = {
      "cooking a meal",  "kicking a ball",   "reading a book", "walking a dog",
      "washing dishes",  "painting a fence", "riding a bike",  "planting seeds",
      "fixing an engine", "playing chess"};
  const std::vector<std::string> words = {
      "the",  "answer",   "is",    "maybe", "clearly", "A and B", "**D**", "(A)",
      "final", "option",  "答案",  "likely", "because", "frames",  "shows", "therefore",
      "no",   "yes",      "none",  "Z."};
  std::mt19937_64 rng(424242u);
  for (int i = 0; i < 10000; ++i) {
    std::size_t option_count = 2 + util::uniform_below(rng, 7);
    std::vector<std::string> options;
    for (std::size_t k = 0; k < option_count; ++k)
      options.push_back(pool[util::uniform_below(rng, pool.size())]);
    std::string raw;
    std::size_t tokens = 1 + util::uniform_below(rng, 12);
    for (std::size_t k = 0; k < tokens; ++k) {
      if (k) raw += ' ';
      if (util::uniform_below(rng, 4) == 0)
        raw += options[util::uniform_below(rng, options.size())];
      else
        raw += words[util::uniform_below(rng, words.size())];
    }
    auto got = extract_rule(raw, options);
    if (got)
      require(*got >= 0 && *got < static_cast<int>(options.size()),
              "fuzz trial " + std::to_string(i) + ": index out of range for \"" + raw + "\"");
  }
}

void replay_determinism() {
  test::TempDir tmp;
  std::vector<nlohmann::json> entries;
  for (int i = 0; i < 3; ++i) {
    std::string id = "clip_" + std::to_string(i);
    auto dir = test::make_frames_dir(tmp / "frames_src" / id, 5,
                                     1000u + static_cast<std::uint32_t>(i));
    auto question =
        i == 2 ? std::string("What happens here (tricky clip)?")
               : std::string("What is the person doing?");
    entries.push_back(test::manifest_entry(id, dir.string(), 1, question));
  }
  auto manifest = test::write_manifest(tmp / "manifest.jsonl", entries);

  // the tricky clip draws an evasive answer, forcing the judge for it alone
  nlohmann::json contains = nlohmann::json::array();
  contains.push_back(
      {{"needle", "You are grading a multiple-choice answer."}, {"response", "C"}});
  contains.push_back({{"needle", "tricky clip"},
                      {"response", "Well, that is hard to tell from these frames."}});
  contains.push_back({{"needle", "Answer with the option's letter"}, {"response", "B"}});
  auto fixtures = test::write_fixtures(tmp / "fx.json", {{"contains", contains}});

  EvalOptions options;
  options.manifest_path = manifest;
  options.run_dir = tmp / "run";
  options.vlm = test::mock_config("vlm", fixtures);
  options.judge = test::mock_config("judge", fixtures, "mock-judge");
  auto run = run_eval(options);
  require(run.exit_code == 0, "judged run failed");
  require_eq(run.stats.backend_calls, 4LL, "judged run backend calls");

  auto original = test::slurp(tmp / "run" / "records.jsonl");
  auto original_tenths = aggregate(load_records(tmp / "run" / "records.jsonl")).tenths();

  ScoreOptions score;
  score.records_path = tmp / "run" / "records.jsonl";
  score.manifest_path = manifest;
  score.out_path = tmp / "rescored.jsonl";
  score.judge = options.judge;
  auto rescored = run_score(score);
  require(rescored.exit_code == 0, "rescore failed");
  require_eq(rescored.stats.backend_calls, 0LL, "rescore backend calls");
  require_eq(rescored.stats.cache_hits, 1LL, "rescore judge cache hits");
  require_eq(accuracy_tenths(rescored.stats.correct, rescored.stats.samples_total),
             original_tenths, "rescored accuracy");
  require(test::slurp(tmp / "rescored.jsonl") == original,
          "rescored records differ from the original run");
}

}  // namespace

int main() {
  unsetenv("VCOT_CACHE_DIR");
  criterion(1, "report tables reproduce the frozen accuracy fixtures", 1.0,
            frozen_table_arithmetic);
  criterion(2, "puzzle category table reproduces the frozen averages", 1.0,
            puzzle_category_averages);
  criterion(3, "mock run call accounting and warm-cache rerun", 10.0, mock_run_call_accounting);
  criterion(4, "chain shape invariants over random samples", std::nullopt,
            chain_shape_invariants);
  criterion(5, "prompt interleaving matches the golden serializations", std::nullopt,
            interleaving_goldens);
  criterion(6, "donor maps are seeded derangements and shuffles stay one-sided", std::nullopt,
            donor_shuffle_properties);
  criterion(7, "frame sampling matches the hand-evaluated index table", std::nullopt,
            sampling_oracle);
  criterion(8, "rule extraction agrees with the labeled corpus and survives fuzzing",
            std::nullopt, extraction_corpus);
  criterion(9, "rescoring replays from the cache with identical results", std::nullopt,
            replay_determinism);
  return failures == 0 ? 0 : 1;
}
