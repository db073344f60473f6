#pragma once

// Shared helpers for the test binaries: throwaway directories, tiny valid BMP
// files, manifest/fixture builders and canned mock backend configs.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vcot/backend.hpp"
#include "vcot/types.hpp"

namespace vcot::test {

class TempDir {
 public:
  TempDir() {
    auto base = std::filesystem::temp_directory_path();
    std::mt19937_64 rng(std::random_device{}());
    for (int attempt = 0; attempt < 100; ++attempt) {
      auto candidate = base / ("vcot_test_" + std::to_string(rng()));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path_ = candidate;
        return;
      }
    }
    throw std::runtime_error("could not create a temp directory");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& sub) const { return path_ / sub; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("test write failed: " + path.string());
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("test read failed: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A valid 2x2 24-bit BMP (70 bytes); the seed scrambles the pixel bytes so
// every generated frame is a distinct file with a distinct digest.
inline void write_bmp(const std::filesystem::path& path, std::uint32_t seed) {
  std::string bytes;
  auto put16 = [&](std::uint16_t v) {
    bytes.push_back(static_cast<char>(v & 0xff));
    bytes.push_back(static_cast<char>((v >> 8) & 0xff));
  };
  auto put32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  };
  bytes += "BM";
  put32(70);  // file size
  put16(0);
  put16(0);
  put32(54);  // pixel data offset
  put32(40);  // info header size
  put32(2);   // width
  put32(2);   // height
  put16(1);   // planes
  put16(24);  // bits per pixel
  put32(0);   // no compression
  put32(16);  // pixel data size (two 8-byte rows)
  put32(2835);
  put32(2835);
  put32(0);
  put32(0);
  std::mt19937 rng(seed);
  for (int i = 0; i < 16; ++i) bytes.push_back(static_cast<char>(rng() & 0xff));
  write_file(path, bytes);
}

inline std::string frame_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%06d.bmp", index);
  return buf;
}

// Populates dir with frame_000000.bmp .. frame_%06d(count-1).bmp. The tag
// keeps pixel content distinct across samples.
inline std::filesystem::path make_frames_dir(const std::filesystem::path& dir, int count,
                                             std::uint32_t tag) {
  std::filesystem::create_directories(dir);
  for (int i = 0; i < count; ++i)
    write_bmp(dir / frame_name(i), tag * 7919u + static_cast<std::uint32_t>(i));
  return dir;
}

inline std::vector<std::string> standard_options() {
  return {"cooking a meal", "kicking a ball", "reading a book", "walking a dog",
          "washing dishes"};
}

// A sample whose frames exist on disk, for code paths that embed image bytes.
inline VideoSample disk_sample(const std::filesystem::path& root, const std::string& id,
                               int count, std::uint32_t tag) {
  auto dir = make_frames_dir(root / "frames_src" / id, count, tag);
  VideoSample sample;
  sample.id = id;
  for (int i = 0; i < count; ++i)
    sample.frames.push_back(FrameRef{id, i, (dir / frame_name(i)).string(), i});
  sample.question = "What is the person doing?";
  sample.options = standard_options();
  sample.gold_index = 1;
  return sample;
}

inline nlohmann::json manifest_entry(const std::string& id, const std::string& frames_dir,
                                     int gold = 1,
                                     const std::string& question = "What is the person doing?") {
  return nlohmann::json{{"id", id},
                        {"frames_dir", frames_dir},
                        {"question", question},
                        {"options", standard_options()},
                        {"gold_index", gold}};
}

inline std::filesystem::path write_manifest(const std::filesystem::path& path,
                                            const std::vector<nlohmann::json>& entries) {
  std::string out =
      nlohmann::json{{"benchmark_name", "synthetic"}, {"option_count", 5}}.dump() + "\n";
  for (const auto& e : entries) out += e.dump() + "\n";
  write_file(path, out);
  return path;
}

// One frames dir + manifest entry per sample id, all five-option questions
// answered correctly by the canned "B" response (gold_index 1).
inline std::filesystem::path write_sample_tree(const std::filesystem::path& root,
                                               const std::filesystem::path& manifest_path,
                                               int sample_count, int frames_per_sample) {
  std::vector<nlohmann::json> entries;
  for (int i = 0; i < sample_count; ++i) {
    std::string id = "clip_" + std::to_string(i);
    auto dir = make_frames_dir(root / "frames_src" / id, frames_per_sample,
                               static_cast<std::uint32_t>(1000 + i));
    entries.push_back(manifest_entry(id, dir.string()));
  }
  return write_manifest(manifest_path, entries);
}

// Canned responses covering every request kind a run can issue. The "unique"
// entries append a request-digest suffix, so chain steps stay distinct per
// frame pair while remaining pure functions of the request. Order matters:
// the judge needle must win over the generic answer needle, because judge
// prompts for puzzle records can embed the answer instruction inside the
// quoted question.
inline nlohmann::json standard_fixtures(const std::string& answer = "B") {
  nlohmann::json contains = nlohmann::json::array();
  contains.push_back({{"needle", "You are grading a multiple-choice answer."},
                      {"response", answer}});
  contains.push_back({{"needle", "what do you see in common"},
                      {"response", "a kitchen counter with a knife"},
                      {"unique", true}});
  contains.push_back({{"needle", "Infer one possible intermediate event"},
                      {"response", "the person kicks the ball toward the house"},
                      {"unique", true}});
  contains.push_back({{"needle", "Rephrase the following event description"},
                      {"response", "He kicks the ball toward the house"},
                      {"unique", true}});
  contains.push_back({{"needle", "Describe this image in one sentence."},
                      {"response", "A person stands in a kitchen"},
                      {"unique", true}});
  contains.push_back({{"needle", "Answer with the option's letter"}, {"response", answer}});
  return nlohmann::json{{"contains", contains}};
}

inline std::filesystem::path write_fixtures(const std::filesystem::path& path,
                                            const nlohmann::json& fixtures) {
  write_file(path, fixtures.dump(2) + "\n");
  return path;
}

inline BackendConfig mock_config(const std::string& id, const std::filesystem::path& fixtures,
                                 const std::string& model = "mock-vlm") {
  BackendConfig config;
  config.id = id;
  config.kind = "mock";
  config.model = model;
  config.fixtures_path = fixtures.string();
  return config;
}

// Deterministic prompt-assembly inputs for the golden serializations: frame
// paths and chain strings are fixed, so the assembled prompt depends only on
// the assembly logic under test.
inline VideoSample golden_sample(int frame_count) {
  VideoSample sample;
  sample.id = "golden_n" + std::to_string(frame_count);
  for (int i = 0; i < frame_count; ++i)
    sample.frames.push_back(
        FrameRef{sample.id, i, "frames/" + sample.id + "/" + frame_name(i), 2 * i});
  sample.question = "What is the person most likely doing?";
  sample.options = {"preparing a meal", "kicking a ball", "reading a book", "walking a dog"};
  sample.gold_index = 1;
  return sample;
}

inline InfillChain golden_chain(const std::string& sample_id, ChainKind kind, int frame_count) {
  InfillChain chain;
  chain.sample_id = sample_id;
  chain.kind = kind;
  chain.generator_fingerprint = "golden-fingerprint";
  if (kind == ChainKind::vcot) {
    for (int i = 0; i + 1 < frame_count; ++i) {
      Infill infill;
      infill.pair_index = i;
      infill.common_attributes = "shared scenery " + std::to_string(i);
      infill.raw_event = "raw bridging event " + std::to_string(i);
      infill.caption = "Bridge event " + std::to_string(i) + ".";
      chain.items.push_back(std::move(infill));
    }
  } else {
    for (int i = 0; i < frame_count; ++i)
      chain.captions.push_back("Caption " + std::to_string(i) + ".");
  }
  return chain;
}

}  // namespace vcot::test
