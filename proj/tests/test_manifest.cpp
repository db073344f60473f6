#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "vcot/errors.hpp"
#include "vcot/manifest.hpp"

using namespace vcot;

namespace {

std::string entry_line(const std::string& id, int options = 5, int gold = 1,
                       bool video = false, bool frames = true) {
  nlohmann::json j{{"id", id}, {"question", "What happens?"}};
  nlohmann::json opts = nlohmann::json::array();
  for (int i = 0; i < options; ++i) opts.push_back("choice " + std::to_string(i));
  j["options"] = opts;
  if (gold >= 0) j["gold_index"] = gold;
  if (video) j["video_path"] = "/videos/" + id + ".mp4";
  if (frames) j["frames_dir"] = "/frames/" + id;
  return j.dump();
}

}  // namespace

TEST_CASE("well-formed manifest with a metadata header") {
  test::TempDir tmp;
  auto path = tmp / "manifest.jsonl";
  test::write_file(path, nlohmann::json{{"benchmark_name", "egoqa"}, {"option_count", 5}}.dump() +
                             "\n" + entry_line("v1") + "\n\n" + entry_line("v2") + "\n");
  auto m = load_manifest(path);
  CHECK(m.metadata.benchmark_name == "egoqa");
  CHECK(m.metadata.option_count == 5);
  REQUIRE(m.entries.size() == 2);
  CHECK(m.entries[0].id == "v1");
  CHECK(m.entries[0].frames_dir == "/frames/v1");
  CHECK_FALSE(m.entries[0].video_path.has_value());
  CHECK(m.entries[0].gold_index == 1);
  CHECK(m.entries[1].id == "v2");
}

TEST_CASE("headerless manifest infers option count from the first entry") {
  test::TempDir tmp;
  auto path = tmp / "manifest.jsonl";
  test::write_file(path, entry_line("a", 4) + "\n" + entry_line("b", 4) + "\n");
  auto m = load_manifest(path);
  CHECK(m.metadata.benchmark_name == "unknown");
  CHECK(m.metadata.option_count == 4);
}

TEST_CASE("gold index is optional, video entries work") {
  test::TempDir tmp;
  auto path = tmp / "manifest.jsonl";
  test::write_file(path, entry_line("a", 5, -1, true, false) + "\n");
  auto m = load_manifest(path);
  CHECK_FALSE(m.entries[0].gold_index.has_value());
  CHECK(m.entries[0].video_path == "/videos/a.mp4");
  CHECK_FALSE(m.entries[0].frames_dir.has_value());
}

TEST_CASE("duplicate ids are rejected") {
  test::TempDir tmp;
  auto path = tmp / "manifest.jsonl";
  test::write_file(path, entry_line("v1") + "\n" + entry_line("v1") + "\n");
  CHECK_THROWS_WITH_AS(load_manifest(path), "duplicate id v1", ValidationError);
}

TEST_CASE("gold index must be in range") {
  test::TempDir tmp;
  auto path = tmp / "manifest.jsonl";
  test::write_file(path, entry_line("v1", 5, 5) + "\n");
  CHECK_THROWS_AS(load_manifest(path), ValidationError);
  // explicit negative index, not an omitted field
  nlohmann::json j = nlohmann::json::parse(entry_line("v1"));
  j["gold_index"] = -1;
  test::write_file(path, j.dump() + "\n");
  CHECK_THROWS_AS(load_manifest(path), ValidationError);
}

TEST_CASE("exactly one frame source is required") {
  test::TempDir tmp;
  auto path = tmp / "manifest.jsonl";
  test::write_file(path, entry_line("v1", 5, 1, true, true) + "\n");
  CHECK_THROWS_AS(load_manifest(path), ValidationError);
  test::write_file(path, entry_line("v1", 5, 1, false, false) + "\n");
  CHECK_THROWS_AS(load_manifest(path), ValidationError);
}

TEST_CASE("option counts must agree with the declared metadata") {
  test::TempDir tmp;
  auto path = tmp / "manifest.jsonl";
  test::write_file(path, nlohmann::json{{"option_count", 5}}.dump() + "\n" +
                             entry_line("v1", 3) + "\n");
  CHECK_THROWS_AS(load_manifest(path), ValidationError);
}

TEST_CASE("option list size limits") {
  test::TempDir tmp;
  auto path = tmp / "manifest.jsonl";
  test::write_file(path, entry_line("v1", 1, 0) + "\n");
  CHECK_THROWS_AS(load_manifest(path), ValidationError);
  test::write_file(path, entry_line("v1", 27, 0) + "\n");
  CHECK_THROWS_AS(load_manifest(path), ValidationError);
}

TEST_CASE("parse errors carry the line number") {
  test::TempDir tmp;
  auto path = tmp / "manifest.jsonl";
  test::write_file(path, entry_line("v1") + "\n{not json\n");
  try {
    load_manifest(path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }

  test::write_file(path, "[1,2,3]\n");
  CHECK_THROWS_AS(load_manifest(path), ParseError);  // not an object

  nlohmann::json missing{{"id", "v1"}, {"question", "q"}};  // options absent
  test::write_file(path, missing.dump() + "\n");
  CHECK_THROWS_AS(load_manifest(path), ParseError);
}

TEST_CASE("metadata placement rules") {
  test::TempDir tmp;
  auto path = tmp / "manifest.jsonl";
  auto header = nlohmann::json{{"benchmark_name", "x"}, {"option_count", 5}}.dump();
  test::write_file(path, entry_line("v1") + "\n" + header + "\n");
  CHECK_THROWS_AS(load_manifest(path), ParseError);  // metadata after an entry
  test::write_file(path, header + "\n" + header + "\n" + entry_line("v1") + "\n");
  CHECK_THROWS_AS(load_manifest(path), ParseError);  // duplicate metadata
}

TEST_CASE("missing and empty manifests") {
  test::TempDir tmp;
  CHECK_THROWS_AS(load_manifest(tmp / "absent.jsonl"), ParseError);
  auto path = tmp / "manifest.jsonl";
  test::write_file(path, "\n\n");
  CHECK_THROWS_AS(load_manifest(path), ValidationError);
  test::write_file(path, nlohmann::json{{"option_count", 5}}.dump() + "\n");
  CHECK_THROWS_AS(load_manifest(path), ValidationError);  // header only, no entries
}

TEST_CASE("serialize and reload is the identity") {
  test::TempDir tmp;
  auto path = tmp / "manifest.jsonl";
  test::write_file(path, nlohmann::json{{"benchmark_name", "egoqa"}, {"option_count", 5}}.dump() +
                             "\n" + entry_line("v1") + "\n" +
                             entry_line("v2", 5, -1, true, false) + "\n");
  auto m = load_manifest(path);
  auto copy_path = tmp / "copy.jsonl";
  save_manifest(m, copy_path);
  auto again = load_manifest(copy_path);
  CHECK(again == m);
  // serialization is stable byte-wise across round trips
  CHECK(serialize_manifest(again) == serialize_manifest(m));
}
