#include "vcot/configio.hpp"

#include <algorithm>

#include "vcot/errors.hpp"
#include "vcot/runner.hpp"
#include "vcot/util.hpp"

namespace vcot {

namespace {

nlohmann::json parse_file(const std::filesystem::path& path, const char* what) {
  try {
    return nlohmann::json::parse(util::read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string(what) + " " + path.string() + ": " + e.what());
  }
}

}  // namespace

BackendConfig load_backend_config(const std::filesystem::path& path) {
  return BackendConfig::from_json(parse_file(path, "backend config"));
}

nlohmann::json extractor_to_json(const ExtractorConfig& config) {
  return nlohmann::json{
      {"tool", config.tool}, {"args", config.args_template}, {"fps", config.fps}};
}

ExtractorConfig extractor_from_json(const nlohmann::json& j) {
  ExtractorConfig c;
  if (j.contains("tool")) c.tool = j.at("tool").get<std::string>();
  if (j.contains("args")) c.args_template = j.at("args").get<std::vector<std::string>>();
  if (j.contains("fps")) c.fps = j.at("fps").get<std::string>();
  if (c.tool.empty()) throw ValidationError("extractor config: tool must be non-empty");
  return c;
}

ExtractorConfig load_extractor_config(const std::filesystem::path& path) {
  return extractor_from_json(parse_file(path, "extractor config"));
}

ReportSpec load_report_spec(const std::filesystem::path& path) {
  auto j = parse_file(path, "report spec");
  ReportSpec spec;
  if (j.contains("title")) spec.title = j.at("title").get<std::string>();
  if (j.contains("key_header")) spec.key_header = j.at("key_header").get<std::string>();
  spec.columns = j.at("columns").get<std::vector<std::string>>();
  if (spec.columns.empty()) throw ValidationError("report spec: columns must be non-empty");
  if (j.contains("delta_vs")) {
    for (const auto& d : j.at("delta_vs")) {
      if (d.is_null()) spec.delta_vs.push_back(std::nullopt);
      else spec.delta_vs.push_back(d.get<std::string>());
    }
  } else {
    spec.delta_vs.assign(spec.columns.size(), std::nullopt);
  }
  if (spec.delta_vs.size() != spec.columns.size())
    throw KeyMismatchError("report spec: delta_vs length does not match columns");
  for (const auto& row_json : j.at("rows")) {
    ReportSpec::Row row;
    row.label = row_json.at("label").get<std::string>();
    for (const auto& cell_json : row_json.at("cells")) {
      ReportSpec::Cell cell;
      if (cell_json.is_string()) {
        cell.records_path = cell_json.get<std::string>();
      } else if (cell_json.is_object() && cell_json.contains("records")) {
        cell.records_path = cell_json.at("records").get<std::string>();
      } else if (cell_json.is_object() && cell_json.contains("correct")) {
        Aggregate agg;
        agg.correct = cell_json.at("correct").get<long long>();
        agg.total = cell_json.at("total").get<long long>();
        if (cell_json.contains("invalid")) agg.invalid = cell_json.at("invalid").get<long long>();
        if (agg.total <= 0 || agg.correct < 0 || agg.correct > agg.total)
          throw ValidationError("report spec: bad counts in row " + row.label);
        cell.counts = agg;
      } else {
        throw ValidationError("report spec: row " + row.label +
                              ": cell must be a records path or {correct,total}");
      }
      row.cells.push_back(std::move(cell));
    }
    if (row.cells.size() != spec.columns.size())
      throw KeyMismatchError("report spec: row " + row.label + " has " +
                             std::to_string(row.cells.size()) + " cells, expected " +
                             std::to_string(spec.columns.size()));
    spec.rows.push_back(std::move(row));
  }
  if (spec.rows.empty()) throw EmptyInputError("report spec: no rows");
  return spec;
}

ReportTable build_report(const ReportSpec& spec, const std::filesystem::path& base_dir) {
  std::vector<int> delta_vs;
  for (const auto& name : spec.delta_vs) {
    if (!name) {
      delta_vs.push_back(-1);
      continue;
    }
    auto it = std::find(spec.columns.begin(), spec.columns.end(), *name);
    if (it == spec.columns.end())
      throw KeyMismatchError("report spec: delta_vs names unknown column \"" + *name + "\"");
    delta_vs.push_back(static_cast<int>(it - spec.columns.begin()));
  }

  std::vector<std::string> row_keys;
  std::vector<std::vector<Aggregate>> cells;
  for (const auto& row : spec.rows) {
    row_keys.push_back(row.label);
    std::vector<Aggregate> row_cells;
    for (const auto& cell : row.cells) {
      if (cell.counts) {
        row_cells.push_back(*cell.counts);
        continue;
      }
      std::filesystem::path p = *cell.records_path;
      if (p.is_relative()) p = base_dir / p;
      auto records = load_records(p);
      if (records.empty()) throw EmptyInputError("no records in " + p.string());
      row_cells.push_back(aggregate(records));
    }
    cells.push_back(std::move(row_cells));
  }
  return delta_table(spec.title, spec.key_header, row_keys, spec.columns, cells, delta_vs);
}

}  // namespace vcot
