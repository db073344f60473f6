#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vcot/backend.hpp"
#include "vcot/frames.hpp"
#include "vcot/report.hpp"

namespace vcot {

BackendConfig load_backend_config(const std::filesystem::path& path);

nlohmann::json extractor_to_json(const ExtractorConfig& config);
ExtractorConfig extractor_from_json(const nlohmann::json& j);
ExtractorConfig load_extractor_config(const std::filesystem::path& path);

// Declarative table layout for the report command:
//   {
//     "title": "...", "key_header": "Model",
//     "columns": ["Base", "vCoT"],
//     "delta_vs": [null, "Base"],
//     "rows": [
//       {"label": "model-a", "cells": [
//           "runs/a_base/records.jsonl",
//           {"correct": 257, "total": 500}
//       ]}
//     ]
//   }
// A cell is either a records.jsonl path (aggregated on load) or inline
// correct/total counts.
struct ReportSpec {
  struct Cell {
    std::optional<std::string> records_path;
    std::optional<Aggregate> counts;
  };
  struct Row {
    std::string label;
    std::vector<Cell> cells;
  };
  std::string title;
  std::string key_header = "Model";
  std::vector<std::string> columns;
  std::vector<std::optional<std::string>> delta_vs;  // column name or absent
  std::vector<Row> rows;
};

ReportSpec load_report_spec(const std::filesystem::path& path);

// Resolves every cell (reading records files relative to `base_dir` when the
// path is not absolute) and builds the table.
ReportTable build_report(const ReportSpec& spec, const std::filesystem::path& base_dir);

}  // namespace vcot
