#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vcot/raven.hpp"
#include "vcot/types.hpp"

namespace vcot {

// Accuracy bookkeeping is done in integer tenths-of-a-percent so printed
// cells and deltas are exact: 257/500 is 514 tenths, rendered "51.4".
// Rounding is half-up, matching hand-rounded table values.
int accuracy_tenths(long long correct, long long total);
std::string format_tenths(int tenths);              // "51.4"
std::string format_delta_tenths(int delta_tenths);  // "+7.4", "-2.2", "+0.0"

struct Aggregate {
  long long correct = 0;
  long long invalid = 0;
  long long total = 0;

  int tenths() const { return accuracy_tenths(correct, total); }
  double percent() const { return tenths() / 10.0; }
};

// Tallies records; invalid records count toward total (and never correct).
// Throws EmptyInput on an empty list.
Aggregate aggregate(const std::vector<EvalRecord>& records);
double accuracy(const std::vector<EvalRecord>& records);

struct Cell {
  long long correct = 0;
  long long total = 0;
  int tenths = 0;
  std::optional<int> delta_tenths;

  std::string text() const;  // "51.4" or "51.4 (+7.4)"
};

struct ReportTable {
  std::string title;
  std::string key_header;            // first column header, e.g. "Model"
  std::vector<std::string> columns;  // accuracy column names
  struct Row {
    std::string label;
    std::vector<Cell> cells;
  };
  std::vector<Row> rows;

  nlohmann::json to_json() const;
};

// General table builder: cells[r][c] are aggregates; delta_vs[c] names the
// column whose rounded accuracy is subtracted to form column c's delta, or
// -1 for no delta. Row/column shape mismatches raise KeyMismatch.
ReportTable delta_table(const std::string& title, const std::string& key_header,
                        const std::vector<std::string>& row_keys,
                        const std::vector<std::string>& column_names,
                        const std::vector<std::vector<Aggregate>>& cells,
                        const std::vector<int>& delta_vs);

struct LabeledAccuracy {
  std::string key;
  Aggregate agg;
};

// Two-column convenience form: baseline and variant must carry identical
// keys in identical order; the variant column gets the delta.
ReportTable delta_table(const std::vector<LabeledAccuracy>& baseline,
                        const std::vector<LabeledAccuracy>& variant,
                        const std::string& baseline_name, const std::string& variant_name,
                        const std::string& title = "", const std::string& key_header = "Model");

// One row per requested label: seven category accuracies plus "Avg.", the
// unweighted mean of the category accuracies (computed on rounded tenths,
// rounded half-up). Records are grouped by the category prefix of their
// sample_id ("center/0042" belongs to center).
ReportTable raven_table(const std::vector<EvalRecord>& records,
                        const std::string& row_label = "model");

enum class ReportFormat { markdown, csv };

std::string emit(const ReportTable& table, ReportFormat format);

}  // namespace vcot
