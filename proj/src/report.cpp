#include "vcot/report.hpp"

#include <map>

#include "vcot/errors.hpp"

namespace vcot {

int accuracy_tenths(long long correct, long long total) {
  if (total <= 0) throw EmptyInputError("accuracy over zero records");
  if (correct < 0 || correct > total)
    throw ValidationError("correct count " + std::to_string(correct) + " outside [0, " +
                          std::to_string(total) + "]");
  // round-half-up of 1000*correct/total, kept in integers for exactness
  return static_cast<int>((2000 * correct + total) / (2 * total));
}

std::string format_tenths(int tenths) {
  std::string sign = tenths < 0 ? "-" : "";
  int t = tenths < 0 ? -tenths : tenths;
  return sign + std::to_string(t / 10) + "." + std::to_string(t % 10);
}

std::string format_delta_tenths(int delta_tenths) {
  return (delta_tenths < 0 ? "" : "+") + format_tenths(delta_tenths);
}

Aggregate aggregate(const std::vector<EvalRecord>& records) {
  if (records.empty()) throw EmptyInputError("aggregate over zero records");
  Aggregate a;
  for (const auto& r : records) {
    ++a.total;
    if (r.correct.value_or(false)) ++a.correct;
    if (!r.extracted_index) ++a.invalid;
  }
  return a;
}

double accuracy(const std::vector<EvalRecord>& records) { return aggregate(records).percent(); }

std::string Cell::text() const {
  std::string s = format_tenths(tenths);
  if (delta_tenths) s += " (" + format_delta_tenths(*delta_tenths) + ")";
  return s;
}

nlohmann::json ReportTable::to_json() const {
  nlohmann::json jrows = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json jcells = nlohmann::json::array();
    for (const auto& cell : row.cells) {
      nlohmann::json jc{{"correct", cell.correct},
                        {"total", cell.total},
                        {"accuracy", format_tenths(cell.tenths)}};
      jc["delta"] = cell.delta_tenths ? nlohmann::json(format_delta_tenths(*cell.delta_tenths))
                                      : nlohmann::json(nullptr);
      jcells.push_back(jc);
    }
    jrows.push_back({{"label", row.label}, {"cells", jcells}});
  }
  return nlohmann::json{{"title", title},
                        {"key_header", key_header},
                        {"columns", columns},
                        {"rows", jrows}};
}

ReportTable delta_table(const std::string& title, const std::string& key_header,
                        const std::vector<std::string>& row_keys,
                        const std::vector<std::string>& column_names,
                        const std::vector<std::vector<Aggregate>>& cells,
                        const std::vector<int>& delta_vs) {
  if (cells.size() != row_keys.size())
    throw KeyMismatchError("delta table: " + std::to_string(row_keys.size()) + " row keys but " +
                           std::to_string(cells.size()) + " cell rows");
  if (delta_vs.size() != column_names.size())
    throw KeyMismatchError("delta table: delta_vs size does not match column count");
  for (int d : delta_vs) {
    if (d < -1 || d >= static_cast<int>(column_names.size()))
      throw KeyMismatchError("delta table: delta_vs column index out of range");
  }
  ReportTable table;
  table.title = title;
  table.key_header = key_header;
  table.columns = column_names;
  for (std::size_t r = 0; r < row_keys.size(); ++r) {
    if (cells[r].size() != column_names.size())
      throw KeyMismatchError("delta table: row " + row_keys[r] + " has " +
                             std::to_string(cells[r].size()) + " cells, expected " +
                             std::to_string(column_names.size()));
    ReportTable::Row row;
    row.label = row_keys[r];
    for (std::size_t c = 0; c < cells[r].size(); ++c) {
      Cell cell;
      cell.correct = cells[r][c].correct;
      cell.total = cells[r][c].total;
      cell.tenths = cells[r][c].tenths();
      if (delta_vs[c] >= 0)
        cell.delta_tenths = cell.tenths - cells[r][delta_vs[c]].tenths();
      row.cells.push_back(cell);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

ReportTable delta_table(const std::vector<LabeledAccuracy>& baseline,
                        const std::vector<LabeledAccuracy>& variant,
                        const std::string& baseline_name, const std::string& variant_name,
                        const std::string& title, const std::string& key_header) {
  if (baseline.size() != variant.size())
    throw KeyMismatchError("delta table: baseline has " + std::to_string(baseline.size()) +
                           " rows, variant has " + std::to_string(variant.size()));
  std::vector<std::string> keys;
  std::vector<std::vector<Aggregate>> cells;
  for (std::size_t i = 0; i < baseline.size(); ++i) {
    if (baseline[i].key != variant[i].key)
      throw KeyMismatchError("delta table: row " + std::to_string(i) + " keys differ (" +
                             baseline[i].key + " vs " + variant[i].key + ")");
    keys.push_back(baseline[i].key);
    cells.push_back({baseline[i].agg, variant[i].agg});
  }
  return delta_table(title, key_header, keys, {baseline_name, variant_name}, cells, {-1, 0});
}

ReportTable raven_table(const std::vector<EvalRecord>& records, const std::string& row_label) {
  if (records.empty()) throw EmptyInputError("raven table over zero records");
  std::map<RavenCategory, Aggregate> per_category;
  for (const auto& r : records) {
    auto slash = r.sample_id.find('/');
    if (slash == std::string::npos)
      throw UnknownCategoryError("record sample_id has no category prefix: " + r.sample_id);
    auto category = raven_category_from_string(r.sample_id.substr(0, slash));
    auto& agg = per_category[category];
    ++agg.total;
    if (r.correct.value_or(false)) ++agg.correct;
    if (!r.extracted_index) ++agg.invalid;
  }

  ReportTable table;
  table.title = "i-RAVEN accuracy by category";
  table.key_header = "Model";
  ReportTable::Row row;
  row.label = row_label;
  long long sum_tenths = 0;
  long long sum_correct = 0;
  long long sum_total = 0;
  int present = 0;
  for (auto category : kRavenCategories) {
    auto it = per_category.find(category);
    if (it == per_category.end()) continue;
    table.columns.push_back(to_string(category));
    Cell cell;
    cell.correct = it->second.correct;
    cell.total = it->second.total;
    cell.tenths = it->second.tenths();
    row.cells.push_back(cell);
    sum_tenths += cell.tenths;
    sum_correct += cell.correct;
    sum_total += cell.total;
    ++present;
  }
  table.columns.push_back("Avg.");
  Cell avg;
  avg.correct = sum_correct;
  avg.total = sum_total;
  // unweighted mean of the per-category accuracies, rounded half-up
  avg.tenths = static_cast<int>((2 * sum_tenths + present) / (2 * present));
  row.cells.push_back(avg);
  table.rows.push_back(std::move(row));
  return table;
}

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

}  // namespace

std::string emit(const ReportTable& table, ReportFormat format) {
  std::string out;
  if (format == ReportFormat::markdown) {
    if (!table.title.empty()) out += "### " + table.title + "\n\n";
    out += "| " + table.key_header + " |";
    for (const auto& col : table.columns) out += " " + col + " |";
    out += "\n|";
    for (std::size_t i = 0; i < table.columns.size() + 1; ++i) out += " --- |";
    out += "\n";
    for (const auto& row : table.rows) {
      out += "| " + row.label + " |";
      for (const auto& cell : row.cells) out += " " + cell.text() + " |";
      out += "\n";
    }
    return out;
  }
  out += "row,column,correct,total,accuracy,delta\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.cells.size(); ++c) {
      const auto& cell = row.cells[c];
      out += csv_quote(row.label) + "," + csv_quote(table.columns[c]) + "," +
             std::to_string(cell.correct) + "," + std::to_string(cell.total) + "," +
             format_tenths(cell.tenths) + "," +
             (cell.delta_tenths ? format_delta_tenths(*cell.delta_tenths) : "") + "\n";
    }
  }
  return out;
}

}  // namespace vcot
