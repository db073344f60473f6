#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <json.hpp>

#include "vcot/cli.hpp"
#include "vcot/infill.hpp"
#include "vcot/judge.hpp"
#include "vcot/perturb.hpp"
#include "vcot/prompt.hpp"
#include "vcot/report.hpp"
#include "vcot/runner.hpp"
#include "vcot/sampling.hpp"
#include "vcot/templates.hpp"
#include "vcot/types.hpp"

namespace py = pybind11;

namespace {

// Python-side values cross as JSON strings to keep the binding surface small;
// the C++ side owns all schemas.
std::string records_accuracy(const std::string& records_path) {
  auto records = vcot::load_records(records_path);
  auto agg = vcot::aggregate(records);
  nlohmann::json j{{"correct", agg.correct},
                   {"invalid", agg.invalid},
                   {"total", agg.total},
                   {"accuracy", vcot::format_tenths(agg.tenths())}};
  return j.dump();
}

std::string donor_map_json(const std::vector<std::string>& ids, long long seed) {
  return vcot::make_donor_map(ids, seed).to_json().dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "core pipeline operations: frame sampling, answer extraction, "
            "donor shuffles, report arithmetic, CLI entry point";

  m.def("sample_frame_indices",
        [](int total, int count, int stride) {
          vcot::SamplingSpec spec{count, stride};
          return vcot::sample_frame_indices(total, spec);
        },
        py::arg("total"), py::arg("count"), py::arg("stride") = 1,
        "Source indices for sampling `count` frames out of `total`.");

  m.def("extract_rule",
        [](const std::string& raw, const std::vector<std::string>& options) {
          auto idx = vcot::extract_rule(raw, options);
          return idx ? py::object(py::int_(*idx)) : py::object(py::none());
        },
        py::arg("raw"), py::arg("options"),
        "Rule-stage option extraction; None when the response is ambiguous.");

  m.def("first_sentence", &vcot::first_sentence, py::arg("text"),
        "Truncate at the first sentence terminator, keeping it.");

  m.def("make_donor_map", &donor_map_json, py::arg("sample_ids"), py::arg("seed"),
        "Seeded fixed-point-free donor assignment, as a JSON string.");

  m.def("accuracy_tenths", &vcot::accuracy_tenths, py::arg("correct"), py::arg("total"),
        "Accuracy in integer tenths of a percent, rounded half-up.");

  m.def("format_tenths", &vcot::format_tenths, py::arg("tenths"));

  m.def("records_accuracy", &records_accuracy, py::arg("records_path"),
        "Aggregate a records.jsonl file; returns a JSON summary string.");

  m.def("cli_main",
        [](const std::vector<std::string>& args) {
          std::vector<const char*> argv;
          argv.push_back("vcot");
          for (const auto& a : args) argv.push_back(a.c_str());
          return vcot::cli_main(static_cast<int>(argv.size()), argv.data());
        },
        py::arg("args"), "Run the CLI in-process; returns its exit code.");
}
