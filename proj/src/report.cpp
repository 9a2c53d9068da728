// Copyright 2026 The catlink Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "catlink/report.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace catlink {

using Json = nlohmann::ordered_json;

std::string format_real(double value) { return fmt::format("{:.12g}", value); }

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

Json real_matrix(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json stages(const RunReport& report) {
  Json out = Json::array();
  for (const auto& s : report.stage_probabilities) out.push_back({{"label", s.label}, {"probability", s.probability}});
  return out;
}

Json input_json(const RunReport& report) {
  return {{"c0", to_json(report.input.c0)},
          {"c1", to_json(report.input.c1)},
          {"block", to_json(report.input_block)},
          {"leakage", report.input_leakage}};
}

const char* verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

}  // namespace

Json to_json(const std::vector<HeraldCheck>& checks) {
  Json out = Json::array();
  for (const auto& c : checks) {
    out.push_back({{"stage", c.stage},
                   {"exact", c.exact},
                   {"samples", c.samples},
                   {"hits", c.hits},
                   {"frequency", c.frequency()},
                   {"sigma", c.sigma()},
                   {"within_4_sigma", c.agrees(4.0)}});
  }
  return out;
}

Json run_report_json(const Scenario& scenario, const RunReport& report, const std::vector<HeraldCheck>& checks) {
  Json j;
  j["kind"] = "run_report";
  j["config"] = effective_config(scenario);
  j["input_beta"] = to_json(report.beta);
  j["alpha"] = to_json(report.alpha);
  j["success_probability"] = report.success_probability;
  j["stage_probabilities"] = stages(report);
  j["input"] = input_json(report);
  j["qubit_block"] = to_json(report.output.qubit_block);
  j["leakage"] = report.output.leakage;
  j["state_fidelity"] = report.state_fidelity;
  j["hybrid_fidelity"] = report.hybrid_fidelity;
  j["truncation_warnings"] = report.truncation_warnings;
  j["herald_check"] = to_json(checks);
  return j;
}

Json suite_report_json(const Scenario& scenario, const SuiteReport& suite, const std::vector<HeraldCheck>& checks) {
  Json j;
  j["kind"] = "suite_report";
  j["config"] = effective_config(scenario);
  j["alpha"] = to_json(suite.alpha);
  j["hybrid_fidelity"] = suite.hybrid_fidelity;
  Json inputs = Json::array();
  std::vector<std::string> warnings;
  for (const auto& run : suite.runs) {
    inputs.push_back({{"input_beta", to_json(run.beta)},
                      {"input", input_json(run)},
                      {"success_probability", run.success_probability},
                      {"stage_probabilities", stages(run)},
                      {"qubit_block", to_json(run.output.qubit_block)},
                      {"leakage", run.output.leakage},
                      {"state_fidelity", run.state_fidelity}});
    for (const auto& w : run.truncation_warnings) {
      if (std::find(warnings.begin(), warnings.end(), w) == warnings.end()) warnings.push_back(w);
    }
  }
  j["inputs"] = std::move(inputs);
  const auto& p = suite.process;
  j["process"] = {{"process_fidelity", p.process_fidelity},
                  {"average_fidelity", suite.thresholds.average_fidelity},
                  {"bloch_matrix", real_matrix(p.bloch_matrix)},
                  {"bloch_offset", Json::array({p.bloch_offset(0), p.bloch_offset(1), p.bloch_offset(2)})},
                  {"chi", to_json(ComplexMatrix(p.chi))},
                  {"renormalization", p.renormalization}};
  const auto& t = suite.thresholds;
  j["thresholds"] = {{"average_fidelity_bound", t.average_fidelity_bound},
                     {"process_fidelity_bound", t.process_fidelity_bound},
                     {"reference_state_bound", t.reference_state_bound},
                     {"average_state_fidelity", t.average_state_fidelity},
                     {"average_fidelity", t.average_fidelity},
                     {"process_fidelity", t.process_fidelity},
                     {"average_verdict", verdict(t.average_pass)},
                     {"process_verdict", verdict(t.process_pass)},
                     {"verdict", verdict(t.pass())}};
  j["truncation_warnings"] = warnings;
  j["herald_check"] = to_json(checks);
  return j;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_sweep_csv(std::ostream& out, const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  for (const auto& axis : spec.axes) out << csv_field(axis.key) << ',';
  out << "success_probability,state_fidelity,leakage,error\n";
  for (const auto& row : rows) {
    for (const auto& v : row.values) out << csv_field(v) << ',';
    if (row.report) {
      out << format_real(row.report->success_probability) << ',' << format_real(row.report->state_fidelity) << ','
          << format_real(row.report->output.leakage) << ",\n";
    } else {
      out << ",,," << csv_field(row.error) << '\n';
    }
  }
}

}  // namespace catlink
