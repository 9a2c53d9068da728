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


#ifndef CATLINK_REPORT_HPP
#define CATLINK_REPORT_HPP

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "catlink/protocol.hpp"
#include "catlink/scenario.hpp"
#include "json.hpp"

namespace catlink {

/// Twelve significant digits, '.' separator.
std::string format_real(double value);

nlohmann::ordered_json to_json(Complex z);
nlohmann::ordered_json to_json(const ComplexMatrix& m);
nlohmann::ordered_json to_json(const std::vector<HeraldCheck>& checks);

nlohmann::ordered_json run_report_json(const Scenario& scenario, const RunReport& report,
                                       const std::vector<HeraldCheck>& checks);
nlohmann::ordered_json suite_report_json(const Scenario& scenario, const SuiteReport& suite,
                                         const std::vector<HeraldCheck>& checks);

struct SweepRow {
  std::vector<std::string> values;
  std::optional<RunReport> report;
  std::string error;
};

/// Header: swept keys, success_probability, state_fidelity, leakage, error.
void write_sweep_csv(std::ostream& out, const SweepSpec& spec, const std::vector<SweepRow>& rows);

}  // namespace catlink

#endif  // CATLINK_REPORT_HPP
