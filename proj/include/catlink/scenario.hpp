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


#ifndef CATLINK_SCENARIO_HPP
#define CATLINK_SCENARIO_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "catlink/protocol.hpp"
#include "json.hpp"

namespace catlink {

/// Parse failure with a 1-based source position.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string source, int line, int column, const std::string& message);

  const std::string& source() const noexcept { return source_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  std::string source_;
  int line_;
  int column_;
};

struct Scenario {
  ProtocolConfig config;
  std::uint64_t seed = 1;
  /// Trajectories per herald stage for the Monte Carlo cross-check; 0 skips it.
  std::size_t monte_carlo_samples = 0;
};

/// INI-style text with sections [sources], [taps], [detectors], [homodyne],
/// [loss], [run]. Unknown sections or keys and duplicate keys are errors.
Scenario parse_scenario(std::string_view text, const std::string& source_name = "<scenario>");
Scenario load_scenario(const std::string& path);

/// Every key with its effective value, grouped by section.
nlohmann::ordered_json effective_config(const Scenario& scenario);

/// Dotted keys ("homodyne.half_width") accepted by the scenario.
std::vector<std::string> scenario_keys();
bool is_scenario_key(std::string_view dotted);
/// Sets one dotted key from its text form; throws std::invalid_argument.
void set_scenario_value(Scenario& scenario, std::string_view dotted, std::string_view value);

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

struct SweepSpec {
  std::vector<SweepAxis> axes;

  std::size_t grid_size() const;
  /// Row-major over the axes, first axis slowest.
  std::vector<std::string> point(std::size_t index) const;
};

/// "key=v1,v2,..." or "key=start:stop:count".
SweepAxis parse_sweep_axis(std::string_view text);
void validate(const SweepSpec& spec);

}  // namespace catlink

#endif  // CATLINK_SCENARIO_HPP
