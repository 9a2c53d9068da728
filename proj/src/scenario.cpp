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

#include "catlink/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace catlink {

ScenarioError::ScenarioError(std::string source, int line, int column, const std::string& message)
    : std::runtime_error(line > 0 ? fmt::format("{}:{}:{}: {}", source, line, column, message)
                                  : fmt::format("{}: {}", source, message)),
      source_(std::move(source)),
      line_(line),
      column_(column) {}

namespace {

using Json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

double parse_real(std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const char* end = text.data() + text.size();
  const char* begin = text.data();
  if (!text.empty() && text.front() == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw std::invalid_argument("expected a decimal number, got '" + std::string(text) + "'");
  }
  return value;
}

template <class Int>
Int parse_integer(std::string_view text) {
  text = trim(text);
  Int value = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw std::invalid_argument("expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return value;
}

bool parse_bool(std::string_view text) {
  text = trim(text);
  if (text == "true") return true;
  if (text == "false") return false;
  throw std::invalid_argument("expected true or false, got '" + std::string(text) + "'");
}

Complex parse_complex(std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) return parse_real(text);
  return {parse_real(text.substr(0, comma)), parse_real(text.substr(comma + 1))};
}

struct Field {
  const char* section;
  const char* key;
  std::function<void(Scenario&, std::string_view)> set;
  std::function<Json(const Scenario&)> get;
};

template <class Member>
Field real_field(const char* section, const char* key, Member member) {
  return {section, key, [member](Scenario& s, std::string_view v) { member(s) = parse_real(v); },
          [member](const Scenario& s) { return Json(member(s)); }};
}

template <class Member>
Field reflectivity_field(const char* section, const char* key, Member member) {
  return {section, key, [member](Scenario& s, std::string_view v) { member(s).transmissivity = 1.0 - parse_real(v); },
          [member](const Scenario& s) {
            return Json(std::stod(fmt::format("{:.15g}", 1.0 - member(s).transmissivity)));
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(real_field("sources", "r1", [](auto& s) -> auto& { return s.config.r1.r; }));
    f.push_back(real_field("sources", "r1_phase", [](auto& s) -> auto& { return s.config.r1.phase; }));
    f.push_back(real_field("sources", "r2", [](auto& s) -> auto& { return s.config.r2.r; }));
    f.push_back(real_field("sources", "r2_phase", [](auto& s) -> auto& { return s.config.r2.phase; }));
    f.push_back(real_field("sources", "r_s", [](auto& s) -> auto& { return s.config.r_s.r; }));
    f.push_back(real_field("sources", "r_s_phase", [](auto& s) -> auto& { return s.config.r_s.phase; }));
    f.push_back({"sources", "beta_re",
                 [](Scenario& s, std::string_view v) { s.config.beta.beta.real(parse_real(v)); },
                 [](const Scenario& s) { return Json(s.config.beta.beta.real()); }});
    f.push_back({"sources", "beta_im",
                 [](Scenario& s, std::string_view v) { s.config.beta.beta.imag(parse_real(v)); },
                 [](const Scenario& s) { return Json(s.config.beta.beta.imag()); }});
    f.push_back(real_field("sources", "beta_max", [](auto& s) -> auto& { return s.config.beta.max_magnitude; }));

    f.push_back(reflectivity_field("taps", "smss_reflectivity",
                                   [](auto& s) -> auto& { return s.config.tap_smss; }));
    f.push_back(reflectivity_field("taps", "bsm_reflectivity",
                                   [](auto& s) -> auto& { return s.config.tap_bsm; }));
    f.push_back(real_field("taps", "mixer_transmissivity",
                           [](auto& s) -> auto& { return s.config.bsm_bs.transmissivity; }));
    f.push_back(real_field("taps", "mixer_phase", [](auto& s) -> auto& { return s.config.bsm_bs.phase; }));

    f.push_back(real_field("detectors", "spm1_efficiency", [](auto& s) -> auto& { return s.config.spm1.efficiency; }));
    f.push_back(real_field("detectors", "spm1_dark_count", [](auto& s) -> auto& { return s.config.spm1.dark_count_prob; }));
    f.push_back(real_field("detectors", "spm2_efficiency", [](auto& s) -> auto& { return s.config.spm2.efficiency; }));
    f.push_back(real_field("detectors", "spm2_dark_count", [](auto& s) -> auto& { return s.config.spm2.dark_count_prob; }));
    f.push_back(real_field("detectors", "spm3_efficiency", [](auto& s) -> auto& { return s.config.spm3.efficiency; }));
    f.push_back(real_field("detectors", "spm3_dark_count", [](auto& s) -> auto& { return s.config.spm3.dark_count_prob; }));

    f.push_back(real_field("homodyne", "quadrature_angle",
                           [](auto& s) -> auto& { return s.config.homodyne.quadrature_angle; }));
    f.push_back(real_field("homodyne", "center", [](auto& s) -> auto& { return s.config.homodyne.center; }));
    f.push_back(real_field("homodyne", "half_width", [](auto& s) -> auto& { return s.config.homodyne.half_width; }));
    f.push_back({"homodyne", "grid_points",
                 [](Scenario& s, std::string_view v) { s.config.homodyne.grid_points = parse_integer<int>(v); },
                 [](const Scenario& s) { return Json(s.config.homodyne.grid_points); }});

    f.push_back(real_field("loss", "input", [](auto& s) -> auto& { return s.config.loss.input.eta; }));
    f.push_back(real_field("loss", "dv_arm", [](auto& s) -> auto& { return s.config.loss.dv_arm.eta; }));
    f.push_back(real_field("loss", "output", [](auto& s) -> auto& { return s.config.loss.output.eta; }));

    f.push_back({"run", "cutoff", [](Scenario& s, std::string_view v) { s.config.cutoff = parse_integer<int>(v); },
                 [](const Scenario& s) { return Json(s.config.cutoff); }});
    f.push_back(real_field("run", "tail_tolerance", [](auto& s) -> auto& { return s.config.tail_tolerance; }));
    f.push_back({"run", "alpha_target",
                 [](Scenario& s, std::string_view v) {
                   if (trim(v) == "auto") {
                     s.config.alpha_target.reset();
                   } else {
                     s.config.alpha_target = parse_complex(v);
                   }
                 },
                 [](const Scenario& s) {
                   if (!s.config.alpha_target) return Json("auto");
                   const Complex a = *s.config.alpha_target;
                   if (a.imag() == 0.0) return Json(a.real());
                   return Json(fmt::format("{},{}", a.real(), a.imag()));
                 }});
    f.push_back({"run", "bsm_herald",
                 [](Scenario& s, std::string_view v) {
                   v = trim(v);
                   if (v == "tap_homodyne") s.config.bsm_herald = BsmHerald::tap_homodyne;
                   else if (v == "ideal_projector") s.config.bsm_herald = BsmHerald::ideal_projector;
                   else throw std::invalid_argument("bsm_herald must be tap_homodyne or ideal_projector");
                 },
                 [](const Scenario& s) {
                   return Json(s.config.bsm_herald == BsmHerald::tap_homodyne ? "tap_homodyne" : "ideal_projector");
                 }});
    f.push_back({"run", "condition_other_port",
                 [](Scenario& s, std::string_view v) { s.config.condition_other_port = parse_bool(v); },
                 [](const Scenario& s) { return Json(s.config.condition_other_port); }});
    f.push_back({"run", "resource",
                 [](Scenario& s, std::string_view v) {
                   v = trim(v);
                   if (v == "generated") s.config.resource = ResourceKind::generated;
                   else if (v == "analytic") s.config.resource = ResourceKind::analytic;
                   else throw std::invalid_argument("resource must be generated or analytic");
                 },
                 [](const Scenario& s) {
                   return Json(s.config.resource == ResourceKind::generated ? "generated" : "analytic");
                 }});
    f.push_back({"run", "seed", [](Scenario& s, std::string_view v) { s.seed = parse_integer<std::uint64_t>(v); },
                 [](const Scenario& s) { return Json(s.seed); }});
    f.push_back({"run", "monte_carlo_samples",
                 [](Scenario& s, std::string_view v) { s.monte_carlo_samples = parse_integer<std::size_t>(v); },
                 [](const Scenario& s) { return Json(s.monte_carlo_samples); }});
    return f;
  }();
  return table;
}

const std::vector<std::string_view>& section_names() {
  static const std::vector<std::string_view> names{"sources", "taps", "detectors", "homodyne", "loss", "run"};
  return names;
}

const Field* find_field(std::string_view section, std::string_view key) {
  for (const auto& f : fields()) {
    if (section == f.section && key == f.key) return &f;
  }
  return nullptr;
}

void assign(Scenario& scenario, const Field& field, std::string_view value) {
  Scenario candidate = scenario;
  field.set(candidate, value);
  validate(candidate.config);
  scenario = std::move(candidate);
}

}  // namespace

Scenario parse_scenario(std::string_view text, const std::string& source_name) {
  Scenario scenario;
  std::string section;
  std::set<std::string> seen;
  int line_number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_number;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    auto column_of = [&](std::string_view part) { return static_cast<int>(part.data() - raw.data()) + 1; };

    const auto hash = raw.find_first_of("#;");
    std::string_view content = trim(hash == std::string_view::npos ? raw : raw.substr(0, hash));
    if (content.empty()) continue;

    if (content.front() == '[') {
      if (content.back() != ']') {
        throw ScenarioError(source_name, line_number, column_of(content), "expected ']' to close the section header");
      }
      const std::string_view name = trim(content.substr(1, content.size() - 2));
      if (std::find(section_names().begin(), section_names().end(), name) == section_names().end()) {
        throw ScenarioError(source_name, line_number, column_of(content),
                            "unknown section [" + std::string(name) + "]");
      }
      section = std::string(name);
      continue;
    }

    const auto eq = content.find('=');
    if (eq == std::string_view::npos) {
      throw ScenarioError(source_name, line_number, column_of(content), "expected 'key = value'");
    }
    const std::string_view key = trim(content.substr(0, eq));
    const std::string_view value = trim(content.substr(eq + 1));
    const int key_column = key.empty() ? column_of(content) : column_of(key);
    if (section.empty()) {
      throw ScenarioError(source_name, line_number, key_column, "key '" + std::string(key) + "' outside any section");
    }
    const Field* field = find_field(section, key);
    if (field == nullptr) {
      throw ScenarioError(source_name, line_number, key_column,
                          "unknown key '" + std::string(key) + "' in section [" + section + "]");
    }
    const std::string dotted = section + "." + std::string(key);
    if (!seen.insert(dotted).second) {
      throw ScenarioError(source_name, line_number, key_column, "duplicate key '" + dotted + "'");
    }
    const int value_column = value.empty() ? static_cast<int>(content.data() - raw.data() + eq) + 2 : column_of(value);
    try {
      assign(scenario, *field, value);
    } catch (const std::invalid_argument& e) {
      throw ScenarioError(source_name, line_number, value_column, dotted + ": " + e.what());
    }
  }
  return scenario;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(path, 0, 0, "cannot open scenario file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), path);
}

nlohmann::ordered_json effective_config(const Scenario& scenario) {
  Json out = Json::object();
  for (auto name : section_names()) out[std::string(name)] = Json::object();
  for (const auto& f : fields()) out[f.section][f.key] = f.get(scenario);
  return out;
}

std::vector<std::string> scenario_keys() {
  std::vector<std::string> keys;
  for (const auto& f : fields()) keys.push_back(std::string(f.section) + "." + f.key);
  return keys;
}

bool is_scenario_key(std::string_view dotted) {
  const auto dot = dotted.find('.');
  if (dot == std::string_view::npos) return false;
  return find_field(dotted.substr(0, dot), dotted.substr(dot + 1)) != nullptr;
}

void set_scenario_value(Scenario& scenario, std::string_view dotted, std::string_view value) {
  const auto dot = dotted.find('.');
  const Field* field = dot == std::string_view::npos ? nullptr : find_field(dotted.substr(0, dot), dotted.substr(dot + 1));
  if (field == nullptr) throw std::invalid_argument("unknown scenario key '" + std::string(dotted) + "'");
  assign(scenario, *field, value);
}

// ------------------------------------------------------------ sweeps

std::size_t SweepSpec::grid_size() const {
  std::size_t n = axes.empty() ? 0 : 1;
  for (const auto& axis : axes) n *= axis.values.size();
  return n;
}

std::vector<std::string> SweepSpec::point(std::size_t index) const {
  std::vector<std::string> values(axes.size());
  for (std::size_t k = axes.size(); k-- > 0;) {
    const auto n = axes[k].values.size();
    values[k] = axes[k].values[index % n];
    index /= n;
  }
  return values;
}

SweepAxis parse_sweep_axis(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) throw std::invalid_argument("sweep parameter must look like key=values");
  SweepAxis axis;
  axis.key = std::string(trim(text.substr(0, eq)));
  const std::string_view spec = trim(text.substr(eq + 1));
  if (spec.empty()) throw std::invalid_argument("sweep '" + axis.key + "' has no values");
  if (spec.find(':') != std::string_view::npos) {
    const auto c1 = spec.find(':');
    const auto c2 = spec.find(':', c1 + 1);
    if (c2 == std::string_view::npos) throw std::invalid_argument("sweep range must be start:stop:count");
    const double start = parse_real(spec.substr(0, c1));
    const double stop = parse_real(spec.substr(c1 + 1, c2 - c1 - 1));
    const auto count = parse_integer<std::size_t>(spec.substr(c2 + 1));
    if (count == 0) throw std::invalid_argument("sweep range count must be >= 1");
    for (std::size_t i = 0; i < count; ++i) {
      const double v = count == 1 ? start : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
      axis.values.push_back(fmt::format("{:.12g}", v));
    }
  } else {
    std::size_t pos = 0;
    while (pos <= spec.size()) {
      auto comma = spec.find(',', pos);
      if (comma == std::string_view::npos) comma = spec.size();
      const std::string_view item = trim(spec.substr(pos, comma - pos));
      if (item.empty()) throw std::invalid_argument("sweep '" + axis.key + "' has an empty value");
      axis.values.emplace_back(item);
      pos = comma + 1;
    }
  }
  return axis;
}

void validate(const SweepSpec& spec) {
  if (spec.axes.empty()) throw std::invalid_argument("sweep needs at least one --param");
  if (spec.axes.size() > 2) throw std::invalid_argument("at most 2 swept parameters per invocation");
  std::set<std::string> keys;
  for (const auto& axis : spec.axes) {
    if (!is_scenario_key(axis.key)) throw std::invalid_argument("unknown sweep parameter '" + axis.key + "'");
    if (!keys.insert(axis.key).second) throw std::invalid_argument("sweep parameter '" + axis.key + "' given twice");
    if (axis.values.empty()) throw std::invalid_argument("sweep '" + axis.key + "' has no values");
  }
}

}  // namespace catlink
