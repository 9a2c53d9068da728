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

#include "catlink/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>
#include <thread>

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "catlink/errors.hpp"
#include "catlink/measurement.hpp"
#include "catlink/protocol.hpp"
#include "catlink/report.hpp"
#include "catlink/scenario.hpp"
#include "catlink/schemas.hpp"

namespace catlink {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kExitCodes =
    "Exit codes:\n"
    "  0  success\n"
    "  1  usage, scenario or parameter error\n"
    "  2  herald event impossible (vanishing probability)\n"
    "  3  truncation error (raise run.cutoff)\n"
    "Logging: CATLINK_LOG=error|warn|info|debug (default warn).";

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto logger = std::make_shared<spdlog::logger>("catlink", sink);
  logger->set_pattern("[%l] %v");
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv("CATLINK_LOG")) {
    const std::string v(env);
    if (v == "error") level = spdlog::level::err;
    else if (v == "warn") level = spdlog::level::warn;
    else if (v == "info") level = spdlog::level::info;
    else if (v == "debug") level = spdlog::level::debug;
    else logger->warn("ignoring CATLINK_LOG={}; expected error, warn, info or debug", v);
  }
  logger->set_level(level);
  return logger;
}

struct Options {
  std::string scenario;
  std::string out;
  std::string beta;
  std::string trajectories;
  std::string schema_name;
  std::vector<std::string> params;
  std::uint64_t seed = 0;
  bool seed_given = false;
  unsigned workers = 1;
};

Scenario resolve_scenario(const Options& opt, CLI::App* sub) {
  Scenario scenario = opt.scenario.empty() ? Scenario{} : load_scenario(opt.scenario);
  if (sub->count("--seed") > 0) scenario.seed = opt.seed;
  if (!opt.beta.empty()) {
    const auto comma = opt.beta.find(',');
    set_scenario_value(scenario, "sources.beta_re", opt.beta.substr(0, comma));
    set_scenario_value(scenario, "sources.beta_im", comma == std::string::npos ? "0" : opt.beta.substr(comma + 1));
  }
  return scenario;
}

void write_output(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty()) {
    out << content;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::invalid_argument("cannot open output file '" + path + "'");
  file << content;
  if (!file) throw std::invalid_argument("failed writing output file '" + path + "'");
}

void log_report(spdlog::logger& log, const RunReport& report) {
  for (const auto& w : report.truncation_warnings) log.warn("truncation: {}", w);
  for (const auto& s : report.stage_probabilities) log.info("{} probability {}", s.label, format_real(s.probability));
  log.info("state fidelity {}", format_real(report.state_fidelity));
}

std::vector<HeraldCheck> herald_checks(const Scenario& scenario, spdlog::logger& log,
                                       std::vector<OutcomeRecord>* records = nullptr) {
  if (scenario.monte_carlo_samples == 0) return {};
  auto checks = monte_carlo_herald_check(scenario.config, scenario.config.beta, scenario.monte_carlo_samples,
                                         scenario.seed, records);
  for (const auto& c : checks) {
    log.info("{}: exact {} sampled {} ({} sigma)", c.stage, format_real(c.exact), format_real(c.frequency()),
             format_real(c.sigma()));
    if (!c.agrees(4.0)) log.warn("{}: sampled herald frequency outside 4 sigma", c.stage);
  }
  return checks;
}

int cmd_run(const Options& opt, CLI::App* sub, std::ostream& out, spdlog::logger& log) {
  const Scenario scenario = resolve_scenario(opt, sub);
  log.debug("effective config {}", effective_config(scenario).dump());
  const RunReport report = run_converter(scenario.config, scenario.config.beta);
  log_report(log, report);
  std::vector<OutcomeRecord> records;
  if (!opt.trajectories.empty() && scenario.monte_carlo_samples == 0) {
    throw std::invalid_argument("--trajectories needs run.monte_carlo_samples > 0");
  }
  const auto checks = herald_checks(scenario, log, opt.trajectories.empty() ? nullptr : &records);
  if (!opt.trajectories.empty()) {
    std::ostringstream lines;
    for (const auto& r : records) lines << to_json_line(r) << '\n';
    write_output(opt.trajectories, lines.str(), out);
  }
  write_output(opt.out, run_report_json(scenario, report, checks).dump(2) + "\n", out);
  return kExitOk;
}

int cmd_suite(const Options& opt, CLI::App* sub, std::ostream& out, spdlog::logger& log) {
  const Scenario scenario = resolve_scenario(opt, sub);
  const SuiteReport suite = run_suite(scenario.config);
  for (const auto& run : suite.runs) log_report(log, run);
  log.info("process fidelity {}, average fidelity {}", format_real(suite.thresholds.process_fidelity),
           format_real(suite.thresholds.average_fidelity));
  const auto checks = herald_checks(scenario, log);
  write_output(opt.out, suite_report_json(scenario, suite, checks).dump(2) + "\n", out);
  return kExitOk;
}

int cmd_sweep(const Options& opt, CLI::App* sub, std::ostream& out, spdlog::logger& log) {
  const Scenario base = resolve_scenario(opt, sub);
  SweepSpec spec;
  for (const auto& p : opt.params) spec.axes.push_back(parse_sweep_axis(p));
  validate(spec);
  const std::size_t n = spec.grid_size();
  std::vector<SweepRow> rows(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      SweepRow row;
      row.values = spec.point(i);
      try {
        Scenario scenario = base;
        for (std::size_t k = 0; k < spec.axes.size(); ++k) {
          set_scenario_value(scenario, spec.axes[k].key, row.values[k]);
        }
        row.report = run_converter(scenario.config, scenario.config.beta);
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      rows[i] = std::move(row);
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(opt.workers, static_cast<unsigned>(n)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].error.empty()) log.warn("sweep row {} failed: {}", i, rows[i].error);
  }
  std::ostringstream csv;
  write_sweep_csv(csv, spec, rows);
  write_output(opt.out, csv.str(), out);
  return kExitOk;
}

int cmd_schema(const Options& opt, std::ostream& out) {
  const std::vector<std::pair<std::string, std::string_view>> all{{"run_report", schemas::kRunReport},
                                                                   {"suite_report", schemas::kSuiteReport},
                                                                   {"trajectory", schemas::kTrajectory}};
  Json j = Json::object();
  for (const auto& [name, text] : all) {
    if (!opt.schema_name.empty() && opt.schema_name != name) continue;
    j[name] = Json::parse(text);
  }
  if (j.empty()) throw std::invalid_argument("unknown schema '" + opt.schema_name + "'");
  write_output(opt.out, (opt.schema_name.empty() ? j : j[opt.schema_name]).dump(2) + "\n", out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto log = make_logger(err);
  Options opt;
  CLI::App app{"Truncated-Fock simulator of a heralded DV to CV qubit converter", "catlink"};
  app.footer(kExitCodes);
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scenario", opt.scenario, "Scenario file (INI sections [sources] [taps] [detectors] "
                                                "[homodyne] [loss] [run]); defaults when omitted");
    sub->add_option("--out", opt.out, "Output path; stdout when omitted");
    sub->add_option("--seed", opt.seed, "Monte Carlo seed, overrides run.seed");
  };
  auto* run = app.add_subcommand("run", "Run the converter for one input and write a JSON report");
  add_common(run);
  run->add_option("--beta", opt.beta, "Input displacement RE,IM, overrides the scenario");
  run->add_option("--trajectories", opt.trajectories, "Write sampled herald records as JSON lines");

  auto* suite = app.add_subcommand("suite", "Six-qubit suite, process tomography and threshold report");
  add_common(suite);

  auto* sweep = app.add_subcommand("sweep", "Grid sweep over up to two scenario keys, CSV output");
  add_common(sweep);
  sweep->add_option("--beta", opt.beta, "Input displacement RE,IM, overrides the scenario");
  sweep->add_option("--param", opt.params, "section.key=v1,v2,... or section.key=start:stop:count")->required();
  sweep->add_option("--workers", opt.workers, "Parallel workers (default 1)")->check(CLI::PositiveNumber);

  auto* schema = app.add_subcommand("schema", "Print the JSON schemas of the emitted documents");
  schema->add_option("name", opt.schema_name, "run_report, suite_report or trajectory");
  schema->add_option("--out", opt.out, "Output path; stdout when omitted");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(opt, run, out, *log);
    if (suite->parsed()) return cmd_suite(opt, suite, out, *log);
    if (sweep->parsed()) return cmd_sweep(opt, sweep, out, *log);
    return cmd_schema(opt, out);
  } catch (const ScenarioError& e) {
    log->error("{}", e.what());
    return kExitUsage;
  } catch (const HeraldError& e) {
    log->error("{}", e.what());
    return kExitHeraldImpossible;
  } catch (const NullStateError& e) {
    log->error("{}", e.what());
    return kExitHeraldImpossible;
  } catch (const TruncationError& e) {
    log->error("{}", e.what());
    return kExitTruncation;
  } catch (const std::exception& e) {
    log->error("{}", e.what());
    return kExitUsage;
  }
}

}  // namespace catlink
