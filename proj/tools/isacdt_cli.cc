/*
 * Copyright 2026 The isacdt Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// isacdt command-line front end. Links only the C API.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "isacdt/isacdt.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct ScenarioFlags {
  std::string preset;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
};

void AddScenarioFlags(CLI::App* cmd, ScenarioFlags& flags) {
  auto* preset = cmd->add_option("--preset", flags.preset,
                                 "Embedded preset name (see list-scenarios)");
  auto* config = cmd->add_option("--config", flags.config, "Scenario JSON file");
  preset->excludes(config);
  cmd->add_option("--seed", flags.seed, "Root seed override");
  cmd->add_option("--trials", flags.trials, "Trial count override");
}

int ExitCodeFor(int status) {
  switch (status) {
    case ISACDT_OK: return 0;
    case ISACDT_ERR_CONFIG:
    case ISACDT_ERR_NOT_FOUND:
    case ISACDT_ERR_INVALID_ARGUMENT:
    case ISACDT_ERR_UNDEFINED_METRIC:
      return kExitConfig;
    case ISACDT_ERR_IO: return kExitIo;
    default: return 1;
  }
}

int Report(int status) {
  std::cerr << "isacdt: " << isacdt_last_error() << "\n";
  return ExitCodeFor(status);
}

// Loads the scenario and applies overrides; returns a process exit code on
// failure.
std::optional<int> Load(const ScenarioFlags& flags, isacdt_scenario** out) {
  if (flags.preset.empty() == flags.config.empty()) {
    std::cerr << "isacdt: exactly one of --preset or --config is required\n";
    return kExitConfig;
  }
  const int status = flags.preset.empty()
                         ? isacdt_scenario_from_file(flags.config.c_str(), out)
                         : isacdt_scenario_from_preset(flags.preset.c_str(), out);
  if (status != ISACDT_OK) return Report(status);
  if (flags.seed) isacdt_scenario_set_seed(*out, *flags.seed);
  if (flags.trials) isacdt_scenario_set_trials(*out, *flags.trials);
  return std::nullopt;
}

int CmdValidate(const ScenarioFlags& flags) {
  isacdt_scenario* scenario = nullptr;
  if (auto code = Load(flags, &scenario)) return *code;
  const int status = isacdt_scenario_validate(scenario);
  isacdt_scenario_free(scenario);
  if (status != ISACDT_OK) return Report(status);
  std::cout << "OK\n";
  return 0;
}

int CmdRun(const ScenarioFlags& flags, const std::string& out_dir, int jobs) {
  isacdt_scenario* scenario = nullptr;
  if (auto code = Load(flags, &scenario)) return *code;
  isacdt_result* result = nullptr;
  int status = isacdt_run(scenario, jobs, &result);
  isacdt_scenario_free(scenario);
  if (status != ISACDT_OK) return Report(status);
  status = isacdt_result_write(result, out_dir.c_str());
  if (status == ISACDT_OK) std::cout << isacdt_result_summary(result) << "\n";
  isacdt_result_free(result);
  return status == ISACDT_OK ? 0 : Report(status);
}

int CmdList() {
  for (std::size_t i = 0; i < isacdt_preset_count(); ++i) {
    std::cout << isacdt_preset_name(i) << "\t" << isacdt_preset_description(i)
              << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ISAC digital-twin network simulator"};
  app.require_subcommand(1);

  ScenarioFlags run_flags;
  std::string out_dir = "out";
  int jobs = 1;
  auto* run = app.add_subcommand("run", "Run a scenario and write its outputs");
  AddScenarioFlags(run, run_flags);
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--jobs", jobs, "Worker threads for trials")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  ScenarioFlags validate_flags;
  auto* validate = app.add_subcommand("validate", "Check a scenario");
  AddScenarioFlags(validate, validate_flags);

  auto* list = app.add_subcommand("list-scenarios", "List embedded presets");
  auto* version = app.add_subcommand("version", "Print the library version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (run->parsed()) return CmdRun(run_flags, out_dir, jobs);
  if (validate->parsed()) return CmdValidate(validate_flags);
  if (list->parsed()) return CmdList();
  if (version->parsed()) {
    std::cout << isacdt_version() << "\n";
    return 0;
  }
  return 1;
}
