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

#include "isacdt/isacdt.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "isacdt/common.h"
#include "isacdt/fusion/occupancy_grid.h"
#include "isacdt/sim/experiments.h"
#include "isacdt/sim/scenario.h"

struct isacdt_scenario {
  isacdt::sim::ScenarioConfig config;
  std::string json;
};

struct isacdt_result {
  isacdt::sim::ExperimentResult result;
  std::string metrics_csv;
};

namespace {

thread_local std::string last_error;

int Record(isacdt::ErrorCode code, const std::string& message) {
  last_error = message;
  return static_cast<int>(code);
}

template <typename Fn>
int Guard(Fn fn) {
  try {
    last_error.clear();
    fn();
    return ISACDT_OK;
  } catch (const isacdt::Error& e) {
    return Record(e.code(), e.what());
  } catch (const std::bad_alloc&) {
    return Record(isacdt::ErrorCode::kInternal, "out of memory");
  } catch (const std::exception& e) {
    return Record(isacdt::ErrorCode::kInternal, e.what());
  }
}

void WriteAtomically(const std::filesystem::path& path,
                     const std::string& contents) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.close();
    if (!out) {
      isacdt::Fail(isacdt::ErrorCode::kIo, "cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    isacdt::Fail(isacdt::ErrorCode::kIo, "cannot rename to " + path.string());
  }
}

}  // namespace

extern "C" {

const char* isacdt_version(void) { return isacdt::VersionString(); }

const char* isacdt_last_error(void) { return last_error.c_str(); }

size_t isacdt_preset_count(void) { return isacdt::sim::Presets().size(); }

const char* isacdt_preset_name(size_t index) {
  const auto& p = isacdt::sim::Presets();
  return index < p.size() ? p[index].name : nullptr;
}

const char* isacdt_preset_description(size_t index) {
  const auto& p = isacdt::sim::Presets();
  return index < p.size() ? p[index].description : nullptr;
}

int isacdt_scenario_from_preset(const char* name, isacdt_scenario** out) {
  return Guard([&] {
    isacdt::Require(name != nullptr && out != nullptr, "null argument");
    *out = new isacdt_scenario{isacdt::sim::LoadPreset(name), {}};
  });
}

int isacdt_scenario_from_string(const char* json_text, isacdt_scenario** out) {
  return Guard([&] {
    isacdt::Require(json_text != nullptr && out != nullptr, "null argument");
    *out = new isacdt_scenario{isacdt::sim::ParseScenario(json_text), {}};
  });
}

int isacdt_scenario_from_file(const char* path, isacdt_scenario** out) {
  return Guard([&] {
    isacdt::Require(path != nullptr && out != nullptr, "null argument");
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      isacdt::Fail(isacdt::ErrorCode::kIo,
                   std::string("cannot read config file ") + path);
    }
    std::ostringstream text;
    text << in.rdbuf();
    *out = new isacdt_scenario{isacdt::sim::ParseScenario(text.str()), {}};
  });
}

void isacdt_scenario_free(isacdt_scenario* scenario) { delete scenario; }

int isacdt_scenario_set_seed(isacdt_scenario* scenario, uint64_t seed) {
  return Guard([&] {
    isacdt::Require(scenario != nullptr, "null scenario");
    scenario->config.seed = seed;
  });
}

int isacdt_scenario_set_trials(isacdt_scenario* scenario, int trials) {
  return Guard([&] {
    isacdt::Require(scenario != nullptr, "null scenario");
    scenario->config.trials = trials;
  });
}

int isacdt_scenario_validate(const isacdt_scenario* scenario) {
  return Guard([&] {
    isacdt::Require(scenario != nullptr, "null scenario");
    isacdt::sim::RequireValid(scenario->config);
  });
}

const char* isacdt_scenario_json(isacdt_scenario* scenario) {
  if (scenario == nullptr) return "";
  scenario->json = isacdt::sim::ScenarioToJson(scenario->config);
  return scenario->json.c_str();
}

int isacdt_run(const isacdt_scenario* scenario, int jobs, isacdt_result** out) {
  return Guard([&] {
    isacdt::Require(scenario != nullptr && out != nullptr, "null argument");
    isacdt::sim::RunOptions options;
    options.jobs = jobs < 1 ? 1 : jobs;
    auto* r = new isacdt_result{
        isacdt::sim::RunScenario(scenario->config, options), {}};
    r->metrics_csv = r->result.metrics.ToCsv();
    *out = r;
  });
}

void isacdt_result_free(isacdt_result* result) { delete result; }

const char* isacdt_result_summary(const isacdt_result* result) {
  return result ? result->result.summary.c_str() : "";
}

const char* isacdt_result_metrics_csv(const isacdt_result* result) {
  return result ? result->metrics_csv.c_str() : "";
}

int isacdt_result_write(const isacdt_result* result, const char* directory) {
  return Guard([&] {
    isacdt::Require(result != nullptr && directory != nullptr, "null argument");
    const std::filesystem::path dir(directory);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
      isacdt::Fail(isacdt::ErrorCode::kIo,
                   "cannot create output directory " + dir.string());
    }
    const auto& r = result->result;
    WriteAtomically(dir / "metrics.csv", result->metrics_csv);
    for (const auto& [name, table] : r.tables) {
      WriteAtomically(dir / name, table.ToCsv());
    }
    for (const auto& [name, grid] : r.grids) {
      WriteAtomically(dir / (name + ".pgm"), isacdt::fusion::EncodePgm(grid));
      WriteAtomically(dir / (name + ".csv"), isacdt::fusion::EncodeGridCsv(grid));
    }
    for (const auto& [name, contents] : r.files) {
      WriteAtomically(dir / name, contents);
    }
  });
}

}  // extern "C"
