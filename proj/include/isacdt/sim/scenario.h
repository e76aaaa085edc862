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

// Declarative scenario description, its JSON form and the embedded presets.

#ifndef ISACDT_SIM_SCENARIO_H_
#define ISACDT_SIM_SCENARIO_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "isacdt/signal/ofdm.h"
#include "isacdt/world/geometry.h"

namespace isacdt::sim {

enum class Experiment {
  kCoopLocalization,
  kSlamRecon,
  kBeamTracking,
  kNeighborDiscovery,
};

const char* ExperimentName(Experiment e);
std::optional<Experiment> ParseExperiment(const std::string& name);

struct NodeConfig {
  world::MachineNode node;
  // Empty for static nodes.
  world::Trajectory trajectory;
};

struct WorldConfig {
  world::FloorPlan plan;
  std::vector<NodeConfig> nodes;
  std::vector<world::Vec2> scatterers;
};

struct SignalConfig {
  signal::OfdmConfig ofdm;
  double detection_threshold_db = 13.0;
  double snr0_db = 0.0;  // per-antenna reference SNR for link metrics
};

struct TwinConfig {
  std::vector<world::Rect> regions;  // empty: two equal halves of the plan
  double cadence = 0.1;              // s between twin rebuilds
  double ingest_delay = 0.01;        // s
  double cell_size = 0.25;
  double gate = 2.0;
};

struct LocalizationParams {
  std::vector<int> bs_counts{1, 2, 4, 8};
  std::vector<double> snr_db{-10.0, -5.0, 0.0, 5.0};  // per-sample echo SNR
  std::vector<std::string> profiles{"equal", "mixed"};
  // Per-BS SNR offsets of the "mixed" profile, cycled over BS index.
  std::vector<double> mixed_offsets_db{0.0, -12.0};
};

struct SlamParams {
  double scan_interval = 2.0;  // s
  int rays_per_scan = 120;
  double max_range = 20.0;     // m
  double snr_db = 10.0;        // per-sample echo SNR at reference_range
  double reference_range = 10.0;
  double passive_loss_db = 3.0;
  bool noiseless = false;
  int scan_subcarriers = 256;  // echo grid used per ray
  int scan_symbols = 4;
};

struct BeamParams {
  std::vector<int> antenna_counts{8, 16, 32, 64};
  int frames = 200;
  double frame_period = 0.01;   // s
  double sensing_snr_db = 40.0;  // post-processing SNR of the BS's fixes
  double position_jitter = 0.5;  // m, per-trial uniform start offset
};

struct DiscoveryParams {
  int node_count = 30;  // used when the world lists no nodes
  double comm_range = 15.0;
  int sectors = 8;
  int max_rounds = 40;
  double threshold = 0.9;
  double twin_noise = 0.0;  // m, per-axis sensing noise of the twin
  bool mobile = false;
  double round_period = 0.1;  // s
};

struct ScenarioConfig {
  std::string name = "custom";
  Experiment experiment = Experiment::kCoopLocalization;
  std::uint64_t seed = 1;
  int trials = 1;
  WorldConfig world;
  SignalConfig signal;
  TwinConfig twin;
  LocalizationParams localization;
  SlamParams slam;
  BeamParams beam;
  DiscoveryParams discovery;
};

// Parses JSON text. Throws kConfig listing every problem with its field path
// (e.g. "world.nodes[2].trajectory[3]: outside floor bounds").
ScenarioConfig ParseScenario(const std::string& json_text);

// Every violated invariant, each prefixed with its field path.
std::vector<std::string> ValidateScenario(const ScenarioConfig& config);

// Throws kConfig when ValidateScenario reports anything.
void RequireValid(const ScenarioConfig& config);

// Canonical JSON (sorted keys, every field explicit).
std::string ScenarioToJson(const ScenarioConfig& config);

// FNV-1a 64 of the canonical JSON.
std::uint64_t ScenarioHash(const ScenarioConfig& config);

struct PresetInfo {
  const char* name;
  const char* description;
};

const std::vector<PresetInfo>& Presets();

// Throws kNotFound for an unknown name.
ScenarioConfig LoadPreset(const std::string& name);

}  // namespace isacdt::sim

#endif  // ISACDT_SIM_SCENARIO_H_
