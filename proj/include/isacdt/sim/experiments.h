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

#ifndef ISACDT_SIM_EXPERIMENTS_H_
#define ISACDT_SIM_EXPERIMENTS_H_

#include <string>
#include <utility>
#include <vector>

#include "isacdt/fusion/occupancy_grid.h"
#include "isacdt/sim/metrics_table.h"
#include "isacdt/sim/scenario.h"

namespace isacdt::sim {

struct RunOptions {
  int jobs = 1;  // worker threads for independent trials
};

struct ExperimentResult {
  MetricsTable metrics;  // written as metrics.csv
  // Additional tables keyed by file name, e.g. "discovery_summary.csv".
  std::vector<std::pair<std::string, MetricsTable>> tables;
  // Grids keyed by base name; written as <name>.pgm and <name>.csv.
  std::vector<std::pair<std::string, fusion::OccupancyGrid>> grids;
  // Other text artifacts keyed by file name.
  std::vector<std::pair<std::string, std::string>> files;
  std::string summary;  // one line
};

// Validates, then dispatches on config.experiment. Results depend only on
// the config (including seed), never on options.jobs.
ExperimentResult RunScenario(const ScenarioConfig& config,
                             const RunOptions& options = {});

// Columns: profile, K, snr_db, rmse_single, rmse_avg, rmse_weighted,
// trials_ok, fail_single, fail_fused. One row per (profile, K, snr_db).
ExperimentResult ExpCoopLocalization(const ScenarioConfig& config,
                                     const RunOptions& options = {});

// Columns: trial, seed, variant (single | dual-fused), map_accuracy.
ExperimentResult ExpSlamRecon(const ScenarioConfig& config,
                              const RunOptions& options = {});

// Columns: N, frame, se_feedback, se_sensing, true_best_se (trial means).
ExperimentResult ExpBeamTracking(const ScenarioConfig& config,
                                 const RunOptions& options = {});

// Columns: round, frac_gossip, frac_dt_gossip (trial means).
ExperimentResult ExpNeighborDiscovery(const ScenarioConfig& config,
                                      const RunOptions& options = {});

// Mapping grid for a plan: cell centres fall on integer multiples of
// cell_size from the plan's min corner, so axis-aligned walls on that
// lattice pass through cell centres.
fusion::OccupancyGrid GridForPlan(const world::FloorPlan& plan,
                                  double cell_size);

// The twin partition in effect: config.twin.regions, or two equal halves of
// the floor split along x when none are configured.
std::vector<world::Rect> EffectiveRegions(const ScenarioConfig& config);

}  // namespace isacdt::sim

#endif  // ISACDT_SIM_EXPERIMENTS_H_
