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

#include "isacdt/sim/scenario.h"

#include <cmath>
#include <map>
#include <string>

#include "gtest/gtest.h"
#include "isacdt/common.h"
#include "isacdt/sim/experiments.h"

namespace isacdt::sim {
namespace {

// Runs `fn` and returns the code of the isacdt::Error it throws.
template <typename Fn>
ErrorCode CodeOf(Fn fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kInternal;
}

template <typename Fn>
std::string MessageOf(Fn fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

NodeConfig MakeNode(std::uint32_t id, world::MachineKind kind, world::Vec2 p) {
  NodeConfig n;
  n.node.id = {id};
  n.node.kind = kind;
  n.node.position = p;
  return n;
}

ScenarioConfig TwoNodeDiscovery() {
  ScenarioConfig c = LoadPreset("fig5b");
  c.trials = 3;
  c.world.nodes = {MakeNode(1, world::MachineKind::kAgv, {10, 10}),
                   MakeNode(2, world::MachineKind::kAgv, {14, 13})};
  return c;
}

TEST(PresetTest, AllPresetsValidateAndRoundTrip) {
  ASSERT_EQ(Presets().size(), 5u);
  for (const PresetInfo& p : Presets()) {
    const ScenarioConfig c = LoadPreset(p.name);
    EXPECT_TRUE(ValidateScenario(c).empty()) << p.name;
    const std::string json = ScenarioToJson(c);
    const ScenarioConfig back = ParseScenario(json);
    EXPECT_EQ(ScenarioToJson(back), json) << p.name;
    EXPECT_EQ(ScenarioHash(back), ScenarioHash(c));
  }
  EXPECT_EQ(CodeOf([] { LoadPreset("fig9"); }), ErrorCode::kNotFound);
}

TEST(ScenarioHashTest, CoversFields) {
  const ScenarioConfig base = LoadPreset("fig5a");
  ScenarioConfig c = base;
  c.seed = 2;
  EXPECT_NE(ScenarioHash(c), ScenarioHash(base));
  c = base;
  c.twin.ingest_delay = 0.02;
  EXPECT_NE(ScenarioHash(c), ScenarioHash(base));
  c = base;
  c.world.nodes[1].trajectory.waypoints[1].position.x += 1e-9;
  EXPECT_NE(ScenarioHash(c), ScenarioHash(base));
}

TEST(ParseScenarioTest, MinimalConfigUsesDefaults) {
  const ScenarioConfig c = ParseScenario(R"({
    "experiment": "NEIGHBOR_DISCOVERY",
    "seed": 9,
    "trials": 4,
    "world": {"bounds": [0, 0, 60, 30]}
  })");
  EXPECT_EQ(c.experiment, Experiment::kNeighborDiscovery);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.trials, 4);
  EXPECT_EQ(c.discovery.sectors, 8);
  EXPECT_EQ(c.signal.ofdm.bandwidth, 1.23e9);
}

TEST(ParseScenarioTest, FactoryPlanShorthand) {
  const ScenarioConfig c = ParseScenario(R"({
    "experiment": "SLAM_RECON",
    "world": {"plan": "factory_default", "nodes": [
      {"id": 1, "kind": "AGV", "trajectory": [[0, 5, 15], [10, 25, 15]]}]}
  })");
  EXPECT_EQ(c.world.plan.obstacles.size(), 6u);
  EXPECT_EQ(c.world.nodes[0].node.position, (world::Vec2{5, 15}));
}

TEST(ParseScenarioTest, ErrorsNameFieldPaths) {
  EXPECT_EQ(CodeOf([] { ParseScenario("{not json"); }), ErrorCode::kConfig);
  const std::string unknown = MessageOf([] {
    ParseScenario(R"({"experiment": "BEAM_TRACKING", "wrld": {}})");
  });
  EXPECT_NE(unknown.find("wrld: unknown field"), std::string::npos) << unknown;
  const std::string bad_exp = MessageOf([] {
    ParseScenario(R"({"experiment": "TELEPORT", "world": {"bounds": [0,0,1,1]}})");
  });
  EXPECT_NE(bad_exp.find("experiment"), std::string::npos) << bad_exp;
  const std::string trials = MessageOf([] {
    ParseScenario(R"({"experiment": "NEIGHBOR_DISCOVERY", "trials": 0,
                      "world": {"bounds": [0, 0, 60, 30]}})");
  });
  EXPECT_NE(trials.find("trials"), std::string::npos) << trials;
  const std::string waypoint = MessageOf([] {
    ParseScenario(R"({"experiment": "SLAM_RECON",
      "world": {"plan": "factory_default", "nodes": [
        {"id": 1, "kind": "AGV",
         "trajectory": [[0, 5, 15], [1, 6, 15], [2, 7, 15], [3, 80, 15]]}]}})");
  });
  EXPECT_NE(waypoint.find("world.nodes[0].trajectory[3]"), std::string::npos)
      << waypoint;
}

TEST(ValidateScenarioTest, ReportsEveryViolation) {
  ScenarioConfig c = LoadPreset("fig5a");
  c.trials = 0;
  c.twin.cadence = 0.0;
  c.beam.frames = 0;
  const auto issues = ValidateScenario(c);
  EXPECT_EQ(issues.size(), 3u);
  EXPECT_EQ(CodeOf([&] { RequireValid(c); }), ErrorCode::kConfig);
}

TEST(ValidateScenarioTest, EdgelessDiscoveryRejected) {
  ScenarioConfig c = TwoNodeDiscovery();
  c.world.nodes[1].node.position = {50, 25};
  const auto issues = ValidateScenario(c);
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_NE(issues[0].find("no edges"), std::string::npos);
}

TEST(ValidateScenarioTest, BadPartitionRejected) {
  ScenarioConfig c = LoadPreset("fig5a");
  c.twin.regions = {{{-30, -5}, {0, 40}}, {{0, -5}, {20, 40}}};
  EXPECT_FALSE(ValidateScenario(c).empty());
  c.twin.regions = {{{-30, -5}, {0, 40}}, {{0, -5}, {30, 40}}};
  EXPECT_TRUE(ValidateScenario(c).empty());
}

TEST(RunScenarioTest, DeterministicAndTrialPrefixStable) {
  ScenarioConfig c = LoadPreset("factory_default");
  c.trials = 1;
  c.slam.rays_per_scan = 30;
  const ExperimentResult one = RunScenario(c);
  EXPECT_EQ(RunScenario(c).metrics.ToCsv(), one.metrics.ToCsv());
  c.trials = 2;
  const ExperimentResult two = RunScenario(c);
  ASSERT_EQ(two.metrics.rows().size(), 4u);
  ASSERT_EQ(one.metrics.rows().size(), 2u);
  for (std::size_t r = 0; r < 2; ++r) {
    EXPECT_EQ(two.metrics.rows()[r], one.metrics.rows()[r]);
  }
}

TEST(RunScenarioTest, SerialEqualsParallel) {
  for (const char* name : {"fig4a", "fig5a", "fig5b"}) {
    ScenarioConfig c = LoadPreset(name);
    c.trials = 6;
    if (c.experiment == Experiment::kBeamTracking) c.beam.frames = 40;
    const ExperimentResult serial = RunScenario(c, {1});
    const ExperimentResult parallel = RunScenario(c, {4});
    EXPECT_EQ(serial.metrics.ToCsv(), parallel.metrics.ToCsv()) << name;
    ASSERT_EQ(serial.tables.size(), parallel.tables.size());
    for (std::size_t i = 0; i < serial.tables.size(); ++i) {
      EXPECT_EQ(serial.tables[i].second.ToCsv(),
                parallel.tables[i].second.ToCsv());
    }
  }
}

TEST(RunScenarioTest, MetadataStamped) {
  ScenarioConfig c = TwoNodeDiscovery();
  const ExperimentResult r = RunScenario(c);
  std::map<std::string, std::string> meta(r.metrics.metadata().begin(),
                                          r.metrics.metadata().end());
  EXPECT_EQ(meta.at("seed"), std::to_string(c.seed));
  EXPECT_EQ(meta.at("trials"), "3");
  EXPECT_EQ(meta.at("version"), VersionString());
  EXPECT_EQ(meta.at("experiment"), "NEIGHBOR_DISCOVERY");
  EXPECT_EQ(meta.count("scenario_hash"), 1u);
}

TEST(CoopLocalizationTest, SingleBsAverageEqualsSingle) {
  ScenarioConfig c = LoadPreset("fig4a");
  c.trials = 50;
  c.localization.bs_counts = {1};
  const ExperimentResult r = RunScenario(c);
  const auto single = r.metrics.NumericColumn("rmse_single");
  const auto avg = r.metrics.NumericColumn("rmse_avg");
  ASSERT_EQ(single.size(), 8u);
  for (std::size_t i = 0; i < single.size(); ++i) EXPECT_EQ(single[i], avg[i]);
}

TEST(CoopLocalizationTest, WeightedNoWorseUnderMixedSnr) {
  ScenarioConfig c = LoadPreset("fig4a");
  c.trials = 2000;
  c.localization.profiles = {"mixed"};
  c.localization.bs_counts = {2, 4, 8};
  c.localization.snr_db = {5.0};
  const ExperimentResult r = RunScenario(c);
  const auto avg = r.metrics.NumericColumn("rmse_avg");
  const auto wtd = r.metrics.NumericColumn("rmse_weighted");
  for (std::size_t i = 0; i < avg.size(); ++i) EXPECT_LE(wtd[i], avg[i]);
}

TEST(SlamReconTest, ZeroLengthTrajectoryUndefined) {
  ScenarioConfig c = LoadPreset("factory_default");
  c.trials = 1;
  for (auto& n : c.world.nodes) {
    n.trajectory.waypoints.resize(1);
    n.trajectory.waypoints[0].time = 0.0;
  }
  EXPECT_EQ(CodeOf([&] { RunScenario(c); }), ErrorCode::kUndefinedMetric);
}

TEST(SlamReconTest, NoiselessLoopIsAccurate) {
  ScenarioConfig c = LoadPreset("factory_default");
  c.trials = 1;
  c.slam.noiseless = true;
  const ExperimentResult r = RunScenario(c);
  for (double acc : r.metrics.NumericColumn("map_accuracy")) {
    EXPECT_GE(acc, 0.98);
  }
  ASSERT_EQ(r.grids.size(), 2u);
  EXPECT_EQ(r.grids[0].first, "map_single");
  EXPECT_EQ(r.grids[1].first, "map_dual_fused");
}

TEST(BeamTrackingTest, StaticImPoliciesAgreeAfterFirstFrame) {
  ScenarioConfig c = LoadPreset("fig5a");
  c.trials = 2;
  c.beam.frames = 60;
  c.beam.position_jitter = 0.0;
  auto& traj = c.world.nodes[1].trajectory.waypoints;
  traj = {{0.0, {0.0, 20.0}}, {2.0, {0.0, 20.0}}};
  c.world.nodes[1].node.position = {0.0, 20.0};
  c.world.nodes[1].node.velocity = {};
  const ExperimentResult r = RunScenario(c);
  const auto frame = r.metrics.NumericColumn("frame");
  const auto fb = r.metrics.NumericColumn("se_feedback");
  const auto se = r.metrics.NumericColumn("se_sensing");
  for (std::size_t i = 0; i < frame.size(); ++i) {
    if (frame[i] >= 2) EXPECT_EQ(fb[i], se[i]) << i;
  }
}

TEST(BeamTrackingTest, SpectralEfficiencyBounded) {
  ScenarioConfig c = LoadPreset("fig5a");
  c.trials = 2;
  const ExperimentResult r = RunScenario(c);
  const auto n = r.metrics.NumericColumn("N");
  const double snr0 = std::pow(10.0, c.signal.snr0_db / 10.0);
  for (const char* col : {"se_feedback", "se_sensing", "true_best_se"}) {
    const auto v = r.metrics.NumericColumn(col);
    for (std::size_t i = 0; i < v.size(); ++i) {
      EXPECT_LE(v[i], std::log2(1.0 + n[i] * snr0) + 1e-12);
    }
  }
}

TEST(NeighborDiscoveryTest, TwoNodeDtCompletesInRoundOne) {
  const ExperimentResult r = RunScenario(TwoNodeDiscovery());
  const auto round = r.metrics.NumericColumn("round");
  const auto dt = r.metrics.NumericColumn("frac_dt_gossip");
  ASSERT_FALSE(round.empty());
  EXPECT_EQ(round[0], 1.0);
  EXPECT_EQ(dt[0], 1.0);
}

}  // namespace
}  // namespace isacdt::sim
