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

#include "isacdt/twin/twin.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "gtest/gtest.h"
#include "isacdt/common.h"
#include "isacdt/sim/random.h"

namespace isacdt::twin {
namespace {

signal::Measurement Fix(Vec2 p, double sigma, std::optional<std::uint32_t> target,
                        std::uint32_t source = 1) {
  signal::Measurement m;
  m.position = p;
  m.covariance = Eigen::Matrix2d::Identity() * sigma * sigma;
  m.snr = 100.0;
  m.source_id = {source};
  if (target) m.target_id = NodeId{*target};
  return m;
}

RepositoryEvent Event(double t, signal::Measurement m) {
  m.timestamp = t;
  return {t, m};
}

RepositoryEvent Element(double t, std::uint32_t id, const std::string& field,
                        const std::string& value, Vec2 where) {
  return {t, ElementUpdate{{id}, field, value, where}};
}

const world::Rect kLeft{{0, 0}, {30, 10}};
const world::Rect kRight{{30, 0}, {60, 10}};

TEST(DataRepositoryTest, RoutesByPayloadKind) {
  DataRepository repo;
  repo.Ingest(Event(0.0, Fix({1, 1}, 0.1, 7)));
  EXPECT_EQ(repo.physical().size(), 1u);
  EXPECT_EQ(repo.network().size(), 0u);
  repo.Ingest(Element(0.0, 3, "address", "10.0.0.3", {2, 2}));
  EXPECT_EQ(repo.physical().size(), 1u);
  EXPECT_EQ(repo.network().size(), 1u);
  repo.Ingest({0.5, LinkObservation{{3}, {4}, {-60.0, 0.2}, 0.3, {2, 2}}});
  EXPECT_EQ(repo.network().size(), 2u);
  EXPECT_EQ(repo.accepted(), 3u);
}

TEST(DataRepositoryTest, StaleEventRejected) {
  DataRepository repo;
  repo.Ingest(Event(1.0, Fix({1, 1}, 0.1, 7)));
  try {
    repo.Ingest(Event(0.5, Fix({1, 1}, 0.1, 7)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kStaleEvent);
  }
  EXPECT_EQ(repo.accepted(), 1u);
  // Equal timestamps are accepted; other sources are independent.
  repo.Ingest(Event(1.0, Fix({1, 1}, 0.1, 7)));
  repo.Ingest(Event(0.2, Fix({1, 1}, 0.1, 7, 2)));
  EXPECT_EQ(repo.accepted(), 3u);
}

TEST(DataRepositoryTest, MalformedPayloadsRejected) {
  DataRepository repo;
  EXPECT_THROW(repo.Ingest({0.0, LinkObservation{{3}, {3}, {}, 0.0, {}}}),
               Error);
  EXPECT_THROW(repo.Ingest(Element(0.0, 3, "resource_utilization", "1.5", {})),
               Error);
  EXPECT_THROW(repo.Ingest(Element(0.0, 3, "colour", "red", {})), Error);
  EXPECT_EQ(repo.accepted(), 0u);
}

TEST(BuildLocalTwinTest, EmptyRepository) {
  const LocalTwin t = BuildLocalTwin(DataRepository{}, kLeft, 2.0);
  EXPECT_TRUE(t.elements.empty());
  EXPECT_TRUE(t.topology.nodes.empty());
  EXPECT_TRUE(t.environment.tracks.empty());
  EXPECT_EQ(t.built_at, 2.0);
  for (auto n : t.environment.grid.observations()) EXPECT_EQ(n, 0u);
}

TEST(BuildLocalTwinTest, StaticTarget) {
  DataRepository repo;
  repo.Ingest(Event(0.0, Fix({5, 5}, 0.1, 9)));
  repo.Ingest(Event(1.0, Fix({5, 5}, 0.1, 9)));
  const LocalTwin t = BuildLocalTwin(repo, kLeft, 1.0);
  ASSERT_EQ(t.environment.tracks.size(), 1u);
  const Track& tr = t.environment.tracks.at(NodeTrackId({9}));
  EXPECT_NEAR(tr.velocity.x, 0.0, 1e-12);
  EXPECT_NEAR(tr.velocity.y, 0.0, 1e-12);
}

TEST(BuildLocalTwinTest, TwoPointVelocity) {
  DataRepository repo;
  repo.Ingest(Event(0.0, Fix({0.5, 0.5}, 0.1, std::nullopt)));
  repo.Ingest(Event(1.0, Fix({1.5, 0.5}, 0.1, std::nullopt)));
  const LocalTwin t = BuildLocalTwin(repo, kLeft, 1.0);
  ASSERT_EQ(t.environment.tracks.size(), 1u);
  const Track& tr = t.environment.tracks.begin()->second;
  // Ordinary least-squares slope through (0, 0.5), (1, 1.5).
  const double ts[] = {0.0, 1.0}, xs[] = {0.5, 1.5};
  const double tm = 0.5, xm = 1.0;
  const double slope = ((ts[0] - tm) * (xs[0] - xm) + (ts[1] - tm) * (xs[1] - xm)) /
                       ((ts[0] - tm) * (ts[0] - tm) + (ts[1] - tm) * (ts[1] - tm));
  EXPECT_NEAR(tr.velocity.x, slope, 1e-9);
  EXPECT_NEAR(tr.velocity.x, 1.0, 1e-9);
  EXPECT_NEAR(tr.velocity.y, 0.0, 1e-9);
  EXPECT_NEAR(tr.position.x, 1.5, 1e-9);
}

TEST(BuildLocalTwinTest, GatingSplitsDistantTargets) {
  DataRepository repo;
  repo.Ingest(Event(0.0, Fix({2, 2}, 0.1, std::nullopt)));
  repo.Ingest(Event(0.0, Fix({8, 2}, 0.1, std::nullopt, 2)));
  repo.Ingest(Event(0.1, Fix({2.1, 2}, 0.1, std::nullopt)));
  const LocalTwin t = BuildLocalTwin(repo, kLeft, 0.1);
  ASSERT_EQ(t.environment.tracks.size(), 2u);
  EXPECT_NEAR(t.environment.tracks.at("t0").velocity.x, 1.0, 1e-9);
}

TEST(BuildLocalTwinTest, RegionFilterAndIdempotence) {
  DataRepository repo;
  repo.Ingest(Event(0.0, Fix({5, 5}, 0.1, 1)));
  repo.Ingest(Event(0.0, Fix({45, 5}, 0.1, 2, 2)));
  repo.Ingest(Element(0.0, 1, "task_status", "EXECUTING", {5, 5}));
  repo.Ingest(Element(0.0, 2, "routing_table", "1>3;4>3", {45, 5}));
  repo.Ingest(Event(3.0, Fix({6, 5}, 0.1, 1)));  // after `now`
  const LocalTwin left = BuildLocalTwin(repo, kLeft, 1.0);
  const LocalTwin right = BuildLocalTwin(repo, kRight, 1.0);
  EXPECT_EQ(left.environment.tracks.count("n1"), 1u);
  EXPECT_EQ(left.environment.tracks.at("n1").position, (Vec2{5, 5}));
  EXPECT_EQ(right.environment.tracks.count("n2"), 1u);
  EXPECT_EQ(left.elements.at({1}).task_status, TaskStatus::kExecuting);
  EXPECT_EQ(left.elements.count({2}), 0u);
  EXPECT_EQ(right.elements.at({2}).routing_table,
            (std::vector<RouteEntry>{{{1}, {3}}, {{4}, {3}}}));
  EXPECT_EQ(BuildLocalTwin(repo, kLeft, 1.0), left);
}

LocalTwin TwinWithTrack(const world::Rect& region, const std::string& id, Vec2 p,
                        double var) {
  LocalTwin t;
  t.region = region;
  t.built_at = 1.0;
  t.environment.grid = fusion::OccupancyGrid::Covering(region, 0.25);
  Track tr;
  tr.id = id;
  tr.position = p;
  tr.state_covariance = Eigen::Matrix4d::Identity() * var;
  tr.last_update = 1.0;
  t.environment.tracks[id] = tr;
  return t;
}

TEST(MergeGlobalTest, BoundaryStraddlerMidpoint) {
  const std::vector<LocalTwin> locals{
      TwinWithTrack(kLeft, "t0", {29.9, 5}, 0.04),
      TwinWithTrack(kRight, "t0", {30.1, 5}, 0.04)};
  const GlobalTwin g = MergeGlobal(locals, 1.0);
  ASSERT_EQ(g.environment.tracks.size(), 1u);
  const Track& tr = g.environment.tracks.begin()->second;
  EXPECT_EQ(tr.position, (Vec2{30.0, 5.0}));
  EXPECT_EQ(g.provenance.at("track:t0"), "0,0,30,10+30,0,60,10");
  EXPECT_EQ(g.region, (world::Rect{{0, 0}, {60, 10}}));
}

TEST(MergeGlobalTest, UnequalCovarianceUsesInformationForm) {
  const std::vector<LocalTwin> locals{TwinWithTrack(kLeft, "a", {29.0, 5}, 1.0),
                                      TwinWithTrack(kRight, "b", {30.0, 5}, 4.0)};
  const GlobalTwin g = MergeGlobal(locals, 1.0);
  ASSERT_EQ(g.environment.tracks.size(), 1u);
  EXPECT_NEAR(g.environment.tracks.begin()->second.position.x, 29.2, 1e-9);
}

TEST(MergeGlobalTest, SingletonAndDisjointUnion) {
  const LocalTwin whole = TwinWithTrack({{0, 0}, {60, 10}}, "t0", {3, 3}, 0.1);
  const GlobalTwin g1 = MergeGlobal(std::vector{whole}, 1.0);
  EXPECT_EQ(static_cast<const Twin&>(g1), whole);
  EXPECT_EQ(g1.provenance.size(), 1u);

  const std::vector<LocalTwin> locals{TwinWithTrack(kLeft, "t0", {3, 3}, 0.1),
                                      TwinWithTrack(kRight, "t0", {50, 3}, 0.1)};
  const GlobalTwin g2 = MergeGlobal(locals, 1.0);
  EXPECT_EQ(g2.environment.tracks.size(), 2u);
  EXPECT_EQ(g2.environment.tracks.count("t0@1"), 1u);
}

TEST(MergeGlobalTest, InvalidPartitions) {
  auto expect_partition_error = [](std::vector<LocalTwin> locals) {
    try {
      MergeGlobal(locals, 1.0);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidPartition);
    }
  };
  expect_partition_error({TwinWithTrack(kLeft, "a", {1, 1}, 1),
                          TwinWithTrack({{20, 0}, {60, 10}}, "b", {50, 1}, 1)});
  expect_partition_error({TwinWithTrack(kLeft, "a", {1, 1}, 1),
                          TwinWithTrack({{40, 0}, {60, 10}}, "b", {50, 1}, 1)});
  expect_partition_error({TwinWithTrack({{0, 0}, {0, 10}}, "a", {0, 1}, 1)});
}

DataRepository SceneRepository() {
  DataRepository repo;
  for (int k = 0; k < 6; ++k) {
    const double t = 0.1 * k;
    repo.Ingest(Event(t, Fix({18.0 + 2.0 * t, 4.0}, 0.2, 5, 7)));
    repo.Ingest(Event(t, Fix({29.95 + 0.1 * t, 6.0}, 0.2, std::nullopt, 2)));
    repo.Ingest(Event(t, Fix({30.05 + 0.1 * t, 6.0}, 0.3, std::nullopt, 3)));
    repo.Ingest(Event(t, Fix({44.0, 2.0 + t}, 0.2, std::nullopt, 4)));
  }
  repo.Ingest(Element(0.0, 1, "address", "10.0.0.1", {10, 5}));
  repo.Ingest(Element(0.1, 1, "kind", "BS", {10, 5}));
  repo.Ingest(Element(0.0, 6, "resource_utilization", "0.25", {50, 5}));
  repo.Ingest(Element(0.1, 6, "link_id", "aa:bb", {50, 5}));
  repo.Ingest({0.2, LinkObservation{{6}, {1}, {-71.5, 0.75}, 0.4, {50, 5}}});
  return repo;
}

TEST(MergeGlobalTest, PermutationInvariantOverThreeTwins) {
  const DataRepository repo = SceneRepository();
  std::vector<LocalTwin> locals{BuildLocalTwin(repo, {{0, 0}, {20, 10}}, 0.5),
                                BuildLocalTwin(repo, {{20, 0}, {40, 10}}, 0.5),
                                BuildLocalTwin(repo, {{40, 0}, {60, 10}}, 0.5)};
  std::vector<int> perm{0, 1, 2};
  const GlobalTwin reference = MergeGlobal(locals, 0.5);
  int orderings = 0;
  do {
    std::vector<LocalTwin> shuffled;
    for (int i : perm) shuffled.push_back(locals[i]);
    const GlobalTwin g = MergeGlobal(shuffled, 0.5);
    EXPECT_EQ(g, reference);
    EXPECT_EQ(SerializeTwin(g), SerializeTwin(reference));
    ++orderings;
  } while (std::next_permutation(perm.begin(), perm.end()));
  EXPECT_EQ(orderings, 6);
}

TEST(PredictStateTest, Examples) {
  LocalTwin t = TwinWithTrack(kLeft, "a", {1, 1}, 0.1);
  t.environment.tracks["a"].velocity = {2, 0};
  t.environment.tracks["b"] = t.environment.tracks["a"];
  t.environment.tracks["b"].velocity = {};
  const PredictedState same = PredictState(t, "a", 1.0);
  EXPECT_EQ(same.position, (Vec2{1, 1}));
  EXPECT_EQ(same.staleness, 0.0);
  const PredictedState later = PredictState(t, "a", 4.0);
  EXPECT_EQ(later.position, (Vec2{7, 1}));
  EXPECT_EQ(later.staleness, 3.0);
  EXPECT_EQ(PredictState(t, "b", 100.0).position, (Vec2{1, 1}));
  try {
    PredictState(t, "zz", 2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
  EXPECT_THROW(PredictState(t, "a", 0.5), Error);
}

TEST(PredictStateTest, NoiselessConstantVelocityIsExact) {
  DataRepository repo;
  for (int k = 0; k < 8; ++k) {
    const double t = 0.25 * k;
    repo.Ingest(Event(t, Fix({1.0 + 2.0 * t, 3.0 - 1.0 * t}, 0.0, 4)));
  }
  const LocalTwin twin = BuildLocalTwin(repo, kLeft, 1.75);
  for (double gap : {0.0, 0.5, 2.0, 10.0}) {
    const double t = 1.75 + gap;
    const PredictedState p = PredictState(twin, "n4", t);
    EXPECT_NEAR(p.position.x, 1.0 + 2.0 * t, 1e-9);
    EXPECT_NEAR(p.position.y, 3.0 - 1.0 * t, 1e-9);
  }
}

// Target moving at constant velocity, sensed with per-axis noise sigma at
// 10 Hz for 0.4 s; the claimed trajectory is the truth plus `offset`.
DisguiseAssessment RunDisguiseTrial(std::uint64_t seed, double sigma,
                                    Vec2 offset) {
  sim::Rng rng(seed);
  DataRepository repo;
  world::Trajectory claimed;
  for (int k = 0; k < 5; ++k) {
    const double t = 0.1 * k;
    const Vec2 truth{10.0 + 1.5 * t, 5.0 + 0.5 * t};
    repo.Ingest(Event(t, Fix({truth.x + sigma * rng.Normal(),
                              truth.y + sigma * rng.Normal()},
                             sigma, 8)));
    claimed.waypoints.push_back({t, truth + offset});
  }
  const LocalTwin twin = BuildLocalTwin(repo, kLeft, 0.4);
  return DetectDisguised(twin, claimed, "n8");
}

TEST(DetectDisguisedTest, Examples) {
  LocalTwin t = TwinWithTrack(kLeft, "a", {5, 5}, 0.25);
  t.environment.tracks["a"].first_update = 0.0;
  world::Trajectory same{{{1.0, {5, 5}}}};
  const DisguiseAssessment honest = DetectDisguised(t, same, "a");
  EXPECT_EQ(honest.verdict, Verdict::kHonest);
  EXPECT_EQ(honest.statistic, 0.0);
  world::Trajectory far{{{1.0, {105, 5}}}};
  EXPECT_EQ(DetectDisguised(t, far, "a").verdict, Verdict::kDisguised);
  world::Trajectory outside{{{5.0, {5, 5}}}};
  try {
    DetectDisguised(t, outside, "a");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientEvidence);
  }
}

TEST(DetectDisguisedTest, FalsePositiveAndDetectionRates) {
  const double sigma = 0.5;
  int false_positives = 0, detections = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    if (RunDisguiseTrial(seed, sigma, {}).verdict == Verdict::kDisguised) {
      ++false_positives;
    }
    const double a = 2.0 * kPi * seed / 1000.0;
    const Vec2 offset = 10.0 * sigma * world::UnitVector(a);
    if (RunDisguiseTrial(seed, sigma, offset).verdict == Verdict::kDisguised) {
      ++detections;
    }
  }
  EXPECT_LT(false_positives, 50);
  EXPECT_EQ(detections, 1000);
}

TEST(SerializeTwinTest, MatchesGoldenSnapshot) {
  const DataRepository repo = SceneRepository();
  const std::vector<LocalTwin> locals{
      BuildLocalTwin(repo, kLeft, 0.5), BuildLocalTwin(repo, kRight, 0.5)};
  const std::string text = SerializeTwin(MergeGlobal(locals, 0.5));
  const std::string path = std::string(ISACDT_GOLDEN_DIR) + "/twin_snapshot.txt";
  if (std::getenv("ISACDT_UPDATE_GOLDEN") != nullptr) {
    std::ofstream(path, std::ios::binary) << text;
  }
  std::ifstream in(path, std::ios::binary);
  ASSERT_TRUE(in.good()) << path;
  std::ostringstream golden;
  golden << in.rdbuf();
  EXPECT_EQ(text, golden.str());
  EXPECT_EQ(text.substr(0, text.find('\n')), "isacdt-twin|1");
}

}  // namespace
}  // namespace isacdt::twin
