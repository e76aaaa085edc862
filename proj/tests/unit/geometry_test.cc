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

#include "isacdt/world/geometry.h"

#include <cmath>

#include "gtest/gtest.h"
#include "isacdt/common.h"

namespace isacdt::world {
namespace {

Polygon Box(double x0, double y0, double x1, double y1) {
  return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
}

// Marches along the ray in 1 mm steps until the point enters an obstacle or
// leaves the bounds.
std::optional<double> SteppingRaycast(const FloorPlan& plan, Vec2 origin,
                                      double bearing, double max_range) {
  const Vec2 dir = UnitVector(bearing);
  for (double s = 0.0; s <= max_range; s += 1e-3) {
    const Vec2 p = origin + s * dir;
    if (!plan.bounds.Contains(p)) return s;
    for (const auto& poly : plan.obstacles) {
      if (PointInPolygon(poly, p)) return s;
    }
  }
  return std::nullopt;
}

MachineNode Node(Vec2 p, Vec2 v = {}) {
  MachineNode n;
  n.position = p;
  n.velocity = v;
  return n;
}

TEST(KinematicsTest, LinearMotion) {
  const MachineNode n = AdvanceKinematics(Node({0, 0}, {1, 0}), 2.0);
  EXPECT_EQ(n.position, (Vec2{2.0, 0.0}));
  const MachineNode m = AdvanceKinematics(Node({1, 1}, {-0.5, 0.5}), 4.0);
  EXPECT_DOUBLE_EQ(m.position.x, -1.0);
  EXPECT_DOUBLE_EQ(m.position.y, 3.0);
  EXPECT_NEAR(m.heading, 3.0 * kPi / 4.0, 1e-12);
}

TEST(KinematicsTest, ZeroStepIsIdentity) {
  MachineNode n = Node({3, 4}, {1, 2});
  n.heading = 0.3;
  n.antenna_count = 7;
  const MachineNode m = AdvanceKinematics(n, 0.0);
  EXPECT_EQ(m.position, n.position);
  EXPECT_EQ(m.heading, n.heading);
  EXPECT_EQ(m.antenna_count, 7);
}

TEST(KinematicsTest, NegativeStepRejected) {
  try {
    AdvanceKinematics(Node({0, 0}), -1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(KinematicsTest, Composition) {
  const MachineNode n = Node({0.5, -2.0}, {0.25, 0.5});
  const MachineNode a = AdvanceKinematics(AdvanceKinematics(n, 1.5), 2.5);
  const MachineNode b = AdvanceKinematics(n, 4.0);
  EXPECT_EQ(a.position, b.position);
}

TEST(RaycastTest, EmptyWorldBeyondRange) {
  FloorPlan plan{{{0, 0}, {100, 100}}, {}};
  EXPECT_FALSE(Raycast(plan, {50, 50}, 0.0, 10.0).has_value());
  EXPECT_NEAR(*Raycast(plan, {50, 50}, 0.0, 60.0), 50.0, 1e-12);
}

TEST(RaycastTest, PerpendicularAndDiagonalWall) {
  FloorPlan plan{{{0, 0}, {100, 100}}, {Box(60, 0, 61, 100)}};
  EXPECT_NEAR(*Raycast(plan, {50, 50}, 0.0, 20.0), 10.0, 1e-12);
  const double diag = *Raycast(plan, {50, 50}, kPi / 4.0, 20.0);
  EXPECT_NEAR(diag, 10.0 * std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(diag, *SteppingRaycast(plan, {50, 50}, kPi / 4.0, 20.0), 2e-3);
}

TEST(RaycastTest, AgreesWithSteppingOracle) {
  const FloorPlan plan = FactoryDefaultPlan();
  for (int i = 0; i < 36; ++i) {
    const double bearing = -kPi + i * kPi / 18.0 + 0.01;
    const auto fast = Raycast(plan, {20.0, 15.0}, bearing, 25.0);
    const auto slow = SteppingRaycast(plan, {20.0, 15.0}, bearing, 25.0);
    ASSERT_EQ(fast.has_value(), slow.has_value()) << bearing;
    if (fast) EXPECT_NEAR(*fast, *slow, 2e-3) << bearing;
  }
}

TEST(RaycastTest, OriginOutsideRejected) {
  FloorPlan plan{{{0, 0}, {10, 10}}, {}};
  EXPECT_THROW(Raycast(plan, {11, 5}, 0.0, 5.0), Error);
}

TEST(RaycastTest, RemovingObstacleNeverShortens) {
  FloorPlan full = FactoryDefaultPlan();
  for (std::size_t drop = 0; drop < full.obstacles.size(); ++drop) {
    FloorPlan fewer = full;
    fewer.obstacles.erase(fewer.obstacles.begin() + drop);
    for (int i = 0; i < 24; ++i) {
      const double b = -kPi + i * kPi / 12.0;
      const double with = Raycast(full, {5, 15}, b, 100.0).value_or(1e9);
      const double without = Raycast(fewer, {5, 15}, b, 100.0).value_or(1e9);
      EXPECT_GE(without, with);
    }
  }
}

TEST(ObservablesTest, Examples) {
  const Observables a = GroundTruthObservables(Node({0, 0}), Node({3, 4}));
  EXPECT_DOUBLE_EQ(a.range, 5.0);
  EXPECT_DOUBLE_EQ(a.radial_velocity, 0.0);
  const Observables b =
      GroundTruthObservables(Node({0, 0}), Node({10, 0}, {-2, 0}));
  EXPECT_DOUBLE_EQ(b.radial_velocity, -2.0);
}

TEST(ObservablesTest, RadialVelocityMatchesFiniteDifference) {
  const MachineNode s = Node({0, 0}, {1, 0});
  const MachineNode t = Node({0, 10}, {1, 1});
  const double dt = 1e-6;
  const double r0 = Distance(s.position, t.position);
  const double r1 = Distance(AdvanceKinematics(s, dt).position,
                             AdvanceKinematics(t, dt).position);
  const Observables o = GroundTruthObservables(s, t);
  EXPECT_NEAR(o.radial_velocity, (r1 - r0) / dt, 1e-6);
  EXPECT_NEAR(o.radial_velocity, 1.0, 1e-12);
}

TEST(ObservablesTest, SwapPreservesRangeAndRadialVelocity) {
  const MachineNode a = Node({1, 2}, {0.3, -0.7});
  const MachineNode b = Node({-4, 6}, {1.1, 0.2});
  const Observables ab = GroundTruthObservables(a, b);
  const Observables ba = GroundTruthObservables(b, a);
  EXPECT_DOUBLE_EQ(ab.range, ba.range);
  EXPECT_NEAR(ab.radial_velocity, ba.radial_velocity, 1e-12);
}

TEST(ObservablesTest, CoincidentNodesRejected) {
  try {
    GroundTruthObservables(Node({1, 1}), Node({1, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateGeometry);
  }
}

TEST(FloorPlanTest, ValidationFlagsBadPolygons) {
  FloorPlan plan{{{0, 0}, {10, 10}}, {}};
  EXPECT_TRUE(ValidateFloorPlan(plan).empty());
  plan.obstacles.push_back({{1, 1}, {3, 3}, {3, 1}, {1, 3}});  // bow tie
  plan.obstacles.push_back({{1, 1}, {2, 2}});
  plan.obstacles.push_back(Box(8, 8, 12, 9));
  EXPECT_EQ(ValidateFloorPlan(plan).size(), 4u);
  EXPECT_TRUE(ValidateFloorPlan(FactoryDefaultPlan()).empty());
}

TEST(GeometryTest, NormalizeAngleRange) {
  EXPECT_DOUBLE_EQ(NormalizeAngle(kPi), -kPi);
  EXPECT_NEAR(NormalizeAngle(3.0 * kPi / 2.0), -kPi / 2.0, 1e-12);
  EXPECT_NEAR(NormalizeAngle(-5.0 * kPi / 2.0), -kPi / 2.0, 1e-12);
}

TEST(LineOfSightTest, BlockedByMachine) {
  const FloorPlan plan = FactoryDefaultPlan();
  EXPECT_FALSE(LineOfSight(plan, {12, 5}, {12, 13}));
  EXPECT_TRUE(LineOfSight(plan, {5, 15}, {55, 15}));
}

}  // namespace
}  // namespace isacdt::world
