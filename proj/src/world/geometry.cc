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

#include <algorithm>
#include <limits>

#include "isacdt/common.h"

namespace isacdt::world {
namespace {

// Parametric hit of the ray origin + t*dir against segment [a, b]; returns t
// when the ray crosses the closed segment at t > 0.
std::optional<double> RaySegment(const Vec2& origin, const Vec2& dir,
                                 const Vec2& a, const Vec2& b) {
  const Vec2 edge = b - a;
  const double denom = Cross(dir, edge);
  if (denom == 0.0) return std::nullopt;  // parallel, grazing ignored
  const Vec2 rel = a - origin;
  const double t = Cross(rel, edge) / denom;
  const double u = Cross(rel, dir) / denom;
  if (t <= 0.0 || u < 0.0 || u > 1.0) return std::nullopt;
  return t;
}

bool SegmentsProperlyCross(const Vec2& p1, const Vec2& p2, const Vec2& q1,
                           const Vec2& q2) {
  const double d1 = Cross(q2 - q1, p1 - q1);
  const double d2 = Cross(q2 - q1, p2 - q1);
  const double d3 = Cross(p2 - p1, q1 - p1);
  const double d4 = Cross(p2 - p1, q2 - p1);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
         ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

bool SegmentsIntersect(const Vec2& p1, const Vec2& p2, const Vec2& q1,
                       const Vec2& q2) {
  auto on_segment = [](const Vec2& a, const Vec2& b, const Vec2& p) {
    return Cross(b - a, p - a) == 0.0 && std::min(a.x, b.x) <= p.x &&
           p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
  };
  return SegmentsProperlyCross(p1, p2, q1, q2) || on_segment(q1, q2, p1) ||
         on_segment(q1, q2, p2) || on_segment(p1, p2, q1) ||
         on_segment(p1, p2, q2);
}

bool IsSimplePolygon(const Polygon& poly) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a1 = poly[i];
    const Vec2& a2 = poly[(i + 1) % n];
    if (a1 == a2) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      // Adjacent edges share a vertex by construction.
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (SegmentsIntersect(a1, a2, poly[j], poly[(j + 1) % n])) return false;
    }
  }
  return true;
}

}  // namespace

double NormalizeAngle(double radians) {
  double wrapped = std::fmod(radians + kPi, 2.0 * kPi);
  if (wrapped < 0.0) wrapped += 2.0 * kPi;
  wrapped -= kPi;
  // fmod can land exactly on +pi after the shift for inputs like 3*pi.
  if (wrapped >= kPi) wrapped -= 2.0 * kPi;
  return wrapped;
}

bool PointInPolygon(const Polygon& polygon, const Vec2& p) {
  bool inside = false;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = polygon[i];
    const Vec2& b = polygon[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

std::vector<std::string> ValidateFloorPlan(const FloorPlan& plan) {
  std::vector<std::string> issues;
  const Rect& b = plan.bounds;
  if (!b.min.IsFinite() || !b.max.IsFinite() || b.Width() <= 0.0 ||
      b.Height() <= 0.0) {
    issues.push_back("bounds: must be a finite rectangle with positive area");
  }
  for (std::size_t i = 0; i < plan.obstacles.size(); ++i) {
    const Polygon& poly = plan.obstacles[i];
    const std::string where = "obstacles[" + std::to_string(i) + "]";
    if (poly.size() < 3) {
      issues.push_back(where + ": needs at least 3 vertices");
      continue;
    }
    for (std::size_t v = 0; v < poly.size(); ++v) {
      if (!poly[v].IsFinite() || !b.Contains(poly[v])) {
        issues.push_back(where + "[" + std::to_string(v) +
                         "]: vertex outside bounds");
      }
    }
    if (!IsSimplePolygon(poly)) issues.push_back(where + ": not simple");
  }
  return issues;
}

FloorPlan FactoryDefaultPlan() {
  FloorPlan plan;
  plan.bounds = {{0.0, 0.0}, {60.0, 30.0}};
  auto box = [](double x0, double y0, double x1, double y1) {
    return Polygon{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  };
  // Two rows of three machines; aisles at y in [0,7], [11,19], [23,30].
  for (double x0 : {10.0, 28.0, 46.0}) {
    plan.obstacles.push_back(box(x0, 7.0, x0 + 4.0, 11.0));
    plan.obstacles.push_back(box(x0, 19.0, x0 + 4.0, 23.0));
  }
  return plan;
}

std::string ToString(NodeId id) { return std::to_string(id.value); }

const char* MachineKindName(MachineKind kind) {
  switch (kind) {
    case MachineKind::kBaseStation: return "BS";
    case MachineKind::kAgv: return "AGV";
    case MachineKind::kUav: return "UAV";
    case MachineKind::kVehicle: return "VEHICLE";
  }
  return "?";
}

std::optional<MachineKind> ParseMachineKind(const std::string& name) {
  for (MachineKind k : {MachineKind::kBaseStation, MachineKind::kAgv,
                        MachineKind::kUav, MachineKind::kVehicle}) {
    if (name == MachineKindName(k)) return k;
  }
  return std::nullopt;
}

std::vector<std::string> ValidateMachineNode(const MachineNode& node) {
  std::vector<std::string> issues;
  if (!node.position.IsFinite()) issues.push_back("position: not finite");
  if (!node.velocity.IsFinite()) issues.push_back("velocity: not finite");
  if (!(node.heading >= -kPi && node.heading < kPi)) {
    issues.push_back("heading: must lie in [-pi, pi)");
  }
  if (node.antenna_count < 1) issues.push_back("antenna_count: must be >= 1");
  if (node.kind == MachineKind::kBaseStation &&
      (node.velocity.x != 0.0 || node.velocity.y != 0.0)) {
    issues.push_back("velocity: base stations are static");
  }
  return issues;
}

Vec2 Trajectory::PositionAt(double t) const {
  if (t <= waypoints.front().time) return waypoints.front().position;
  if (t >= waypoints.back().time) return waypoints.back().position;
  auto it = std::upper_bound(
      waypoints.begin(), waypoints.end(), t,
      [](double value, const Waypoint& w) { return value < w.time; });
  const Waypoint& b = *it;
  const Waypoint& a = *(it - 1);
  const double s = (t - a.time) / (b.time - a.time);
  return a.position + s * (b.position - a.position);
}

Vec2 Trajectory::VelocityAt(double t) const {
  if (waypoints.size() < 2 || t < waypoints.front().time ||
      t >= waypoints.back().time) {
    return {};
  }
  auto it = std::upper_bound(
      waypoints.begin(), waypoints.end(), t,
      [](double value, const Waypoint& w) { return value < w.time; });
  const Waypoint& b = *it;
  const Waypoint& a = *(it - 1);
  return (1.0 / (b.time - a.time)) * (b.position - a.position);
}

std::vector<std::string> ValidateTrajectory(const Trajectory& trajectory) {
  std::vector<std::string> issues;
  if (trajectory.waypoints.empty()) {
    issues.push_back("waypoints: needs at least one waypoint");
    return issues;
  }
  for (std::size_t i = 0; i < trajectory.waypoints.size(); ++i) {
    const Waypoint& w = trajectory.waypoints[i];
    if (!std::isfinite(w.time) || !w.position.IsFinite()) {
      issues.push_back("waypoints[" + std::to_string(i) + "]: not finite");
    }
    if (i > 0 && !(w.time > trajectory.waypoints[i - 1].time)) {
      issues.push_back("waypoints[" + std::to_string(i) +
                       "]: timestamps must strictly increase");
    }
  }
  return issues;
}

MachineNode AdvanceKinematics(const MachineNode& node, double dt) {
  Require(dt >= 0.0, "advance_kinematics: dt must be non-negative");
  MachineNode next = node;
  if (dt == 0.0) return next;
  next.position = node.position + dt * node.velocity;
  if (node.velocity.x != 0.0 || node.velocity.y != 0.0) {
    next.heading = NormalizeAngle(std::atan2(node.velocity.y, node.velocity.x));
  }
  return next;
}

std::optional<double> Raycast(const FloorPlan& plan, const Vec2& origin,
                              double bearing, double max_range) {
  Require(max_range > 0.0, "raycast: max_range must be positive");
  if (!plan.bounds.Contains(origin)) {
    Fail(ErrorCode::kInvalidArgument, "raycast: origin outside floor bounds");
  }
  const Vec2 dir = UnitVector(bearing);
  double best = std::numeric_limits<double>::infinity();

  auto scan_polygon = [&](const Polygon& poly) {
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (auto t = RaySegment(origin, dir, poly[i], poly[(i + 1) % n])) {
        // Strict comparison keeps the lowest obstacle index on exact ties.
        if (*t < best) best = *t;
      }
    }
  };
  for (const Polygon& poly : plan.obstacles) scan_polygon(poly);
  const Rect& b = plan.bounds;
  scan_polygon({b.min, {b.max.x, b.min.y}, b.max, {b.min.x, b.max.y}});

  if (!(best <= max_range)) return std::nullopt;
  return best;
}

bool LineOfSight(const FloorPlan& plan, const Vec2& a, const Vec2& b) {
  for (const Polygon& poly : plan.obstacles) {
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (SegmentsProperlyCross(a, b, poly[i], poly[(i + 1) % n])) {
        return false;
      }
    }
    // A segment lying entirely inside an obstacle crosses no edge.
    if (PointInPolygon(poly, 0.5 * (a + b))) return false;
  }
  return true;
}

Observables GroundTruthObservables(const MachineNode& sensor,
                                   const MachineNode& target) {
  const Vec2 delta = target.position - sensor.position;
  const double range = delta.Norm();
  if (range == 0.0) {
    Fail(ErrorCode::kDegenerateGeometry,
         "ground_truth_observables: sensor and target coincide");
  }
  const Vec2 los = (1.0 / range) * delta;
  Observables obs;
  obs.range = range;
  obs.azimuth = NormalizeAngle(std::atan2(delta.y, delta.x) - sensor.heading);
  obs.radial_velocity = Dot(target.velocity - sensor.velocity, los);
  return obs;
}

}  // namespace isacdt::world
