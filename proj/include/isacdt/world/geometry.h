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

#ifndef ISACDT_WORLD_GEOMETRY_H_
#define ISACDT_WORLD_GEOMETRY_H_

#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace isacdt::world {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
  friend Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend Vec2 operator*(double s, const Vec2& v) { return {s * v.x, s * v.y}; }
  friend Vec2 operator*(const Vec2& v, double s) { return {s * v.x, s * v.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;

  double Norm() const { return std::hypot(x, y); }
  double SquaredNorm() const { return x * x + y * y; }
  bool IsFinite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline double Dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double Cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double Distance(const Vec2& a, const Vec2& b) { return (a - b).Norm(); }
inline Vec2 UnitVector(double bearing) { return {std::cos(bearing), std::sin(bearing)}; }

// Wraps an angle into [-pi, pi).
double NormalizeAngle(double radians);

// Axis-aligned rectangle; min corner inclusive.
struct Rect {
  Vec2 min;
  Vec2 max;

  double Width() const { return max.x - min.x; }
  double Height() const { return max.y - min.y; }
  double Area() const { return Width() * Height(); }
  bool Contains(const Vec2& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
  friend bool operator==(const Rect&, const Rect&) = default;
};

using Polygon = std::vector<Vec2>;

struct FloorPlan {
  Rect bounds;
  std::vector<Polygon> obstacles;
};

// Returns every violated invariant (empty when the plan is valid). Each entry
// names the offending obstacle, e.g. "obstacles[2]: self-intersecting".
std::vector<std::string> ValidateFloorPlan(const FloorPlan& plan);

bool PointInPolygon(const Polygon& polygon, const Vec2& p);

// The bundled 60 m x 30 m hall with six rectangular machines.
FloorPlan FactoryDefaultPlan();

struct NodeId {
  std::uint32_t value = 0;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

std::string ToString(NodeId id);

enum class MachineKind { kBaseStation, kAgv, kUav, kVehicle };

const char* MachineKindName(MachineKind kind);
std::optional<MachineKind> ParseMachineKind(const std::string& name);

struct MachineNode {
  NodeId id;
  MachineKind kind = MachineKind::kAgv;
  Vec2 position;
  double heading = 0.0;  // radians, [-pi, pi)
  Vec2 velocity;         // m/s
  int antenna_count = 1;
  bool isac_capable = true;
};

std::vector<std::string> ValidateMachineNode(const MachineNode& node);

struct Waypoint {
  double time = 0.0;
  Vec2 position;
};

struct Trajectory {
  std::vector<Waypoint> waypoints;

  double StartTime() const { return waypoints.front().time; }
  double EndTime() const { return waypoints.back().time; }
  // Piecewise-linear position; clamps outside the covered time span.
  Vec2 PositionAt(double t) const;
  Vec2 VelocityAt(double t) const;
};

std::vector<std::string> ValidateTrajectory(const Trajectory& trajectory);

// Constant-velocity integration. Throws kInvalidArgument for dt < 0.
MachineNode AdvanceKinematics(const MachineNode& node, double dt);

// Distance along `bearing` to the first obstacle edge or bounds edge, or
// nullopt when nothing lies within max_range. Ties resolve to the smallest
// distance, then the lowest obstacle index.
std::optional<double> Raycast(const FloorPlan& plan, const Vec2& origin,
                              double bearing, double max_range);

// True when the open segment a-b crosses no obstacle edge.
bool LineOfSight(const FloorPlan& plan, const Vec2& a, const Vec2& b);

struct Observables {
  double range = 0.0;
  double azimuth = 0.0;          // in sensor frame, [-pi, pi)
  double radial_velocity = 0.0;  // positive when receding
};

// Throws kDegenerateGeometry when the two nodes coincide.
Observables GroundTruthObservables(const MachineNode& sensor,
                                   const MachineNode& target);

}  // namespace isacdt::world

#endif  // ISACDT_WORLD_GEOMETRY_H_
