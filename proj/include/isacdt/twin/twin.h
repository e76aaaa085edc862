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

// Digital twin layer: data repositories feed local twins built per edge
// region; local twins merge into a global twin covering the whole network.

#ifndef ISACDT_TWIN_TWIN_H_
#define ISACDT_TWIN_TWIN_H_

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "Eigen/Core"
#include "isacdt/fusion/occupancy_grid.h"
#include "isacdt/signal/ofdm.h"
#include "isacdt/world/geometry.h"

namespace isacdt::twin {

using world::NodeId;
using world::Vec2;

enum class TaskStatus { kIdle, kExecuting, kFault };

const char* TaskStatusName(TaskStatus status);

struct RouteEntry {
  NodeId destination;
  NodeId next_hop;
  friend bool operator==(const RouteEntry&, const RouteEntry&) = default;
};

struct NetworkElementRecord {
  NodeId id;
  std::string address;
  world::MachineKind kind = world::MachineKind::kAgv;
  std::string link_id;
  std::vector<RouteEntry> routing_table;
  TaskStatus task_status = TaskStatus::kIdle;
  double resource_utilization = 0.0;
  double last_update = 0.0;
  Vec2 position;  // last self-reported position
  friend bool operator==(const NetworkElementRecord&,
                         const NetworkElementRecord&) = default;
};

struct CsiSummary {
  double path_gain_db = 0.0;
  double dominant_angle = 0.0;
  friend bool operator==(const CsiSummary&, const CsiSummary&) = default;
};

struct TopologyLink {
  NodeId a;  // a < b
  NodeId b;
  CsiSummary csi;
  double spectrum_utilization = 0.0;
  double last_update = 0.0;
  friend bool operator==(const TopologyLink&, const TopologyLink&) = default;
};

struct TopologyGraph {
  std::set<NodeId> nodes;
  std::map<std::pair<NodeId, NodeId>, TopologyLink> links;
  friend bool operator==(const TopologyGraph&, const TopologyGraph&) = default;
};

// Constant-velocity track. state_covariance orders the state as
// (px, py, vx, vy) at last_update.
struct Track {
  std::string id;
  Vec2 position;
  Vec2 velocity;
  Eigen::Matrix4d state_covariance = Eigen::Matrix4d::Zero();
  double first_update = 0.0;
  double last_update = 0.0;

  Eigen::Matrix2d PositionCovariance() const {
    return state_covariance.topLeftCorner<2, 2>();
  }
  friend bool operator==(const Track& a, const Track& b) {
    return a.id == b.id && a.position == b.position &&
           a.velocity == b.velocity &&
           a.state_covariance == b.state_covariance &&
           a.first_update == b.first_update && a.last_update == b.last_update;
  }
};

struct EnvironmentModel {
  fusion::OccupancyGrid grid;
  std::map<std::string, Track> tracks;
  friend bool operator==(const EnvironmentModel&,
                         const EnvironmentModel&) = default;
};

struct Twin {
  world::Rect region;
  std::map<NodeId, NetworkElementRecord> elements;
  TopologyGraph topology;
  EnvironmentModel environment;
  double built_at = 0.0;
  friend bool operator==(const Twin&, const Twin&) = default;
};

using LocalTwin = Twin;

struct GlobalTwin : Twin {
  // Content key ("element:7", "link:1-2", "track:n3") to the regions of the
  // contributing local twins, e.g. "0,0,30,30+30,0,60,30".
  std::map<std::string, std::string> provenance;
  friend bool operator==(const GlobalTwin&, const GlobalTwin&) = default;
};

// Sets one field of a network element record. Recognized fields: address,
// kind, link_id, task_status, resource_utilization, routing_table (encoded
// "dest>next;dest>next").
struct ElementUpdate {
  NodeId id;
  std::string field;
  std::string value;
  Vec2 reported_position;
};

struct LinkObservation {
  NodeId reporter;
  NodeId peer;
  CsiSummary csi;
  double spectrum_utilization = 0.0;
  Vec2 reported_position;
};

struct RepositoryEvent {
  double timestamp = 0.0;
  std::variant<signal::Measurement, ElementUpdate, LinkObservation> payload;

  NodeId Source() const;
};

// Measurements land in the physical-environment store; element updates and
// link observations in the network store. Single writer.
class DataRepository {
 public:
  // Throws kStaleEvent when the event is older than the last accepted event
  // from the same source, kInvalidArgument for malformed payloads.
  void Ingest(const RepositoryEvent& event);

  const std::vector<RepositoryEvent>& physical() const { return physical_; }
  const std::vector<RepositoryEvent>& network() const { return network_; }
  std::size_t accepted() const { return physical_.size() + network_.size(); }

 private:
  std::vector<RepositoryEvent> physical_;
  std::vector<RepositoryEvent> network_;
  std::map<NodeId, double> last_timestamp_;
};

// Track id under which labeled measurements of `node` are filed: "n<id>".
inline std::string NodeTrackId(NodeId node) { return "n" + world::ToString(node); }

struct TwinOptions {
  double cell_size = 0.25;
  double gate = 2.0;          // association gate, m
  int velocity_window = 5;    // measurements per least-squares fit
  double l_occ = 0.85;        // grid evidence per measurement
};

// Builds the twin of `region` from events with timestamp <= now whose source
// (measured or reported position) lies inside the region.
LocalTwin BuildLocalTwin(const DataRepository& repo, const world::Rect& region,
                         double now, const TwinOptions& options = {});

// Throws kInvalidPartition unless the regions tile their bounding box with
// pairwise disjoint interiors. Order of `locals` does not matter.
GlobalTwin MergeGlobal(std::span<const LocalTwin> locals, double now,
                       const TwinOptions& options = {});

struct PredictedState {
  Vec2 position;
  double staleness = 0.0;
};

// Throws kNotFound for an unknown track, kInvalidArgument when t precedes
// the track's last update.
PredictedState PredictState(const Twin& twin, const std::string& track_id,
                            double t);

enum class Verdict { kHonest, kDisguised };

struct DisguiseAssessment {
  Verdict verdict = Verdict::kHonest;
  double statistic = 0.0;  // mean squared Mahalanobis distance
  int waypoints_used = 0;
};

inline constexpr double kDefaultDisguiseGate = 9.0;

// Compares a node's claimed trajectory against the twin's sensed track over
// the track's time span [first_update, built_at]. Throws
// kInsufficientEvidence when no claimed waypoint falls inside that span.
DisguiseAssessment DetectDisguised(const Twin& twin,
                                   const world::Trajectory& claimed,
                                   const std::string& sensed_track_id,
                                   double gate = kDefaultDisguiseGate);

// Plain-text snapshot, one record per line: `kind|id|key=value|...`.
// The first line is the format header `isacdt-twin|1`.
std::string SerializeTwin(const Twin& twin);
std::string SerializeTwin(const GlobalTwin& twin);

// FNV-1a 64 over the grid's geometry, cell values and observation counts.
std::uint64_t GridContentHash(const fusion::OccupancyGrid& grid);

}  // namespace isacdt::twin

#endif  // ISACDT_TWIN_TWIN_H_
