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

// Round-based neighbor discovery with sectored beacons: the uniform gossip
// baseline and the twin-guided variant.

#ifndef ISACDT_NET_DISCOVERY_H_
#define ISACDT_NET_DISCOVERY_H_

#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "isacdt/sim/random.h"
#include "isacdt/twin/twin.h"
#include "isacdt/world/geometry.h"

namespace isacdt::net {

using world::NodeId;
using world::Vec2;

// Unit-disk connectivity. Node i of the graph is nodes[i] of the input.
struct ContactGraph {
  std::vector<NodeId> ids;
  std::vector<Vec2> positions;
  std::vector<std::vector<int>> neighbors;  // ascending indices

  std::size_t EdgeCount() const;
};

ContactGraph BuildContactGraph(std::span<const world::MachineNode> nodes,
                               double comm_range);

struct KnowledgeEntry {
  int last_heard_round = 0;
  friend bool operator==(const KnowledgeEntry&, const KnowledgeEntry&) = default;
};

struct DiscoveryState {
  NodeId id;
  std::set<NodeId> true_neighbors;
  std::set<NodeId> known_neighbors;
  std::map<NodeId, KnowledgeEntry> knowledge_table;
  friend bool operator==(const DiscoveryState&, const DiscoveryState&) = default;
};

std::vector<DiscoveryState> InitialStates(const ContactGraph& graph);

enum class PolicyKind { kUniformGossip, kDtGossip };

struct ContactPolicy {
  PolicyKind kind = PolicyKind::kUniformGossip;
  // Required for kDtGossip. Positions come from PredictState(twin,
  // NodeTrackId(id), twin_time).
  const twin::Twin* twin = nullptr;
  double twin_time = 0.0;
  double comm_range = 15.0;
};

struct RoundStats {
  int discoveries = 0;  // new mutual pairs this round
  int fallbacks = 0;    // DT nodes that had to beacon uniformly
};

// Sector of direction `angle` among `sectors` equal sectors starting at -pi.
int SectorOf(double angle, int sectors);

// One synchronous round. Every node draws a uniform sector (so both policies
// consume identical random streams), then DT nodes override it with the
// sector toward the nearest undiscovered twin-predicted neighbour within
// comm range. A beacon reaches every graph neighbour inside its sector;
// each reached pair discovers each other and merges knowledge tables.
// Exchanges are applied in ascending beacon order. `positions` are the true
// positions this round (graph.positions for static runs).
RoundStats GossipRound(std::vector<DiscoveryState>& states,
                       const ContactGraph& graph,
                       std::span<const Vec2> positions,
                       const ContactPolicy& policy, int sectors, int round,
                       sim::Rng& rng);

// Sum of known over sum of true neighbours. Throws kUndefinedMetric for an
// edgeless graph.
double DiscoveryFraction(std::span<const DiscoveryState> states);

// 1-based index of the first trace entry >= threshold, or nullopt.
std::optional<int> RoundsToThreshold(std::span<const double> trace,
                                     double threshold);

}  // namespace isacdt::net

#endif  // ISACDT_NET_DISCOVERY_H_
