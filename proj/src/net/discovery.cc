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

#include "isacdt/net/discovery.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "isacdt/common.h"

namespace isacdt::net {
namespace {

void MergeKnowledge(std::map<NodeId, KnowledgeEntry>& into,
                    const std::map<NodeId, KnowledgeEntry>& from) {
  for (const auto& [id, entry] : from) {
    auto it = into.find(id);
    if (it == into.end()) {
      into.emplace(id, entry);
    } else {
      it->second.last_heard_round =
          std::max(it->second.last_heard_round, entry.last_heard_round);
    }
  }
}

double Bearing(const Vec2& from, const Vec2& to) {
  const Vec2 d = to - from;
  return std::atan2(d.y, d.x);
}

// Sector toward the nearest undiscovered predicted neighbour, or nullopt when
// the twin cannot steer this node.
std::optional<int> DtSector(const DiscoveryState& self,
                            const ContactGraph& graph,
                            const ContactPolicy& policy, int sectors,
                            bool& fell_back) {
  const auto& tracks = policy.twin->environment.tracks;
  if (!tracks.count(twin::NodeTrackId(self.id))) {
    fell_back = true;
    return std::nullopt;
  }
  const Vec2 own = twin::PredictState(*policy.twin, twin::NodeTrackId(self.id),
                                      policy.twin_time)
                       .position;
  double best = std::numeric_limits<double>::infinity();
  std::optional<Vec2> target;
  for (const NodeId other : graph.ids) {
    if (other == self.id || self.known_neighbors.count(other)) continue;
    const std::string track = twin::NodeTrackId(other);
    if (!tracks.count(track)) continue;
    const Vec2 p =
        twin::PredictState(*policy.twin, track, policy.twin_time).position;
    const double d = world::Distance(own, p);
    if (d <= policy.comm_range && d < best) {
      best = d;
      target = p;
    }
  }
  if (!target || best == 0.0) return std::nullopt;
  return SectorOf(Bearing(own, *target), sectors);
}

}  // namespace

std::size_t ContactGraph::EdgeCount() const {
  std::size_t degree_sum = 0;
  for (const auto& n : neighbors) degree_sum += n.size();
  return degree_sum / 2;
}

ContactGraph BuildContactGraph(std::span<const world::MachineNode> nodes,
                               double comm_range) {
  Require(comm_range > 0.0, "build_contact_graph: comm_range must be positive");
  ContactGraph g;
  g.neighbors.resize(nodes.size());
  for (const auto& n : nodes) {
    g.ids.push_back(n.id);
    g.positions.push_back(n.position);
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      if (world::Distance(nodes[i].position, nodes[j].position) <= comm_range) {
        g.neighbors[i].push_back(static_cast<int>(j));
        g.neighbors[j].push_back(static_cast<int>(i));
      }
    }
  }
  for (auto& n : g.neighbors) std::sort(n.begin(), n.end());
  return g;
}

std::vector<DiscoveryState> InitialStates(const ContactGraph& graph) {
  std::vector<DiscoveryState> states(graph.ids.size());
  for (std::size_t i = 0; i < graph.ids.size(); ++i) {
    states[i].id = graph.ids[i];
    for (int j : graph.neighbors[i]) states[i].true_neighbors.insert(graph.ids[j]);
  }
  return states;
}

int SectorOf(double angle, int sectors) {
  const double a = world::NormalizeAngle(angle) + kPi;
  const int s = static_cast<int>(std::floor(a / (2.0 * kPi) * sectors));
  return std::clamp(s, 0, sectors - 1);
}

RoundStats GossipRound(std::vector<DiscoveryState>& states,
                       const ContactGraph& graph,
                       std::span<const Vec2> positions,
                       const ContactPolicy& policy, int sectors, int round,
                       sim::Rng& rng) {
  Require(states.size() == graph.ids.size() &&
              positions.size() == graph.ids.size(),
          "gossip_round: state, graph and position counts differ");
  Require(sectors >= 1, "gossip_round: sectors must be >= 1");
  if (policy.kind == PolicyKind::kDtGossip) {
    Require(policy.twin != nullptr, "gossip_round: DT policy without a twin");
  }
  RoundStats stats;
  const std::size_t n = states.size();
  std::vector<int> choice(n);
  for (std::size_t i = 0; i < n; ++i) {
    choice[i] = static_cast<int>(rng.UniformInt(sectors));
    if (policy.kind == PolicyKind::kDtGossip) {
      bool fell_back = false;
      if (auto s = DtSector(states[i], graph, policy, sectors, fell_back)) {
        choice[i] = *s;
      }
      stats.fallbacks += fell_back;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (int j : graph.neighbors[i]) {
      if (positions[i] == positions[j]) continue;
      if (SectorOf(Bearing(positions[i], positions[j]), sectors) != choice[i]) {
        continue;
      }
      DiscoveryState& a = states[i];
      DiscoveryState& b = states[j];
      if (!a.known_neighbors.count(b.id)) ++stats.discoveries;
      a.known_neighbors.insert(b.id);
      b.known_neighbors.insert(a.id);
      a.knowledge_table[b.id] = {round};
      b.knowledge_table[a.id] = {round};
      MergeKnowledge(a.knowledge_table, b.knowledge_table);
      MergeKnowledge(b.knowledge_table, a.knowledge_table);
      a.knowledge_table.erase(a.id);
      b.knowledge_table.erase(b.id);
    }
  }
  return stats;
}

double DiscoveryFraction(std::span<const DiscoveryState> states) {
  std::size_t known = 0;
  std::size_t total = 0;
  for (const auto& s : states) {
    known += s.known_neighbors.size();
    total += s.true_neighbors.size();
  }
  if (total == 0) {
    Fail(ErrorCode::kUndefinedMetric, "discovery_fraction: graph has no edges");
  }
  return static_cast<double>(known) / static_cast<double>(total);
}

std::optional<int> RoundsToThreshold(std::span<const double> trace,
                                     double threshold) {
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace[i] >= threshold) return static_cast<int>(i + 1);
  }
  return std::nullopt;
}

}  // namespace isacdt::net
