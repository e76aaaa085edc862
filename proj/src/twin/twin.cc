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
#include <cstdio>
#include <cstring>
#include <limits>
#include <sstream>

#include "Eigen/Dense"
#include "isacdt/common.h"

namespace isacdt::twin {
namespace {

using Eigen::Matrix2d;
using Eigen::Matrix4d;
using Eigen::Vector4d;

// Keeps zero-covariance (noiseless) measurements invertible.
constexpr double kCovarianceFloor = 1e-12;

std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string RegionLabel(const world::Rect& r) {
  return FormatDouble(r.min.x) + "," + FormatDouble(r.min.y) + "," +
         FormatDouble(r.max.x) + "," + FormatDouble(r.max.y);
}

std::pair<NodeId, NodeId> LinkKey(NodeId a, NodeId b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

std::string LinkLabel(const std::pair<NodeId, NodeId>& key) {
  return world::ToString(key.first) + "-" + world::ToString(key.second);
}

std::optional<TaskStatus> ParseTaskStatus(const std::string& s) {
  for (TaskStatus t :
       {TaskStatus::kIdle, TaskStatus::kExecuting, TaskStatus::kFault}) {
    if (s == TaskStatusName(t)) return t;
  }
  return std::nullopt;
}

std::vector<RouteEntry> ParseRoutes(const std::string& text) {
  std::vector<RouteEntry> routes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    const auto sep = item.find('>');
    Require(sep != std::string::npos,
            "element update: route entry '" + item + "' lacks '>'");
    try {
      routes.push_back(
          {NodeId{static_cast<std::uint32_t>(std::stoul(item.substr(0, sep)))},
           NodeId{static_cast<std::uint32_t>(std::stoul(item.substr(sep + 1)))}});
    } catch (const std::logic_error&) {
      Fail(ErrorCode::kInvalidArgument,
           "element update: bad route entry '" + item + "'");
    }
  }
  return routes;
}

void ApplyElementUpdate(NetworkElementRecord& rec, const ElementUpdate& u) {
  if (u.field == "address") {
    rec.address = u.value;
  } else if (u.field == "kind") {
    auto kind = world::ParseMachineKind(u.value);
    Require(kind.has_value(), "element update: unknown kind " + u.value);
    rec.kind = *kind;
  } else if (u.field == "link_id") {
    rec.link_id = u.value;
  } else if (u.field == "task_status") {
    auto status = ParseTaskStatus(u.value);
    Require(status.has_value(), "element update: unknown status " + u.value);
    rec.task_status = *status;
  } else if (u.field == "resource_utilization") {
    double v = 0.0;
    try {
      v = std::stod(u.value);
    } catch (const std::logic_error&) {
      Fail(ErrorCode::kInvalidArgument,
           "element update: resource_utilization is not a number");
    }
    Require(v >= 0.0 && v <= 1.0,
            "element update: resource_utilization outside [0, 1]");
    rec.resource_utilization = v;
  } else if (u.field == "routing_table") {
    rec.routing_table = ParseRoutes(u.value);
  } else if (u.field != "position") {
    Fail(ErrorCode::kInvalidArgument,
         "element update: unknown field '" + u.field + "'");
  }
}

Vec2 SourcePosition(const RepositoryEvent& ev) {
  return std::visit(
      [](const auto& p) -> Vec2 {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, signal::Measurement>) {
          return p.position;
        } else {
          return p.reported_position;
        }
      },
      ev.payload);
}

struct TimedMeasurement {
  double t;
  Vec2 position;
  Matrix2d covariance;
};

// Generalized least-squares fit of a constant-velocity state at the time of
// the newest point.
Track FitTrack(const std::string& id, std::span<const TimedMeasurement> points,
               double first_update) {
  Track track;
  track.id = id;
  track.first_update = first_update;
  const double t_last = points.back().t;
  track.last_update = t_last;

  bool distinct_times = false;
  for (const auto& p : points) distinct_times |= p.t != t_last;

  if (!distinct_times) {
    Matrix2d info = Matrix2d::Zero();
    Eigen::Vector2d weighted = Eigen::Vector2d::Zero();
    for (const auto& p : points) {
      const Matrix2d inv =
          (p.covariance + kCovarianceFloor * Matrix2d::Identity()).inverse();
      info += inv;
      weighted += inv * Eigen::Vector2d(p.position.x, p.position.y);
    }
    const Matrix2d cov = info.inverse();
    const Eigen::Vector2d x = cov * weighted;
    track.position = points.size() == 1 ? points.front().position
                                        : Vec2{x(0), x(1)};
    track.state_covariance.topLeftCorner<2, 2>() = cov;
    return track;
  }

  Matrix4d info = Matrix4d::Zero();
  Vector4d rhs = Vector4d::Zero();
  for (const auto& p : points) {
    Eigen::Matrix<double, 2, 4> h;
    const double dt = p.t - t_last;
    h << 1, 0, dt, 0, 0, 1, 0, dt;
    const Matrix2d inv =
        (p.covariance + kCovarianceFloor * Matrix2d::Identity()).inverse();
    info += h.transpose() * inv * h;
    rhs += h.transpose() * inv * Eigen::Vector2d(p.position.x, p.position.y);
  }
  const Matrix4d cov = info.inverse();
  const Vector4d state = cov * rhs;
  track.position = {state(0), state(1)};
  track.velocity = {state(2), state(3)};
  track.state_covariance = 0.5 * (cov + cov.transpose());
  return track;
}

Vec2 Extrapolate(const Track& track, double t) {
  return track.position + (t - track.last_update) * track.velocity;
}

Matrix2d ExtrapolatedCovariance(const Track& track, double t) {
  const double dt = t - track.last_update;
  Eigen::Matrix<double, 2, 4> j;
  j << 1, 0, dt, 0, 0, 1, 0, dt;
  return j * track.state_covariance * j.transpose();
}

bool RegionLess(const world::Rect& a, const world::Rect& b) {
  return std::tie(a.min.y, a.min.x, a.max.y, a.max.x) <
         std::tie(b.min.y, b.min.x, b.max.y, b.max.x);
}

double OverlapArea(const world::Rect& a, const world::Rect& b) {
  const double w = std::min(a.max.x, b.max.x) - std::max(a.min.x, b.min.x);
  const double h = std::min(a.max.y, b.max.y) - std::max(a.min.y, b.min.y);
  return (w > 0.0 && h > 0.0) ? w * h : 0.0;
}

// Predicts `track` to time t and returns it re-anchored there.
Track Reanchor(const Track& track, double t) {
  Track out = track;
  out.position = Extrapolate(track, t);
  const double dt = t - track.last_update;
  Matrix4d f = Matrix4d::Identity();
  f(0, 2) = dt;
  f(1, 3) = dt;
  out.state_covariance = f * track.state_covariance * f.transpose();
  out.last_update = t;
  return out;
}

Track FuseTracks(const std::vector<Track>& members, const std::string& id) {
  double t = members.front().last_update;
  double first = members.front().first_update;
  for (const Track& m : members) {
    t = std::max(t, m.last_update);
    first = std::min(first, m.first_update);
  }
  std::vector<Track> aligned;
  for (const Track& m : members) aligned.push_back(Reanchor(m, t));

  Track fused = aligned.front();
  fused.id = id;
  fused.first_update = first;
  fused.last_update = t;

  bool equal_covariance = true;
  for (const Track& a : aligned) {
    equal_covariance &= a.state_covariance == aligned.front().state_covariance;
  }
  if (equal_covariance) {
    Vec2 pos, vel;
    for (const Track& a : aligned) {
      pos += a.position;
      vel += a.velocity;
    }
    const double n = static_cast<double>(aligned.size());
    fused.position = {pos.x / n, pos.y / n};
    fused.velocity = {vel.x / n, vel.y / n};
    fused.state_covariance = aligned.front().state_covariance / n;
    return fused;
  }

  Matrix4d info = Matrix4d::Zero();
  Vector4d rhs = Vector4d::Zero();
  for (const Track& a : aligned) {
    const Matrix4d inv =
        (a.state_covariance + kCovarianceFloor * Matrix4d::Identity())
            .inverse();
    info += inv;
    rhs += inv * Vector4d(a.position.x, a.position.y, a.velocity.x,
                          a.velocity.y);
  }
  const Matrix4d cov = info.inverse();
  const Vector4d state = cov * rhs;
  fused.position = {state(0), state(1)};
  fused.velocity = {state(2), state(3)};
  fused.state_covariance = 0.5 * (cov + cov.transpose());
  return fused;
}

void AppendTwinBody(const Twin& twin, std::string& out) {
  auto line = [&out](std::initializer_list<std::string> fields) {
    bool first = true;
    for (const std::string& f : fields) {
      if (!first) out += '|';
      out += f;
      first = false;
    }
    out += '\n';
  };
  line({"region", RegionLabel(twin.region),
        "built_at=" + FormatDouble(twin.built_at)});
  for (const auto& [id, rec] : twin.elements) {
    std::string routes;
    for (const RouteEntry& r : rec.routing_table) {
      if (!routes.empty()) routes += ';';
      routes += world::ToString(r.destination) + ">" + world::ToString(r.next_hop);
    }
    line({"element", world::ToString(id), "address=" + rec.address,
          std::string("kind=") + world::MachineKindName(rec.kind),
          "link_id=" + rec.link_id, "routes=" + routes,
          std::string("task_status=") + TaskStatusName(rec.task_status),
          "utilization=" + FormatDouble(rec.resource_utilization),
          "position=" + FormatDouble(rec.position.x) + "," +
              FormatDouble(rec.position.y),
          "last_update=" + FormatDouble(rec.last_update)});
  }
  for (NodeId n : twin.topology.nodes) line({"node", world::ToString(n)});
  for (const auto& [key, link] : twin.topology.links) {
    line({"link", LinkLabel(key), "gain_db=" + FormatDouble(link.csi.path_gain_db),
          "angle=" + FormatDouble(link.csi.dominant_angle),
          "spectrum=" + FormatDouble(link.spectrum_utilization),
          "last_update=" + FormatDouble(link.last_update)});
  }
  for (const auto& [id, tr] : twin.environment.tracks) {
    std::string cov;
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        if (!cov.empty()) cov += ',';
        cov += FormatDouble(tr.state_covariance(r, c));
      }
    }
    line({"track", id,
          "position=" + FormatDouble(tr.position.x) + "," +
              FormatDouble(tr.position.y),
          "velocity=" + FormatDouble(tr.velocity.x) + "," +
              FormatDouble(tr.velocity.y),
          "covariance=" + cov, "first_update=" + FormatDouble(tr.first_update),
          "last_update=" + FormatDouble(tr.last_update)});
  }
  const fusion::OccupancyGrid& g = twin.environment.grid;
  char hash[24];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(GridContentHash(g)));
  line({"grid", hash,
        "origin=" + FormatDouble(g.origin().x) + "," + FormatDouble(g.origin().y),
        "cell_size=" + FormatDouble(g.cell_size()),
        "size=" + std::to_string(g.width()) + "x" + std::to_string(g.height())});
}

}  // namespace

const char* TaskStatusName(TaskStatus status) {
  switch (status) {
    case TaskStatus::kIdle: return "IDLE";
    case TaskStatus::kExecuting: return "EXECUTING";
    case TaskStatus::kFault: return "FAULT";
  }
  return "?";
}

NodeId RepositoryEvent::Source() const {
  return std::visit(
      [](const auto& p) -> NodeId {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, signal::Measurement>) {
          return p.source_id;
        } else if constexpr (std::is_same_v<T, ElementUpdate>) {
          return p.id;
        } else {
          return p.reporter;
        }
      },
      payload);
}

void DataRepository::Ingest(const RepositoryEvent& event) {
  Require(std::isfinite(event.timestamp), "ingest: timestamp not finite");
  if (const auto* link = std::get_if<LinkObservation>(&event.payload)) {
    Require(!(link->reporter == link->peer), "ingest: link is a self-loop");
  }
  if (const auto* update = std::get_if<ElementUpdate>(&event.payload)) {
    NetworkElementRecord scratch;
    ApplyElementUpdate(scratch, *update);  // throws on a malformed value
  }
  const NodeId source = event.Source();
  auto it = last_timestamp_.find(source);
  if (it != last_timestamp_.end() && event.timestamp < it->second) {
    Fail(ErrorCode::kStaleEvent,
         "ingest: event at t=" + FormatDouble(event.timestamp) +
             " older than last event from source " + world::ToString(source));
  }
  last_timestamp_[source] = event.timestamp;
  if (std::holds_alternative<signal::Measurement>(event.payload)) {
    physical_.push_back(event);
  } else {
    network_.push_back(event);
  }
}

LocalTwin BuildLocalTwin(const DataRepository& repo, const world::Rect& region,
                         double now, const TwinOptions& options) {
  LocalTwin twin;
  twin.region = region;
  twin.built_at = now;
  twin.environment.grid =
      fusion::OccupancyGrid::Covering(region, options.cell_size);

  // Elements belong to the region holding their latest reported position.
  std::map<NodeId, Vec2> latest_position;
  for (const RepositoryEvent& ev : repo.network()) {
    if (ev.timestamp > now) continue;
    latest_position[ev.Source()] = SourcePosition(ev);
  }
  auto member = [&](NodeId id) {
    auto it = latest_position.find(id);
    return it != latest_position.end() && region.Contains(it->second);
  };

  for (const RepositoryEvent& ev : repo.network()) {
    if (ev.timestamp > now || !member(ev.Source())) continue;
    if (const auto* u = std::get_if<ElementUpdate>(&ev.payload)) {
      NetworkElementRecord& rec = twin.elements[u->id];
      rec.id = u->id;
      ApplyElementUpdate(rec, *u);
      rec.last_update = ev.timestamp;
      rec.position = u->reported_position;
      twin.topology.nodes.insert(u->id);
    } else if (const auto* l = std::get_if<LinkObservation>(&ev.payload)) {
      const auto key = LinkKey(l->reporter, l->peer);
      TopologyLink& link = twin.topology.links[key];
      link.a = key.first;
      link.b = key.second;
      link.csi = l->csi;
      link.spectrum_utilization = l->spectrum_utilization;
      link.last_update = ev.timestamp;
      twin.topology.nodes.insert(key.first);
      twin.topology.nodes.insert(key.second);
    }
  }

  // Physical store: time-ordered, ties keep ingestion order.
  std::vector<const RepositoryEvent*> events;
  for (const RepositoryEvent& ev : repo.physical()) {
    if (ev.timestamp <= now && region.Contains(SourcePosition(ev))) {
      events.push_back(&ev);
    }
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const RepositoryEvent* a, const RepositoryEvent* b) {
                     return a->timestamp < b->timestamp;
                   });

  struct Builder {
    std::vector<TimedMeasurement> history;
    bool labeled = false;
  };
  std::map<std::string, Builder> builders;
  std::vector<std::string> unlabeled_order;
  auto& tracks = twin.environment.tracks;
  int next_auto_id = 0;

  for (const RepositoryEvent* ev : events) {
    const auto& m = std::get<signal::Measurement>(ev->payload);
    std::string id;
    if (m.target_id) {
      id = NodeTrackId(*m.target_id);
      builders[id].labeled = true;
    } else {
      double best = std::numeric_limits<double>::infinity();
      for (const std::string& cand : unlabeled_order) {
        const double d =
            world::Distance(Extrapolate(tracks.at(cand), ev->timestamp),
                            m.position);
        if (d <= options.gate && d < best) {
          best = d;
          id = cand;
        }
      }
      if (id.empty()) {
        id = "t" + std::to_string(next_auto_id++);
        unlabeled_order.push_back(id);
      }
    }
    Builder& b = builders[id];
    b.history.push_back({ev->timestamp, m.position, m.covariance});
    const std::size_t window =
        std::min<std::size_t>(b.history.size(),
                              static_cast<std::size_t>(options.velocity_window));
    tracks[id] = FitTrack(
        id, std::span<const TimedMeasurement>(b.history).last(window),
        b.history.front().t);

    const auto cell = twin.environment.grid.CellOf(m.position);
    if (twin.environment.grid.InBounds(cell)) {
      twin.environment.grid.Update(cell, options.l_occ);
    }
  }
  return twin;
}

GlobalTwin MergeGlobal(std::span<const LocalTwin> locals, double now,
                       const TwinOptions& options) {
  Require(!locals.empty(), "merge_global: no local twins");

  std::vector<const LocalTwin*> order;
  for (const LocalTwin& l : locals) order.push_back(&l);
  std::stable_sort(order.begin(), order.end(),
                   [](const LocalTwin* a, const LocalTwin* b) {
                     if (RegionLess(a->region, b->region)) return true;
                     if (RegionLess(b->region, a->region)) return false;
                     return a->built_at < b->built_at;
                   });

  world::Rect world_bounds = order.front()->region;
  double area_sum = 0.0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const world::Rect& r = order[i]->region;
    if (!(r.Area() > 0.0)) {
      Fail(ErrorCode::kInvalidPartition, "merge_global: empty region " +
                                             RegionLabel(r));
    }
    world_bounds.min.x = std::min(world_bounds.min.x, r.min.x);
    world_bounds.min.y = std::min(world_bounds.min.y, r.min.y);
    world_bounds.max.x = std::max(world_bounds.max.x, r.max.x);
    world_bounds.max.y = std::max(world_bounds.max.y, r.max.y);
    area_sum += r.Area();
    for (std::size_t j = 0; j < i; ++j) {
      if (OverlapArea(r, order[j]->region) > 0.0) {
        Fail(ErrorCode::kInvalidPartition,
             "merge_global: regions " + RegionLabel(order[j]->region) +
                 " and " + RegionLabel(r) + " overlap");
      }
    }
  }
  if (std::abs(area_sum - world_bounds.Area()) > 1e-9 * world_bounds.Area()) {
    Fail(ErrorCode::kInvalidPartition,
         "merge_global: regions leave gaps in " + RegionLabel(world_bounds));
  }

  GlobalTwin global;
  global.region = world_bounds;
  global.built_at = now;

  auto add_provenance = [&global](const std::string& key,
                                  const world::Rect& region) {
    std::string& entry = global.provenance[key];
    if (!entry.empty()) entry += '+';
    entry += RegionLabel(region);
  };

  for (const LocalTwin* l : order) {
    for (const auto& [id, rec] : l->elements) {
      auto it = global.elements.find(id);
      if (it == global.elements.end() || rec.last_update > it->second.last_update) {
        global.elements[id] = rec;
      }
      add_provenance("element:" + world::ToString(id), l->region);
    }
    global.topology.nodes.insert(l->topology.nodes.begin(),
                                 l->topology.nodes.end());
    for (const auto& [key, link] : l->topology.links) {
      auto it = global.topology.links.find(key);
      if (it == global.topology.links.end() ||
          link.last_update > it->second.last_update) {
        global.topology.links[key] = link;
      }
      add_provenance("link:" + LinkLabel(key), l->region);
    }
  }

  // Grids: reproject each local grid onto the global lattice, sum, clamp once.
  const double cell_size = order.front()->environment.grid.cell_size() > 0.0
                               ? order.front()->environment.grid.cell_size()
                               : options.cell_size;
  fusion::OccupancyGrid grid =
      fusion::OccupancyGrid::Covering(world_bounds, cell_size);
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      const Vec2 center = grid.CellCenter({x, y});
      double sum = 0.0;
      std::uint32_t count = 0;
      for (const LocalTwin* l : order) {
        const fusion::OccupancyGrid& lg = l->environment.grid;
        if (lg.width() == 0) continue;
        const fusion::CellIndex c = lg.CellOf(center);
        if (!lg.InBounds(c)) continue;
        sum += lg.LogOdds(c);
        count += lg.Observations(c);
      }
      grid.Set({x, y}, sum, count);
    }
  }
  global.environment.grid = std::move(grid);

  // Tracks: boundary straddlers seen by several twins fuse into one.
  struct Candidate {
    std::size_t twin;
    const Track* track;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (const auto& [id, tr] : order[i]->environment.tracks) {
      candidates.push_back({i, &tr});
    }
  }
  std::vector<bool> used(candidates.size(), false);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    std::vector<Track> members{*candidates[i].track};
    std::vector<std::size_t> twins_in{candidates[i].twin};
    for (std::size_t j = i + 1; j < candidates.size(); ++j) {
      if (used[j]) continue;
      if (std::find(twins_in.begin(), twins_in.end(), candidates[j].twin) !=
          twins_in.end()) {
        continue;
      }
      const Track& seed = *candidates[i].track;
      const Track& other = *candidates[j].track;
      const double t = std::max(seed.last_update, other.last_update);
      if (world::Distance(Extrapolate(seed, t), Extrapolate(other, t)) <=
          options.gate) {
        used[j] = true;
        members.push_back(other);
        twins_in.push_back(candidates[j].twin);
      }
    }
    std::string id = members.front().id;
    if (global.environment.tracks.count(id)) {
      id += "@" + std::to_string(candidates[i].twin);
    }
    Track fused = members.size() == 1 ? members.front()
                                      : FuseTracks(members, id);
    fused.id = id;
    global.environment.tracks[id] = fused;
    for (std::size_t twin_index : twins_in) {
      add_provenance("track:" + id, order[twin_index]->region);
    }
  }
  return global;
}

PredictedState PredictState(const Twin& twin, const std::string& track_id,
                            double t) {
  auto it = twin.environment.tracks.find(track_id);
  if (it == twin.environment.tracks.end()) {
    Fail(ErrorCode::kNotFound, "predict_state: unknown track " + track_id);
  }
  const Track& track = it->second;
  Require(t >= track.last_update,
          "predict_state: t precedes the track's last update");
  return {Extrapolate(track, t), t - track.last_update};
}

DisguiseAssessment DetectDisguised(const Twin& twin,
                                   const world::Trajectory& claimed,
                                   const std::string& sensed_track_id,
                                   double gate) {
  auto it = twin.environment.tracks.find(sensed_track_id);
  if (it == twin.environment.tracks.end()) {
    Fail(ErrorCode::kNotFound,
         "detect_disguised: unknown track " + sensed_track_id);
  }
  const Track& track = it->second;
  double sum = 0.0;
  int used = 0;
  for (const world::Waypoint& w : claimed.waypoints) {
    if (w.time < track.first_update || w.time > twin.built_at) continue;
    const Vec2 e = w.position - Extrapolate(track, w.time);
    const Matrix2d s = ExtrapolatedCovariance(track, w.time) +
                       kCovarianceFloor * Matrix2d::Identity();
    const Eigen::Vector2d ev(e.x, e.y);
    sum += ev.dot(s.ldlt().solve(ev));
    ++used;
  }
  if (used == 0) {
    Fail(ErrorCode::kInsufficientEvidence,
         "detect_disguised: no claimed waypoint inside the track's time span");
  }
  DisguiseAssessment a;
  a.statistic = sum / used;
  a.waypoints_used = used;
  a.verdict = a.statistic > gate ? Verdict::kDisguised : Verdict::kHonest;
  return a;
}

std::string SerializeTwin(const Twin& twin) {
  std::string out = "isacdt-twin|1\ntwin|local\n";
  AppendTwinBody(twin, out);
  return out;
}

std::string SerializeTwin(const GlobalTwin& twin) {
  std::string out = "isacdt-twin|1\ntwin|global\n";
  AppendTwinBody(twin, out);
  for (const auto& [key, value] : twin.provenance) {
    out += "provenance|" + key + "|" + value + "\n";
  }
  return out;
}

std::uint64_t GridContentHash(const fusion::OccupancyGrid& grid) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix_bytes = [&h](const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  const double header[3] = {grid.origin().x, grid.origin().y, grid.cell_size()};
  mix_bytes(header, sizeof(header));
  const int dims[2] = {grid.width(), grid.height()};
  mix_bytes(dims, sizeof(dims));
  mix_bytes(grid.cells().data(), grid.cells().size_bytes());
  mix_bytes(grid.observations().data(), grid.observations().size_bytes());
  return h;
}

}  // namespace isacdt::twin
