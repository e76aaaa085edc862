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

#include <algorithm>
#include <cmath>
#include <set>

#include "isacdt/common.h"
#include "json.hpp"

namespace isacdt::sim {
namespace {

using nlohmann::json;
using world::Vec2;

// Walks a JSON object, recording type errors and unknown keys against the
// dotted field path.
class Reader {
 public:
  Reader(const json& node, std::string path, std::vector<std::string>* issues)
      : node_(node), path_(std::move(path)), issues_(issues) {
    if (!node_.is_object()) Issue(path_, "expected an object");
  }

  ~Reader() {
    if (!node_.is_object()) return;
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.count(key)) Issue(Path(key), "unknown field");
    }
  }

  const json* Find(const std::string& key) {
    seen_.insert(key);
    if (!node_.is_object()) return nullptr;
    auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  std::string Path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void Issue(const std::string& path, const std::string& message) {
    issues_->push_back(path + ": " + message);
  }

  std::vector<std::string>* issues() { return issues_; }

  void Get(const std::string& key, double& out) {
    if (const json* j = Find(key)) ReadNumber(*j, Path(key), out);
  }
  void Get(const std::string& key, int& out) {
    if (const json* j = Find(key)) ReadInt(*j, Path(key), out);
  }
  void Get(const std::string& key, bool& out) {
    if (const json* j = Find(key)) {
      if (j->is_boolean()) {
        out = j->get<bool>();
      } else {
        Issue(Path(key), "expected true or false");
      }
    }
  }
  void Get(const std::string& key, std::string& out) {
    if (const json* j = Find(key)) {
      if (j->is_string()) {
        out = j->get<std::string>();
      } else {
        Issue(Path(key), "expected a string");
      }
    }
  }
  template <typename T>
  void Get(const std::string& key, std::vector<T>& out) {
    const json* j = Find(key);
    if (!j) return;
    if (!j->is_array()) {
      Issue(Path(key), "expected an array");
      return;
    }
    out.clear();
    for (std::size_t i = 0; i < j->size(); ++i) {
      T value{};
      ReadElement((*j)[i], Path(key) + "[" + std::to_string(i) + "]", value);
      out.push_back(value);
    }
  }

  bool ReadNumber(const json& j, const std::string& path, double& out) {
    if (!j.is_number()) {
      Issue(path, "expected a number");
      return false;
    }
    out = j.get<double>();
    return true;
  }
  bool ReadInt(const json& j, const std::string& path, int& out) {
    if (!j.is_number_integer()) {
      Issue(path, "expected an integer");
      return false;
    }
    out = j.get<int>();
    return true;
  }
  void ReadElement(const json& j, const std::string& path, double& out) {
    ReadNumber(j, path, out);
  }
  void ReadElement(const json& j, const std::string& path, int& out) {
    ReadInt(j, path, out);
  }
  void ReadElement(const json& j, const std::string& path, std::string& out) {
    if (j.is_string()) {
      out = j.get<std::string>();
    } else {
      Issue(path, "expected a string");
    }
  }
  void ReadElement(const json& j, const std::string& path, Vec2& out) {
    if (!j.is_array() || j.size() != 2) {
      Issue(path, "expected [x, y]");
      return;
    }
    ReadNumber(j[0], path, out.x);
    ReadNumber(j[1], path, out.y);
  }
  void ReadElement(const json& j, const std::string& path, world::Rect& out) {
    if (!j.is_array() || j.size() != 4) {
      Issue(path, "expected [min_x, min_y, max_x, max_y]");
      return;
    }
    ReadNumber(j[0], path, out.min.x);
    ReadNumber(j[1], path, out.min.y);
    ReadNumber(j[2], path, out.max.x);
    ReadNumber(j[3], path, out.max.y);
  }
  void ReadElement(const json& j, const std::string& path, world::Polygon& out) {
    if (!j.is_array()) {
      Issue(path, "expected an array of [x, y] vertices");
      return;
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
      Vec2 v;
      ReadElement(j[i], path + "[" + std::to_string(i) + "]", v);
      out.push_back(v);
    }
  }
  void ReadElement(const json& j, const std::string& path, world::Waypoint& out) {
    if (!j.is_array() || j.size() != 3) {
      Issue(path, "expected [t, x, y]");
      return;
    }
    ReadNumber(j[0], path, out.time);
    ReadNumber(j[1], path, out.position.x);
    ReadNumber(j[2], path, out.position.y);
  }
  void ReadElement(const json& j, const std::string& path, NodeConfig& out);

 private:
  const json& node_;
  std::string path_;
  std::vector<std::string>* issues_;
  std::set<std::string> seen_;
};

void Reader::ReadElement(const json& j, const std::string& path,
                         NodeConfig& out) {
  Reader r(j, path, issues_);
  if (!j.is_object()) return;
  int id = -1;
  r.Get("id", id);
  if (id < 0) {
    r.Issue(r.Path("id"), "required non-negative integer");
  } else {
    out.node.id = {static_cast<std::uint32_t>(id)};
  }
  std::string kind = "AGV";
  r.Get("kind", kind);
  if (auto k = world::ParseMachineKind(kind)) {
    out.node.kind = *k;
  } else {
    r.Issue(r.Path("kind"), "unknown kind '" + kind +
                                "' (expected BS, AGV, UAV or VEHICLE)");
  }
  if (const json* p = r.Find("position")) {
    ReadElement(*p, r.Path("position"), out.node.position);
  }
  r.Get("heading", out.node.heading);
  if (const json* v = r.Find("velocity")) {
    ReadElement(*v, r.Path("velocity"), out.node.velocity);
  }
  r.Get("antennas", out.node.antenna_count);
  r.Get("isac", out.node.isac_capable);
  r.Get("trajectory", out.trajectory.waypoints);
  // A trajectory fixes the start position.
  if (!out.trajectory.waypoints.empty()) {
    out.node.position = out.trajectory.waypoints.front().position;
  }
}

json ToJson(const Vec2& v) { return json::array({v.x, v.y}); }
json ToJson(const world::Rect& r) {
  return json::array({r.min.x, r.min.y, r.max.x, r.max.y});
}

std::string Indexed(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

ScenarioConfig FromJson(const json& root, std::vector<std::string>& issues) {
  ScenarioConfig c;
  Reader r(root, "", &issues);
  r.Get("name", c.name);
  std::string experiment;
  r.Get("experiment", experiment);
  if (experiment.empty()) {
    r.Issue("experiment", "required");
  } else if (auto e = ParseExperiment(experiment)) {
    c.experiment = *e;
  } else {
    r.Issue("experiment",
            "unknown experiment '" + experiment +
                "' (expected COOP_LOCALIZATION, SLAM_RECON, BEAM_TRACKING or "
                "NEIGHBOR_DISCOVERY)");
  }
  if (const json* s = r.Find("seed")) {
    if (s->is_number_unsigned()) {
      c.seed = s->get<std::uint64_t>();
    } else {
      r.Issue("seed", "expected a non-negative 64-bit integer");
    }
  }
  r.Get("trials", c.trials);

  if (const json* w = r.Find("world")) {
    Reader wr(*w, "world", &issues);
    std::string plan_name;
    wr.Get("plan", plan_name);
    if (!plan_name.empty()) {
      if (plan_name == "factory_default") {
        c.world.plan = world::FactoryDefaultPlan();
      } else {
        wr.Issue("world.plan", "unknown plan '" + plan_name + "'");
      }
    }
    if (const json* b = wr.Find("bounds")) {
      wr.ReadElement(*b, "world.bounds", c.world.plan.bounds);
    } else if (plan_name.empty()) {
      wr.Issue("world.bounds", "required unless world.plan names a plan");
    }
    if (wr.Find("obstacles")) wr.Get("obstacles", c.world.plan.obstacles);
    wr.Get("nodes", c.world.nodes);
    wr.Get("scatterers", c.world.scatterers);
  } else {
    r.Issue("world", "required");
  }

  if (const json* s = r.Find("signal")) {
    Reader sr(*s, "signal", &issues);
    sr.Get("carrier_freq", c.signal.ofdm.carrier_freq);
    sr.Get("bandwidth", c.signal.ofdm.bandwidth);
    sr.Get("num_subcarriers", c.signal.ofdm.num_subcarriers);
    sr.Get("num_symbols", c.signal.ofdm.num_symbols);
    sr.Get("symbol_duration", c.signal.ofdm.symbol_duration);
    sr.Get("detection_threshold_db", c.signal.detection_threshold_db);
    sr.Get("snr0_db", c.signal.snr0_db);
  }
  if (const json* t = r.Find("twin")) {
    Reader tr(*t, "twin", &issues);
    tr.Get("regions", c.twin.regions);
    tr.Get("cadence", c.twin.cadence);
    tr.Get("ingest_delay", c.twin.ingest_delay);
    tr.Get("cell_size", c.twin.cell_size);
    tr.Get("gate", c.twin.gate);
  }
  if (const json* l = r.Find("localization")) {
    Reader lr(*l, "localization", &issues);
    lr.Get("bs_counts", c.localization.bs_counts);
    lr.Get("snr_db", c.localization.snr_db);
    lr.Get("profiles", c.localization.profiles);
    lr.Get("mixed_offsets_db", c.localization.mixed_offsets_db);
  }
  if (const json* s = r.Find("slam")) {
    Reader sr(*s, "slam", &issues);
    sr.Get("scan_interval", c.slam.scan_interval);
    sr.Get("rays_per_scan", c.slam.rays_per_scan);
    sr.Get("max_range", c.slam.max_range);
    sr.Get("snr_db", c.slam.snr_db);
    sr.Get("reference_range", c.slam.reference_range);
    sr.Get("passive_loss_db", c.slam.passive_loss_db);
    sr.Get("noiseless", c.slam.noiseless);
    sr.Get("scan_subcarriers", c.slam.scan_subcarriers);
    sr.Get("scan_symbols", c.slam.scan_symbols);
  }
  if (const json* b = r.Find("beam")) {
    Reader br(*b, "beam", &issues);
    br.Get("antenna_counts", c.beam.antenna_counts);
    br.Get("frames", c.beam.frames);
    br.Get("frame_period", c.beam.frame_period);
    br.Get("sensing_snr_db", c.beam.sensing_snr_db);
    br.Get("position_jitter", c.beam.position_jitter);
  }
  if (const json* d = r.Find("discovery")) {
    Reader dr(*d, "discovery", &issues);
    dr.Get("node_count", c.discovery.node_count);
    dr.Get("comm_range", c.discovery.comm_range);
    dr.Get("sectors", c.discovery.sectors);
    dr.Get("max_rounds", c.discovery.max_rounds);
    dr.Get("threshold", c.discovery.threshold);
    dr.Get("twin_noise", c.discovery.twin_noise);
    dr.Get("mobile", c.discovery.mobile);
    dr.Get("round_period", c.discovery.round_period);
  }
  return c;
}

json ToJson(const ScenarioConfig& c) {
  json nodes = json::array();
  for (const NodeConfig& n : c.world.nodes) {
    json traj = json::array();
    for (const auto& w : n.trajectory.waypoints) {
      traj.push_back(json::array({w.time, w.position.x, w.position.y}));
    }
    nodes.push_back({{"id", n.node.id.value},
                     {"kind", world::MachineKindName(n.node.kind)},
                     {"position", ToJson(n.node.position)},
                     {"heading", n.node.heading},
                     {"velocity", ToJson(n.node.velocity)},
                     {"antennas", n.node.antenna_count},
                     {"isac", n.node.isac_capable},
                     {"trajectory", traj}});
  }
  json obstacles = json::array();
  for (const auto& poly : c.world.plan.obstacles) {
    json p = json::array();
    for (const Vec2& v : poly) p.push_back(ToJson(v));
    obstacles.push_back(p);
  }
  json scatterers = json::array();
  for (const Vec2& s : c.world.scatterers) scatterers.push_back(ToJson(s));
  json regions = json::array();
  for (const auto& reg : c.twin.regions) regions.push_back(ToJson(reg));

  return {
      {"name", c.name},
      {"experiment", ExperimentName(c.experiment)},
      {"seed", c.seed},
      {"trials", c.trials},
      {"world",
       {{"bounds", ToJson(c.world.plan.bounds)},
        {"obstacles", obstacles},
        {"nodes", nodes},
        {"scatterers", scatterers}}},
      {"signal",
       {{"carrier_freq", c.signal.ofdm.carrier_freq},
        {"bandwidth", c.signal.ofdm.bandwidth},
        {"num_subcarriers", c.signal.ofdm.num_subcarriers},
        {"num_symbols", c.signal.ofdm.num_symbols},
        {"symbol_duration", c.signal.ofdm.symbol_duration},
        {"detection_threshold_db", c.signal.detection_threshold_db},
        {"snr0_db", c.signal.snr0_db}}},
      {"twin",
       {{"regions", regions},
        {"cadence", c.twin.cadence},
        {"ingest_delay", c.twin.ingest_delay},
        {"cell_size", c.twin.cell_size},
        {"gate", c.twin.gate}}},
      {"localization",
       {{"bs_counts", c.localization.bs_counts},
        {"snr_db", c.localization.snr_db},
        {"profiles", c.localization.profiles},
        {"mixed_offsets_db", c.localization.mixed_offsets_db}}},
      {"slam",
       {{"scan_interval", c.slam.scan_interval},
        {"rays_per_scan", c.slam.rays_per_scan},
        {"max_range", c.slam.max_range},
        {"snr_db", c.slam.snr_db},
        {"reference_range", c.slam.reference_range},
        {"passive_loss_db", c.slam.passive_loss_db},
        {"noiseless", c.slam.noiseless},
        {"scan_subcarriers", c.slam.scan_subcarriers},
        {"scan_symbols", c.slam.scan_symbols}}},
      {"beam",
       {{"antenna_counts", c.beam.antenna_counts},
        {"frames", c.beam.frames},
        {"frame_period", c.beam.frame_period},
        {"sensing_snr_db", c.beam.sensing_snr_db},
        {"position_jitter", c.beam.position_jitter}}},
      {"discovery",
       {{"node_count", c.discovery.node_count},
        {"comm_range", c.discovery.comm_range},
        {"sectors", c.discovery.sectors},
        {"max_rounds", c.discovery.max_rounds},
        {"threshold", c.discovery.threshold},
        {"twin_noise", c.discovery.twin_noise},
        {"mobile", c.discovery.mobile},
        {"round_period", c.discovery.round_period}}},
  };
}

void Prefixed(std::vector<std::string>& out, const std::string& prefix,
              const std::vector<std::string>& issues) {
  for (const auto& i : issues) out.push_back(prefix + i);
}

std::vector<const NodeConfig*> NodesOfKind(const ScenarioConfig& c,
                                           bool base_station) {
  std::vector<const NodeConfig*> out;
  for (const auto& n : c.world.nodes) {
    if ((n.node.kind == world::MachineKind::kBaseStation) == base_station) {
      out.push_back(&n);
    }
  }
  return out;
}

void ValidateExperiment(const ScenarioConfig& c,
                        std::vector<std::string>& issues) {
  const auto bss = NodesOfKind(c, true);
  const auto others = NodesOfKind(c, false);
  switch (c.experiment) {
    case Experiment::kCoopLocalization: {
      const auto& p = c.localization;
      if (p.bs_counts.empty()) issues.push_back("localization.bs_counts: empty");
      for (std::size_t i = 0; i < p.bs_counts.size(); ++i) {
        if (p.bs_counts[i] < 1 ||
            p.bs_counts[i] > static_cast<int>(bss.size())) {
          issues.push_back(Indexed("localization.bs_counts", i) +
                           ": must lie in [1, number of BS nodes = " +
                           std::to_string(bss.size()) + "]");
        }
      }
      if (p.snr_db.empty()) issues.push_back("localization.snr_db: empty");
      if (p.profiles.empty()) issues.push_back("localization.profiles: empty");
      for (std::size_t i = 0; i < p.profiles.size(); ++i) {
        if (p.profiles[i] != "equal" && p.profiles[i] != "mixed") {
          issues.push_back(Indexed("localization.profiles", i) +
                           ": expected 'equal' or 'mixed'");
        }
      }
      if (p.mixed_offsets_db.empty()) {
        issues.push_back("localization.mixed_offsets_db: empty");
      }
      if (others.size() != 1) {
        issues.push_back("world.nodes: exactly one non-BS target required, found " +
                         std::to_string(others.size()));
      } else {
        const double r_max = c.signal.ofdm.UnambiguousRange();
        for (std::size_t i = 0; i < c.world.nodes.size(); ++i) {
          const auto& n = c.world.nodes[i].node;
          if (n.kind != world::MachineKind::kBaseStation) continue;
          const double d =
              world::Distance(n.position, others.front()->node.position);
          if (!(d > 0.0 && d < r_max)) {
            issues.push_back(Indexed("world.nodes", i) +
                             ": target range outside (0, unambiguous range)");
          }
        }
      }
      break;
    }
    case Experiment::kSlamRecon: {
      const auto& s = c.slam;
      int agvs = 0;
      for (const auto* n : others) {
        agvs += n->node.kind == world::MachineKind::kAgv &&
                !n->trajectory.waypoints.empty();
      }
      if (agvs < 1) {
        issues.push_back("world.nodes: at least one AGV with a trajectory required");
      }
      if (s.scan_interval <= 0.0) issues.push_back("slam.scan_interval: must be > 0");
      if (s.rays_per_scan < 1) issues.push_back("slam.rays_per_scan: must be >= 1");
      if (!(s.max_range > 0.0)) issues.push_back("slam.max_range: must be > 0");
      if (!(s.reference_range > 0.0)) {
        issues.push_back("slam.reference_range: must be > 0");
      }
      if (s.scan_subcarriers < 2 || s.scan_symbols < 1) {
        issues.push_back("slam.scan_subcarriers: grid must be at least 2 x 1");
      } else {
        signal::OfdmConfig scan = c.signal.ofdm;
        scan.num_subcarriers = s.scan_subcarriers;
        scan.num_symbols = s.scan_symbols;
        if (s.max_range >= scan.UnambiguousRange()) {
          issues.push_back("slam.max_range: exceeds the scan grid's unambiguous range");
        }
      }
      break;
    }
    case Experiment::kBeamTracking: {
      const auto& b = c.beam;
      if (bss.size() != 1) {
        issues.push_back("world.nodes: exactly one BS required, found " +
                         std::to_string(bss.size()));
      }
      int mobile = 0;
      for (const auto* n : others) mobile += !n->trajectory.waypoints.empty();
      if (mobile < 1) {
        issues.push_back("world.nodes: one IM with a trajectory required");
      }
      if (b.antenna_counts.empty()) issues.push_back("beam.antenna_counts: empty");
      for (std::size_t i = 0; i < b.antenna_counts.size(); ++i) {
        if (b.antenna_counts[i] < 1) {
          issues.push_back(Indexed("beam.antenna_counts", i) + ": must be >= 1");
        }
      }
      if (b.frames < 1) issues.push_back("beam.frames: must be >= 1");
      if (!(b.frame_period > 0.0)) issues.push_back("beam.frame_period: must be > 0");
      if (b.position_jitter < 0.0) {
        issues.push_back("beam.position_jitter: must be >= 0");
      }
      break;
    }
    case Experiment::kNeighborDiscovery: {
      const auto& d = c.discovery;
      if (!(d.comm_range > 0.0)) issues.push_back("discovery.comm_range: must be > 0");
      if (d.sectors < 1) issues.push_back("discovery.sectors: must be >= 1");
      if (d.max_rounds < 1) issues.push_back("discovery.max_rounds: must be >= 1");
      if (!(d.threshold > 0.0 && d.threshold <= 1.0)) {
        issues.push_back("discovery.threshold: must lie in (0, 1]");
      }
      if (d.twin_noise < 0.0) issues.push_back("discovery.twin_noise: must be >= 0");
      if (!(d.round_period > 0.0)) {
        issues.push_back("discovery.round_period: must be > 0");
      }
      if (c.world.nodes.empty()) {
        if (d.node_count < 2) issues.push_back("discovery.node_count: must be >= 2");
      } else if (c.world.nodes.size() < 2) {
        issues.push_back("world.nodes: at least two nodes required");
      } else if (d.comm_range > 0.0) {
        bool edge = false;
        for (std::size_t i = 0; i < c.world.nodes.size() && !edge; ++i) {
          for (std::size_t j = i + 1; j < c.world.nodes.size(); ++j) {
            if (world::Distance(c.world.nodes[i].node.position,
                                c.world.nodes[j].node.position) <=
                d.comm_range) {
              edge = true;
              break;
            }
          }
        }
        if (!edge) {
          issues.push_back(
              "world.nodes: contact graph has no edges (discovery fraction "
              "undefined)");
        }
      }
      break;
    }
  }
}

ScenarioConfig BaseConfig(const std::string& name, Experiment e,
                          std::uint64_t seed, int trials) {
  ScenarioConfig c;
  c.name = name;
  c.experiment = e;
  c.seed = seed;
  c.trials = trials;
  return c;
}

NodeConfig MakeNode(std::uint32_t id, world::MachineKind kind, Vec2 position,
                    double heading = 0.0, int antennas = 1) {
  NodeConfig n;
  n.node.id = {id};
  n.node.kind = kind;
  n.node.position = position;
  n.node.heading = heading;
  n.node.antenna_count = antennas;
  return n;
}

ScenarioConfig Fig4a() {
  ScenarioConfig c = BaseConfig("fig4a", Experiment::kCoopLocalization, 1, 2000);
  c.world.plan.bounds = {{0.0, 0.0}, {40.0, 40.0}};
  c.signal.ofdm.num_subcarriers = 64;
  c.signal.ofdm.num_symbols = 4;
  const Vec2 target{20.0, 20.0};
  // 41 range bins from the target so the noiseless peak sits on a bin.
  const double radius = 41.0 * signal::RangeResolution(c.signal.ofdm);
  // Every prefix of this order is an evenly spread subset.
  const double order_deg[] = {0, 180, 90, 270, 45, 225, 135, 315};
  std::uint32_t id = 1;
  for (double deg : order_deg) {
    const double a = deg * kPi / 180.0;
    const Vec2 p = target + radius * world::UnitVector(a);
    c.world.nodes.push_back(MakeNode(id++, world::MachineKind::kBaseStation, p,
                                     world::NormalizeAngle(a + kPi), 16));
  }
  c.world.nodes.push_back(MakeNode(100, world::MachineKind::kAgv, target));
  return c;
}

world::Trajectory Loop(std::initializer_list<Vec2> corners, double speed) {
  world::Trajectory t;
  double time = 0.0;
  Vec2 prev = *corners.begin();
  for (const Vec2& p : corners) {
    time += world::Distance(prev, p) / speed;
    t.waypoints.push_back({time, p});
    prev = p;
  }
  return t;
}

ScenarioConfig SlamPreset(const std::string& name, int trials) {
  ScenarioConfig c = BaseConfig(name, Experiment::kSlamRecon, 1, trials);
  c.world.plan = world::FactoryDefaultPlan();
  c.signal.ofdm.num_subcarriers = 256;
  c.signal.ofdm.num_symbols = 4;
  NodeConfig a0 = MakeNode(1, world::MachineKind::kAgv, {5.0, 15.0});
  a0.trajectory = Loop({{5, 15}, {55, 15}, {55, 3}, {5, 3}, {5, 15}}, 2.0);
  NodeConfig a1 = MakeNode(2, world::MachineKind::kAgv, {55.0, 15.0});
  a1.trajectory = Loop({{55, 15}, {5, 15}, {5, 27}, {55, 27}, {55, 15}}, 2.0);
  c.world.nodes = {a0, a1};
  return c;
}

ScenarioConfig Fig5a() {
  ScenarioConfig c = BaseConfig("fig5a", Experiment::kBeamTracking, 1, 20);
  c.world.plan.bounds = {{-30.0, -5.0}, {30.0, 40.0}};
  // BS at the origin with its array broadside along +y.
  c.world.nodes.push_back(MakeNode(1, world::MachineKind::kBaseStation,
                                   {0.0, 0.0}, kPi / 2.0, 64));
  NodeConfig im = MakeNode(2, world::MachineKind::kAgv, {-10.0, 20.0});
  im.trajectory.waypoints = {{0.0, {-10.0, 20.0}}, {2.0, {10.0, 20.0}}};
  im.node.velocity = {10.0, 0.0};
  c.world.nodes.push_back(im);
  return c;
}

ScenarioConfig Fig5b() {
  ScenarioConfig c = BaseConfig("fig5b", Experiment::kNeighborDiscovery, 1, 50);
  c.world.plan.bounds = {{0.0, 0.0}, {60.0, 30.0}};
  return c;
}

}  // namespace

const char* ExperimentName(Experiment e) {
  switch (e) {
    case Experiment::kCoopLocalization: return "COOP_LOCALIZATION";
    case Experiment::kSlamRecon: return "SLAM_RECON";
    case Experiment::kBeamTracking: return "BEAM_TRACKING";
    case Experiment::kNeighborDiscovery: return "NEIGHBOR_DISCOVERY";
  }
  return "?";
}

std::optional<Experiment> ParseExperiment(const std::string& name) {
  for (Experiment e :
       {Experiment::kCoopLocalization, Experiment::kSlamRecon,
        Experiment::kBeamTracking, Experiment::kNeighborDiscovery}) {
    if (name == ExperimentName(e)) return e;
  }
  return std::nullopt;
}

ScenarioConfig ParseScenario(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    Fail(ErrorCode::kConfig, std::string("config: malformed JSON: ") + e.what());
  }
  std::vector<std::string> issues;
  ScenarioConfig c = FromJson(root, issues);
  if (issues.empty()) issues = ValidateScenario(c);
  if (!issues.empty()) {
    std::string msg;
    for (const auto& i : issues) msg += (msg.empty() ? "" : "\n") + i;
    Fail(ErrorCode::kConfig, msg);
  }
  return c;
}

std::vector<std::string> ValidateScenario(const ScenarioConfig& c) {
  std::vector<std::string> issues;
  if (c.trials < 1) issues.push_back("trials: must be >= 1");
  const world::Rect& bounds = c.world.plan.bounds;
  if (!(bounds.Width() > 0.0 && bounds.Height() > 0.0)) {
    issues.push_back("world.bounds: must have positive width and height");
  }
  for (const auto& i : world::ValidateFloorPlan(c.world.plan)) {
    issues.push_back("world." + i);
  }
  std::set<std::uint32_t> ids;
  for (std::size_t i = 0; i < c.world.nodes.size(); ++i) {
    const NodeConfig& n = c.world.nodes[i];
    const std::string path = Indexed("world.nodes", i);
    Prefixed(issues, path + ".", world::ValidateMachineNode(n.node));
    if (!ids.insert(n.node.id.value).second) {
      issues.push_back(path + ".id: duplicate id " +
                       world::ToString(n.node.id));
    }
    if (!bounds.Contains(n.node.position)) {
      issues.push_back(path + ".position: outside floor bounds");
    }
    if (!n.trajectory.waypoints.empty()) {
      for (std::string issue : world::ValidateTrajectory(n.trajectory)) {
        // The JSON key is "trajectory".
        if (issue.rfind("waypoints", 0) == 0) issue.replace(0, 9, "trajectory");
        issues.push_back(path + "." + issue);
      }
      for (std::size_t k = 0; k < n.trajectory.waypoints.size(); ++k) {
        if (!bounds.Contains(n.trajectory.waypoints[k].position)) {
          issues.push_back(Indexed(path + ".trajectory", k) +
                           ": outside floor bounds");
        }
      }
    }
  }
  for (std::size_t i = 0; i < c.world.scatterers.size(); ++i) {
    if (!c.world.scatterers[i].IsFinite()) {
      issues.push_back(Indexed("world.scatterers", i) + ": not finite");
    }
  }
  Prefixed(issues, "signal.", signal::ValidateOfdmConfig(c.signal.ofdm));
  if (!(c.signal.detection_threshold_db > 0.0)) {
    issues.push_back("signal.detection_threshold_db: must be > 0 dB");
  }
  if (!std::isfinite(c.signal.snr0_db)) {
    issues.push_back("signal.snr0_db: not finite");
  }

  if (!(c.twin.cadence > 0.0)) issues.push_back("twin.cadence: must be > 0");
  if (!(c.twin.ingest_delay >= 0.0)) {
    issues.push_back("twin.ingest_delay: must be >= 0");
  }
  if (!(c.twin.cell_size > 0.0)) issues.push_back("twin.cell_size: must be > 0");
  if (!(c.twin.gate > 0.0)) issues.push_back("twin.gate: must be > 0");
  double region_area = 0.0;
  for (std::size_t i = 0; i < c.twin.regions.size(); ++i) {
    const world::Rect& r = c.twin.regions[i];
    const std::string path = Indexed("twin.regions", i);
    if (!(r.Width() > 0.0 && r.Height() > 0.0)) {
      issues.push_back(path + ": empty region");
    }
    if (!bounds.Contains(r.min) || !bounds.Contains(r.max)) {
      issues.push_back(path + ": outside floor bounds");
    }
    region_area += r.Area();
    for (std::size_t j = 0; j < i; ++j) {
      const world::Rect& o = c.twin.regions[j];
      const double w = std::min(r.max.x, o.max.x) - std::max(r.min.x, o.min.x);
      const double h = std::min(r.max.y, o.max.y) - std::max(r.min.y, o.min.y);
      if (w > 0.0 && h > 0.0) {
        issues.push_back(path + ": overlaps " + Indexed("twin.regions", j));
      }
    }
  }
  if (!c.twin.regions.empty() &&
      std::abs(region_area - bounds.Area()) > 1e-9 * bounds.Area()) {
    issues.push_back("twin.regions: do not tile the floor bounds");
  }
  ValidateExperiment(c, issues);
  return issues;
}

void RequireValid(const ScenarioConfig& config) {
  const auto issues = ValidateScenario(config);
  if (issues.empty()) return;
  std::string msg;
  for (const auto& i : issues) msg += (msg.empty() ? "" : "\n") + i;
  Fail(ErrorCode::kConfig, msg);
}

std::string ScenarioToJson(const ScenarioConfig& config) {
  return ToJson(config).dump(2) + "\n";
}

std::uint64_t ScenarioHash(const ScenarioConfig& config) {
  const std::string text = ToJson(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

const std::vector<PresetInfo>& Presets() {
  static const std::vector<PresetInfo> kPresets = {
      {"fig4a", "cooperative localization: RMSE vs BS count and SNR"},
      {"fig4bcd", "multi-AGV mapping: single vs dual-fused, 20 seeds"},
      {"fig5a", "beam tracking: feedback vs sensing-assisted, crossing path"},
      {"fig5b", "neighbor discovery: gossip vs twin-guided gossip, 50 seeds"},
      {"factory_default", "factory hall mapping run, 2 seeds"},
  };
  return kPresets;
}

ScenarioConfig LoadPreset(const std::string& name) {
  if (name == "fig4a") return Fig4a();
  if (name == "fig4bcd") return SlamPreset("fig4bcd", 20);
  if (name == "fig5a") return Fig5a();
  if (name == "fig5b") return Fig5b();
  if (name == "factory_default") return SlamPreset("factory_default", 2);
  Fail(ErrorCode::kNotFound, "unknown preset '" + name + "'");
}

}  // namespace isacdt::sim
