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

#include "isacdt/sim/experiments.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "isacdt/comm/channel.h"
#include "isacdt/common.h"
#include "isacdt/fusion/localization.h"
#include "isacdt/net/discovery.h"
#include "isacdt/sim/random.h"
#include "isacdt/twin/twin.h"

namespace isacdt::sim {
namespace {

using world::MachineKind;
using world::Vec2;

double FromDb(double db) { return std::pow(10.0, db / 10.0); }

std::string Hex(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string Fixed(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

void StampMetadata(MetricsTable& table, const ScenarioConfig& config) {
  table.SetMetadata("scenario", config.name);
  table.SetMetadata("experiment", ExperimentName(config.experiment));
  table.SetMetadata("scenario_hash", Hex(ScenarioHash(config)));
  table.SetMetadata("seed", std::to_string(config.seed));
  table.SetMetadata("trials", std::to_string(config.trials));
  table.SetMetadata("version", VersionString());
}

// Runs fn(trial) for every trial on up to `jobs` threads; results come back
// in trial order. The first exception (lowest trial index) is rethrown.
template <typename R, typename Fn>
std::vector<R> RunTrials(int trials, int jobs, Fn fn) {
  std::vector<R> results(trials);
  std::vector<std::exception_ptr> errors(trials);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int t = next++; t < trials; t = next++) {
      try {
        results[t] = fn(t);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  const int threads = std::clamp(jobs, 1, std::max(trials, 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

std::vector<const NodeConfig*> Nodes(const ScenarioConfig& c, bool bs) {
  std::vector<const NodeConfig*> out;
  for (const auto& n : c.world.nodes) {
    if ((n.node.kind == MachineKind::kBaseStation) == bs) out.push_back(&n);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cooperative localization

struct LocalizationCell {
  std::string profile;
  int k = 0;
  double snr_db = 0.0;
};

struct CellOutcome {
  bool single_ok = false;
  bool fused_ok = false;
  double se_single = 0.0;
  double se_avg = 0.0;
  double se_weighted = 0.0;
};

std::optional<signal::Measurement> SenseTarget(
    const world::MachineNode& bs, const Vec2& target, double snr_db,
    const SignalConfig& sig, Rng& rng) {
  world::MachineNode target_node;
  target_node.position = target;
  const world::Observables obs = world::GroundTruthObservables(bs, target_node);
  const signal::EchoGrid grid = signal::SynthesizeEcho(
      sig.ofdm, {{obs.range, obs.radial_velocity, 1.0}}, 1.0 / FromDb(snr_db),
      rng);
  const auto dets =
      signal::EstimateDelayDoppler(grid, FromDb(sig.detection_threshold_db));
  if (dets.empty()) return std::nullopt;
  const signal::Detection& det = dets.front();
  const Vec2 d = target - bs.position;
  const double sigma_b =
      signal::BeamWidth(bs.antenna_count) / std::sqrt(2.0 * det.snr_estimate);
  const double bearing = std::atan2(d.y, d.x) + sigma_b * rng.Normal();
  return signal::MeasurementFromDetection(det, bs, bearing, sig.ofdm);
}

CellOutcome RunLocalizationCell(const ScenarioConfig& c,
                                const LocalizationCell& cell, Rng& rng) {
  const auto bss = Nodes(c, true);
  const Vec2 target = Nodes(c, false).front()->node.position;
  const auto& offsets = c.localization.mixed_offsets_db;
  std::vector<double> offset(cell.k, 0.0);
  if (cell.profile == "mixed") {
    for (int i = 0; i < cell.k; ++i) offset[i] = offsets[i % offsets.size()];
  }
  const int single =
      static_cast<int>(std::max_element(offset.begin(), offset.end()) -
                       offset.begin());

  CellOutcome out;
  std::vector<signal::Measurement> ms;
  for (int i = 0; i < cell.k; ++i) {
    auto m = SenseTarget(bss[i]->node, target, cell.snr_db + offset[i],
                         c.signal, rng);
    if (!m) continue;
    if (i == single) {
      out.single_ok = true;
      out.se_single = (m->position - target).SquaredNorm();
    }
    ms.push_back(*m);
  }
  if (!ms.empty()) {
    out.fused_ok = true;
    out.se_avg = (fusion::FuseAverage(ms) - target).SquaredNorm();
    out.se_weighted = (fusion::FuseWeighted(ms) - target).SquaredNorm();
  }
  return out;
}

// ---------------------------------------------------------------------------
// SLAM

struct ScanContext {
  const world::FloorPlan* plan;
  signal::OfdmConfig ofdm;
  const SlamParams* params;
  double threshold;
};

double HeadingAt(const world::Trajectory& traj, double t) {
  const Vec2 v = traj.VelocityAt(t);
  return v.Norm() > 0.0 ? world::NormalizeAngle(std::atan2(v.y, v.x)) : 0.0;
}

std::vector<fusion::ScanRay> TakeScan(const ScanContext& ctx,
                                      const fusion::Pose2& pose,
                                      double loss_db, Rng& rng) {
  const SlamParams& p = *ctx.params;
  std::vector<fusion::ScanRay> scan;
  scan.reserve(p.rays_per_scan);
  for (int r = 0; r < p.rays_per_scan; ++r) {
    const double rel = -kPi + 2.0 * kPi * r / p.rays_per_scan;
    const auto truth = world::Raycast(*ctx.plan, pose.position,
                                      pose.heading + rel, p.max_range);
    std::vector<signal::PointTarget> targets;
    double noise = 0.0;
    if (truth) targets.push_back({*truth, 0.0, 1.0});
    if (!p.noiseless) {
      const double range = truth ? *truth : p.max_range;
      const double snr_db = p.snr_db - loss_db +
                            40.0 * std::log10(p.reference_range / range);
      noise = 1.0 / FromDb(snr_db);
    }
    const auto grid = signal::SynthesizeEcho(ctx.ofdm, targets, noise, rng);
    std::optional<double> hit;
    for (const auto& det : signal::EstimateDelayDoppler(grid, ctx.threshold)) {
      if (det.range_estimate <= p.max_range) {
        hit = det.range_estimate;
        break;
      }
    }
    scan.push_back({rel, hit});
  }
  return scan;
}

// Mapping run: the observer follows `path` while the scans are taken from
// `scan_from` (the observer itself for active sensing, the transmitting
// peer for passive sensing).
fusion::OccupancyGrid MapRun(const ScanContext& ctx,
                             const fusion::OccupancyGrid& empty,
                             const world::Trajectory& path,
                             const world::Trajectory& scan_from,
                             double loss_db, Rng& rng) {
  fusion::OccupancyGrid grid = empty;
  const SlamParams& p = *ctx.params;
  for (int j = 0;; ++j) {
    const double t = path.StartTime() + j * p.scan_interval;
    if (!(t < path.EndTime())) break;
    const fusion::Pose2 pose{scan_from.PositionAt(t), HeadingAt(scan_from, t)};
    const auto scan = TakeScan(ctx, pose, loss_db, rng);
    grid = fusion::GridUpdateFromScan(grid, pose, scan, p.max_range);
  }
  return grid;
}

struct SlamOutcome {
  std::uint64_t seed = 0;
  double acc_single = 0.0;
  double acc_dual = 0.0;
  fusion::OccupancyGrid single;
  fusion::OccupancyGrid dual;
};

// ---------------------------------------------------------------------------
// Beam tracking

struct BeamFrame {
  int best = 0;
  int feedback = 0;
  int sensing = 0;
  double se_feedback = 0.0;
  double se_sensing = 0.0;
  double se_best = 0.0;
};

struct BeamRun {
  std::vector<BeamFrame> frames;
  std::string snapshot;  // global twin after the last frame
};

BeamRun RunBeamTracking(const ScenarioConfig& c, int n, const Vec2& offset,
                        Rng& rng, bool want_snapshot) {
  world::MachineNode bs = Nodes(c, true).front()->node;
  bs.antenna_count = n;
  const NodeConfig* im_cfg = nullptr;
  for (const NodeConfig* node : Nodes(c, false)) {
    if (!node->trajectory.waypoints.empty()) {
      im_cfg = node;
      break;
    }
  }
  world::MachineNode im = im_cfg->node;
  const world::Trajectory& traj = im_cfg->trajectory;
  const comm::UlaCodebook codebook(n);
  comm::ChannelOptions ch_opts;
  ch_opts.wavelength = c.signal.ofdm.Wavelength();
  const double snr0 = FromDb(c.signal.snr0_db);
  const double sensing_snr = FromDb(c.beam.sensing_snr_db);
  const world::Rect region = c.world.plan.bounds;
  twin::TwinOptions twin_opts;
  twin_opts.cell_size = c.twin.cell_size;
  twin_opts.gate = c.twin.gate;

  twin::DataRepository repo;
  twin::Twin twin;
  long built_epoch = -1;
  const std::string track = twin::NodeTrackId(im.id);
  int report = n / 2;  // boresight until the first report arrives

  BeamRun run;
  for (int f = 1; f <= c.beam.frames; ++f) {
    const double t = f * c.beam.frame_period;
    im.position = traj.PositionAt(traj.StartTime() + t) + offset;
    const long epoch = static_cast<long>(std::floor(t / c.twin.cadence + 1e-9));
    if (epoch != built_epoch) {
      twin = twin::BuildLocalTwin(
          repo, region, epoch * c.twin.cadence - c.twin.ingest_delay, twin_opts);
      built_epoch = epoch;
    }
    const auto channel = comm::ChannelFromGeometry(
        bs, im, c.world.plan, c.world.scatterers, ch_opts);
    BeamFrame fr;
    fr.best = comm::BestBeam(codebook, channel);
    fr.feedback = comm::TrackFeedback(codebook, report);
    fr.sensing = twin.environment.tracks.count(track)
                     ? comm::TrackSensingAssisted(codebook, twin, track, t, bs)
                     : fr.feedback;
    fr.se_feedback = comm::SpectralEfficiency(
        comm::BeamGain(codebook, fr.feedback, channel), snr0);
    fr.se_sensing = comm::SpectralEfficiency(
        comm::BeamGain(codebook, fr.sensing, channel), snr0);
    fr.se_best = comm::SpectralEfficiency(
        comm::BeamGain(codebook, fr.best, channel), snr0);
    run.frames.push_back(fr);

    signal::Measurement m = signal::SimulateMeasurement(
        bs, im.position, sensing_snr, c.signal.ofdm, t, rng);
    m.target_id = im.id;
    repo.Ingest({t, m});
    report = fr.best;
  }
  if (want_snapshot) {
    const double now = c.beam.frames * c.beam.frame_period;
    std::vector<twin::LocalTwin> locals;
    for (const world::Rect& r : EffectiveRegions(c)) {
      locals.push_back(twin::BuildLocalTwin(repo, r, now, twin_opts));
    }
    run.snapshot = twin::SerializeTwin(twin::MergeGlobal(locals, now, twin_opts));
  }
  return run;
}

// ---------------------------------------------------------------------------
// Neighbor discovery

struct DiscoveryRun {
  std::uint64_t seed = 0;
  std::vector<double> gossip;
  std::vector<double> dt;
  int fallbacks = 0;
};

DiscoveryRun RunDiscovery(const ScenarioConfig& c, std::uint64_t seed) {
  const DiscoveryParams& p = c.discovery;
  const world::Rect& b = c.world.plan.bounds;
  Rng place(StreamSeed(seed, 0));
  std::vector<world::MachineNode> nodes;
  if (c.world.nodes.empty()) {
    for (int i = 0; i < p.node_count; ++i) {
      world::MachineNode n;
      n.id = {static_cast<std::uint32_t>(i + 1)};
      n.position = {place.Uniform(b.min.x, b.max.x),
                    place.Uniform(b.min.y, b.max.y)};
      if (p.mobile) {
        n.velocity = world::UnitVector(place.Uniform(-kPi, kPi));
      }
      nodes.push_back(n);
    }
  } else {
    for (const auto& n : c.world.nodes) nodes.push_back(n.node);
  }
  const net::ContactGraph graph = net::BuildContactGraph(nodes, p.comm_range);
  if (graph.EdgeCount() == 0) {
    Fail(ErrorCode::kUndefinedMetric,
         "neighbor discovery: contact graph has no edges");
  }

  // The twin tracks every node from two sensing fixes one round apart.
  Rng sense(StreamSeed(seed, 2));
  twin::DataRepository repo;
  for (double t : {-p.round_period, 0.0}) {
    for (const auto& n : nodes) {
      signal::Measurement m;
      m.position = n.position + t * n.velocity +
                   Vec2{p.twin_noise * sense.Normal(),
                        p.twin_noise * sense.Normal()};
      m.covariance = p.twin_noise * p.twin_noise * Eigen::Matrix2d::Identity();
      m.source_id = n.id;
      m.target_id = n.id;
      m.timestamp = t;
      repo.Ingest({t, m});
    }
  }
  twin::TwinOptions opts;
  opts.cell_size = c.twin.cell_size;
  opts.gate = c.twin.gate;
  world::Rect region = b;
  for (const auto& n : nodes) {
    region.min.x = std::min(region.min.x, n.position.x - 1.0);
    region.min.y = std::min(region.min.y, n.position.y - 1.0);
    region.max.x = std::max(region.max.x, n.position.x + 1.0);
    region.max.y = std::max(region.max.y, n.position.y + 1.0);
  }
  const twin::Twin twin = twin::BuildLocalTwin(repo, region, 0.0, opts);

  DiscoveryRun run;
  run.seed = seed;
  for (net::PolicyKind kind :
       {net::PolicyKind::kUniformGossip, net::PolicyKind::kDtGossip}) {
    auto states = net::InitialStates(graph);
    Rng rng(StreamSeed(seed, 1));  // identical draws for both policies
    net::ContactPolicy policy;
    policy.kind = kind;
    policy.twin = &twin;
    policy.comm_range = p.comm_range;
    auto& trace = kind == net::PolicyKind::kDtGossip ? run.dt : run.gossip;
    std::vector<Vec2> positions = graph.positions;
    for (int r = 1; r <= p.max_rounds; ++r) {
      const double t = (r - 1) * p.round_period;
      if (p.mobile) {
        for (std::size_t i = 0; i < nodes.size(); ++i) {
          positions[i] = nodes[i].position + t * nodes[i].velocity;
        }
      }
      policy.twin_time = t;
      const auto stats =
          net::GossipRound(states, graph, positions, policy, p.sectors, r, rng);
      if (kind == net::PolicyKind::kDtGossip) run.fallbacks += stats.fallbacks;
      trace.push_back(net::DiscoveryFraction(states));
    }
  }
  return run;
}

MetricValue OptionalRounds(std::optional<int> r) {
  if (!r) return std::monostate{};
  return static_cast<std::int64_t>(*r);
}

}  // namespace

fusion::OccupancyGrid GridForPlan(const world::FloorPlan& plan,
                                  double cell_size) {
  const Vec2 origin{plan.bounds.min.x - 0.5 * cell_size,
                    plan.bounds.min.y - 0.5 * cell_size};
  const int w = static_cast<int>(
      std::ceil(plan.bounds.Width() / cell_size - 1e-9)) + 1;
  const int h = static_cast<int>(
      std::ceil(plan.bounds.Height() / cell_size - 1e-9)) + 1;
  return fusion::OccupancyGrid(origin, cell_size, w, h);
}

std::vector<world::Rect> EffectiveRegions(const ScenarioConfig& config) {
  if (!config.twin.regions.empty()) return config.twin.regions;
  const world::Rect& b = config.world.plan.bounds;
  const double mid = 0.5 * (b.min.x + b.max.x);
  return {{b.min, {mid, b.max.y}}, {{mid, b.min.y}, b.max}};
}

ExperimentResult ExpCoopLocalization(const ScenarioConfig& c,
                                     const RunOptions& options) {
  RequireValid(c);
  std::vector<LocalizationCell> cells;
  for (const auto& profile : c.localization.profiles) {
    for (int k : c.localization.bs_counts) {
      for (double snr : c.localization.snr_db) cells.push_back({profile, k, snr});
    }
  }
  const auto outcomes = RunTrials<std::vector<CellOutcome>>(
      c.trials, options.jobs, [&](int trial) {
        const std::uint64_t seed = TrialSeed(c.seed, trial);
        std::vector<CellOutcome> out;
        for (std::size_t i = 0; i < cells.size(); ++i) {
          Rng rng(StreamSeed(seed, i));
          out.push_back(RunLocalizationCell(c, cells[i], rng));
        }
        return out;
      });

  ExperimentResult result;
  result.metrics = MetricsTable({"profile", "K", "snr_db", "rmse_single",
                                 "rmse_avg", "rmse_weighted", "trials_ok",
                                 "fail_single", "fail_fused"});
  StampMetadata(result.metrics, c);
  std::string highlight;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    CompensatedSum single, avg, weighted;
    std::int64_t fail_single = 0, fail_fused = 0;
    for (const auto& trial : outcomes) {
      const CellOutcome& o = trial[i];
      if (o.single_ok) single.Add(o.se_single); else ++fail_single;
      if (o.fused_ok) {
        avg.Add(o.se_avg);
        weighted.Add(o.se_weighted);
      } else {
        ++fail_fused;
      }
    }
    const double rs = std::sqrt(single.Mean());
    const double ra = std::sqrt(avg.Mean());
    result.metrics.AddRow({cells[i].profile,
                           static_cast<std::int64_t>(cells[i].k),
                           cells[i].snr_db, rs, ra, std::sqrt(weighted.Mean()),
                           static_cast<std::int64_t>(avg.count()), fail_single,
                           fail_fused});
    if (highlight.empty() && cells[i].profile == "equal" && cells[i].k == 4) {
      highlight = " K=4 equal snr=" + Fixed(cells[i].snr_db, 1) +
                  " dB rmse_avg/rmse_single=" + Fixed(ra / rs, 3);
    }
  }
  result.summary = c.name + " COOP_LOCALIZATION cells=" +
                   std::to_string(cells.size()) +
                   " trials=" + std::to_string(c.trials) + highlight;
  return result;
}

ExperimentResult ExpSlamRecon(const ScenarioConfig& c,
                              const RunOptions& options) {
  RequireValid(c);
  std::vector<const NodeConfig*> agvs;
  for (const auto& n : c.world.nodes) {
    if (n.node.kind == MachineKind::kAgv && !n.trajectory.waypoints.empty()) {
      agvs.push_back(&n);
    }
  }
  ScanContext ctx{&c.world.plan, c.signal.ofdm, &c.slam,
                  FromDb(c.signal.detection_threshold_db)};
  ctx.ofdm.num_subcarriers = c.slam.scan_subcarriers;
  ctx.ofdm.num_symbols = c.slam.scan_symbols;
  const fusion::OccupancyGrid empty =
      GridForPlan(c.world.plan, c.twin.cell_size);
  const double loss = c.slam.passive_loss_db;

  const auto outcomes = RunTrials<SlamOutcome>(
      c.trials, options.jobs, [&](int trial) {
        SlamOutcome o;
        o.seed = TrialSeed(c.seed, trial);
        const world::Trajectory& p0 = agvs[0]->trajectory;
        Rng a0(StreamSeed(o.seed, 0));
        o.single = MapRun(ctx, empty, p0, p0, 0.0, a0);
        o.acc_single = fusion::MapAccuracy(o.single, c.world.plan);
        if (agvs.size() >= 2) {
          const world::Trajectory& p1 = agvs[1]->trajectory;
          Rng a1(StreamSeed(o.seed, 1));
          Rng s0(StreamSeed(o.seed, 2));
          Rng s1(StreamSeed(o.seed, 3));
          const std::vector<fusion::OccupancyGrid> parts = {
              o.single, MapRun(ctx, empty, p0, p1, loss, s0),
              MapRun(ctx, empty, p1, p1, 0.0, a1),
              MapRun(ctx, empty, p1, p0, loss, s1)};
          o.dual = fusion::FuseGrids(parts);
        } else {
          o.dual = o.single;
        }
        o.acc_dual = fusion::MapAccuracy(o.dual, c.world.plan);
        if (trial != 0) {
          o.single = {};
          o.dual = {};
        }
        return o;
      });

  ExperimentResult result;
  result.metrics = MetricsTable({"trial", "seed", "variant", "map_accuracy"});
  StampMetadata(result.metrics, c);
  CompensatedSum single, dual;
  int wins = 0;
  for (std::size_t t = 0; t < outcomes.size(); ++t) {
    const auto& o = outcomes[t];
    const auto trial = static_cast<std::int64_t>(t);
    const std::string seed = std::to_string(o.seed);
    result.metrics.AddRow({trial, seed, std::string("single"), o.acc_single});
    result.metrics.AddRow({trial, seed, std::string("dual-fused"), o.acc_dual});
    single.Add(o.acc_single);
    dual.Add(o.acc_dual);
    wins += o.acc_dual >= o.acc_single;
  }
  result.grids.emplace_back("map_single", outcomes.front().single);
  result.grids.emplace_back("map_dual_fused", outcomes.front().dual);
  result.summary = c.name + " SLAM_RECON trials=" + std::to_string(c.trials) +
                   " mean_accuracy single=" + Fixed(single.Mean(), 4) +
                   " dual-fused=" + Fixed(dual.Mean(), 4) +
                   " dual>=single on " + std::to_string(wins) + "/" +
                   std::to_string(outcomes.size());
  return result;
}

ExperimentResult ExpBeamTracking(const ScenarioConfig& c,
                                 const RunOptions& options) {
  RequireValid(c);
  const auto& counts = c.beam.antenna_counts;
  struct TrialRuns {
    std::vector<BeamRun> runs;  // one per antenna count
  };
  const auto trials = RunTrials<TrialRuns>(
      c.trials, options.jobs, [&](int trial) {
        const std::uint64_t seed = TrialSeed(c.seed, trial);
        Rng jitter(StreamSeed(seed, 0));
        const double j = c.beam.position_jitter;
        const Vec2 offset{jitter.Uniform(-j, j), jitter.Uniform(-j, j)};
        TrialRuns out;
        for (std::size_t i = 0; i < counts.size(); ++i) {
          Rng rng(StreamSeed(seed, 1 + i));
          out.runs.push_back(RunBeamTracking(
              c, counts[i], offset, rng, trial == 0 && i + 1 == counts.size()));
        }
        return out;
      });

  ExperimentResult result;
  result.metrics = MetricsTable(
      {"N", "frame", "se_feedback", "se_sensing", "true_best_se"});
  MetricsTable summary({"trial", "seed", "N", "mean_se_feedback",
                        "mean_se_sensing", "mean_true_best_se",
                        "best_beam_changes", "oracle_violations"});
  MetricsTable trace({"trial", "N", "frame", "time", "best_beam",
                      "beam_feedback", "beam_sensing"});
  StampMetadata(result.metrics, c);
  StampMetadata(summary, c);
  StampMetadata(trace, c);

  std::string highlight;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const auto n = static_cast<std::int64_t>(counts[i]);
    CompensatedSum all_fb, all_s;
    for (int f = 0; f < c.beam.frames; ++f) {
      CompensatedSum fb, s, best;
      for (const auto& t : trials) {
        const BeamFrame& fr = t.runs[i].frames[f];
        fb.Add(fr.se_feedback);
        s.Add(fr.se_sensing);
        best.Add(fr.se_best);
      }
      all_fb.Merge(fb);
      all_s.Merge(s);
      result.metrics.AddRow({n, static_cast<std::int64_t>(f + 1), fb.Mean(),
                             s.Mean(), best.Mean()});
    }
    highlight += " N=" + std::to_string(n) + ":" + Fixed(all_fb.Mean(), 3) +
                 "/" + Fixed(all_s.Mean(), 3);
  }
  for (std::size_t t = 0; t < trials.size(); ++t) {
    const auto trial = static_cast<std::int64_t>(t);
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const auto n = static_cast<std::int64_t>(counts[i]);
      CompensatedSum fb, s, best;
      std::int64_t changes = 0, violations = 0;
      const auto& frames = trials[t].runs[i].frames;
      for (std::size_t f = 0; f < frames.size(); ++f) {
        const BeamFrame& fr = frames[f];
        fb.Add(fr.se_feedback);
        s.Add(fr.se_sensing);
        best.Add(fr.se_best);
        if (f > 0 && fr.best != frames[f - 1].best) ++changes;
        if (fr.se_sensing > fr.se_best) ++violations;
        trace.AddRow({trial, n, static_cast<std::int64_t>(f + 1),
                      (f + 1) * c.beam.frame_period,
                      static_cast<std::int64_t>(fr.best),
                      static_cast<std::int64_t>(fr.feedback),
                      static_cast<std::int64_t>(fr.sensing)});
      }
      summary.AddRow({trial, std::to_string(TrialSeed(c.seed, t)), n,
                      fb.Mean(), s.Mean(), best.Mean(), changes, violations});
    }
  }
  result.tables.emplace_back("beam_summary.csv", std::move(summary));
  result.tables.emplace_back("beam_trace.csv", std::move(trace));
  result.files.emplace_back("twin_snapshot.txt",
                            trials.front().runs.back().snapshot);
  result.summary = c.name + " BEAM_TRACKING trials=" +
                   std::to_string(c.trials) +
                   " mean se feedback/sensing" + highlight;
  return result;
}

ExperimentResult ExpNeighborDiscovery(const ScenarioConfig& c,
                                      const RunOptions& options) {
  RequireValid(c);
  const auto runs = RunTrials<DiscoveryRun>(
      c.trials, options.jobs,
      [&](int trial) { return RunDiscovery(c, TrialSeed(c.seed, trial)); });

  ExperimentResult result;
  result.metrics = MetricsTable({"round", "frac_gossip", "frac_dt_gossip"});
  MetricsTable summary(
      {"trial", "seed", "r90_gossip", "r90_dt", "dt_fallbacks"});
  MetricsTable trace({"trial", "round", "frac_gossip", "frac_dt_gossip"});
  StampMetadata(result.metrics, c);
  StampMetadata(summary, c);
  StampMetadata(trace, c);
  for (int r = 0; r < c.discovery.max_rounds; ++r) {
    CompensatedSum g, d;
    for (const auto& run : runs) {
      g.Add(run.gossip[r]);
      d.Add(run.dt[r]);
    }
    result.metrics.AddRow({static_cast<std::int64_t>(r + 1), g.Mean(), d.Mean()});
  }
  int dt_no_worse = 0;
  for (std::size_t t = 0; t < runs.size(); ++t) {
    const auto& run = runs[t];
    const auto trial = static_cast<std::int64_t>(t);
    const auto rg = net::RoundsToThreshold(run.gossip, c.discovery.threshold);
    const auto rd = net::RoundsToThreshold(run.dt, c.discovery.threshold);
    if (rd && (!rg || *rd <= *rg)) ++dt_no_worse;
    summary.AddRow({trial, std::to_string(run.seed), OptionalRounds(rg),
                    OptionalRounds(rd),
                    static_cast<std::int64_t>(run.fallbacks)});
    for (std::size_t r = 0; r < run.gossip.size(); ++r) {
      trace.AddRow({trial, static_cast<std::int64_t>(r + 1), run.gossip[r],
                    run.dt[r]});
    }
  }
  result.tables.emplace_back("discovery_summary.csv", std::move(summary));
  result.tables.emplace_back("discovery_trace.csv", std::move(trace));
  result.summary = c.name + " NEIGHBOR_DISCOVERY trials=" +
                   std::to_string(c.trials) + " r90_dt<=r90_gossip on " +
                   std::to_string(dt_no_worse) + "/" +
                   std::to_string(runs.size());
  return result;
}

ExperimentResult RunScenario(const ScenarioConfig& config,
                             const RunOptions& options) {
  RequireValid(config);
  switch (config.experiment) {
    case Experiment::kCoopLocalization:
      return ExpCoopLocalization(config, options);
    case Experiment::kSlamRecon:
      return ExpSlamRecon(config, options);
    case Experiment::kBeamTracking:
      return ExpBeamTracking(config, options);
    case Experiment::kNeighborDiscovery:
      return ExpNeighborDiscovery(config, options);
  }
  Fail(ErrorCode::kInternal, "run_scenario: unhandled experiment");
}

}  // namespace isacdt::sim
