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

#include "isacdt/comm/channel.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "Eigen/Dense"
#include "isacdt/common.h"

namespace isacdt::comm {
namespace {

using Complex = std::complex<double>;

double RelativeAngle(const world::MachineNode& bs, const world::Vec2& p) {
  const world::Vec2 d = p - bs.position;
  return world::NormalizeAngle(std::atan2(d.y, d.x) - bs.heading);
}

// Solves min_g ||y - A g||^2 and returns (g, residual).
std::pair<Eigen::VectorXcd, double> SolveLeastSquares(
    const Eigen::MatrixXcd& a, const Eigen::VectorXcd& y) {
  const Eigen::VectorXcd g = a.completeOrthogonalDecomposition().solve(y);
  return {g, (y - a * g).squaredNorm()};
}

Eigen::MatrixXcd SensingMatrix(const UlaCodebook& codebook,
                               std::span<const PilotObservation> pilots,
                               std::span<const double> angles) {
  const double root_n = std::sqrt(static_cast<double>(codebook.size()));
  Eigen::MatrixXcd a(pilots.size(), angles.size());
  for (std::size_t i = 0; i < pilots.size(); ++i) {
    for (std::size_t p = 0; p < angles.size(); ++p) {
      a(i, p) = root_n * ArrayFactor(codebook.size(), angles[p],
                                     codebook.BeamAngle(pilots[i].beam));
    }
  }
  return a;
}

Eigen::VectorXcd PilotVector(const UlaCodebook& codebook,
                             std::span<const PilotObservation> pilots) {
  Eigen::VectorXcd y(pilots.size());
  for (std::size_t i = 0; i < pilots.size(); ++i) {
    Require(codebook.Valid(pilots[i].beam), "pilot beam index out of range");
    y(i) = pilots[i].response;
  }
  return y;
}

ChannelEstimate MakeEstimate(std::span<const double> angles,
                             const Eigen::VectorXcd& gains, double residual) {
  ChannelEstimate est;
  est.residual = residual;
  for (std::size_t p = 0; p < angles.size(); ++p) {
    est.channel.paths.push_back({angles[p], gains(p)});
  }
  return est;
}

}  // namespace

UlaCodebook::UlaCodebook(int antenna_count) : antenna_count_(antenna_count) {
  Require(antenna_count >= 1, "codebook: antenna_count must be >= 1");
}

double UlaCodebook::BeamAngle(int beam) const {
  Require(Valid(beam), "codebook: beam index out of range");
  return std::asin(2.0 * beam / antenna_count_ - 1.0);
}

Complex ArrayFactor(int antenna_count, double path_angle, double beam_angle) {
  const double phase = kPi * (std::sin(path_angle) - std::sin(beam_angle));
  Complex sum = 0.0;
  for (int k = 0; k < antenna_count; ++k) {
    sum += std::polar(1.0, phase * k);
  }
  return sum / static_cast<double>(antenna_count);
}

ChannelState ChannelFromGeometry(const world::MachineNode& bs,
                                 const world::MachineNode& im,
                                 const world::FloorPlan& plan,
                                 std::span<const world::Vec2> scatterers,
                                 const ChannelOptions& options) {
  const double r = world::Distance(bs.position, im.position);
  if (r == 0.0) {
    Fail(ErrorCode::kDegenerateGeometry,
         "channel_from_geometry: BS and IM coincide");
  }
  const double lambda = options.wavelength;
  auto free_space = [lambda](double length) {
    return std::polar(lambda / (4.0 * kPi * length),
                      -2.0 * kPi * length / lambda);
  };
  ChannelState ch;
  if (world::LineOfSight(plan, bs.position, im.position)) {
    ch.paths.push_back({RelativeAngle(bs, im.position), free_space(r)});
  }
  const double excess = std::pow(10.0, -options.scatter_loss_db / 20.0);
  for (const world::Vec2& s : scatterers) {
    const double d1 = world::Distance(bs.position, s);
    const double d2 = world::Distance(s, im.position);
    if (d1 == 0.0 || d2 == 0.0) continue;
    if (!world::LineOfSight(plan, bs.position, s) ||
        !world::LineOfSight(plan, s, im.position)) {
      continue;
    }
    ch.paths.push_back({RelativeAngle(bs, s), excess * free_space(d1 + d2)});
  }
  return ch;
}

double BeamGain(const UlaCodebook& codebook, int beam,
                const ChannelState& channel) {
  Require(codebook.Valid(beam), "beam_gain: beam index out of range");
  if (channel.paths.empty()) return 0.0;
  const int n = codebook.size();
  const double beam_angle = codebook.BeamAngle(beam);
  Complex response = 0.0;
  for (const Path& p : channel.paths) {
    response += p.gain * ArrayFactor(n, p.angle, beam_angle);
  }
  // ||h||^2 / N expressed through pairwise array factors.
  double energy = 0.0;
  for (const Path& p : channel.paths) {
    for (const Path& q : channel.paths) {
      energy += (p.gain * std::conj(q.gain) * ArrayFactor(n, p.angle, q.angle))
                    .real();
    }
  }
  if (!(energy > 0.0)) return 0.0;
  return std::clamp(n * std::norm(response) / energy, 0.0,
                    static_cast<double>(n));
}

double SpectralEfficiency(double gain, double snr0) {
  Require(gain >= 0.0 && snr0 >= 0.0,
          "spectral_efficiency: gain and snr0 must be non-negative");
  return std::log2(1.0 + gain * snr0);
}

int BestBeam(const UlaCodebook& codebook, const ChannelState& channel) {
  int best = 0;
  double best_gain = -1.0;
  for (int b = 0; b < codebook.size(); ++b) {
    const double g = BeamGain(codebook, b, channel);
    if (g > best_gain) {
      best_gain = g;
      best = b;
    }
  }
  return best;
}

int TrackFeedback(const UlaCodebook& codebook, int previous_best_report) {
  Require(codebook.Valid(previous_best_report),
          "track_feedback: reported beam index out of range");
  return previous_best_report;
}

int BeamToward(const UlaCodebook& codebook, double angle) {
  int best = 0;
  double best_af = -1.0;
  for (int b = 0; b < codebook.size(); ++b) {
    const double af =
        std::norm(ArrayFactor(codebook.size(), angle, codebook.BeamAngle(b)));
    if (af > best_af) {
      best_af = af;
      best = b;
    }
  }
  return best;
}

int TrackSensingAssisted(const UlaCodebook& codebook, const twin::Twin& twin,
                         const std::string& track_id, double frame_time,
                         const world::MachineNode& bs) {
  const twin::PredictedState pred =
      twin::PredictState(twin, track_id, frame_time);
  return BeamToward(codebook, RelativeAngle(bs, pred.position));
}

std::vector<PilotObservation> ObservePilots(const UlaCodebook& codebook,
                                            const ChannelState& channel,
                                            std::span<const int> beams) {
  const double root_n = std::sqrt(static_cast<double>(codebook.size()));
  std::vector<PilotObservation> out;
  for (int b : beams) {
    Require(codebook.Valid(b), "observe_pilots: beam index out of range");
    Complex y = 0.0;
    for (const Path& p : channel.paths) {
      y += root_n * p.gain *
           ArrayFactor(codebook.size(), p.angle, codebook.BeamAngle(b));
    }
    out.push_back({b, y});
  }
  return out;
}

ChannelEstimate EstimateChannelDtAssisted(
    const UlaCodebook& codebook, std::span<const PilotObservation> pilots,
    std::span<const double> candidate_angles) {
  if (candidate_angles.empty() || pilots.size() < candidate_angles.size()) {
    Fail(ErrorCode::kInsufficientPilots,
         "estimate_channel: " + std::to_string(pilots.size()) +
             " pilots for " + std::to_string(candidate_angles.size()) +
             " candidate angles");
  }
  const Eigen::VectorXcd y = PilotVector(codebook, pilots);
  const auto [g, residual] =
      SolveLeastSquares(SensingMatrix(codebook, pilots, candidate_angles), y);
  return MakeEstimate(candidate_angles, g, residual);
}

ChannelEstimate EstimateChannelExhaustive(
    const UlaCodebook& codebook, std::span<const PilotObservation> pilots,
    int num_paths) {
  const int n = codebook.size();
  if (num_paths < 1 || num_paths > n ||
      pilots.size() < static_cast<std::size_t>(num_paths)) {
    Fail(ErrorCode::kInsufficientPilots,
         "estimate_channel_exhaustive: " + std::to_string(pilots.size()) +
             " pilots for " + std::to_string(num_paths) + " paths");
  }
  const Eigen::VectorXcd y = PilotVector(codebook, pilots);
  std::vector<double> grid(n);
  for (int b = 0; b < n; ++b) grid[b] = codebook.BeamAngle(b);

  // Lexicographic enumeration of index subsets.
  std::vector<int> idx(num_paths);
  std::iota(idx.begin(), idx.end(), 0);
  ChannelEstimate best;
  best.residual = std::numeric_limits<double>::infinity();
  std::vector<double> support(num_paths);
  while (true) {
    for (int i = 0; i < num_paths; ++i) support[i] = grid[idx[i]];
    const auto [g, residual] =
        SolveLeastSquares(SensingMatrix(codebook, pilots, support), y);
    if (residual < best.residual) best = MakeEstimate(support, g, residual);
    int i = num_paths - 1;
    while (i >= 0 && idx[i] == n - num_paths + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < num_paths; ++j) idx[j] = idx[j - 1] + 1;
  }
  return best;
}

}  // namespace isacdt::comm
