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

// Sparse angular mmWave channel seen by a base station's uniform linear
// array, DFT beam codebook and the two beam-tracking policies.

#ifndef ISACDT_COMM_CHANNEL_H_
#define ISACDT_COMM_CHANNEL_H_

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "isacdt/twin/twin.h"
#include "isacdt/world/geometry.h"

namespace isacdt::comm {

// Angles are measured at the BS from array broadside (the BS heading),
// positive counter-clockwise.
struct Path {
  double angle = 0.0;
  std::complex<double> gain;
};

struct ChannelState {
  std::vector<Path> paths;
};

// N DFT beams at half-wavelength spacing: theta_b = asin(2b/N - 1).
class UlaCodebook {
 public:
  explicit UlaCodebook(int antenna_count);

  int size() const { return antenna_count_; }
  double BeamAngle(int beam) const;
  bool Valid(int beam) const { return beam >= 0 && beam < antenna_count_; }

 private:
  int antenna_count_;
};

// Normalized array factor (1/N) sum_k exp(j pi k (sin a - sin b)); |AF| <= 1.
std::complex<double> ArrayFactor(int antenna_count, double path_angle,
                                 double beam_angle);

struct ChannelOptions {
  double wavelength = 0.0107068735714;  // 28 GHz
  double scatter_loss_db = 10.0;
};

// LoS path with free-space amplitude lambda / (4 pi r) unless blocked, plus
// one single-bounce path per scatterer visible from both ends. Throws
// kDegenerateGeometry when the nodes coincide.
ChannelState ChannelFromGeometry(const world::MachineNode& bs,
                                 const world::MachineNode& im,
                                 const world::FloorPlan& plan,
                                 std::span<const world::Vec2> scatterers,
                                 const ChannelOptions& options = {});

// Beamforming gain N |w^H h|^2 / ||h||^2 of beam `beam`; lies in [0, N].
// Zero for an empty channel.
double BeamGain(const UlaCodebook& codebook, int beam,
                const ChannelState& channel);

double SpectralEfficiency(double gain, double snr0);

// Beam with the largest gain; lowest index on ties.
int BestBeam(const UlaCodebook& codebook, const ChannelState& channel);

// Feedback baseline: the beam the IM reported best one frame earlier.
int TrackFeedback(const UlaCodebook& codebook, int previous_best_report);

// Beam whose array factor peaks closest to the angle of the twin's predicted
// track position at `frame_time`, as seen from `bs`. Lowest index on ties.
int TrackSensingAssisted(const UlaCodebook& codebook, const twin::Twin& twin,
                         const std::string& track_id, double frame_time,
                         const world::MachineNode& bs);

// Beam with the largest |AF| toward `angle`; lowest index on ties.
int BeamToward(const UlaCodebook& codebook, double angle);

struct PilotObservation {
  int beam = 0;
  std::complex<double> response;
};

// Noiseless pilot responses w_b^H h for the listed beams.
std::vector<PilotObservation> ObservePilots(const UlaCodebook& codebook,
                                            const ChannelState& channel,
                                            std::span<const int> beams);

struct ChannelEstimate {
  ChannelState channel;
  double residual = 0.0;  // ||observed - modeled||^2
};

// Least-squares path gains on the twin-supplied angular support. Throws
// kInsufficientPilots when pilots < candidates or no candidate is given.
ChannelEstimate EstimateChannelDtAssisted(
    const UlaCodebook& codebook, std::span<const PilotObservation> pilots,
    std::span<const double> candidate_angles);

// Pilot-only baseline: least squares over every `num_paths`-subset of the N
// codebook angles, keeping the smallest residual (first subset on ties).
ChannelEstimate EstimateChannelExhaustive(
    const UlaCodebook& codebook, std::span<const PilotObservation> pilots,
    int num_paths);

}  // namespace isacdt::comm

#endif  // ISACDT_COMM_CHANNEL_H_
