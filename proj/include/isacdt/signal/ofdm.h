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

#ifndef ISACDT_SIGNAL_OFDM_H_
#define ISACDT_SIGNAL_OFDM_H_

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "Eigen/Core"
#include "isacdt/sim/random.h"
#include "isacdt/world/geometry.h"

namespace isacdt::signal {

struct OfdmConfig {
  double carrier_freq = 28e9;  // Hz
  double bandwidth = 1.23e9;   // Hz
  int num_subcarriers = 1024;
  int num_symbols = 64;
  // Symbol duration including cyclic prefix; <= 0 selects 1.07 / spacing.
  double symbol_duration = 0.0;

  double SubcarrierSpacing() const { return bandwidth / num_subcarriers; }
  double SymbolDuration() const {
    return symbol_duration > 0.0 ? symbol_duration
                                 : 1.07 / SubcarrierSpacing();
  }
  double UnambiguousRange() const;
  double Wavelength() const;
};

std::vector<std::string> ValidateOfdmConfig(const OfdmConfig& config);

// Samples are stored subcarrier-major: sample(n, m) = samples[n * M + m].
struct EchoGrid {
  OfdmConfig config;
  std::vector<std::complex<double>> samples;

  std::complex<double>& at(int subcarrier, int symbol) {
    return samples[static_cast<std::size_t>(subcarrier) * config.num_symbols +
                   symbol];
  }
  const std::complex<double>& at(int subcarrier, int symbol) const {
    return samples[static_cast<std::size_t>(subcarrier) * config.num_symbols +
                   symbol];
  }
};

struct PointTarget {
  double range = 0.0;            // m
  double radial_velocity = 0.0;  // m/s, positive receding
  double amplitude = 1.0;        // linear power scale
};

struct Detection {
  double range_estimate = 0.0;
  double radial_velocity_estimate = 0.0;
  double snr_estimate = 0.0;  // linear, post-processing
};

// World-frame position estimate; the unit of all sensing fusion.
struct Measurement {
  world::Vec2 position;
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();  // m^2
  double snr = 0.0;
  world::NodeId source_id;
  double timestamp = 0.0;
  // Identity of the sensed entity when the sensing pipeline knows it (e.g. a
  // cooperative node echoing its own id). Unlabeled measurements are
  // associated by position gating.
  std::optional<world::NodeId> target_id;
};

// Superposes one delay-Doppler phase ramp per target plus circularly-symmetric
// complex Gaussian noise of per-sample variance noise_power.
EchoGrid SynthesizeEcho(const OfdmConfig& config,
                        const std::vector<PointTarget>& targets,
                        double noise_power, sim::Rng& rng);

// 13 dB above the median floor.
inline constexpr double kDefaultDetectionThreshold = 19.952623149688797;

// 2D periodogram detector. Detections are sorted by descending snr_estimate;
// snr_estimate = peak power / median off-peak power.
std::vector<Detection> EstimateDelayDoppler(const EchoGrid& grid,
                                            double detection_threshold);

double RangeResolution(const OfdmConfig& config);

// Half-power beamwidth proxy of an N-element half-wavelength array: 2/N rad.
double BeamWidth(int antenna_count);

// Polar detection to world-frame measurement. The covariance is the polar
// noise ellipse (sigma_range = dr / sqrt(2 snr), sigma_cross = range *
// beamwidth / sqrt(2 snr)) rotated into the world frame.
Measurement MeasurementFromDetection(const Detection& det,
                                     const world::MachineNode& sensor,
                                     double bearing, const OfdmConfig& config);

// Measurement-level shortcut for experiments that need many fixes per
// second: draws range and bearing errors from the same noise model that
// MeasurementFromDetection reports, at post-processing SNR `snr`.
Measurement SimulateMeasurement(const world::MachineNode& sensor,
                                const world::Vec2& target, double snr,
                                const OfdmConfig& config, double timestamp,
                                sim::Rng& rng);

}  // namespace isacdt::signal

#endif  // ISACDT_SIGNAL_OFDM_H_
