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

#include "isacdt/signal/ofdm.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include "isacdt/common.h"

namespace isacdt::signal {
namespace {

using Complex = std::complex<double>;

// FFTW planning is not thread-safe; execution of a finished plan on new
// arrays is. Plans live for the process lifetime.
class PlanCache {
 public:
  fftw_plan Get(int rows, int cols) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find({rows, cols});
    if (it != plans_.end()) return it->second;
    std::vector<Complex> scratch(static_cast<std::size_t>(rows) * cols);
    auto* data = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_2d(rows, cols, data, data, FFTW_BACKWARD,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(std::make_pair(rows, cols), plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& Plans() {
  static PlanCache* cache = new PlanCache();
  return *cache;
}

// Sidelobe ceiling of an unwindowed N-point DFT, relative to the measured
// peak, at circular bin distance d >= 2 from a (possibly straddling) tone.
double SidelobeCeiling(int d, int n) {
  if (d <= 1) return 1.0;
  const double x = d - 0.5;
  const double periodic = (kPi * x / n) / std::sin(kPi * x / n);
  return periodic * periodic / (4.0 * x * x);
}

int CircularDistance(int a, int b, int n) {
  const int d = std::abs(a - b) % n;
  return std::min(d, n - d);
}

// Vertex offset of the parabola through (-1, a), (0, b), (1, c).
double ParabolicOffset(double a, double b, double c) {
  const double denom = a - 2.0 * b + c;
  if (denom >= 0.0) return 0.0;
  return std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
}

}  // namespace

double OfdmConfig::UnambiguousRange() const {
  return kSpeedOfLight * num_subcarriers / (2.0 * bandwidth);
}

double OfdmConfig::Wavelength() const { return kSpeedOfLight / carrier_freq; }

std::vector<std::string> ValidateOfdmConfig(const OfdmConfig& config) {
  std::vector<std::string> issues;
  if (!(config.carrier_freq > 0.0)) issues.push_back("carrier_freq: must be > 0");
  if (!(config.bandwidth > 0.0)) issues.push_back("bandwidth: must be > 0");
  if (config.num_subcarriers < 1) {
    issues.push_back("num_subcarriers: must be >= 1");
  }
  if (config.num_symbols < 1) issues.push_back("num_symbols: must be >= 1");
  if (!std::isfinite(config.symbol_duration)) {
    issues.push_back("symbol_duration: not finite");
  }
  return issues;
}

EchoGrid SynthesizeEcho(const OfdmConfig& config,
                        const std::vector<PointTarget>& targets,
                        double noise_power, sim::Rng& rng) {
  Require(noise_power >= 0.0, "synthesize_echo: noise_power must be >= 0");
  const int n_sc = config.num_subcarriers;
  const int n_sym = config.num_symbols;
  const double spacing = config.SubcarrierSpacing();
  const double t_sym = config.SymbolDuration();
  const double r_max = config.UnambiguousRange();
  for (const PointTarget& t : targets) {
    if (!(t.range > 0.0 && t.range < r_max)) {
      Fail(ErrorCode::kInvalidArgument,
           "synthesize_echo: target range " + std::to_string(t.range) +
               " m outside (0, " + std::to_string(r_max) + ") m");
    }
    Require(t.amplitude >= 0.0, "synthesize_echo: amplitude must be >= 0");
  }

  EchoGrid grid;
  grid.config = config;
  grid.samples.assign(static_cast<std::size_t>(n_sc) * n_sym, Complex{});

  std::vector<Complex> range_ramp(n_sc);
  std::vector<Complex> doppler_ramp(n_sym);
  for (const PointTarget& t : targets) {
    const double tau = 2.0 * t.range / kSpeedOfLight;
    const double f_d = 2.0 * t.radial_velocity * config.carrier_freq /
                       kSpeedOfLight;
    const double scale = std::sqrt(t.amplitude);
    for (int n = 0; n < n_sc; ++n) {
      range_ramp[n] = std::polar(scale, -2.0 * kPi * n * spacing * tau);
    }
    for (int m = 0; m < n_sym; ++m) {
      doppler_ramp[m] = std::polar(1.0, 2.0 * kPi * m * t_sym * f_d);
    }
    for (int n = 0; n < n_sc; ++n) {
      Complex* row = &grid.samples[static_cast<std::size_t>(n) * n_sym];
      for (int m = 0; m < n_sym; ++m) row[m] += range_ramp[n] * doppler_ramp[m];
    }
  }

  if (noise_power > 0.0) {
    const double sigma = std::sqrt(noise_power / 2.0);
    for (Complex& s : grid.samples) {
      const double re = rng.Normal();
      const double im = rng.Normal();
      s += Complex(sigma * re, sigma * im);
    }
  }
  return grid;
}

std::vector<Detection> EstimateDelayDoppler(const EchoGrid& grid,
                                            double detection_threshold) {
  Require(detection_threshold > 1.0,
          "estimate_delay_doppler: threshold must exceed 1");
  const int n_sc = grid.config.num_subcarriers;
  const int n_sym = grid.config.num_symbols;
  const std::size_t cells = static_cast<std::size_t>(n_sc) * n_sym;
  Require(grid.samples.size() == cells,
          "estimate_delay_doppler: grid size does not match config");

  std::vector<Complex> spectrum = grid.samples;
  auto* data = reinterpret_cast<fftw_complex*>(spectrum.data());
  fftw_execute_dft(Plans().Get(n_sc, n_sym), data, data);

  std::vector<double> power(cells);
  std::size_t argmax = 0;
  for (std::size_t i = 0; i < cells; ++i) {
    power[i] = std::norm(spectrum[i]);
    if (power[i] > power[argmax]) argmax = i;
  }
  const double peak_power = power[argmax];
  if (!(peak_power > 0.0)) return {};

  auto index = [n_sym](int k, int l) {
    return static_cast<std::size_t>(k) * n_sym + l;
  };
  auto wrap = [](int i, int n) { return ((i % n) + n) % n; };

  // Median floor excluding the 3x3 neighbourhood of the strongest cell.
  const int k_max = static_cast<int>(argmax / n_sym);
  const int l_max = static_cast<int>(argmax % n_sym);
  std::vector<double> off_peak;
  off_peak.reserve(cells);
  for (int k = 0; k < n_sc; ++k) {
    for (int l = 0; l < n_sym; ++l) {
      if (CircularDistance(k, k_max, n_sc) <= 1 &&
          CircularDistance(l, l_max, n_sym) <= 1) {
        continue;
      }
      off_peak.push_back(power[index(k, l)]);
    }
  }
  double median = 0.0;
  if (!off_peak.empty()) {
    auto mid = off_peak.begin() + off_peak.size() / 2;
    std::nth_element(off_peak.begin(), mid, off_peak.end());
    median = *mid;
  }
  // Noiseless grids have a round-off floor; cap the dynamic range at 120 dB.
  const double floor = std::max(median, peak_power * 1e-12);

  struct Peak {
    int k;
    int l;
    double power;
  };
  std::vector<Peak> peaks;
  for (int k = 0; k < n_sc; ++k) {
    for (int l = 0; l < n_sym; ++l) {
      const double p = power[index(k, l)];
      if (!(p > detection_threshold * floor)) continue;
      bool is_peak = true;
      for (int dk = -1; dk <= 1 && is_peak; ++dk) {
        for (int dl = -1; dl <= 1; ++dl) {
          if (dk == 0 && dl == 0) continue;
          const int kk = wrap(k + dk, n_sc);
          const int ll = wrap(l + dl, n_sym);
          if (kk == k && ll == l) continue;
          const double q = power[index(kk, ll)];
          // Plateaus keep only the first cell in scan order.
          const bool earlier = index(kk, ll) < index(k, l);
          if (q > p || (earlier && q == p)) {
            is_peak = false;
            break;
          }
        }
      }
      if (is_peak) peaks.push_back({k, l, p});
    }
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const Peak& a, const Peak& b) { return a.power > b.power; });

  // Drop local maxima that sit under the sidelobe skirt of a stronger peak.
  std::vector<Peak> kept;
  for (const Peak& cand : peaks) {
    bool masked = false;
    for (const Peak& strong : kept) {
      const double ceiling =
          SidelobeCeiling(CircularDistance(cand.k, strong.k, n_sc), n_sc) *
          SidelobeCeiling(CircularDistance(cand.l, strong.l, n_sym), n_sym);
      if (cand.power <= 2.0 * strong.power * ceiling) {
        masked = true;
        break;
      }
    }
    if (!masked) kept.push_back(cand);
  }

  const double range_bin = RangeResolution(grid.config);
  const double t_sym = grid.config.SymbolDuration();
  std::vector<Detection> detections;
  for (const Peak& pk : kept) {
    const double mag = std::sqrt(pk.power);
    double dk = 0.0;
    if (n_sc >= 3) {
      dk = ParabolicOffset(std::sqrt(power[index(wrap(pk.k - 1, n_sc), pk.l)]),
                           mag,
                           std::sqrt(power[index(wrap(pk.k + 1, n_sc), pk.l)]));
    }
    double dl = 0.0;
    if (n_sym >= 3) {
      dl = ParabolicOffset(
          std::sqrt(power[index(pk.k, wrap(pk.l - 1, n_sym))]), mag,
          std::sqrt(power[index(pk.k, wrap(pk.l + 1, n_sym))]));
    }
    double range_bins = pk.k + dk;
    if (range_bins < 0.0) range_bins += n_sc;
    if (!(range_bins > 0.0)) continue;

    // Positive Doppler rotates the symbol axis forward, which lands at
    // negative indices under the +j transform.
    double doppler_bins = pk.l + dl;
    if (doppler_bins >= 0.5 * n_sym) doppler_bins -= n_sym;
    const double f_d = -doppler_bins / (n_sym * t_sym);

    Detection det;
    det.range_estimate = range_bins * range_bin;
    det.radial_velocity_estimate =
        f_d * kSpeedOfLight / (2.0 * grid.config.carrier_freq);
    det.snr_estimate = pk.power / floor;
    detections.push_back(det);
  }
  std::stable_sort(detections.begin(), detections.end(),
                   [](const Detection& a, const Detection& b) {
                     return a.snr_estimate > b.snr_estimate;
                   });
  return detections;
}

double RangeResolution(const OfdmConfig& config) {
  Require(config.bandwidth > 0.0, "range_resolution: bandwidth must be > 0");
  return kSpeedOfLight / (2.0 * config.bandwidth);
}

double BeamWidth(int antenna_count) {
  Require(antenna_count >= 1, "beam_width: antenna_count must be >= 1");
  return 2.0 / antenna_count;
}

Measurement MeasurementFromDetection(const Detection& det,
                                     const world::MachineNode& sensor,
                                     double bearing, const OfdmConfig& config) {
  Require(det.snr_estimate > 0.0,
          "measurement_from_detection: snr must be positive");
  const double root = std::sqrt(2.0 * det.snr_estimate);
  const double sigma_range = RangeResolution(config) / root;
  const double sigma_cross =
      det.range_estimate * BeamWidth(sensor.antenna_count) / root;

  Measurement m;
  m.position = sensor.position + det.range_estimate * world::UnitVector(bearing);
  Eigen::Matrix2d rotation;
  rotation << std::cos(bearing), -std::sin(bearing), std::sin(bearing),
      std::cos(bearing);
  const Eigen::Matrix2d polar =
      Eigen::Vector2d(sigma_range * sigma_range, sigma_cross * sigma_cross)
          .asDiagonal();
  m.covariance = rotation * polar * rotation.transpose();
  // Exact symmetry regardless of rounding in the product above.
  const double off = 0.5 * (m.covariance(0, 1) + m.covariance(1, 0));
  m.covariance(0, 1) = off;
  m.covariance(1, 0) = off;
  m.snr = det.snr_estimate;
  m.source_id = sensor.id;
  return m;
}

Measurement SimulateMeasurement(const world::MachineNode& sensor,
                                const world::Vec2& target, double snr,
                                const OfdmConfig& config, double timestamp,
                                sim::Rng& rng) {
  Require(snr > 0.0, "simulate_measurement: snr must be positive");
  const world::Vec2 delta = target - sensor.position;
  const double range = delta.Norm();
  if (range == 0.0) {
    Fail(ErrorCode::kDegenerateGeometry,
         "simulate_measurement: sensor and target coincide");
  }
  const double root = std::sqrt(2.0 * snr);
  const double sigma_range = RangeResolution(config) / root;
  const double sigma_bearing = BeamWidth(sensor.antenna_count) / root;
  Detection det;
  det.range_estimate = range + sigma_range * rng.Normal();
  det.snr_estimate = snr;
  const double bearing =
      std::atan2(delta.y, delta.x) + sigma_bearing * rng.Normal();
  Measurement m = MeasurementFromDetection(det, sensor, bearing, config);
  m.timestamp = timestamp;
  return m;
}

}  // namespace isacdt::signal
