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

#include "isacdt/fusion/localization.h"

#include <cmath>

#include "isacdt/common.h"

namespace isacdt::fusion {

world::Vec2 FuseAverage(std::span<const signal::Measurement> measurements) {
  Require(!measurements.empty(), "fuse_average: no measurements");
  world::Vec2 sum;
  for (const auto& m : measurements) sum += m.position;
  const double n = static_cast<double>(measurements.size());
  return {sum.x / n, sum.y / n};
}

world::Vec2 FuseWeighted(std::span<const signal::Measurement> measurements) {
  Require(!measurements.empty(), "fuse_weighted: no measurements");
  std::vector<double> weights;
  weights.reserve(measurements.size());
  double total = 0.0;
  for (const auto& m : measurements) {
    const double trace = m.covariance.trace();
    Require(trace > 0.0 && std::isfinite(trace),
            "fuse_weighted: covariance trace must be positive");
    weights.push_back(1.0 / trace);
    total += weights.back();
  }
  // Equal traces must reproduce the unweighted mean bit for bit.
  bool uniform = true;
  for (double w : weights) uniform = uniform && w == weights.front();
  if (uniform) return FuseAverage(measurements);

  world::Vec2 fused;
  for (std::size_t i = 0; i < measurements.size(); ++i) {
    fused += (weights[i] / total) * measurements[i].position;
  }
  return fused;
}

double LocalizationRmse(std::span<const world::Vec2> estimates,
                        const world::Vec2& truth) {
  Require(!estimates.empty(), "localization_rmse: no estimates");
  double sum = 0.0;
  for (const auto& e : estimates) sum += (e - truth).SquaredNorm();
  return std::sqrt(sum / static_cast<double>(estimates.size()));
}

FusionReport MakeFusionReport(std::span<const signal::Measurement> measurements,
                              const world::Vec2& fused,
                              const world::Vec2& truth) {
  FusionReport report;
  report.fused_position = fused;
  for (const auto& m : measurements) {
    report.per_sensor_errors.push_back(world::Distance(m.position, truth));
  }
  report.fused_error = world::Distance(fused, truth);
  return report;
}

}  // namespace isacdt::fusion
