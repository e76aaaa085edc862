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

#ifndef ISACDT_FUSION_LOCALIZATION_H_
#define ISACDT_FUSION_LOCALIZATION_H_

#include <span>
#include <vector>

#include "isacdt/signal/ofdm.h"
#include "isacdt/world/geometry.h"

namespace isacdt::fusion {

struct FusionReport {
  world::Vec2 fused_position;
  std::vector<double> per_sensor_errors;
  double fused_error = 0.0;
};

// Unweighted component-wise mean of the measured positions.
world::Vec2 FuseAverage(std::span<const signal::Measurement> measurements);

// Inverse-variance mean with scalar weights w_i = 1 / trace(cov_i),
// normalized to sum to one. Identical to FuseAverage when all traces match.
world::Vec2 FuseWeighted(std::span<const signal::Measurement> measurements);

double LocalizationRmse(std::span<const world::Vec2> estimates,
                        const world::Vec2& truth);

FusionReport MakeFusionReport(std::span<const signal::Measurement> measurements,
                              const world::Vec2& fused,
                              const world::Vec2& truth);

}  // namespace isacdt::fusion

#endif  // ISACDT_FUSION_LOCALIZATION_H_
