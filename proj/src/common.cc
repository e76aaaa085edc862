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

#include "isacdt/common.h"

namespace isacdt {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kConfig: return "config-error";
    case ErrorCode::kIo: return "io-error";
    case ErrorCode::kNotFound: return "not-found";
    case ErrorCode::kDegenerateGeometry: return "degenerate-geometry";
    case ErrorCode::kUndefinedMetric: return "undefined-metric";
    case ErrorCode::kStaleEvent: return "stale-event";
    case ErrorCode::kInvalidPartition: return "invalid-partition";
    case ErrorCode::kInsufficientEvidence: return "insufficient-evidence";
    case ErrorCode::kInsufficientPilots: return "insufficient-pilots";
    case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

const char* VersionString() { return "0.1.0"; }

}  // namespace isacdt
