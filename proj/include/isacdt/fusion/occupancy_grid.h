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

#ifndef ISACDT_FUSION_OCCUPANCY_GRID_H_
#define ISACDT_FUSION_OCCUPANCY_GRID_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "isacdt/world/geometry.h"

namespace isacdt::fusion {

inline constexpr double kLogOddsLimit = 10.0;

struct CellIndex {
  int x = 0;
  int y = 0;
  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

// Log-odds occupancy map. Cell (x, y) covers
// [origin.x + x*cell_size, origin.x + (x+1)*cell_size) and likewise in y.
class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(const world::Vec2& origin, double cell_size, int width,
                int height);

  // Smallest grid with the given cell size covering `extent`.
  static OccupancyGrid Covering(const world::Rect& extent, double cell_size);

  const world::Vec2& origin() const { return origin_; }
  double cell_size() const { return cell_size_; }
  int width() const { return width_; }
  int height() const { return height_; }
  world::Rect Extent() const;

  bool InBounds(const CellIndex& c) const {
    return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
  }
  CellIndex CellOf(const world::Vec2& p) const;
  world::Vec2 CellCenter(const CellIndex& c) const;

  double LogOdds(const CellIndex& c) const { return cells_[Flat(c)]; }
  // Number of updates the cell has received; zero means unobserved.
  std::uint32_t Observations(const CellIndex& c) const {
    return observations_[Flat(c)];
  }
  // Adds `delta` and clamps to [-kLogOddsLimit, kLogOddsLimit].
  void Update(const CellIndex& c, double delta);
  void Set(const CellIndex& c, double log_odds, std::uint32_t observations);

  bool SameGeometry(const OccupancyGrid& other) const;

  std::span<const double> cells() const { return cells_; }
  std::span<const std::uint32_t> observations() const { return observations_; }

  friend bool operator==(const OccupancyGrid&, const OccupancyGrid&) = default;

 private:
  std::size_t Flat(const CellIndex& c) const {
    return static_cast<std::size_t>(c.y) * width_ + c.x;
  }

  world::Vec2 origin_;
  double cell_size_ = 0.0;
  int width_ = 0;
  int height_ = 0;
  std::vector<double> cells_;
  std::vector<std::uint32_t> observations_;
};

struct InverseSensorModel {
  double l_occ = 0.85;
  double l_free = 0.4;
};

struct ScanRay {
  double bearing = 0.0;         // world frame, radians
  std::optional<double> hit;    // measured range, none when nothing returned
};

struct Pose2 {
  world::Vec2 position;
  double heading = 0.0;
};

// Cells crossed by the segment from `from` to `to`, in traversal order,
// starting with the cell containing `from`. Cells outside the grid are
// skipped.
std::vector<CellIndex> TraceCells(const OccupancyGrid& grid,
                                  const world::Vec2& from,
                                  const world::Vec2& to);

// Inverse sensor model update. Ray bearings are relative to the pose heading.
// Cells strictly between the sensor cell and the hit cell gain -l_free, the
// hit cell gains +l_occ; rays without a hit clear cells out to max_range.
// The cell holding the sensor itself is not updated.
OccupancyGrid GridUpdateFromScan(const OccupancyGrid& grid, const Pose2& pose,
                                 std::span<const ScanRay> scan,
                                 double max_range,
                                 const InverseSensorModel& model = {});

// Cell-wise log-odds sum with a single clamp after summation.
OccupancyGrid FuseGrids(std::span<const OccupancyGrid> grids);

// Ground truth for a cell: occupied when any of a 4x4 lattice of interior
// sample points lies inside an obstacle or outside the plan bounds.
bool TruthOccupied(const OccupancyGrid& grid, const CellIndex& c,
                   const world::FloorPlan& plan);

// Fraction of observed cells whose classification (log-odds > cutoff means
// occupied) matches the plan. Throws kUndefinedMetric when no cell has been
// observed.
double MapAccuracy(const OccupancyGrid& grid, const world::FloorPlan& plan,
                   double occupancy_cutoff = 0.0);

// Binary PGM (P5): one byte per cell, 255 = occupancy probability 1, first
// image row is the highest y.
std::string EncodePgm(const OccupancyGrid& grid);

// CSV with header "x,y,log_odds" (cell centres), row-major from the lowest y.
std::string EncodeGridCsv(const OccupancyGrid& grid);

}  // namespace isacdt::fusion

#endif  // ISACDT_FUSION_OCCUPANCY_GRID_H_
