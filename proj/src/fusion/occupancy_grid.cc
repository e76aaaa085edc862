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

#include "isacdt/fusion/occupancy_grid.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "isacdt/common.h"

namespace isacdt::fusion {

OccupancyGrid::OccupancyGrid(const world::Vec2& origin, double cell_size,
                             int width, int height)
    : origin_(origin), cell_size_(cell_size), width_(width), height_(height) {
  Require(cell_size > 0.0, "occupancy grid: cell_size must be positive");
  Require(width > 0 && height > 0, "occupancy grid: empty dimensions");
  cells_.assign(static_cast<std::size_t>(width) * height, 0.0);
  observations_.assign(cells_.size(), 0);
}

OccupancyGrid OccupancyGrid::Covering(const world::Rect& extent,
                                      double cell_size) {
  const int w = static_cast<int>(std::ceil(extent.Width() / cell_size - 1e-9));
  const int h = static_cast<int>(std::ceil(extent.Height() / cell_size - 1e-9));
  return OccupancyGrid(extent.min, cell_size, std::max(w, 1), std::max(h, 1));
}

world::Rect OccupancyGrid::Extent() const {
  return {origin_,
          {origin_.x + width_ * cell_size_, origin_.y + height_ * cell_size_}};
}

CellIndex OccupancyGrid::CellOf(const world::Vec2& p) const {
  return {static_cast<int>(std::floor((p.x - origin_.x) / cell_size_)),
          static_cast<int>(std::floor((p.y - origin_.y) / cell_size_))};
}

world::Vec2 OccupancyGrid::CellCenter(const CellIndex& c) const {
  return {origin_.x + (c.x + 0.5) * cell_size_,
          origin_.y + (c.y + 0.5) * cell_size_};
}

void OccupancyGrid::Update(const CellIndex& c, double delta) {
  double& cell = cells_[Flat(c)];
  cell = std::clamp(cell + delta, -kLogOddsLimit, kLogOddsLimit);
  ++observations_[Flat(c)];
}

void OccupancyGrid::Set(const CellIndex& c, double log_odds,
                        std::uint32_t observations) {
  cells_[Flat(c)] = std::clamp(log_odds, -kLogOddsLimit, kLogOddsLimit);
  observations_[Flat(c)] = observations;
}

bool OccupancyGrid::SameGeometry(const OccupancyGrid& other) const {
  return origin_ == other.origin_ && cell_size_ == other.cell_size_ &&
         width_ == other.width_ && height_ == other.height_;
}

std::vector<CellIndex> TraceCells(const OccupancyGrid& grid,
                                  const world::Vec2& from,
                                  const world::Vec2& to) {
  std::vector<CellIndex> out;
  CellIndex cell = grid.CellOf(from);
  const CellIndex end = grid.CellOf(to);
  if (grid.InBounds(cell)) out.push_back(cell);

  const world::Vec2 delta = to - from;
  const double length = delta.Norm();
  if (length == 0.0) return out;
  const world::Vec2 dir = (1.0 / length) * delta;
  const double cs = grid.cell_size();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  auto setup = [&](double d, double start, double org, int index, int& step,
                   double& t_max, double& t_delta) {
    if (d > 0.0) {
      step = 1;
      t_max = (org + (index + 1) * cs - start) / d;
      t_delta = cs / d;
    } else if (d < 0.0) {
      step = -1;
      t_max = (org + index * cs - start) / d;
      t_delta = -cs / d;
    } else {
      step = 0;
      t_max = kInf;
      t_delta = kInf;
    }
  };
  int step_x, step_y;
  double t_max_x, t_max_y, t_delta_x, t_delta_y;
  setup(dir.x, from.x, grid.origin().x, cell.x, step_x, t_max_x, t_delta_x);
  setup(dir.y, from.y, grid.origin().y, cell.y, step_y, t_max_y, t_delta_y);

  int guard = std::abs(end.x - cell.x) + std::abs(end.y - cell.y) + 2;
  while (!(cell == end) && guard-- > 0) {
    const double t_next = std::min(t_max_x, t_max_y);
    if (t_next > length) break;
    if (t_max_x < t_max_y) {
      cell.x += step_x;
      t_max_x += t_delta_x;
    } else if (t_max_y < t_max_x) {
      cell.y += step_y;
      t_max_y += t_delta_y;
    } else {
      // Exact corner crossing: move diagonally.
      cell.x += step_x;
      cell.y += step_y;
      t_max_x += t_delta_x;
      t_max_y += t_delta_y;
    }
    if (grid.InBounds(cell)) out.push_back(cell);
  }
  return out;
}

OccupancyGrid GridUpdateFromScan(const OccupancyGrid& grid, const Pose2& pose,
                                 std::span<const ScanRay> scan,
                                 double max_range,
                                 const InverseSensorModel& model) {
  const CellIndex sensor_cell = grid.CellOf(pose.position);
  if (!grid.InBounds(sensor_cell)) {
    Fail(ErrorCode::kInvalidArgument,
         "grid_update_from_scan: sensor pose outside grid extent");
  }
  OccupancyGrid out = grid;
  for (const ScanRay& ray : scan) {
    const double bearing = pose.heading + ray.bearing;
    const double reach = ray.hit ? *ray.hit : max_range;
    const world::Vec2 end =
        pose.position + reach * world::UnitVector(bearing);
    const CellIndex hit_cell = grid.CellOf(end);
    for (const CellIndex& c : TraceCells(grid, pose.position, end)) {
      if (c == sensor_cell) continue;
      if (ray.hit && c == hit_cell) continue;
      out.Update(c, -model.l_free);
    }
    if (ray.hit && grid.InBounds(hit_cell) && !(hit_cell == sensor_cell)) {
      out.Update(hit_cell, model.l_occ);
    }
  }
  return out;
}

OccupancyGrid FuseGrids(std::span<const OccupancyGrid> grids) {
  Require(!grids.empty(), "fuse_grids: no grids");
  const OccupancyGrid& first = grids.front();
  for (const OccupancyGrid& g : grids) {
    Require(g.SameGeometry(first), "fuse_grids: mismatched grid geometry");
  }
  OccupancyGrid out(first.origin(), first.cell_size(), first.width(),
                    first.height());
  for (int y = 0; y < first.height(); ++y) {
    for (int x = 0; x < first.width(); ++x) {
      double sum = 0.0;
      std::uint32_t count = 0;
      for (const OccupancyGrid& g : grids) {
        sum += g.LogOdds({x, y});
        count += g.Observations({x, y});
      }
      out.Set({x, y}, sum, count);
    }
  }
  return out;
}

bool TruthOccupied(const OccupancyGrid& grid, const CellIndex& c,
                   const world::FloorPlan& plan) {
  const double cs = grid.cell_size();
  const world::Vec2 corner{grid.origin().x + c.x * cs,
                           grid.origin().y + c.y * cs};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const world::Vec2 p{corner.x + (i + 0.5) * cs / 4.0,
                          corner.y + (j + 0.5) * cs / 4.0};
      if (!plan.bounds.Contains(p)) return true;
      for (const world::Polygon& poly : plan.obstacles) {
        if (world::PointInPolygon(poly, p)) return true;
      }
    }
  }
  return false;
}

double MapAccuracy(const OccupancyGrid& grid, const world::FloorPlan& plan,
                   double occupancy_cutoff) {
  Require(std::isfinite(occupancy_cutoff), "map_accuracy: cutoff not finite");
  std::size_t observed = 0;
  std::size_t correct = 0;
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      if (grid.Observations({x, y}) == 0) continue;
      ++observed;
      const bool occupied = grid.LogOdds({x, y}) > occupancy_cutoff;
      if (occupied == TruthOccupied(grid, {x, y}, plan)) ++correct;
    }
  }
  if (observed == 0) {
    Fail(ErrorCode::kUndefinedMetric, "map_accuracy: no observed cells");
  }
  return static_cast<double>(correct) / static_cast<double>(observed);
}

std::string EncodePgm(const OccupancyGrid& grid) {
  std::string out = "P5\n" + std::to_string(grid.width()) + " " +
                    std::to_string(grid.height()) + "\n255\n";
  out.reserve(out.size() + grid.cells().size());
  for (int y = grid.height() - 1; y >= 0; --y) {
    for (int x = 0; x < grid.width(); ++x) {
      const double p = 1.0 / (1.0 + std::exp(-grid.LogOdds({x, y})));
      out.push_back(static_cast<char>(
          static_cast<unsigned char>(std::lround(255.0 * p))));
    }
  }
  return out;
}

std::string EncodeGridCsv(const OccupancyGrid& grid) {
  std::ostringstream os;
  os.precision(17);
  os << "x,y,log_odds\n";
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      const world::Vec2 c = grid.CellCenter({x, y});
      os << c.x << ',' << c.y << ',' << grid.LogOdds({x, y}) << '\n';
    }
  }
  return os.str();
}

}  // namespace isacdt::fusion
