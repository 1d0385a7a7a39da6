#pragma once

// Occupancy grid maps and the geometric queries built on them.
//
// Cell (i, j) covers the axis-aligned square
//   [origin.x + i*w, origin.x + (i+1)*w] x [origin.y + j*w, origin.y + (j+1)*w]
// and its center is origin + ((i+0.5)w, (j+0.5)w). Column i grows with x,
// row j grows with y; image row 0 (top of the graymap) is row j = height-1.

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "firesquad/geometry.hpp"

namespace firesquad {

struct Cell {
  int i = 0;
  int j = 0;
  friend constexpr bool operator==(Cell, Cell) = default;
};

// Keys of the map metadata file (YAML mapping):
//   image: <graymap path, relative to the metadata file>
//   resolution: <meters per cell>
//   origin_x: <meters>
//   origin_y: <meters>
//   occupied_threshold: <normalized darkness in [0, 1]>
struct MapMetadata {
  std::string image;
  double resolution = 0.05;
  Vec2 origin{};
  double occupied_threshold = 0.5;
};

MapMetadata parse_map_metadata(const std::string &yaml_text);

class GridMap {
 public:
  GridMap(int width, int height, double resolution, Vec2 origin, std::vector<std::uint8_t> occupied);

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  Vec2 origin() const { return origin_; }
  std::size_t cell_count() const { return cells_.size(); }
  std::size_t occupied_count() const { return occupied_count_; }

  bool in_bounds(Cell c) const { return c.i >= 0 && c.j >= 0 && c.i < width_ && c.j < height_; }
  bool contains(Vec2 p) const;
  std::size_t index(Cell c) const { return static_cast<std::size_t>(c.j) * width_ + c.i; }
  Cell cell_of_index(std::size_t idx) const {
    return {static_cast<int>(idx % width_), static_cast<int>(idx / width_)};
  }

  // Out-of-bounds points are reported as nullopt, never wrapped or clamped.
  std::optional<Cell> cell_at(Vec2 p) const;
  Vec2 cell_center(Cell c) const;
  // Continuous grid coordinates: cell (i, j) spans [i, i+1] x [j, j+1].
  Vec2 to_grid(Vec2 p) const { return (p - origin_) / resolution_; }

  bool occupied(Cell c) const { return cells_[index(c)] != 0; }
  bool occupied(std::size_t idx) const { return cells_[idx] != 0; }
  // Points outside the map count as blocked.
  bool blocked_at(Vec2 p) const;
  std::span<const std::uint8_t> cells() const { return cells_; }

 private:
  int width_;
  int height_;
  double resolution_;
  Vec2 origin_;
  std::vector<std::uint8_t> cells_;
  std::size_t occupied_count_ = 0;
};

// Decodes a binary (P5) or ASCII (P2) portable graymap. Normalized darkness
// is (maxval - value) / maxval; cells at or above the threshold are occupied.
GridMap load_map(std::span<const std::uint8_t> pgm, const MapMetadata &meta);
// Reads the metadata file and the graymap it names.
GridMap load_map_file(const std::filesystem::path &metadata_path);
// Binary graymap with occupied = 0 (black) and free = 255 (white).
std::vector<std::uint8_t> encode_pgm(const GridMap &map);

enum class DistanceMetric { euclidean, chamfer34 };

// Sentinel for "no occupied cell anywhere".
inline constexpr double kNoObstacle = std::numeric_limits<double>::infinity();

class DistanceField {
 public:
  DistanceField(int width, int height, double resolution, Vec2 origin, DistanceMetric metric,
                std::vector<double> meters, std::vector<std::int32_t> nearest);

  DistanceMetric metric() const { return metric_; }
  int width() const { return width_; }
  int height() const { return height_; }

  double at(Cell c) const { return meters_[static_cast<std::size_t>(c.j) * width_ + c.i]; }
  // Value of the cell containing p; kNoObstacle outside the map.
  double at(Vec2 p) const;
  // Index of the nearest occupied cell (ties resolved by the transform), or -1.
  std::int32_t nearest_index(Cell c) const { return nearest_[static_cast<std::size_t>(c.j) * width_ + c.i]; }
  // Central-difference gradient in meters per meter; one-sided at the border.
  Vec2 gradient(Cell c) const;
  // Unit direction towards the nearest obstacle (negative gradient), or zero
  // where the gradient vanishes or no obstacle exists.
  Vec2 obstacle_direction(Cell c) const;
  std::span<const double> values() const { return meters_; }

 private:
  int width_;
  int height_;
  double resolution_;
  Vec2 origin_;
  DistanceMetric metric_;
  std::vector<double> meters_;
  std::vector<std::int32_t> nearest_;
};

// Distance from every cell center to the nearest occupied cell center, in meters.
// Euclidean mode is exact (separable lower-envelope transform); chamfer-3-4 is the
// classic two-pass approximation.
DistanceField distance_transform(const GridMap &map, DistanceMetric metric = DistanceMetric::euclidean);

// True when the closed segment a-b touches the closed square of cell c (grid units, eps slack).
bool segment_touches_cell(Vec2 a_grid, Vec2 b_grid, Cell c, double eps = 1e-9);

// Supercover visibility: true iff no occupied cell is touched by segment a-b.
// An endpoint inside an occupied cell or outside the map yields false.
bool line_of_sight(const GridMap &map, Vec2 a, Vec2 b);

// Every cell touched by the segment, in traversal order (for diagnostics and tests).
std::vector<Cell> supercover_cells(const GridMap &map, Vec2 a, Vec2 b);

// Center of the closest occupied cell within max_range of p (exact search), if any.
std::optional<Vec2> nearest_occupied_center(const GridMap &map, Vec2 p, double max_range);

}  // namespace firesquad
