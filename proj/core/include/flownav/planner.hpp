#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "flownav/field_gen.hpp"
#include "flownav/grid.hpp"
#include "flownav/trajectory.hpp"

namespace flownav {

// Geometric half of the detector + planner baseline: boxes are rasterized on a
// G x G occupancy grid, inflated by a fixed pixel radius, and searched with
// 8-connected A*.

struct PlannerConfig {
  int grid_size = 128;          // G
  double inflate_radius = 10.0; // px in the source image
  double side_offset = 0.02;    // delta, normalized
  int waypoints = 100;
  bool allow_corner_cutting = true;

  void validate() const;
};

// Normalized box [xmin, ymin, xmax, ymax].
struct NormBox {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;

  NormPoint center() const { return {0.5 * (xmin + xmax), 0.5 * (ymin + ymax)}; }
};

NormBox normalized_box(const PixelBox& box, int width, int height);

// Point offset by delta from the requested side of the box, clamped to
// [0,1]^2; the center itself for Side::kNone. Throws kInput for a malformed box.
NormPoint side_goal(const NormBox& box, const NormPoint& center, Side side, double delta);

// Inflation margin in grid cells: ceil(radius / image_width * G).
int inflation_cells(double radius_px, int image_width, int grid_size);

// Each box is rasterized to the cells it overlaps, grown by inflation_cells per
// side (clipped to the grid). Occupied cells are 1.
BinaryMask inflate_and_rasterize(std::span<const NormBox> boxes, const PlannerConfig& cfg, int image_width);

struct PlanResult {
  bool found = false;
  std::vector<Pixel> cells;  // start cell to goal cell
  double cost = 0.0;         // unit / sqrt(2) step costs
  Trajectory trajectory;     // cell centers, resampled to cfg.waypoints
};

// Nearest free cell by Euclidean distance, ties in row-major order. Throws
// kUnreachable on a fully occupied grid.
Pixel snap_to_free(const BinaryMask& occupancy, const Pixel& cell);

// 8-connected A* with the octile heuristic. Start and goal are snapped to free
// cells first. A missing path is reported through `found`, not an exception.
PlanResult astar(const BinaryMask& occupancy, const NormPoint& start, const NormPoint& goal,
                 const PlannerConfig& cfg);

// Full baseline episode on ground-truth object boxes. Boxes of targetable
// labels are the obstacles; the target box itself is left out when no side is
// requested.
PlanResult plan_episode(const SemanticMap& map, const LabelMapping& mapping, const GoalSpec& goal,
                        const NormPoint& start, const PlannerConfig& cfg);

}  // namespace flownav
