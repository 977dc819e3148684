#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "flownav/grid.hpp"

namespace flownav {

// Ordered normalized waypoints. Rollouts attach implicit time stamps k / T.
struct Trajectory {
  std::vector<NormPoint> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  const NormPoint& front() const { return points.front(); }
  const NormPoint& back() const { return points.back(); }

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

double polyline_length(std::span<const Vec2> poly);
double path_length(const Trajectory& traj);

// k points at uniform arc length along the piecewise-linear polyline. The
// endpoints are reproduced exactly; a zero-length input yields k copies of
// its first point. Throws kInput for an empty polyline or k < 2.
std::vector<Vec2> resample_polyline(std::span<const Vec2> poly, std::size_t k);

Trajectory resample_arclength(const Trajectory& traj, std::size_t k);

// Resamples a pixel polyline in pixel space, then maps every point to the
// normalized coordinate of that position ((x + 0.5) / W, (y + 0.5) / H).
Trajectory trajectory_from_pixels(std::span<const Pixel> pixels, int width, int height, std::size_t k);

std::vector<Vec2> to_vecs(const Trajectory& traj);

}  // namespace flownav
