#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "flownav/grid.hpp"
#include "flownav/trajectory.hpp"

namespace flownav {

inline constexpr std::size_t kMetricWaypoints = 100;
inline constexpr double kMetricEpsilon = 1e-8;

// The per-trajectory metrics below act on the points they are given; call
// evaluate_trajectory to apply the fixed-count resampling first.

// Distance between the last predicted point and the annotated endpoint.
double final_goal_error(const Trajectory& pred, const Trajectory& annotated);

// 1 if any point indexes (clip-floor) an obstacle cell, else 0.
int collision(const Trajectory& pred, const BinaryMask& obstacles);

// Mean |wrap(psi_{j+1} - psi_j)| over consecutive non-degenerate segments
// (length > eps). Fewer than two valid segments gives 0.
double curvature(const Trajectory& pred, double eps = kMetricEpsilon);

// L(pred) / L(annotated); throws kInput for a zero-length annotation.
double path_length_ratio(const Trajectory& pred, const Trajectory& annotated);

struct TrajectoryMetrics {
  double fge = 0.0;
  int cr = 0;
  double curv = 0.0;
  double plr = 0.0;
};

// Resamples both trajectories to `waypoints` points, then computes all four.
TrajectoryMetrics evaluate_trajectory(const Trajectory& pred, const Trajectory& annotated,
                                      const BinaryMask& obstacles,
                                      std::size_t waypoints = kMetricWaypoints);

struct FieldMetrics {
  double ae = 0.0;  // degrees
  double me = 0.0;
};

// Evaluated on the annotated lattice; resolutions must match exactly.
FieldMetrics field_metrics(const FlowFieldGrid& pred, const FlowFieldGrid& annotated,
                           double eps = kMetricEpsilon);

struct MetricsSummary {
  std::size_t episodes = 0;
  double fge = 0.0;
  double cr = 0.0;  // fraction of episodes with a collision
  double curv = 0.0;
  double plr = 0.0;
};

MetricsSummary aggregate(std::span<const TrajectoryMetrics> episodes);

double median(std::vector<double> values);

}  // namespace flownav
