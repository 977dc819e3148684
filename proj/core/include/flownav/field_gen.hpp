#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flownav/distance_transform.hpp"
#include "flownav/geodesic.hpp"
#include "flownav/grid.hpp"
#include "flownav/trajectory.hpp"

namespace flownav {

// Procedural annotation of a (semantic map, target) pair into a goal-directed
// flow field and a reference trajectory.
//
// Stages:
//   1. free mask and goal source band around the target instance
//   2. distance-to-obstacle, safety cost map, cost-weighted multi-source
//      Dijkstra with its predecessor tree and pixel distance-to-go
//   3. distance-to-free inside obstacles
//   4. piecewise potential: w_g * D_w on free pixels, w_obs * D_obs + b_obs
//      inside obstacles, b_obs = max finite D_w
//   5. Gaussian-smoothed potential, Sobel gradient, unit descent direction;
//      free pixels scaled by the pixel distance-to-go, obstacles unit speed
//   6. start sampling, backtracking along the predecessor tree, arc-length
//      resampling

struct AnnotationConfig {
  double rho_safe = 50.0;       // px
  double lambda_safe = 1.0;
  double w_g = 1.0;
  double w_obs = 10.0;
  double gaussian_sigma = 1.5;  // px; kernel truncated at 3 sigma
  int goal_band = 2;            // px, Chebyshev
  double start_min_goal_dist = 20.0;  // px along the predecessor tree
  double start_min_obs_dist = 3.0;    // px, Euclidean clearance
  int traj_waypoints = 100;
  double epsilon = 1e-8;
  bool allow_corner_cutting = true;

  // Throws kConfig on negative values, traj_waypoints < 2 or w_obs <= w_g.
  void validate() const;
};

enum class Side { kNone, kLeft, kRight, kTop, kBottom };

std::string to_string(Side side);
// Accepts "none", "left", "right", "top", "bottom"; throws kInput otherwise.
Side parse_side(const std::string& text);

struct GoalSpec {
  Label target_label = 0;
  // Index into SemanticMap::instances; required only when several instances
  // share the target label.
  std::optional<std::size_t> instance_index;
  Side side = Side::kNone;

  friend bool operator==(const GoalSpec&, const GoalSpec&) = default;
};

// Resolves the instance a goal spec refers to. Throws kTargetNotFound.
std::size_t resolve_instance(const SemanticMap& map, const GoalSpec& spec);

// Free pixels within `goal_band` (Chebyshev) of the target instance's pixels,
// restricted to the side's half-plane through the bbox center. Falls back to
// the single free pixel nearest the instance center when the band is empty.
// Throws kTargetNotFound / kUnreachable. Result is in row-major order.
std::vector<Pixel> compute_goal(const SemanticMap& map, const BinaryMask& free, const GoalSpec& spec,
                                const AnnotationConfig& cfg);

// Throws kUnreachable when no free pixel has a finite distance-to-go.
// Unreachable free pixels take b_obs.
ScalarField potential(const ScalarField& d_weighted, const ScalarField& d_obs, const BinaryMask& free,
                      const AnnotationConfig& cfg);

// Separable Gaussian with reflect padding (d c b a | a b c d | d c b a).
ScalarField gaussian_smooth(const ScalarField& field, double sigma);

struct Gradient {
  ScalarField dx;
  ScalarField dy;
};

// 3x3 Sobel derivatives scaled by 1/8, reflect padding.
Gradient sobel(const ScalarField& field);

// Stage 5. Free pixels: u * D_pix / (W, H) with u = -grad / (|grad| + eps);
// free pixels without a finite D_pix get zero velocity. Obstacle pixels get a
// unit vector along -grad, or toward the nearest free pixel where the smoothed
// gradient vanishes.
FlowFieldGrid flow_field(const ScalarField& phi, const BinaryMask& free, const ScalarField& d_pix,
                         const AnnotationConfig& cfg);

struct StartSample {
  Pixel pixel;
  // Constraints dropped to find a candidate: 0 none, 1 goal distance,
  // 2 goal distance and obstacle clearance.
  int relaxed = 0;
};

// Uniform draw among free pixels with finite D_pix, D_pix >= start_min_goal_dist
// and clearance >= start_min_obs_dist. Throws kUnreachable if nothing remains
// after relaxing both distance constraints.
StartSample sample_start(const BinaryMask& free, const ScalarField& d_pix, const ScalarField& d_free,
                         const AnnotationConfig& cfg, std::uint64_t seed);

struct Annotation {
  FlowFieldGrid field;
  Trajectory trajectory;
  std::vector<Pixel> goal_pixels;
  Pixel start;
  int start_relaxed = 0;
  std::size_t dropped_goals = 0;
};

// Intermediate rasters, for inspection and tests.
struct AnnotationTrace {
  BinaryMask free;
  ScalarField d_free;
  ScalarField cost;
  GeodesicResult geodesic;
  ScalarField d_obs;
  ScalarField phi;
  std::vector<Pixel> raw_path;
};

// Runs every stage in order. Stage failures are rethrown with the stage named
// in the message and the original error kind. A fixed start replaces start
// sampling; it raises kUnreachable when it cannot reach the goal.
Annotation annotate(const SemanticMap& map, const LabelMapping& mapping, const GoalSpec& spec,
                    const AnnotationConfig& cfg, std::uint64_t seed,
                    const std::optional<Pixel>& fixed_start = std::nullopt,
                    AnnotationTrace* trace = nullptr);

}  // namespace flownav
