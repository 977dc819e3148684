#pragma once

#include <string>

#include "flownav/grid.hpp"
#include "flownav/trajectory.hpp"

namespace flownav {

enum class RolloutMode {
  kStabilized,  // v / ((1 - t) + beta * t^alpha)
  kRawInverse,  // v / (1 - t)
  kUnitSpeed,   // v / (|v| + eps)
};

std::string to_string(RolloutMode mode);
RolloutMode parse_rollout_mode(const std::string& text);

struct RolloutConfig {
  int steps = 100;      // T; dt = 1 / T
  int grid_size = 100;  // query grid resolution
  double alpha = 10.0;
  double beta = 0.5;
  double epsilon = 1e-8;
  RolloutMode mode = RolloutMode::kStabilized;

  void validate() const;
};

// Source of dense flow grids for one (scene, instruction) context. Identical
// queries must return identical grids.
class FieldProvider {
 public:
  virtual ~FieldProvider() = default;
  virtual FlowFieldGrid query(int grid_size) const = 0;
};

// Serves an annotated field resampled onto the query lattice.
class AnnotatedFieldProvider final : public FieldProvider {
 public:
  // Throws kInput on an empty field or non-finite components.
  explicit AnnotatedFieldProvider(FlowFieldGrid field);

  FlowFieldGrid query(int grid_size) const override;
  const FlowFieldGrid& field() const { return field_; }

 private:
  FlowFieldGrid field_;
};

// Cell (i, j) holds the provider field at ((j + 0.5) / g, (i + 0.5) / g).
FlowFieldGrid resample_field(const FlowFieldGrid& field, int grid_size);
FlowFieldGrid query_grid(const FieldProvider& provider, int grid_size);

// Throws kInput if any component is NaN or infinite.
void validate_field(const FlowFieldGrid& field);

// Time-rescaling denominator (1 - t) + beta * t^alpha.
double stabilizer_denominator(double t, double alpha, double beta);

// Forward Euler with dt = 1 / T over t_k = k / T, k = 0..T-1, clamping the
// state to [0,1]^2 after every step. Returns T + 1 points including x0.
Trajectory euler_rollout(const FlowFieldGrid& grid, const NormPoint& x0, const RolloutConfig& cfg);

}  // namespace flownav
