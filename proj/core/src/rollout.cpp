#include "flownav/rollout.hpp"

#include <cmath>

namespace flownav {

std::string to_string(RolloutMode mode) {
  switch (mode) {
    case RolloutMode::kStabilized: return "stabilized";
    case RolloutMode::kRawInverse: return "raw_inverse";
    case RolloutMode::kUnitSpeed: return "unit_speed";
  }
  return "stabilized";
}

RolloutMode parse_rollout_mode(const std::string& text) {
  if (text == "stabilized") return RolloutMode::kStabilized;
  if (text == "raw_inverse") return RolloutMode::kRawInverse;
  if (text == "unit_speed") return RolloutMode::kUnitSpeed;
  throw Error(ErrorKind::kConfig, "unknown rollout mode '" + text + "'");
}

void RolloutConfig::validate() const {
  if (steps < 1) throw Error(ErrorKind::kConfig, "rollout.steps must be >= 1");
  if (grid_size < 2) throw Error(ErrorKind::kConfig, "rollout.grid_size must be >= 2");
  if (!(alpha > 0.0)) throw Error(ErrorKind::kConfig, "rollout.alpha must be > 0");
  if (!(beta > 0.0)) throw Error(ErrorKind::kConfig, "rollout.beta must be > 0");
  if (!(epsilon >= 0.0)) throw Error(ErrorKind::kConfig, "rollout.epsilon must be >= 0");
}

void validate_field(const FlowFieldGrid& field) {
  if (field.empty()) throw Error(ErrorKind::kInput, "flow field is empty");
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (!std::isfinite(field[i].x) || !std::isfinite(field[i].y)) {
      const Pixel p = field.pixel(i);
      throw Error(ErrorKind::kInput, "flow field has a non-finite vector at (" + std::to_string(p.x) +
                                         ", " + std::to_string(p.y) + ")");
    }
  }
}

AnnotatedFieldProvider::AnnotatedFieldProvider(FlowFieldGrid field) : field_(std::move(field)) {
  validate_field(field_);
}

FlowFieldGrid AnnotatedFieldProvider::query(int grid_size) const {
  return resample_field(field_, grid_size);
}

FlowFieldGrid resample_field(const FlowFieldGrid& field, int grid_size) {
  if (grid_size < 1) throw Error(ErrorKind::kInput, "query grid size must be >= 1");
  FlowFieldGrid out(grid_size, grid_size);
  for (int i = 0; i < grid_size; ++i) {
    for (int j = 0; j < grid_size; ++j) {
      out.at(j, i) = bilinear_sample(field, pixel_center({j, i}, grid_size, grid_size));
    }
  }
  return out;
}

FlowFieldGrid query_grid(const FieldProvider& provider, int grid_size) {
  FlowFieldGrid grid = provider.query(grid_size);
  if (grid.width() != grid_size || grid.height() != grid_size) {
    throw Error(ErrorKind::kInput, "field provider returned a grid of the wrong size");
  }
  return grid;
}

double stabilizer_denominator(double t, double alpha, double beta) {
  return (1.0 - t) + beta * std::pow(t, alpha);
}

Trajectory euler_rollout(const FlowFieldGrid& grid, const NormPoint& x0, const RolloutConfig& cfg) {
  cfg.validate();
  validate_field(grid);
  const int T = cfg.steps;
  const double dt = 1.0 / T;

  Trajectory traj;
  traj.points.reserve(static_cast<std::size_t>(T) + 1);
  traj.points.push_back(x0);
  NormPoint x = x0;
  for (int k = 0; k < T; ++k) {
    const double t = static_cast<double>(k) / T;
    const Vec2 v = bilinear_sample(grid, x);
    Vec2 scaled;
    switch (cfg.mode) {
      case RolloutMode::kStabilized:
        scaled = v / stabilizer_denominator(t, cfg.alpha, cfg.beta);
        break;
      case RolloutMode::kRawInverse:
        // k <= T - 1 keeps t <= (T - 1) / T, so 1 - t never reaches zero.
        scaled = v / (1.0 - std::min(t, static_cast<double>(T - 1) / T));
        break;
      case RolloutMode::kUnitSpeed:
        scaled = v / (v.norm() + cfg.epsilon);
        break;
    }
    x = NormPoint(x.vec() + scaled * dt);
    traj.points.push_back(x);
  }
  return traj;
}

}  // namespace flownav
