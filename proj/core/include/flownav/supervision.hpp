#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "flownav/grid.hpp"

namespace flownav {

struct SampleBatch {
  std::vector<NormPoint> points;
  int grid = 0;
  int per_bin = 0;
};

// Splits [0,1]^2 into grid x grid cells, draws ceil(n_s / grid^2) uniform
// points in each (cell-major, row by row), and keeps the first n_s.
SampleBatch stratified_sample(int grid, int n_s, std::uint64_t seed);

// Bilinear samples of `field` at the batch points.
std::vector<Vec2> sample_targets(const FlowFieldGrid& field, std::span<const NormPoint> points);

double direction_loss(std::span<const Vec2> pred, std::span<const Vec2> target, double eps = 1e-8);
double magnitude_loss(std::span<const Vec2> pred, std::span<const Vec2> target);

inline constexpr double kDefaultMagnitudeWeight = 0.5;

// direction_loss + lambda * magnitude_loss; throws kConfig for lambda < 0.
double total_loss(std::span<const Vec2> pred, std::span<const Vec2> target,
                  double lambda = kDefaultMagnitudeWeight, double eps = 1e-8);

}  // namespace flownav
