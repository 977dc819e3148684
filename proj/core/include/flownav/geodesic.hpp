#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "flownav/grid.hpp"

namespace flownav {

// Per-pixel row-major index of the next pixel toward the goal on the
// lowest-cost route; -1 on goal and unreachable pixels.
class PredecessorMap {
 public:
  static constexpr std::int32_t kNone = -1;

  PredecessorMap() = default;
  PredecessorMap(int width, int height) : next_(width, height, kNone) {}

  int width() const { return next_.width(); }
  int height() const { return next_.height(); }
  bool has_next(const Pixel& p) const { return next_[p] != kNone; }
  Pixel next(const Pixel& p) const { return next_.pixel(static_cast<std::size_t>(next_[p])); }
  std::int32_t raw(std::size_t i) const { return next_[i]; }
  void set(std::size_t i, std::int32_t target) { next_[i] = target; }
  const Grid<std::int32_t>& grid() const { return next_; }

 private:
  Grid<std::int32_t> next_;
};

struct GeodesicOptions {
  // Permit a diagonal step even when both orthogonal corner pixels are obstacles.
  bool allow_corner_cutting = true;
};

struct GeodesicResult {
  ScalarField d_weighted;  // cost-weighted distance-to-go
  PredecessorMap pred;
  ScalarField d_pixel;     // geometric pixel length along the predecessor tree
  std::size_t dropped_goals = 0;  // requested goals that were not free pixels
};

// Truncated linear safety penalty: 1 + lambda_safe * max(0, rho_safe - d_free).
// Unreachable (no obstacle) entries map to cost 1.
ScalarField cost_map(const ScalarField& d_free, double rho_safe, double lambda_safe);

// Multi-source Dijkstra over free pixels, 8-connected. Edge weight between
// neighbors p, q is 0.5 * (C(p) + C(q)) * |p - q|. Ties in the queue are broken
// by row-major index; neighbors expand E, W, S, N, SE, SW, NE, NW.
//
// Goals outside free space are dropped (counted in dropped_goals); an empty
// goal list, or one where every goal is dropped, raises kInput.
GeodesicResult geodesic(const BinaryMask& free, const ScalarField& cost, std::span<const Pixel> goals,
                        const GeodesicOptions& options = {});

// D_pix(p) = |p - pred(p)| + D_pix(pred(p)), evaluated in nondecreasing
// d_weighted order. Goal pixels (finite distance, no successor) hold 0.
ScalarField pixel_length_from_pred(const PredecessorMap& pred, const ScalarField& d_weighted);

// Pixels from `start` to its goal along the predecessor tree. Throws
// kUnreachable when start has no finite distance-to-go.
std::vector<Pixel> backtrack(const GeodesicResult& result, const Pixel& start);

}  // namespace flownav
