#pragma once

#include <cstdint>

#include "flownav/grid.hpp"

namespace flownav {

struct DistanceResult {
  // Euclidean pixel distance to the nearest site; kUnreachable if there is none.
  ScalarField distance;
  // Row-major index of the nearest site, -1 when there is none.
  Grid<std::int32_t> nearest_site;
  // Set when the mask had no site at all (warning status, not an error).
  bool no_sites = false;
};

// Exact Euclidean distance transform: distance from every pixel to the nearest
// pixel set in `sites`. Separable two-pass lower-envelope algorithm; squared
// distances are integers and computed exactly.
DistanceResult euclidean_distance_transform(const BinaryMask& sites);

// Distance from free pixels to the nearest obstacle pixel; obstacles hold 0.
DistanceResult distance_to_obstacle(const BinaryMask& free);
// Distance from obstacle pixels to the nearest free pixel; free pixels hold 0.
DistanceResult distance_to_free(const BinaryMask& obstacles);

inline ScalarField dto(const BinaryMask& free) { return distance_to_obstacle(free).distance; }
inline ScalarField dtf(const BinaryMask& obstacles) { return distance_to_free(obstacles).distance; }

// O(N * sites) reference transform. Slow; used for cross-checks.
ScalarField brute_force_distance(const BinaryMask& sites);

}  // namespace flownav
