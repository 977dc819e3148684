#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "flownav/grid.hpp"

namespace flownav::test {

// Builds a mask from rows of '.' (1) and '#' (0), i.e. a free-space mask.
inline BinaryMask free_mask(const std::vector<std::string>& rows) {
  const int h = static_cast<int>(rows.size());
  const int w = h ? static_cast<int>(rows[0].size()) : 0;
  BinaryMask m(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) m.at(x, y) = rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] == '.';
  }
  return m;
}

inline BinaryMask random_mask(int w, int h, double p_set, std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::bernoulli_distribution bit(p_set);
  BinaryMask m(w, h);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = bit(gen) ? 1 : 0;
  return m;
}

// Two-label mapping: 0 free, 1 obstacle (targetable when `targetable`).
inline LabelMapping simple_mapping(bool targetable = true) {
  LabelMapping m;
  m.free_labels = {0};
  m.obstacle_labels = {1};
  if (targetable) m.targetable_labels = {1};
  m.names = {{0, "floor"}, {1, "box"}};
  return m;
}

}  // namespace flownav::test
