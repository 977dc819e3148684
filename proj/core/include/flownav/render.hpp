#pragma once

#include <optional>
#include <span>
#include <string>

#include "flownav/grid.hpp"
#include "flownav/trajectory.hpp"

namespace flownav {

struct RenderOptions {
  int query_grid = 100;  // g~, lattice the arrows are drawn from
  int stride = 5;        // must divide query_grid
  double arrow_scale = 0.8;  // arrow length in units of stride cells
};

struct RenderInput {
  const SemanticMap* map = nullptr;               // required
  const FlowFieldGrid* field = nullptr;           // optional
  const Trajectory* trajectory = nullptr;         // optional
  const Trajectory* reference = nullptr;          // optional, drawn dashed
  std::span<const Pixel> goal_band;               // optional
};

// Static SVG in map pixel units. Arrows are `<line class="arrow">` elements,
// exactly (query_grid / stride)^2 of them when a field is given.
std::string render_svg(const RenderInput& input, const RenderOptions& opts = {});

}  // namespace flownav
