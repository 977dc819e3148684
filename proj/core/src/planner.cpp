#include "flownav/planner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>

namespace flownav {

void PlannerConfig::validate() const {
  if (grid_size < 2) throw Error(ErrorKind::kConfig, "planner.grid_size must be >= 2");
  if (!(inflate_radius >= 0.0)) throw Error(ErrorKind::kConfig, "planner.inflate_radius must be >= 0");
  if (!(side_offset >= 0.0)) throw Error(ErrorKind::kConfig, "planner.side_offset must be >= 0");
  if (waypoints < 2) throw Error(ErrorKind::kConfig, "planner.waypoints must be >= 2");
}

NormBox normalized_box(const PixelBox& box, int width, int height) {
  return {static_cast<double>(box.xmin) / width, static_cast<double>(box.ymin) / height,
          static_cast<double>(box.xmax) / width, static_cast<double>(box.ymax) / height};
}

NormPoint side_goal(const NormBox& box, const NormPoint& center, Side side, double delta) {
  if (!(box.xmin < box.xmax) || !(box.ymin < box.ymax)) {
    throw Error(ErrorKind::kInput, "side_goal: malformed box (min must be below max)");
  }
  switch (side) {
    case Side::kLeft: return {box.xmin - delta, center.v()};
    case Side::kRight: return {box.xmax + delta, center.v()};
    case Side::kTop: return {center.u(), box.ymin - delta};
    case Side::kBottom: return {center.u(), box.ymax + delta};
    case Side::kNone: break;
  }
  return center;
}

int inflation_cells(double radius_px, int image_width, int grid_size) {
  return static_cast<int>(std::ceil(radius_px / image_width * grid_size));
}

BinaryMask inflate_and_rasterize(std::span<const NormBox> boxes, const PlannerConfig& cfg, int image_width) {
  cfg.validate();
  const int g = cfg.grid_size;
  const int m = inflation_cells(cfg.inflate_radius, image_width, g);
  BinaryMask occ(g, g);
  for (const NormBox& b : boxes) {
    const int x0 = std::max(0, static_cast<int>(std::floor(b.xmin * g)) - m);
    const int y0 = std::max(0, static_cast<int>(std::floor(b.ymin * g)) - m);
    const int x1 = std::min(g - 1, static_cast<int>(std::ceil(b.xmax * g)) - 1 + m);
    const int y1 = std::min(g - 1, static_cast<int>(std::ceil(b.ymax * g)) - 1 + m);
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) occ.at(x, y) = 1;
    }
  }
  return occ;
}

Pixel snap_to_free(const BinaryMask& occupancy, const Pixel& cell) {
  if (!occupancy[cell]) return cell;
  std::int64_t best = -1;
  Pixel best_cell;
  for (std::size_t i = 0; i < occupancy.size(); ++i) {
    if (occupancy[i]) continue;
    const Pixel p = occupancy.pixel(i);
    const std::int64_t dx = p.x - cell.x;
    const std::int64_t dy = p.y - cell.y;
    const std::int64_t d = dx * dx + dy * dy;
    if (best < 0 || d < best) {
      best = d;
      best_cell = p;
    }
  }
  if (best < 0) throw Error(ErrorKind::kUnreachable, "planner: occupancy grid has no free cell");
  return best_cell;
}

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

double octile(const Pixel& a, const Pixel& b) {
  const double dx = std::abs(a.x - b.x);
  const double dy = std::abs(a.y - b.y);
  return std::max(dx, dy) + (kSqrt2 - 1.0) * std::min(dx, dy);
}

}  // namespace

PlanResult astar(const BinaryMask& occupancy, const NormPoint& start, const NormPoint& goal,
                 const PlannerConfig& cfg) {
  cfg.validate();
  const int g = occupancy.width();
  const Pixel s = snap_to_free(occupancy, norm_to_pixel(start, g, occupancy.height()));
  const Pixel t = snap_to_free(occupancy, norm_to_pixel(goal, g, occupancy.height()));

  const std::size_t n = occupancy.size();
  std::vector<double> cost(n, kUnreachable);
  std::vector<std::int32_t> parent(n, -1);
  std::vector<std::uint8_t> closed(n, 0);
  using Entry = std::pair<double, std::int32_t>;  // (f, index)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;

  const std::size_t si = occupancy.index(s);
  const std::size_t ti = occupancy.index(t);
  cost[si] = 0.0;
  open.emplace(octile(s, t), static_cast<std::int32_t>(si));

  static constexpr std::array<std::array<int, 2>, 8> kMoves{
      {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, 1}, {1, -1}, {-1, -1}}};

  PlanResult result;
  while (!open.empty()) {
    const auto i = static_cast<std::size_t>(open.top().second);
    open.pop();
    if (closed[i]) continue;
    closed[i] = 1;
    if (i == ti) {
      result.found = true;
      break;
    }
    const Pixel p = occupancy.pixel(i);
    for (const auto& [dx, dy] : kMoves) {
      const Pixel q{p.x + dx, p.y + dy};
      if (!occupancy.contains(q) || occupancy[q]) continue;
      if (!cfg.allow_corner_cutting && dx != 0 && dy != 0 && occupancy.at(p.x + dx, p.y) &&
          occupancy.at(p.x, p.y + dy)) {
        continue;
      }
      const std::size_t j = occupancy.index(q);
      if (closed[j]) continue;
      const double c = cost[i] + ((dx != 0 && dy != 0) ? kSqrt2 : 1.0);
      if (c < cost[j]) {
        cost[j] = c;
        parent[j] = static_cast<std::int32_t>(i);
        open.emplace(c + octile(q, t), static_cast<std::int32_t>(j));
      }
    }
  }
  if (!result.found) return result;

  result.cost = cost[ti];
  for (std::int32_t i = static_cast<std::int32_t>(ti); i >= 0; i = parent[static_cast<std::size_t>(i)]) {
    result.cells.push_back(occupancy.pixel(static_cast<std::size_t>(i)));
  }
  std::reverse(result.cells.begin(), result.cells.end());
  result.trajectory = trajectory_from_pixels(result.cells, g, occupancy.height(),
                                             static_cast<std::size_t>(cfg.waypoints));
  return result;
}

PlanResult plan_episode(const SemanticMap& map, const LabelMapping& mapping, const GoalSpec& goal,
                        const NormPoint& start, const PlannerConfig& cfg) {
  const std::size_t target = resolve_instance(map, goal);
  std::vector<NormBox> boxes;
  for (std::size_t i = 0; i < map.instances.size(); ++i) {
    if (!mapping.is_targetable(map.instances[i].label)) continue;
    if (i == target && goal.side == Side::kNone) continue;
    boxes.push_back(normalized_box(map.instances[i].bbox, map.width(), map.height()));
  }
  const NormBox tb = normalized_box(map.instances[target].bbox, map.width(), map.height());
  const NormPoint goal_point = side_goal(tb, tb.center(), goal.side, cfg.side_offset);
  const BinaryMask occ = inflate_and_rasterize(boxes, cfg, map.width());
  return astar(occ, start, goal_point, cfg);
}

}  // namespace flownav
