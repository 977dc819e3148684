#include "flownav/geodesic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>
#include <utility>

namespace flownav {
namespace {

struct Step {
  int dx;
  int dy;
  double length;
};

constexpr double kSqrt2 = 1.4142135623730951;

constexpr std::array<Step, 8> kSteps{{
    {1, 0, 1.0}, {-1, 0, 1.0}, {0, 1, 1.0}, {0, -1, 1.0},
    {1, 1, kSqrt2}, {-1, 1, kSqrt2}, {1, -1, kSqrt2}, {-1, -1, kSqrt2},
}};

std::string pixel_str(const Pixel& p) {
  return "(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")";
}

}  // namespace

ScalarField cost_map(const ScalarField& d_free, double rho_safe, double lambda_safe) {
  if (!(rho_safe >= 0.0) || !(lambda_safe >= 0.0)) {
    throw Error(ErrorKind::kConfig, "cost_map: rho_safe and lambda_safe must be non-negative");
  }
  ScalarField cost(d_free.width(), d_free.height(), 1.0);
  for (std::size_t i = 0; i < d_free.size(); ++i) {
    const double d = d_free[i];
    if (!is_reachable(d)) continue;
    cost[i] = 1.0 + lambda_safe * std::max(0.0, rho_safe - d);
  }
  return cost;
}

GeodesicResult geodesic(const BinaryMask& free, const ScalarField& cost, std::span<const Pixel> goals,
                        const GeodesicOptions& options) {
  require_same_shape(free, cost, "geodesic");
  if (goals.empty()) throw Error(ErrorKind::kInput, "geodesic: empty goal set");

  const int w = free.width();
  const int h = free.height();
  GeodesicResult r{ScalarField(w, h, kUnreachable), PredecessorMap(w, h), ScalarField(), 0};

  using Entry = std::pair<double, std::int32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;

  for (const Pixel& g : goals) {
    if (!free.contains(g) || !free[g]) {
      ++r.dropped_goals;
      continue;
    }
    const std::size_t i = free.index(g);
    if (r.d_weighted[i] == 0.0) continue;
    r.d_weighted[i] = 0.0;
    open.emplace(0.0, static_cast<std::int32_t>(i));
  }
  if (open.empty()) {
    throw Error(ErrorKind::kInput, "geodesic: every goal pixel lies outside free space");
  }

  std::vector<std::uint8_t> settled(free.size(), 0);
  while (!open.empty()) {
    const auto [d, raw] = open.top();
    open.pop();
    const auto i = static_cast<std::size_t>(raw);
    if (settled[i]) continue;
    settled[i] = 1;
    const Pixel p = free.pixel(i);
    for (const Step& s : kSteps) {
      const Pixel q{p.x + s.dx, p.y + s.dy};
      if (!free.contains(q) || !free[q]) continue;
      if (!options.allow_corner_cutting && s.dx != 0 && s.dy != 0 &&
          !free.at(p.x + s.dx, p.y) && !free.at(p.x, p.y + s.dy)) {
        continue;
      }
      const std::size_t j = free.index(q);
      if (settled[j]) continue;
      const double nd = d + 0.5 * (cost[i] + cost[j]) * s.length;
      if (nd < r.d_weighted[j]) {
        r.d_weighted[j] = nd;
        r.pred.set(j, raw);
        open.emplace(nd, static_cast<std::int32_t>(j));
      }
    }
  }

  r.d_pixel = pixel_length_from_pred(r.pred, r.d_weighted);
  return r;
}

ScalarField pixel_length_from_pred(const PredecessorMap& pred, const ScalarField& d_weighted) {
  const int w = d_weighted.width();
  const int h = d_weighted.height();
  if (pred.width() != w || pred.height() != h) {
    throw Error(ErrorKind::kInput, "pixel_length_from_pred: raster dimensions differ");
  }
  std::vector<std::int32_t> order;
  order.reserve(d_weighted.size());
  for (std::size_t i = 0; i < d_weighted.size(); ++i) {
    if (is_reachable(d_weighted[i])) order.push_back(static_cast<std::int32_t>(i));
  }
  std::sort(order.begin(), order.end(), [&d_weighted](std::int32_t a, std::int32_t b) {
    return d_weighted[a] != d_weighted[b] ? d_weighted[a] < d_weighted[b] : a < b;
  });

  ScalarField d_pix(w, h, kUnreachable);
  for (std::int32_t raw : order) {
    const auto i = static_cast<std::size_t>(raw);
    const std::int32_t next = pred.raw(i);
    if (next == PredecessorMap::kNone) {
      d_pix[i] = 0.0;
      continue;
    }
    const auto j = static_cast<std::size_t>(next);
    if (!is_reachable(d_pix[j])) {
      throw Error(ErrorKind::kInternal, "pixel_length_from_pred: predecessor of " +
                                            pixel_str(d_pix.pixel(i)) +
                                            " not yet resolved (cycle or inconsistent tree)");
    }
    const Pixel p = d_pix.pixel(i);
    const Pixel q = d_pix.pixel(j);
    const bool diagonal = p.x != q.x && p.y != q.y;
    d_pix[i] = (diagonal ? kSqrt2 : 1.0) + d_pix[j];
  }
  return d_pix;
}

std::vector<Pixel> backtrack(const GeodesicResult& result, const Pixel& start) {
  const ScalarField& d = result.d_weighted;
  if (!d.contains(start) || !is_reachable(d[start])) {
    throw Error(ErrorKind::kUnreachable, "start pixel " + pixel_str(start) + " cannot reach the goal");
  }
  std::vector<Pixel> path{start};
  Pixel p = start;
  const std::size_t limit = d.size();
  while (result.pred.has_next(p)) {
    p = result.pred.next(p);
    path.push_back(p);
    if (path.size() > limit) {
      throw Error(ErrorKind::kInternal, "backtrack: predecessor chain longer than the raster");
    }
  }
  return path;
}

}  // namespace flownav
