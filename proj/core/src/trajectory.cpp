#include "flownav/trajectory.hpp"

namespace flownav {

double polyline_length(std::span<const Vec2> poly) {
  double total = 0.0;
  for (std::size_t i = 1; i < poly.size(); ++i) total += (poly[i] - poly[i - 1]).norm();
  return total;
}

std::vector<Vec2> to_vecs(const Trajectory& traj) {
  std::vector<Vec2> out;
  out.reserve(traj.size());
  for (const NormPoint& p : traj.points) out.push_back(p.vec());
  return out;
}

double path_length(const Trajectory& traj) { return polyline_length(to_vecs(traj)); }

std::vector<Vec2> resample_polyline(std::span<const Vec2> poly, std::size_t k) {
  if (poly.empty()) throw Error(ErrorKind::kInput, "resample: empty polyline");
  if (k < 2) throw Error(ErrorKind::kInput, "resample: need at least 2 output points");

  std::vector<double> cumulative(poly.size(), 0.0);
  for (std::size_t i = 1; i < poly.size(); ++i) {
    cumulative[i] = cumulative[i - 1] + (poly[i] - poly[i - 1]).norm();
  }
  const double total = cumulative.back();
  if (!(total > 0.0)) return std::vector<Vec2>(k, poly.front());

  std::vector<Vec2> out;
  out.reserve(k);
  out.push_back(poly.front());
  std::size_t seg = 1;
  for (std::size_t j = 1; j + 1 < k; ++j) {
    const double target = total * static_cast<double>(j) / static_cast<double>(k - 1);
    while (seg + 1 < poly.size() && cumulative[seg] < target) ++seg;
    const double len = cumulative[seg] - cumulative[seg - 1];
    const double t = len > 0.0 ? (target - cumulative[seg - 1]) / len : 0.0;
    out.push_back(poly[seg - 1] + (poly[seg] - poly[seg - 1]) * t);
  }
  out.push_back(poly.back());
  return out;
}

Trajectory resample_arclength(const Trajectory& traj, std::size_t k) {
  const std::vector<Vec2> pts = resample_polyline(to_vecs(traj), k);
  Trajectory out;
  out.points.reserve(pts.size());
  for (const Vec2& p : pts) out.points.emplace_back(p);
  return out;
}

Trajectory trajectory_from_pixels(std::span<const Pixel> pixels, int width, int height, std::size_t k) {
  std::vector<Vec2> poly;
  poly.reserve(pixels.size());
  for (const Pixel& p : pixels) poly.push_back({static_cast<double>(p.x), static_cast<double>(p.y)});
  Trajectory out;
  for (const Vec2& p : resample_polyline(poly, k)) {
    out.points.emplace_back((p.x + 0.5) / width, (p.y + 0.5) / height);
  }
  return out;
}

}  // namespace flownav
