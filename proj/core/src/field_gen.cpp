#include "flownav/field_gen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "flownav/rng.hpp"

namespace flownav {

void AnnotationConfig::validate() const {
  const auto nonneg = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::kConfig, std::string("annotation.") + name + " must be a finite value >= 0");
    }
  };
  nonneg(rho_safe, "rho_safe");
  nonneg(lambda_safe, "lambda_safe");
  nonneg(w_g, "w_g");
  nonneg(w_obs, "w_obs");
  nonneg(gaussian_sigma, "gaussian_sigma");
  nonneg(goal_band, "goal_band");
  nonneg(start_min_goal_dist, "start_min_goal_dist");
  nonneg(start_min_obs_dist, "start_min_obs_dist");
  nonneg(epsilon, "epsilon");
  if (traj_waypoints < 2) throw Error(ErrorKind::kConfig, "annotation.traj_waypoints must be >= 2");
  if (!(w_obs > w_g)) throw Error(ErrorKind::kConfig, "annotation.w_obs must exceed annotation.w_g");
}

std::string to_string(Side side) {
  switch (side) {
    case Side::kNone: return "none";
    case Side::kLeft: return "left";
    case Side::kRight: return "right";
    case Side::kTop: return "top";
    case Side::kBottom: return "bottom";
  }
  return "none";
}

Side parse_side(const std::string& text) {
  if (text == "none") return Side::kNone;
  if (text == "left") return Side::kLeft;
  if (text == "right") return Side::kRight;
  if (text == "top") return Side::kTop;
  if (text == "bottom") return Side::kBottom;
  throw Error(ErrorKind::kInput, "unknown side '" + text + "'");
}

std::size_t resolve_instance(const SemanticMap& map, const GoalSpec& spec) {
  if (spec.instance_index) {
    const std::size_t i = *spec.instance_index;
    if (i >= map.instances.size() || map.instances[i].label != spec.target_label) {
      throw Error(ErrorKind::kTargetNotFound, "instance " + std::to_string(i) + " with label " +
                                                  std::to_string(spec.target_label) + " not found");
    }
    return i;
  }
  for (std::size_t i = 0; i < map.instances.size(); ++i) {
    if (map.instances[i].label == spec.target_label) return i;
  }
  throw Error(ErrorKind::kTargetNotFound,
              "no instance with label " + std::to_string(spec.target_label));
}

std::vector<Pixel> compute_goal(const SemanticMap& map, const BinaryMask& free, const GoalSpec& spec,
                                const AnnotationConfig& cfg) {
  require_same_shape(map.labels, free, "compute_goal");
  const ObjectInstance& inst = map.instances[resolve_instance(map, spec)];
  const PixelBox& b = inst.bbox;
  const int band = cfg.goal_band;
  const double cx = b.center_x();
  const double cy = b.center_y();

  const auto on_side = [&](const Pixel& p) {
    switch (spec.side) {
      case Side::kNone: return true;
      case Side::kLeft: return p.x < cx;
      case Side::kRight: return p.x > cx;
      case Side::kTop: return p.y < cy;
      case Side::kBottom: return p.y > cy;
    }
    return true;
  };
  const auto is_instance_pixel = [&](int x, int y) {
    return b.contains({x, y}) && map.labels.at(x, y) == inst.label;
  };

  std::vector<Pixel> goals;
  const int x0 = std::max(0, b.xmin - band);
  const int x1 = std::min(map.width() - 1, b.xmax - 1 + band);
  const int y0 = std::max(0, b.ymin - band);
  const int y1 = std::min(map.height() - 1, b.ymax - 1 + band);
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      if (!free.at(x, y) || !on_side({x, y})) continue;
      bool near = false;
      for (int dy = -band; dy <= band && !near; ++dy) {
        for (int dx = -band; dx <= band && !near; ++dx) {
          near = is_instance_pixel(x + dx, y + dy);
        }
      }
      if (near) goals.push_back({x, y});
    }
  }
  if (!goals.empty()) return goals;

  // Fallback: the single free pixel nearest to the instance center.
  std::int64_t best = -1;
  Pixel best_pixel;
  for (std::size_t i = 0; i < free.size(); ++i) {
    if (!free[i]) continue;
    const Pixel p = free.pixel(i);
    const std::int64_t dx = p.x - inst.center.x;
    const std::int64_t dy = p.y - inst.center.y;
    const std::int64_t d = dx * dx + dy * dy;
    if (best < 0 || d < best) {
      best = d;
      best_pixel = p;
    }
  }
  if (best < 0) throw Error(ErrorKind::kUnreachable, "compute_goal: the map has no free pixel");
  return {best_pixel};
}

ScalarField potential(const ScalarField& d_weighted, const ScalarField& d_obs, const BinaryMask& free,
                      const AnnotationConfig& cfg) {
  require_same_shape(d_weighted, free, "potential");
  require_same_shape(d_obs, free, "potential");
  double b_obs = -1.0;
  for (std::size_t i = 0; i < free.size(); ++i) {
    if (free[i] && is_reachable(d_weighted[i])) b_obs = std::max(b_obs, d_weighted[i]);
  }
  if (b_obs < 0.0) {
    throw Error(ErrorKind::kUnreachable, "potential: no free pixel can reach the goal");
  }
  ScalarField phi(free.width(), free.height());
  for (std::size_t i = 0; i < free.size(); ++i) {
    if (free[i]) {
      phi[i] = is_reachable(d_weighted[i]) ? cfg.w_g * d_weighted[i] : b_obs;
    } else {
      phi[i] = cfg.w_obs * (is_reachable(d_obs[i]) ? d_obs[i] : 0.0) + b_obs;
    }
  }
  return phi;
}

namespace {

int reflect(int i, int n) {
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - i - 1;
  }
  return i;
}

// Convolves rows (horizontal = true) or columns with a symmetric or
// antisymmetric 1D kernel centered at kernel.size() / 2.
ScalarField convolve_1d(const ScalarField& in, const std::vector<double>& kernel, bool horizontal) {
  const int w = in.width();
  const int h = in.height();
  const int r = static_cast<int>(kernel.size() / 2);
  ScalarField out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -r; k <= r; ++k) {
        const double v = horizontal ? in.at(reflect(x + k, w), y) : in.at(x, reflect(y + k, h));
        acc += kernel[static_cast<std::size_t>(k + r)] * v;
      }
      out.at(x, y) = acc;
    }
  }
  return out;
}

}  // namespace

ScalarField gaussian_smooth(const ScalarField& field, double sigma) {
  if (!(sigma > 0.0) || field.empty()) return field;
  const int radius = static_cast<int>(3.0 * sigma + 0.5);
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    const double v = std::exp(-0.5 * (k * k) / (sigma * sigma));
    kernel[static_cast<std::size_t>(k + radius)] = v;
    sum += v;
  }
  for (double& v : kernel) v /= sum;
  return convolve_1d(convolve_1d(field, kernel, true), kernel, false);
}

Gradient sobel(const ScalarField& field) {
  // Sobel = central difference along the axis times [1 2 1] smoothing across it.
  const std::vector<double> diff{-0.5, 0.0, 0.5};
  const std::vector<double> smooth{0.25, 0.5, 0.25};
  return {convolve_1d(convolve_1d(field, diff, true), smooth, false),
          convolve_1d(convolve_1d(field, smooth, true), diff, false)};
}

FlowFieldGrid flow_field(const ScalarField& phi, const BinaryMask& free, const ScalarField& d_pix,
                         const AnnotationConfig& cfg) {
  require_same_shape(phi, free, "flow_field");
  require_same_shape(d_pix, free, "flow_field");
  const int w = free.width();
  const int h = free.height();
  const Gradient g = sobel(gaussian_smooth(phi, cfg.gaussian_sigma));

  FlowFieldGrid field(w, h);
  std::optional<DistanceResult> nearest_free;
  for (std::size_t i = 0; i < free.size(); ++i) {
    const Vec2 grad{g.dx[i], g.dy[i]};
    const double n = grad.norm();
    if (free[i]) {
      if (!is_reachable(d_pix[i])) continue;
      const Vec2 u = -grad / (n + cfg.epsilon);
      field[i] = {u.x * d_pix[i] / w, u.y * d_pix[i] / h};
      continue;
    }
    if (n > 0.0) {
      field[i] = -grad / n;
      continue;
    }
    // Flat smoothed potential inside an obstacle: escape toward free space.
    if (!nearest_free) nearest_free = distance_to_free(invert(free));
    const std::int32_t site = nearest_free->nearest_site[i];
    if (site < 0) continue;
    const Pixel p = free.pixel(i);
    const Pixel q = free.pixel(static_cast<std::size_t>(site));
    const Vec2 d{static_cast<double>(q.x - p.x), static_cast<double>(q.y - p.y)};
    field[i] = d / d.norm();
  }
  return field;
}

StartSample sample_start(const BinaryMask& free, const ScalarField& d_pix, const ScalarField& d_free,
                         const AnnotationConfig& cfg, std::uint64_t seed) {
  require_same_shape(d_pix, free, "sample_start");
  require_same_shape(d_free, free, "sample_start");
  for (int relaxed = 0; relaxed <= 2; ++relaxed) {
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < free.size(); ++i) {
      if (!free[i] || !is_reachable(d_pix[i])) continue;
      if (relaxed < 1 && d_pix[i] < cfg.start_min_goal_dist) continue;
      if (relaxed < 2 && d_free[i] < cfg.start_min_obs_dist) continue;
      candidates.push_back(i);
    }
    if (candidates.empty()) continue;
    Rng rng(seed);
    return {free.pixel(candidates[rng.below(candidates.size())]), relaxed};
  }
  throw Error(ErrorKind::kUnreachable, "sample_start: no reachable free pixel");
}

namespace {

template <typename F>
auto stage(int number, const char* name, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    throw Error(e.kind(), "annotate stage " + std::to_string(number) + " (" + name + "): " + e.what());
  }
}

}  // namespace

Annotation annotate(const SemanticMap& map, const LabelMapping& mapping, const GoalSpec& spec,
                    const AnnotationConfig& cfg, std::uint64_t seed,
                    const std::optional<Pixel>& fixed_start, AnnotationTrace* trace) {
  cfg.validate();
  mapping.validate();
  if (!mapping.is_targetable(spec.target_label)) {
    throw Error(ErrorKind::kTargetNotFound,
                "label " + std::to_string(spec.target_label) + " is not targetable");
  }

  Annotation out;
  const BinaryMask free = stage(1, "extract_free", [&] { return extract_free(map, mapping); });
  out.goal_pixels = stage(1, "compute_goal", [&] { return compute_goal(map, free, spec, cfg); });

  const ScalarField d_free = stage(2, "dto", [&] { return dto(free); });
  const ScalarField cost =
      stage(2, "cost_map", [&] { return cost_map(d_free, cfg.rho_safe, cfg.lambda_safe); });
  GeodesicResult geo = stage(2, "geodesic", [&] {
    return geodesic(free, cost, out.goal_pixels, GeodesicOptions{cfg.allow_corner_cutting});
  });
  out.dropped_goals = geo.dropped_goals;

  const ScalarField d_obs = stage(3, "dtf", [&] { return dtf(invert(free)); });
  const ScalarField phi = stage(4, "potential", [&] { return potential(geo.d_weighted, d_obs, free, cfg); });
  out.field = stage(5, "flow_field", [&] { return flow_field(phi, free, geo.d_pixel, cfg); });

  const StartSample start = fixed_start ? StartSample{*fixed_start, 0} : stage(6, "sample_start", [&] {
    return sample_start(free, geo.d_pixel, d_free, cfg, seed);
  });
  out.start = start.pixel;
  out.start_relaxed = start.relaxed;
  std::vector<Pixel> raw = stage(6, "backtrack", [&] { return backtrack(geo, out.start); });
  out.trajectory = stage(6, "resample", [&] {
    return trajectory_from_pixels(raw, map.width(), map.height(),
                                  static_cast<std::size_t>(cfg.traj_waypoints));
  });

  if (trace) {
    trace->free = free;
    trace->d_free = d_free;
    trace->cost = cost;
    trace->geodesic = std::move(geo);
    trace->d_obs = d_obs;
    trace->phi = phi;
    trace->raw_path = std::move(raw);
  }
  return out;
}

}  // namespace flownav
