#include "flownav/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace flownav {
namespace {

void require_points(const Trajectory& t, const char* what) {
  if (t.empty()) throw Error(ErrorKind::kInput, std::string(what) + ": empty trajectory");
}

double wrap_to_pi(double a) {
  const double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a + std::numbers::pi, two_pi);
  if (a < 0.0) a += two_pi;
  return a - std::numbers::pi;
}

}  // namespace

double final_goal_error(const Trajectory& pred, const Trajectory& annotated) {
  require_points(pred, "fge");
  require_points(annotated, "fge");
  return (pred.back().vec() - annotated.back().vec()).norm();
}

int collision(const Trajectory& pred, const BinaryMask& obstacles) {
  if (obstacles.empty()) throw Error(ErrorKind::kInput, "collision: empty obstacle mask");
  for (const NormPoint& p : pred.points) {
    if (obstacles[norm_to_pixel(p, obstacles.width(), obstacles.height())]) return 1;
  }
  return 0;
}

double curvature(const Trajectory& pred, double eps) {
  std::vector<double> headings;
  for (std::size_t j = 1; j < pred.size(); ++j) {
    const Vec2 d = pred.points[j].vec() - pred.points[j - 1].vec();
    if (d.norm() <= eps) continue;
    headings.push_back(std::atan2(d.y, d.x));
  }
  if (headings.size() < 2) return 0.0;
  double sum = 0.0;
  for (std::size_t j = 1; j < headings.size(); ++j) {
    sum += std::abs(wrap_to_pi(headings[j] - headings[j - 1]));
  }
  return sum / static_cast<double>(headings.size() - 1);
}

double path_length_ratio(const Trajectory& pred, const Trajectory& annotated) {
  require_points(pred, "plr");
  const double ref = path_length(annotated);
  if (!(ref > 0.0)) throw Error(ErrorKind::kInput, "plr: annotated trajectory has zero length");
  return path_length(pred) / ref;
}

TrajectoryMetrics evaluate_trajectory(const Trajectory& pred, const Trajectory& annotated,
                                      const BinaryMask& obstacles, std::size_t waypoints) {
  require_points(pred, "evaluate");
  require_points(annotated, "evaluate");
  const Trajectory p = resample_arclength(pred, waypoints);
  const Trajectory a = resample_arclength(annotated, waypoints);
  return {final_goal_error(p, a), collision(p, obstacles), curvature(p), path_length_ratio(p, a)};
}

FieldMetrics field_metrics(const FlowFieldGrid& pred, const FlowFieldGrid& annotated, double eps) {
  require_same_shape(pred, annotated, "field_metrics");
  if (annotated.empty()) throw Error(ErrorKind::kInput, "field_metrics: empty field");
  double ae = 0.0;
  double me = 0.0;
  for (std::size_t n = 0; n < annotated.size(); ++n) {
    const Vec2& a = pred[n];
    const Vec2& b = annotated[n];
    const double na = a.norm();
    const double nb = b.norm();
    const double c = std::clamp((a / (na + eps)).dot(b / (nb + eps)), -1.0, 1.0);
    ae += std::acos(c) * 180.0 / std::numbers::pi;
    me += std::abs(na - nb);
  }
  const auto n = static_cast<double>(annotated.size());
  return {ae / n, me / n};
}

MetricsSummary aggregate(std::span<const TrajectoryMetrics> episodes) {
  MetricsSummary s;
  s.episodes = episodes.size();
  if (episodes.empty()) return s;
  for (const auto& e : episodes) {
    s.fge += e.fge;
    s.cr += e.cr;
    s.curv += e.curv;
    s.plr += e.plr;
  }
  const auto n = static_cast<double>(episodes.size());
  s.fge /= n;
  s.cr /= n;
  s.curv /= n;
  s.plr /= n;
  return s;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  return values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

}  // namespace flownav
