#include "flownav/supervision.hpp"

#include <string>

#include "flownav/rng.hpp"

namespace flownav {

SampleBatch stratified_sample(int grid, int n_s, std::uint64_t seed) {
  if (grid < 1 || n_s < 1) throw Error(ErrorKind::kConfig, "stratified_sample: grid and n_s must be >= 1");
  const int cells = grid * grid;
  const int per_bin = (n_s + cells - 1) / cells;
  Rng rng(seed);
  SampleBatch batch{{}, grid, per_bin};
  batch.points.reserve(static_cast<std::size_t>(cells) * per_bin);
  const double size = 1.0 / grid;
  for (int row = 0; row < grid; ++row) {
    for (int col = 0; col < grid; ++col) {
      for (int r = 0; r < per_bin; ++r) {
        const double u = (col + rng.uniform()) * size;
        const double v = (row + rng.uniform()) * size;
        batch.points.emplace_back(u, v);
      }
    }
  }
  batch.points.resize(static_cast<std::size_t>(n_s));
  return batch;
}

std::vector<Vec2> sample_targets(const FlowFieldGrid& field, std::span<const NormPoint> points) {
  std::vector<Vec2> out;
  out.reserve(points.size());
  for (const NormPoint& p : points) out.push_back(bilinear_sample(field, p));
  return out;
}

namespace {

void require_pairs(std::span<const Vec2> a, std::span<const Vec2> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::kInput, "loss: prediction and target counts differ (" +
                                       std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  }
  if (a.empty()) throw Error(ErrorKind::kInput, "loss: no samples");
}

}  // namespace

double direction_loss(std::span<const Vec2> pred, std::span<const Vec2> target, double eps) {
  require_pairs(pred, target);
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    sum += 1.0 - pred[i].dot(target[i]) / (pred[i].norm() * target[i].norm() + eps);
  }
  return sum / static_cast<double>(pred.size());
}

double magnitude_loss(std::span<const Vec2> pred, std::span<const Vec2> target) {
  require_pairs(pred, target);
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i].norm() - target[i].norm();
    sum += d * d;
  }
  return sum / static_cast<double>(pred.size());
}

double total_loss(std::span<const Vec2> pred, std::span<const Vec2> target, double lambda, double eps) {
  if (!(lambda >= 0.0)) throw Error(ErrorKind::kConfig, "total_loss: lambda must be >= 0");
  return direction_loss(pred, target, eps) + lambda * magnitude_loss(pred, target);
}

}  // namespace flownav
