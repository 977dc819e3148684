#include "flownav/grid.hpp"

#include <array>

namespace flownav {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kClassification: return "classification";
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kInput: return "input";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kTargetNotFound: return "target-not-found";
    case ErrorKind::kUnreachable: return "unreachable";
    case ErrorKind::kGeneration: return "generation";
    case ErrorKind::kInternal: return "internal";
  }
  return "unknown";
}

BinaryMask invert(const BinaryMask& mask) {
  BinaryMask out(mask.width(), mask.height());
  for (std::size_t i = 0; i < mask.size(); ++i) out[i] = mask[i] ? 0 : 1;
  return out;
}

std::size_t count_set(const BinaryMask& mask) {
  return static_cast<std::size_t>(std::count_if(mask.data().begin(), mask.data().end(),
                                                [](std::uint8_t b) { return b != 0; }));
}

ObjectInstance make_instance(Label label, const PixelBox& bbox) {
  return {label, bbox, {(bbox.xmin + bbox.xmax - 1) / 2, (bbox.ymin + bbox.ymax - 1) / 2}};
}

void LabelMapping::validate() const {
  for (Label l : free_labels) {
    if (obstacle_labels.count(l)) {
      throw Error(ErrorKind::kConfig, "label " + std::to_string(l) + " is both free and obstacle");
    }
  }
  for (Label l : targetable_labels) {
    if (!obstacle_labels.count(l)) {
      throw Error(ErrorKind::kConfig,
                  "targetable label " + std::to_string(l) + " is not an obstacle label");
    }
  }
}

std::string LabelMapping::name_of(Label label) const {
  auto it = names.find(label);
  return it == names.end() ? "label" + std::to_string(label) : it->second;
}

Label LabelMapping::label_named(const std::string& name) const {
  for (const auto& [label, n] : names) {
    if (n == name) return label;
  }
  throw Error(ErrorKind::kTargetNotFound, "no label named '" + name + "'");
}

void SemanticMap::validate(const LabelMapping& mapping) const {
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& b = instances[i].bbox;
    if (!(0 <= b.xmin && b.xmin < b.xmax && b.xmax <= width() && 0 <= b.ymin && b.ymin < b.ymax &&
          b.ymax <= height())) {
      throw Error(ErrorKind::kInput, "instance " + std::to_string(i) + " has an invalid bbox");
    }
    if (!mapping.knows(instances[i].label)) {
      throw Error(ErrorKind::kClassification,
                  "instance " + std::to_string(i) + " has unknown label " +
                      std::to_string(instances[i].label));
    }
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!mapping.knows(labels[i])) {
      const Pixel p = labels.pixel(i);
      throw Error(ErrorKind::kClassification,
                  "unknown label id " + std::to_string(labels[i]) + " at pixel (" +
                      std::to_string(p.x) + ", " + std::to_string(p.y) + ")");
    }
  }
}

BinaryMask extract_free(const SemanticMap& map, const LabelMapping& mapping) {
  // Lookup table over the whole 8-bit label range; 2 = unknown.
  std::array<std::uint8_t, 256> role{};
  role.fill(2);
  for (Label l : mapping.obstacle_labels) role[l] = 0;
  for (Label l : mapping.free_labels) role[l] = 1;

  BinaryMask free(map.width(), map.height());
  for (std::size_t i = 0; i < map.labels.size(); ++i) {
    const std::uint8_t r = role[map.labels[i]];
    if (r == 2) {
      const Pixel p = map.labels.pixel(i);
      throw Error(ErrorKind::kClassification,
                  "unknown label id " + std::to_string(map.labels[i]) + " at pixel (" +
                      std::to_string(p.x) + ", " + std::to_string(p.y) + ")");
    }
    free[i] = r;
  }
  return free;
}

Pixel norm_to_pixel(const NormPoint& p, int width, int height) {
  const auto index = [](double c, int n) {
    const double f = std::floor(std::clamp(c, 0.0, 1.0) * n);
    return static_cast<int>(std::clamp(f, 0.0, static_cast<double>(n - 1)));
  };
  return {index(p.u(), width), index(p.v(), height)};
}

NormPoint pixel_center(const Pixel& p, int width, int height) {
  return {(p.x + 0.5) / width, (p.y + 0.5) / height};
}

namespace {

struct Stencil {
  std::size_t i00, i10, i01, i11;
  double w00, w10, w01, w11;
};

// Edge-clamped bilinear stencil.
Stencil stencil(int width, int height, const NormPoint& p) {
  // Round-off from the normalized round trip is snapped away so that a query
  // at a cell center touches only that cell.
  const auto snap = [](double c) {
    const double r = std::round(c);
    return std::abs(c - r) < 1e-9 ? r : c;
  };
  const double cx = std::clamp(snap(p.u() * width - 0.5), 0.0, static_cast<double>(width - 1));
  const double cy = std::clamp(snap(p.v() * height - 0.5), 0.0, static_cast<double>(height - 1));
  const int x0 = std::min(static_cast<int>(cx), width - 1);
  const int y0 = std::min(static_cast<int>(cy), height - 1);
  const int x1 = std::min(x0 + 1, width - 1);
  const int y1 = std::min(y0 + 1, height - 1);
  const double fx = cx - x0;
  const double fy = cy - y0;
  const auto idx = [width](int x, int y) {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x);
  };
  return {idx(x0, y0), idx(x1, y0), idx(x0, y1), idx(x1, y1),
          (1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy, fx * fy};
}

void require_nonempty(int width, int height) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorKind::kInput, "bilinear_sample on an empty raster");
  }
}

}  // namespace

double bilinear_sample(const ScalarField& field, const NormPoint& p) {
  require_nonempty(field.width(), field.height());
  const Stencil s = stencil(field.width(), field.height(), p);
  const std::array<std::pair<std::size_t, double>, 4> taps{
      {{s.i00, s.w00}, {s.i10, s.w10}, {s.i01, s.w01}, {s.i11, s.w11}}};
  double acc = 0.0;
  for (const auto& [i, w] : taps) {
    if (w == 0.0) continue;
    if (!is_reachable(field[i])) return kUnreachable;
    acc += w * field[i];
  }
  return acc;
}

Vec2 bilinear_sample(const FlowFieldGrid& field, const NormPoint& p) {
  require_nonempty(field.width(), field.height());
  const Stencil s = stencil(field.width(), field.height(), p);
  return field[s.i00] * s.w00 + field[s.i10] * s.w10 + field[s.i01] * s.w01 +
         field[s.i11] * s.w11;
}

}  // namespace flownav
