#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "flownav/error.hpp"

namespace flownav {

// Marks cells that are unreachable or undefined. Never NaN, so comparisons
// stay total.
inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

inline bool is_reachable(double d) { return d != kUnreachable; }

struct Pixel {
  int x = 0;
  int y = 0;

  friend bool operator==(const Pixel&, const Pixel&) = default;
  friend auto operator<=>(const Pixel&, const Pixel&) = default;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  double norm() const { return std::hypot(x, y); }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }

  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  friend Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(const Vec2& a, double s) { return {a.x * s, a.y * s}; }
  friend Vec2 operator*(double s, const Vec2& a) { return {a.x * s, a.y * s}; }
  friend Vec2 operator/(const Vec2& a, double s) { return {a.x / s, a.y / s}; }
  friend Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

// A point in the normalized workspace [0,1]^2, u rightward and v downward.
// Components are clamped on construction.
class NormPoint {
 public:
  NormPoint() = default;
  NormPoint(double u, double v) : u_(std::clamp(u, 0.0, 1.0)), v_(std::clamp(v, 0.0, 1.0)) {}
  explicit NormPoint(const Vec2& p) : NormPoint(p.x, p.y) {}

  double u() const { return u_; }
  double v() const { return v_; }
  Vec2 vec() const { return {u_, v_}; }

  friend bool operator==(const NormPoint&, const NormPoint&) = default;

 private:
  double u_ = 0.0;
  double v_ = 0.0;
};

// Row-major, y-down raster. Element (x, y) lives at index y * width + x.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(width), height_(height) {
    if (width < 0 || height < 0) {
      throw Error(ErrorKind::kInput, "grid dimensions must be non-negative");
    }
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }
  Grid(int width, int height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (width < 0 || height < 0 ||
        data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
      throw Error(ErrorKind::kInput, "grid data size does not match width*height");
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }
  bool contains(const Pixel& p) const { return contains(p.x, p.y); }

  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }
  std::size_t index(const Pixel& p) const { return index(p.x, p.y); }
  Pixel pixel(std::size_t i) const {
    return {static_cast<int>(i % static_cast<std::size_t>(width_)),
            static_cast<int>(i / static_cast<std::size_t>(width_))};
  }

  T& at(int x, int y) { return data_[index(x, y)]; }
  const T& at(int x, int y) const { return data_[index(x, y)]; }
  T& operator[](const Pixel& p) { return data_[index(p)]; }
  const T& operator[](const Pixel& p) const { return data_[index(p)]; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  const std::vector<T>& data() const { return data_; }
  std::vector<T>& data() { return data_; }

  template <typename U>
  bool same_shape(const Grid<U>& other) const {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

// 1 marks membership (free space for a free mask, obstacle for an obstacle mask).
using BinaryMask = Grid<std::uint8_t>;
using ScalarField = Grid<double>;
// Velocities in normalized-coordinate units per unit normalized time.
using FlowFieldGrid = Grid<Vec2>;

BinaryMask invert(const BinaryMask& mask);
std::size_t count_set(const BinaryMask& mask);

template <typename A, typename B>
void require_same_shape(const Grid<A>& a, const Grid<B>& b, const char* what) {
  if (!a.same_shape(b)) {
    throw Error(ErrorKind::kInput, std::string(what) + ": raster dimensions differ (" +
                                       std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                                       " vs " + std::to_string(b.width()) + "x" +
                                       std::to_string(b.height()) + ")");
  }
}

using Label = std::uint8_t;

// Pixel-space box with exclusive upper bounds.
struct PixelBox {
  int xmin = 0;
  int ymin = 0;
  int xmax = 0;
  int ymax = 0;

  int width() const { return xmax - xmin; }
  int height() const { return ymax - ymin; }
  bool contains(const Pixel& p) const { return p.x >= xmin && p.x < xmax && p.y >= ymin && p.y < ymax; }
  // Geometric center in pixel-index units (pixel centers sit on integers).
  double center_x() const { return 0.5 * (xmin + xmax - 1); }
  double center_y() const { return 0.5 * (ymin + ymax - 1); }

  friend bool operator==(const PixelBox&, const PixelBox&) = default;
};

struct ObjectInstance {
  Label label = 0;
  PixelBox bbox;
  Pixel center;

  friend bool operator==(const ObjectInstance&, const ObjectInstance&) = default;
};

ObjectInstance make_instance(Label label, const PixelBox& bbox);

enum class LabelRole { kFree, kObstacle };

// Partition of label ids into free space and obstacles. Targetable labels are
// the obstacle categories an instruction may name.
struct LabelMapping {
  std::set<Label> free_labels;
  std::set<Label> obstacle_labels;
  std::set<Label> targetable_labels;
  std::map<Label, std::string> names;

  // Throws kConfig when the sets overlap or targetable is not within obstacle.
  void validate() const;

  bool knows(Label label) const { return free_labels.count(label) || obstacle_labels.count(label); }
  bool is_free(Label label) const { return free_labels.count(label) != 0; }
  bool is_targetable(Label label) const { return targetable_labels.count(label) != 0; }
  std::string name_of(Label label) const;
  // Reverse lookup of `names`; throws kTargetNotFound for unknown names.
  Label label_named(const std::string& name) const;

  friend bool operator==(const LabelMapping&, const LabelMapping&) = default;
};

struct SemanticMap {
  Grid<Label> labels;
  std::vector<ObjectInstance> instances;

  int width() const { return labels.width(); }
  int height() const { return labels.height(); }

  // Throws kInput on out-of-range instance boxes and kClassification for
  // labels the mapping does not know.
  void validate(const LabelMapping& mapping) const;

  friend bool operator==(const SemanticMap&, const SemanticMap&) = default;
};

// 1 where the pixel label is free. Unknown labels raise kClassification
// naming the id and the pixel.
BinaryMask extract_free(const SemanticMap& map, const LabelMapping& mapping);

// clip(floor(u*W), 0, W-1), clip(floor(v*H), 0, H-1) after clamping to [0,1]^2.
Pixel norm_to_pixel(const NormPoint& p, int width, int height);

// Normalized coordinate of a pixel center: ((x + 0.5) / W, (y + 0.5) / H).
NormPoint pixel_center(const Pixel& p, int width, int height);

// Bilinear interpolation with cell centers at ((j + 0.5) / W, (i + 0.5) / H).
// Queries in the outer half-pixel margin are clamped to the border centers.
// A contributing corner holding kUnreachable makes the result kUnreachable.
double bilinear_sample(const ScalarField& field, const NormPoint& p);
Vec2 bilinear_sample(const FlowFieldGrid& field, const NormPoint& p);

}  // namespace flownav
