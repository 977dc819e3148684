#include "flownav/distance_transform.hpp"

#include <cmath>
#include <vector>

namespace flownav {
namespace {

constexpr std::int64_t kNoSite = -1;

// Lower envelope of the parabolas f(q) + (x - q)^2 over the finite entries of
// `f`. Writes the minimum value and its arg-min column for every x.
void envelope_1d(const std::vector<std::int64_t>& f, std::vector<std::int64_t>& out_value,
                 std::vector<std::int64_t>& out_arg) {
  const auto n = static_cast<std::int64_t>(f.size());
  std::vector<std::int64_t> v;
  std::vector<double> z;
  v.reserve(f.size());
  z.reserve(f.size() + 1);

  const auto intersect = [&f](std::int64_t q, std::int64_t p) {
    const std::int64_t num = (f[q] + q * q) - (f[p] + p * p);
    return static_cast<double>(num) / static_cast<double>(2 * (q - p));
  };

  for (std::int64_t q = 0; q < n; ++q) {
    if (f[q] == kNoSite) continue;
    if (v.empty()) {
      v.push_back(q);
      z.push_back(-HUGE_VAL);
      z.push_back(HUGE_VAL);
      continue;
    }
    // z.front() is -inf, so the envelope never empties.
    double s = intersect(q, v.back());
    while (s <= z[v.size() - 1]) {
      v.pop_back();
      z.pop_back();
      s = intersect(q, v.back());
    }
    z.back() = s;
    v.push_back(q);
    z.push_back(HUGE_VAL);
  }

  if (v.empty()) {
    std::fill(out_value.begin(), out_value.end(), kNoSite);
    std::fill(out_arg.begin(), out_arg.end(), kNoSite);
    return;
  }
  std::size_t k = 0;
  for (std::int64_t x = 0; x < n; ++x) {
    while (z[k + 1] < static_cast<double>(x)) ++k;
    const std::int64_t d = x - v[k];
    out_value[x] = d * d + f[v[k]];
    out_arg[x] = v[k];
  }
}

}  // namespace

DistanceResult euclidean_distance_transform(const BinaryMask& sites) {
  const int w = sites.width();
  const int h = sites.height();
  DistanceResult result{ScalarField(w, h, kUnreachable), Grid<std::int32_t>(w, h, -1), false};
  if (sites.empty()) {
    result.no_sites = true;
    return result;
  }

  // Pass 1: per column, offset to the nearest site row.
  Grid<std::int64_t> site_row(w, h, kNoSite);
  for (int x = 0; x < w; ++x) {
    std::int64_t last = kNoSite;
    for (int y = 0; y < h; ++y) {
      if (sites.at(x, y)) last = y;
      site_row.at(x, y) = last;
    }
    last = kNoSite;
    for (int y = h - 1; y >= 0; --y) {
      if (sites.at(x, y)) last = y;
      const std::int64_t up = site_row.at(x, y);
      if (last != kNoSite && (up == kNoSite || (last - y) < (y - up))) site_row.at(x, y) = last;
    }
  }

  // Pass 2: per row, lower envelope over the squared column distances.
  std::vector<std::int64_t> f(static_cast<std::size_t>(w));
  std::vector<std::int64_t> value(static_cast<std::size_t>(w));
  std::vector<std::int64_t> arg(static_cast<std::size_t>(w));
  bool any = false;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::int64_t r = site_row.at(x, y);
      f[x] = r == kNoSite ? kNoSite : (r - y) * (r - y);
    }
    envelope_1d(f, value, arg);
    for (int x = 0; x < w; ++x) {
      if (value[x] == kNoSite) continue;
      any = true;
      const auto sx = static_cast<int>(arg[x]);
      const auto sy = static_cast<int>(site_row.at(sx, y));
      result.distance.at(x, y) = std::sqrt(static_cast<double>(value[x]));
      result.nearest_site.at(x, y) = static_cast<std::int32_t>(sites.index(sx, sy));
    }
  }
  result.no_sites = !any;
  return result;
}

DistanceResult distance_to_obstacle(const BinaryMask& free) {
  return euclidean_distance_transform(invert(free));
}

DistanceResult distance_to_free(const BinaryMask& obstacles) {
  return euclidean_distance_transform(invert(obstacles));
}

ScalarField brute_force_distance(const BinaryMask& sites) {
  std::vector<Pixel> list;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (sites[i]) list.push_back(sites.pixel(i));
  }
  ScalarField out(sites.width(), sites.height(), kUnreachable);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Pixel p = out.pixel(i);
    std::int64_t best = -1;
    for (const Pixel& s : list) {
      const std::int64_t dx = p.x - s.x;
      const std::int64_t dy = p.y - s.y;
      const std::int64_t d = dx * dx + dy * dy;
      if (best < 0 || d < best) best = d;
    }
    if (best >= 0) out[i] = std::sqrt(static_cast<double>(best));
  }
  return out;
}

}  // namespace flownav
