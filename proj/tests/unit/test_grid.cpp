#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "flownav/distance_transform.hpp"
#include "flownav/grid.hpp"
#include "flownav/scene_gen.hpp"
#include "helpers.hpp"

namespace flownav {
namespace {

using test::random_mask;

SemanticMap uniform_map(int w, int h, Label l) {
  SemanticMap m;
  m.labels = Grid<Label>(w, h, l);
  return m;
}

TEST(ExtractFree, AllFreeMap) {
  const BinaryMask m = extract_free(uniform_map(3, 3, 0), test::simple_mapping());
  EXPECT_EQ(count_set(m), 9u);
}

TEST(ExtractFree, SingleObstacle) {
  SemanticMap map = uniform_map(3, 3, 0);
  map.labels.at(1, 1) = 1;
  const BinaryMask m = extract_free(map, test::simple_mapping());
  for (int y = 0; y < 3; ++y) {
    for (int x = 0; x < 3; ++x) EXPECT_EQ(m.at(x, y), (x == 1 && y == 1) ? 0 : 1);
  }
  EXPECT_EQ(invert(m).at(1, 1), 1);
}

TEST(ExtractFree, UnknownLabelNamesIdAndPixel) {
  SemanticMap map = uniform_map(4, 3, 0);
  map.labels.at(2, 1) = 17;
  try {
    extract_free(map, test::simple_mapping());
    FAIL() << "expected a classification error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kClassification);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("17"), std::string::npos) << msg;
    EXPECT_NE(msg.find("(2, 1)"), std::string::npos) << msg;
  }
}

TEST(ExtractFree, GeneratedSceneMatchesDirectScan) {
  SceneSpec spec;
  spec.seed = 7;
  const Scene scene = gen_scene(spec);
  std::size_t expected = 0;
  for (Label l : scene.map.labels.data()) expected += scene.mapping.free_labels.count(l);
  EXPECT_EQ(count_set(extract_free(scene.map, scene.mapping)), expected);
}

TEST(LabelMapping, RejectsOverlapAndForeignTargets) {
  LabelMapping m = test::simple_mapping();
  m.free_labels.insert(1);
  EXPECT_THROW(m.validate(), Error);
  LabelMapping t = test::simple_mapping();
  t.targetable_labels.insert(0);
  EXPECT_THROW(t.validate(), Error);
  EXPECT_NO_THROW(test::simple_mapping().validate());
}

TEST(SemanticMap, RejectsOutOfRangeBoxes) {
  SemanticMap map = uniform_map(8, 8, 0);
  map.instances.push_back(make_instance(1, {2, 2, 9, 4}));
  EXPECT_THROW(map.validate(test::simple_mapping()), Error);
  map.instances.back() = make_instance(1, {3, 2, 3, 4});
  EXPECT_THROW(map.validate(test::simple_mapping()), Error);
}

TEST(Dto, SingleCornerObstacle) {
  BinaryMask free(3, 3, 1);
  free.at(0, 0) = 0;
  const ScalarField d = dto(free);
  EXPECT_DOUBLE_EQ(d.at(2, 2), std::sqrt(8.0));
  EXPECT_DOUBLE_EQ(d.at(0, 0), 0.0);
}

TEST(Dto, ObstacleColumn) {
  BinaryMask free(4, 4, 1);
  for (int y = 0; y < 4; ++y) free.at(0, y) = 0;
  const ScalarField d = dto(free);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) EXPECT_DOUBLE_EQ(d.at(x, y), x);
  }
}

TEST(Dto, NoObstacleReportsSentinel) {
  const DistanceResult r = distance_to_obstacle(BinaryMask(5, 4, 1));
  EXPECT_TRUE(r.no_sites);
  for (double v : r.distance.data()) EXPECT_FALSE(is_reachable(v));
}

TEST(Dto, RandomMaskMatchesBruteForce) {
  const BinaryMask free = random_mask(16, 16, 0.7, 3);
  EXPECT_EQ(dto(free), brute_force_distance(invert(free)));
}

TEST(Dtf, IsolatedObstaclePixel) {
  BinaryMask obs(5, 5, 0);
  obs.at(2, 2) = 1;
  const ScalarField d = dtf(obs);
  EXPECT_DOUBLE_EQ(d.at(2, 2), 1.0);
  EXPECT_DOUBLE_EQ(d.at(0, 0), 0.0);
}

TEST(Dtf, ThreeThickSlab) {
  BinaryMask obs(9, 9, 0);
  for (int y = 3; y < 6; ++y) {
    for (int x = 0; x < 9; ++x) obs.at(x, y) = 1;
  }
  const ScalarField d = dtf(obs);
  EXPECT_DOUBLE_EQ(d.at(4, 4), 2.0);
  EXPECT_DOUBLE_EQ(d.at(4, 3), 1.0);
}

TEST(Dtf, RandomMaskMatchesBruteForce) {
  const BinaryMask obs = random_mask(16, 16, 0.5, 4);
  EXPECT_EQ(dtf(obs), brute_force_distance(invert(obs)));
}

// Independent squared-distance oracle: all pairs, integer arithmetic.
std::vector<std::int64_t> brute_squared(const BinaryMask& sites) {
  std::vector<std::int64_t> out(sites.size(), -1);
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const Pixel p = sites.pixel(i);
    for (std::size_t j = 0; j < sites.size(); ++j) {
      if (!sites[j]) continue;
      const Pixel q = sites.pixel(j);
      const std::int64_t d = std::int64_t{p.x - q.x} * (p.x - q.x) + std::int64_t{p.y - q.y} * (p.y - q.y);
      if (out[i] < 0 || d < out[i]) out[i] = d;
    }
  }
  return out;
}

TEST(DistanceTransform, ExactOnSquaredDistancesAndNearestSite) {
  std::mt19937 gen(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int w = 1 + static_cast<int>(gen() % 32);
    const int h = 1 + static_cast<int>(gen() % 32);
    const BinaryMask sites = random_mask(w, h, 0.05 + 0.9 * (trial % 5) / 4.0, gen());
    const DistanceResult r = euclidean_distance_transform(sites);
    const auto sq = brute_squared(sites);
    for (std::size_t i = 0; i < sites.size(); ++i) {
      if (sq[i] < 0) {
        ASSERT_FALSE(is_reachable(r.distance[i]));
        continue;
      }
      ASSERT_EQ(r.distance[i], std::sqrt(static_cast<double>(sq[i])));
      const Pixel p = sites.pixel(i);
      const Pixel s = sites.pixel(static_cast<std::size_t>(r.nearest_site[i]));
      ASSERT_TRUE(sites[s]);
      ASSERT_EQ(std::int64_t{p.x - s.x} * (p.x - s.x) + std::int64_t{p.y - s.y} * (p.y - s.y), sq[i]);
    }
  }
}

TEST(DistanceTransform, ZeroOnComplementaryRegions) {
  const BinaryMask free = random_mask(20, 13, 0.6, 5);
  const ScalarField a = dto(free);
  const ScalarField b = dtf(invert(free));
  for (std::size_t i = 0; i < free.size(); ++i) {
    if (free[i]) {
      EXPECT_EQ(b[i], 0.0);
    } else {
      EXPECT_EQ(a[i], 0.0);
      EXPECT_GE(b[i], 1.0);
    }
  }
}

TEST(Bilinear, ConstantField) {
  const ScalarField f(7, 5, 3.25);
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) EXPECT_DOUBLE_EQ(bilinear_sample(f, {u(gen), u(gen)}), 3.25);
}

TEST(Bilinear, HorizontalMidpoint) {
  const ScalarField f(2, 2, std::vector<double>{0, 1, 0, 1});
  EXPECT_DOUBLE_EQ(bilinear_sample(f, {0.5, 0.5}), 0.5);
  EXPECT_DOUBLE_EQ(bilinear_sample(f, {0.5, 0.1}), 0.5);
}

// Textbook formula written from scratch: continuous raster coordinate
// x = u*W - 0.5, clamped to [0, W-1], weights from the fractional part.
double textbook_bilinear(const ScalarField& f, double u, double v) {
  const double x = std::clamp(u * f.width() - 0.5, 0.0, f.width() - 1.0);
  const double y = std::clamp(v * f.height() - 0.5, 0.0, f.height() - 1.0);
  const int x0 = std::min(static_cast<int>(x), f.width() - 1);
  const int y0 = std::min(static_cast<int>(y), f.height() - 1);
  const int x1 = std::min(x0 + 1, f.width() - 1);
  const int y1 = std::min(y0 + 1, f.height() - 1);
  const double ax = x - x0;
  const double ay = y - y0;
  const double top = f.at(x0, y0) * (1 - ax) + f.at(x1, y0) * ax;
  const double bot = f.at(x0, y1) * (1 - ax) + f.at(x1, y1) * ax;
  return top * (1 - ay) + bot * ay;
}

TEST(Bilinear, MatchesTextbookFormula) {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ScalarField f(8, 8);
  for (double& v : f.data()) v = u(gen) * 10 - 5;
  for (int i = 0; i < 100; ++i) {
    const double a = u(gen);
    const double b = u(gen);
    EXPECT_NEAR(bilinear_sample(f, {a, b}), textbook_bilinear(f, a, b), 1e-12);
  }
}

TEST(Bilinear, ExactAtCellCentersAndLinearBetween) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ScalarField f(6, 4);
  for (double& v : f.data()) v = u(gen);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 6; ++x) EXPECT_EQ(bilinear_sample(f, pixel_center({x, y}, 6, 4)), f.at(x, y));
  }
  for (int x = 0; x + 1 < 6; ++x) {
    for (double t : {0.1, 0.25, 0.5, 0.9}) {
      const double uu = (x + 0.5 + t) / 6.0;
      EXPECT_NEAR(bilinear_sample(f, {uu, 2.5 / 4.0}), (1 - t) * f.at(x, 2) + t * f.at(x + 1, 2), 1e-12);
    }
  }
}

TEST(Bilinear, SentinelPropagatesOnlyFromContributingCorners) {
  ScalarField f(4, 4, 1.0);
  f.at(3, 3) = kUnreachable;
  EXPECT_FALSE(is_reachable(bilinear_sample(f, {0.8, 0.8})));
  EXPECT_TRUE(is_reachable(bilinear_sample(f, {0.2, 0.2})));
  EXPECT_EQ(bilinear_sample(f, pixel_center({2, 3}, 4, 4)), 1.0);
}

TEST(Bilinear, VectorField) {
  FlowFieldGrid f(2, 1, std::vector<Vec2>{{0, 2}, {4, -2}});
  const Vec2 v = bilinear_sample(f, {0.5, 0.5});
  EXPECT_DOUBLE_EQ(v.x, 2.0);
  EXPECT_DOUBLE_EQ(v.y, 0.0);
}

TEST(NormToPixel, Examples) {
  EXPECT_EQ(norm_to_pixel({1.0, 1.0}, 224, 224), (Pixel{223, 223}));
  EXPECT_EQ(norm_to_pixel({0.0, 0.0}, 224, 224), (Pixel{0, 0}));
  EXPECT_EQ(norm_to_pixel({0.5, 0.5}, 224, 224), (Pixel{112, 112}));
}

TEST(NormToPixel, ClampsAndRoundTripsPixelCenters) {
  EXPECT_EQ(norm_to_pixel(NormPoint(-3.0, 7.0), 10, 20), (Pixel{0, 19}));
  for (int w : {1, 7, 50, 100, 128, 200, 224}) {
    for (int x = 0; x < w; ++x) {
      const NormPoint c = pixel_center({x, 0}, w, 1);
      ASSERT_EQ(norm_to_pixel(c, w, 1).x, x);
      const Pixel once = norm_to_pixel(c, w, 1);
      ASSERT_EQ(norm_to_pixel(pixel_center(once, w, 1), w, 1), once);
    }
  }
}

TEST(NormPoint, ClampsOnConstruction) {
  const NormPoint p(-0.5, 1.5);
  EXPECT_EQ(p.u(), 0.0);
  EXPECT_EQ(p.v(), 1.0);
}

}  // namespace
}  // namespace flownav
