#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "flownav/field_gen.hpp"
#include "flownav/metrics.hpp"
#include "flownav/rollout.hpp"
#include "flownav/scene_gen.hpp"

namespace flownav {
namespace {

FlowFieldGrid random_field(std::uint32_t seed, int w, int h) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FlowFieldGrid f(w, h);
  for (Vec2& v : f.data()) v = {u(gen), u(gen)};
  return f;
}

TEST(RolloutConfig, Validation) {
  EXPECT_NO_THROW(RolloutConfig{}.validate());
  RolloutConfig c;
  c.steps = 0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.grid_size = 1;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.alpha = 0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.beta = -1;
  EXPECT_THROW(c.validate(), Error);
  for (RolloutMode m : {RolloutMode::kStabilized, RolloutMode::kRawInverse, RolloutMode::kUnitSpeed}) {
    EXPECT_EQ(parse_rollout_mode(to_string(m)), m);
  }
  EXPECT_THROW(parse_rollout_mode("rk4"), Error);
}

TEST(QueryGrid, ResolutionMatchIsIdentity) {
  const FlowFieldGrid f = random_field(1, 16, 16);
  const FlowFieldGrid q = query_grid(AnnotatedFieldProvider(f), 16);
  for (std::size_t i = 0; i < f.size(); ++i) {
    EXPECT_NEAR(q[i].x, f[i].x, 1e-12);
    EXPECT_NEAR(q[i].y, f[i].y, 1e-12);
  }
}

TEST(QueryGrid, ConstantField) {
  const FlowFieldGrid f(30, 20, Vec2{0.25, -0.5});
  for (int g : {2, 7, 50}) {
    const FlowFieldGrid q = query_grid(AnnotatedFieldProvider(f), g);
    for (const Vec2& v : q.data()) {
      EXPECT_DOUBLE_EQ(v.x, 0.25);
      EXPECT_DOUBLE_EQ(v.y, -0.5);
    }
  }
}

TEST(QueryGrid, MatchesDirectSamplesAtCellCenters) {
  const FlowFieldGrid f = random_field(2, 37, 37);
  const AnnotatedFieldProvider provider(f);
  for (int g : {50, 200}) {
    const FlowFieldGrid q = query_grid(provider, g);
    for (int i = 0; i < g; i += 7) {
      for (int j = 0; j < g; j += 5) {
        const Vec2 d = bilinear_sample(f, {(j + 0.5) / g, (i + 0.5) / g});
        EXPECT_EQ(q.at(j, i), d);
      }
    }
    EXPECT_EQ(q, query_grid(provider, g));
  }
}

TEST(FieldValidation, RejectsNonFinite) {
  FlowFieldGrid f(4, 4);
  f.at(1, 2) = {std::nan(""), 0.0};
  EXPECT_THROW(AnnotatedFieldProvider{f}, Error);
  EXPECT_THROW(euler_rollout(f, {0.5, 0.5}, RolloutConfig{}), Error);
  f.at(1, 2) = {0.0, std::numeric_limits<double>::infinity()};
  try {
    validate_field(f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInput);
  }
}

TEST(EulerRollout, ZeroFieldStaysPut) {
  const FlowFieldGrid zero(10, 10);
  for (RolloutMode m : {RolloutMode::kStabilized, RolloutMode::kRawInverse, RolloutMode::kUnitSpeed}) {
    RolloutConfig cfg;
    cfg.mode = m;
    const Trajectory t = euler_rollout(zero, {0.3, 0.7}, cfg);
    ASSERT_EQ(t.size(), 101u);
    for (const NormPoint& p : t.points) EXPECT_EQ(p, NormPoint(0.3, 0.7));
  }
}

TEST(EulerRollout, ConstantFieldMatchesStepSum) {
  const double c = 0.002;
  const FlowFieldGrid f(10, 10, Vec2{c, 0.0});
  const Trajectory t = euler_rollout(f, {0.1, 0.5}, RolloutConfig{});
  double expected = 0.1;
  for (int k = 0; k < 100; ++k) {
    const double tk = k / 100.0;
    expected += c * 0.01 / ((1.0 - tk) + 0.5 * std::pow(tk, 10.0));
  }
  EXPECT_NEAR(t.back().u(), expected, 1e-12);
  EXPECT_EQ(t.back().v(), 0.5);
}

TEST(EulerRollout, RawInverseAndUnitSpeedSteps) {
  const FlowFieldGrid f(10, 10, Vec2{0.001, 0.0});
  RolloutConfig cfg;
  cfg.mode = RolloutMode::kRawInverse;
  const Trajectory r = euler_rollout(f, {0.0, 0.5}, cfg);
  double x = 0.0;
  for (int k = 0; k < 100; ++k) x += 0.001 * 0.01 / (1.0 - k / 100.0);
  EXPECT_NEAR(r.back().u(), x, 1e-12);
  EXPECT_TRUE(std::isfinite(r.back().u()));

  cfg.mode = RolloutMode::kUnitSpeed;
  cfg.steps = 10;
  const Trajectory u = euler_rollout(f, {0.0, 0.5}, cfg);
  EXPECT_NEAR(u.back().u(), 10 * 0.1 * 0.001 / (0.001 + 1e-8), 1e-12);
}

TEST(EulerRollout, ClampsToUnitSquare) {
  const FlowFieldGrid f(8, 8, Vec2{5.0, -5.0});
  for (RolloutMode m : {RolloutMode::kStabilized, RolloutMode::kRawInverse, RolloutMode::kUnitSpeed}) {
    RolloutConfig cfg;
    cfg.mode = m;
    for (const NormPoint& p : euler_rollout(f, {0.5, 0.5}, cfg).points) {
      EXPECT_GE(p.u(), 0.0);
      EXPECT_LE(p.u(), 1.0);
      EXPECT_GE(p.v(), 0.0);
      EXPECT_LE(p.v(), 1.0);
    }
  }
  const Trajectory t = euler_rollout(f, {0.5, 0.5}, RolloutConfig{});
  EXPECT_EQ(t.back(), NormPoint(1.0, 0.0));
}

TEST(EulerRollout, RandomFieldsBoundedAndDeterministic) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::uint32_t s = 0; s < 10; ++s) {
    FlowFieldGrid f = random_field(s, 20, 20);
    for (Vec2& v : f.data()) v = v * 3.0;
    RolloutConfig cfg;
    cfg.steps = 1 + static_cast<int>(s * 17 % 150);
    cfg.mode = static_cast<RolloutMode>(s % 3);
    const NormPoint x0(u(gen), u(gen));
    const Trajectory a = euler_rollout(f, x0, cfg);
    EXPECT_EQ(a.size(), static_cast<std::size_t>(cfg.steps) + 1);
    EXPECT_EQ(a.front(), x0);
    EXPECT_EQ(a, euler_rollout(f, x0, cfg));
  }
}

TEST(Stabilizer, DenominatorPositiveOverSweep) {
  double lo = kUnreachable;
  const int n = 1000000;
  for (int i = 0; i <= n; ++i) lo = std::min(lo, stabilizer_denominator(static_cast<double>(i) / n, 10.0, 0.5));
  EXPECT_GT(lo, 0.0);
  EXPECT_GE(lo, std::min(0.5, lo));
  EXPECT_NEAR(stabilizer_denominator(0.0, 10.0, 0.5), 1.0, 0.0);
  EXPECT_NEAR(stabilizer_denominator(1.0, 10.0, 0.5), 0.5, 0.0);
}


struct Episode {
  Scene scene;
  Annotation annotation;
  BinaryMask obstacles;
  NormPoint start;
};

Episode make_episode(std::uint64_t seed) {
  SceneSpec spec;
  spec.seed = seed;
  Episode e{gen_scene(spec), {}, {}, {}};
  const Instruction ins = gen_instruction(e.scene.map, e.scene.mapping, seed);
  e.annotation = annotate(e.scene.map, e.scene.mapping, ins.spec, AnnotationConfig{}, seed);
  e.obstacles = invert(extract_free(e.scene.map, e.scene.mapping));
  e.start = pixel_center(e.annotation.start, spec.width, spec.height);
  return e;
}

TrajectoryMetrics run(const Episode& e, RolloutMode mode, int g = 100) {
  RolloutConfig cfg;
  cfg.mode = mode;
  cfg.grid_size = g;
  const Trajectory t = euler_rollout(query_grid(AnnotatedFieldProvider(e.annotation.field), g), e.start, cfg);
  return evaluate_trajectory(t, e.annotation.trajectory, e.obstacles);
}

const Episode& golden() {
  static const Episode e = make_episode(42);
  return e;
}

TEST(GoldenRollout, StabilizedReachesGoal) {
  const TrajectoryMetrics m = run(golden(), RolloutMode::kStabilized);
  EXPECT_EQ(m.cr, 0);
  EXPECT_LE(m.fge, 0.05);
}

TEST(GoldenRollout, RawInverseLongerThanStabilized) {
  EXPECT_GT(run(golden(), RolloutMode::kRawInverse).plr, run(golden(), RolloutMode::kStabilized).plr);
}

TEST(GoldenRollout, GridResolutionStability) {
  double lo = kUnreachable;
  double hi = -kUnreachable;
  for (int g : {50, 100, 200}) {
    const double f = run(golden(), RolloutMode::kStabilized, g).fge;
    lo = std::min(lo, f);
    hi = std::max(hi, f);
  }
  EXPECT_LE(hi - lo, 0.03);
}

TEST(GoldenRollout, ModeOrderingOverSeeds) {
  std::vector<double> curv_unit, curv_stab, plr_raw, plr_stab;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Episode e = make_episode(s);
    const TrajectoryMetrics st = run(e, RolloutMode::kStabilized);
    curv_stab.push_back(st.curv);
    plr_stab.push_back(st.plr);
    plr_raw.push_back(run(e, RolloutMode::kRawInverse).plr);
    curv_unit.push_back(run(e, RolloutMode::kUnitSpeed).curv);
  }
  EXPECT_GT(median(curv_unit), median(curv_stab));
  EXPECT_GT(median(plr_raw), median(plr_stab));
}

}  // namespace
}  // namespace flownav
