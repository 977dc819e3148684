#include <benchmark/benchmark.h>

#include "flownav/distance_transform.hpp"
#include "flownav/field_gen.hpp"
#include "flownav/geodesic.hpp"
#include "flownav/metrics.hpp"
#include "flownav/planner.hpp"
#include "flownav/rollout.hpp"
#include "flownav/scene_gen.hpp"

namespace {

using namespace flownav;

struct Fixture {
  Scene scene;
  GoalSpec goal;
  BinaryMask free;
  Annotation annotation;
};

const Fixture& golden() {
  static const Fixture f = [] {
    SceneSpec spec;
    spec.seed = 42;
    Fixture x{gen_scene(spec), {}, {}, {}};
    x.goal = gen_instruction(x.scene.map, x.scene.mapping, 42).spec;
    x.free = extract_free(x.scene.map, x.scene.mapping);
    x.annotation = annotate(x.scene.map, x.scene.mapping, x.goal, AnnotationConfig{}, 42);
    return x;
  }();
  return f;
}

void BM_DistanceTransform(benchmark::State& state) {
  const BinaryMask& free = golden().free;
  for (auto _ : state) benchmark::DoNotOptimize(distance_to_obstacle(free));
}
BENCHMARK(BM_DistanceTransform)->Unit(benchmark::kMicrosecond);

void BM_Geodesic(benchmark::State& state) {
  const Fixture& f = golden();
  const ScalarField cost = cost_map(dto(f.free), 50.0, 1.0);
  const std::vector<Pixel> goals = compute_goal(f.scene.map, f.free, f.goal, AnnotationConfig{});
  for (auto _ : state) benchmark::DoNotOptimize(geodesic(f.free, cost, goals));
}
BENCHMARK(BM_Geodesic)->Unit(benchmark::kMillisecond);

void BM_Annotate(benchmark::State& state) {
  const Fixture& f = golden();
  for (auto _ : state) {
    benchmark::DoNotOptimize(annotate(f.scene.map, f.scene.mapping, f.goal, AnnotationConfig{}, 42));
  }
}
BENCHMARK(BM_Annotate)->Unit(benchmark::kMillisecond);

void BM_Rollout(benchmark::State& state) {
  const Fixture& f = golden();
  const int g = static_cast<int>(state.range(0));
  const AnnotatedFieldProvider provider(f.annotation.field);
  const NormPoint x0 = pixel_center(f.annotation.start, 224, 224);
  RolloutConfig cfg;
  cfg.grid_size = g;
  for (auto _ : state) benchmark::DoNotOptimize(euler_rollout(query_grid(provider, g), x0, cfg));
}
BENCHMARK(BM_Rollout)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMicrosecond);

void BM_Evaluate(benchmark::State& state) {
  const Fixture& f = golden();
  const BinaryMask obstacles = invert(f.free);
  const Trajectory t = euler_rollout(resample_field(f.annotation.field, 100),
                                     pixel_center(f.annotation.start, 224, 224), RolloutConfig{});
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_trajectory(t, f.annotation.trajectory, obstacles));
}
BENCHMARK(BM_Evaluate)->Unit(benchmark::kMicrosecond);

void BM_PlanEpisode(benchmark::State& state) {
  const Fixture& f = golden();
  for (auto _ : state) {
    benchmark::DoNotOptimize(plan_episode(f.scene.map, f.scene.mapping, f.goal, {0.1, 0.1}, PlannerConfig{}));
  }
}
BENCHMARK(BM_PlanEpisode)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
