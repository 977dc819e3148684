#include <gtest/gtest.h>

#include <cstring>
#include <random>

#include "flownav/io.hpp"
#include "flownav/scene_gen.hpp"

namespace flownav {
namespace {

namespace fs = std::filesystem;

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("flownav_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

FlowFieldGrid float_valued_field(std::uint32_t seed, int w, int h) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<float> u(-3.0f, 3.0f);
  FlowFieldGrid f(w, h);
  for (Vec2& v : f.data()) v = {u(gen), u(gen)};
  return f;
}

TEST(Ffld, HeaderLayout) {
  const ScalarField s(3, 2, 1.5);
  const std::vector<std::uint8_t> b = encode_ffld(s);
  ASSERT_EQ(b.size(), 20u + 6u * 4u);
  EXPECT_EQ(std::string(b.begin(), b.begin() + 4), "FFLD");
  const auto u32 = [&](std::size_t at) {
    return static_cast<std::uint32_t>(b[at] | b[at + 1] << 8 | b[at + 2] << 16 | b[at + 3] << 24);
  };
  EXPECT_EQ(u32(4), 1u);
  EXPECT_EQ(u32(8), 3u);
  EXPECT_EQ(u32(12), 2u);
  EXPECT_EQ(u32(16), 1u);
  float first = 0.0f;
  std::memcpy(&first, b.data() + 20, 4);
  EXPECT_EQ(first, 1.5f);
}

TEST(Ffld, VectorRoundTripBitExact) {
  const FlowFieldGrid f = float_valued_field(1, 7, 5);
  const FieldFile file = decode_ffld(encode_ffld(f));
  EXPECT_EQ(file.width, 7u);
  EXPECT_EQ(file.height, 5u);
  EXPECT_EQ(file.channels, 2u);
  for (std::size_t i = 0; i < f.size(); ++i) {
    EXPECT_EQ(file.values[2 * i], static_cast<float>(f[i].x));
    EXPECT_EQ(file.values[2 * i + 1], static_cast<float>(f[i].y));
  }
}

TEST_F(TempDir, FfldFileRoundTrip) {
  const FlowFieldGrid f = float_valued_field(2, 13, 9);
  write_ffld(dir_ / "f.ffld", f);
  EXPECT_EQ(read_flow_field(dir_ / "f.ffld"), f);
  ScalarField s(4, 4);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<float>(i) * 0.25f;
  write_ffld(dir_ / "s.ffld", s);
  EXPECT_EQ(read_scalar_field(dir_ / "s.ffld"), s);
  EXPECT_THROW(read_scalar_field(dir_ / "f.ffld"), Error);
  EXPECT_THROW(read_flow_field(dir_ / "s.ffld"), Error);
}

TEST(Ffld, RejectsCorruptInput) {
  std::vector<std::uint8_t> b = encode_ffld(ScalarField(2, 2, 0.0));
  std::vector<std::uint8_t> bad = b;
  bad[0] = 'X';
  try {
    decode_ffld(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIo);
    EXPECT_NE(std::string(e.what()).find("magic"), std::string::npos);
  }
  bad = b;
  bad[4] = 2;
  EXPECT_THROW(decode_ffld(bad), Error);
  bad = b;
  bad.pop_back();
  EXPECT_THROW(decode_ffld(bad), Error);
  EXPECT_THROW(decode_ffld(std::vector<std::uint8_t>(3, 0)), Error);
}

TEST_F(TempDir, SceneRoundTrip) {
  for (std::uint64_t seed : {0ull, 42ull}) {
    SceneSpec spec;
    spec.seed = seed;
    const Scene scene = gen_scene(spec);
    const fs::path png = dir_ / ("scene" + std::to_string(seed) + ".png");
    save_scene(png, scene.map, scene.mapping);
    EXPECT_TRUE(fs::exists(sidecar_path(png)));
    const LoadedScene loaded = load_scene(png);
    EXPECT_EQ(loaded.map, scene.map);
    EXPECT_EQ(loaded.mapping, scene.mapping);
  }
  EXPECT_EQ(sidecar_path("a/b/x.png"), fs::path("a/b/x.json"));
}

TEST_F(TempDir, LabelPngRejectsGarbage) {
  write_file_atomic(dir_ / "bad.png", std::string_view("not a png"));
  EXPECT_THROW(read_label_png(dir_ / "bad.png"), Error);
  EXPECT_THROW(load_scene(dir_ / "missing.png"), Error);
}

TEST_F(TempDir, TrajectoryRoundTrip) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Trajectory t;
  for (int i = 0; i < 101; ++i) t.points.emplace_back(u(gen), u(gen));
  t.points.emplace_back(0.0, 1.0);
  EXPECT_EQ(parse_trajectory_json(trajectory_json(t)), t);
  write_trajectory(dir_ / "t.json", t);
  EXPECT_EQ(read_trajectory(dir_ / "t.json"), t);
}

TEST(TrajectoryJson, Validation) {
  EXPECT_EQ(parse_trajectory_json("[[0.25, 0.5], [1, 0]]").size(), 2u);
  EXPECT_THROW(parse_trajectory_json("[[0.25]]"), Error);
  EXPECT_THROW(parse_trajectory_json("{\"u\": 1}"), Error);
  EXPECT_THROW(parse_trajectory_json("[[0.5, 1.5]]"), Error);
  EXPECT_THROW(parse_trajectory_json("[[0.5, 0.5"), Error);
}

TEST(GoalSpecJson, RoundTrip) {
  GoalSpec g;
  g.target_label = 4;
  g.instance_index = 7;
  g.side = Side::kBottom;
  EXPECT_EQ(parse_goal_spec_json(goal_spec_json(g)), g);
  GoalSpec h;
  h.target_label = 2;
  EXPECT_EQ(parse_goal_spec_json(goal_spec_json(h)), h);
}

TEST_F(TempDir, BundleRoundTrip) {
  SceneSpec spec;
  spec.seed = 42;
  const Scene scene = gen_scene(spec);
  const Instruction ins = gen_instruction(scene.map, scene.mapping, 42);
  const Annotation a = annotate(scene.map, scene.mapping, ins.spec, AnnotationConfig{}, 42);
  const BundleMeta meta{"/data/scene.png", ins.spec, ins.text, 42, R"({"rollout":{"steps":100}})"};
  save_bundle(dir_ / "b", a, meta);
  const AnnotationBundle b = load_bundle(dir_ / "b");
  EXPECT_EQ(b.meta.scene, meta.scene);
  EXPECT_EQ(b.meta.goal, meta.goal);
  EXPECT_EQ(b.meta.instruction, meta.instruction);
  EXPECT_EQ(b.meta.seed, 42u);
  EXPECT_EQ(b.meta.config_json, meta.config_json);
  EXPECT_EQ(b.annotation.trajectory, a.trajectory);
  EXPECT_EQ(b.annotation.start, a.start);
  EXPECT_EQ(b.annotation.goal_pixels, a.goal_pixels);
  ASSERT_EQ(b.annotation.field.size(), a.field.size());
  for (std::size_t i = 0; i < a.field.size(); ++i) {
    EXPECT_EQ(b.annotation.field[i].x, static_cast<double>(static_cast<float>(a.field[i].x)));
    EXPECT_EQ(b.annotation.field[i].y, static_cast<double>(static_cast<float>(a.field[i].y)));
  }
  save_bundle(dir_ / "c", b.annotation, b.meta);
  EXPECT_EQ(read_binary_file(dir_ / "b" / "field.ffld"), read_binary_file(dir_ / "c" / "field.ffld"));
  EXPECT_EQ(read_text_file(dir_ / "b" / "meta.json"), read_text_file(dir_ / "c" / "meta.json"));
}

TEST_F(TempDir, AtomicWriteReplacesWithoutLeftovers) {
  const fs::path p = dir_ / "sub" / "out.txt";
  write_file_atomic(p, std::string_view("first"));
  write_file_atomic(p, std::string_view("second"));
  EXPECT_EQ(read_text_file(p), "second");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(p.parent_path())) ++entries;
  EXPECT_EQ(entries, 1u);
  EXPECT_THROW(read_text_file(dir_ / "absent"), Error);
}

TEST(Fnv, KnownVectors) {
  const auto h = [](std::string_view s) {
    return fnv1a64(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
  };
  EXPECT_EQ(h(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(h("a"), 0xaf63dc4c8601ec8cull);
  EXPECT_EQ(h("foobar"), 0x85944171f73967e8ull);
  EXPECT_EQ(hex64(0xabcull), "0000000000000abc");
}

}  // namespace
}  // namespace flownav
