#include <gtest/gtest.h>

#include <queue>

#include "flownav/field_gen.hpp"
#include "flownav/io.hpp"
#include "flownav/scene_gen.hpp"

namespace flownav {
namespace {

// Sizes of the 4-connected components of the mask, indexed per pixel.
std::vector<std::size_t> component_sizes(const BinaryMask& free) {
  const int w = free.width();
  const int h = free.height();
  std::vector<int> comp(free.size(), -1);
  std::vector<std::size_t> sizes;
  for (int start = 0; start < w * h; ++start) {
    if (!free.data()[static_cast<std::size_t>(start)] || comp[static_cast<std::size_t>(start)] >= 0) continue;
    const int id = static_cast<int>(sizes.size());
    sizes.push_back(0);
    std::queue<int> q;
    q.push(start);
    comp[static_cast<std::size_t>(start)] = id;
    while (!q.empty()) {
      const int c = q.front();
      q.pop();
      ++sizes.back();
      const int x = c % w;
      const int y = c / w;
      const int nx[4] = {x + 1, x - 1, x, x};
      const int ny[4] = {y, y, y + 1, y - 1};
      for (int k = 0; k < 4; ++k) {
        if (nx[k] < 0 || ny[k] < 0 || nx[k] >= w || ny[k] >= h) continue;
        const auto n = static_cast<std::size_t>(ny[k] * w + nx[k]);
        if (free.data()[n] && comp[n] < 0) {
          comp[n] = id;
          q.push(static_cast<int>(n));
        }
      }
    }
  }
  std::vector<std::size_t> out(free.size(), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (comp[i] >= 0) out[i] = sizes[static_cast<std::size_t>(comp[i])];
  }
  return out;
}

TEST(SceneSpec, Validation) {
  EXPECT_NO_THROW(SceneSpec{}.validate());
  SceneSpec s;
  s.width = 31;
  EXPECT_THROW(s.validate(), Error);
  s = {};
  s.corridor_width = 2;
  EXPECT_THROW(s.validate(), Error);
  s = {};
  s.object_label_pool = {labels::kWall};
  EXPECT_THROW(s.validate(), Error);
}

TEST(GenScene, SingleEmptyRoom) {
  SceneSpec s;
  s.n_rooms = 1;
  s.n_objects = 0;
  s.width = 40;
  s.height = 36;
  const Scene scene = gen_scene(s);
  for (int y = 0; y < s.height; ++y) {
    for (int x = 0; x < s.width; ++x) {
      const bool border = x < kWallThickness || y < kWallThickness || x >= s.width - kWallThickness ||
                          y >= s.height - kWallThickness;
      EXPECT_EQ(scene.map.labels.at(x, y), border ? labels::kWall : labels::kFloor) << x << "," << y;
    }
  }
  for (const ObjectInstance& inst : scene.map.instances) EXPECT_EQ(inst.label, labels::kWall);
}

TEST(GenScene, DeterministicPerSeed) {
  SceneSpec s;
  s.seed = 42;
  const Scene a = gen_scene(s);
  const Scene b = gen_scene(s);
  EXPECT_EQ(a.map, b.map);
  EXPECT_EQ(a.mapping, b.mapping);
  const auto dir = std::filesystem::temp_directory_path() / "flownav_scene_det";
  std::filesystem::create_directories(dir);
  save_scene(dir / "a.png", a.map, a.mapping);
  save_scene(dir / "b.png", b.map, b.mapping);
  EXPECT_EQ(read_binary_file(dir / "a.png"), read_binary_file(dir / "b.png"));
  std::filesystem::remove_all(dir);
  s.seed = 43;
  EXPECT_NE(gen_scene(s).map, a.map);
}

TEST(GenScene, ConnectivityAudit) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    SceneSpec s;
    s.seed = seed;
    const Scene scene = gen_scene(s);
    const BinaryMask free = extract_free(scene.map, scene.mapping);
    const double total = static_cast<double>(count_set(free));
    const std::vector<std::size_t> sizes = component_sizes(free);
    std::size_t worst = free.size();
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      if (free.data()[i]) worst = std::min(worst, sizes[i]);
    }
    EXPECT_GE(static_cast<double>(worst), 0.95 * total) << "seed " << seed;
  }
}

TEST(GenScene, ObjectsRecordedAndTouchFreeSpace) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    SceneSpec s;
    s.seed = seed;
    const Scene scene = gen_scene(s);
    scene.map.validate(scene.mapping);
    const BinaryMask free = extract_free(scene.map, scene.mapping);
    int objects = 0;
    for (const ObjectInstance& inst : scene.map.instances) {
      if (!scene.mapping.is_targetable(inst.label)) continue;
      ++objects;
      bool adjacent = false;
      for (int y = inst.bbox.ymin; y < inst.bbox.ymax; ++y) {
        for (int x = inst.bbox.xmin; x < inst.bbox.xmax; ++x) {
          EXPECT_EQ(scene.map.labels.at(x, y), inst.label);
          for (const auto& [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
            const int nx = x + dx;
            const int ny = y + dy;
            if (nx >= 0 && ny >= 0 && nx < s.width && ny < s.height && free.at(nx, ny)) adjacent = true;
          }
        }
      }
      EXPECT_TRUE(adjacent) << "seed " << seed;
    }
    EXPECT_EQ(objects, s.n_objects) << "seed " << seed;
  }
}

TEST(GenScene, EveryTargetAnnotates) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    SceneSpec s;
    s.seed = seed;
    const Scene scene = gen_scene(s);
    for (std::size_t i = 0; i < scene.map.instances.size(); ++i) {
      const ObjectInstance& inst = scene.map.instances[i];
      if (!scene.mapping.is_targetable(inst.label)) continue;
      GoalSpec spec;
      spec.target_label = inst.label;
      spec.instance_index = i;
      EXPECT_NO_THROW(annotate(scene.map, scene.mapping, spec, AnnotationConfig{}, seed))
          << "seed " << seed << " label " << int(inst.label);
    }
  }
}

TEST(GenScene, InfeasiblePackingNamesConstraint) {
  SceneSpec s;
  s.width = 40;
  s.height = 40;
  s.n_rooms = 1;
  s.n_objects = 30;
  try {
    gen_scene(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kGeneration);
    EXPECT_NE(std::string(e.what()).find("clearance"), std::string::npos);
  }
  s.n_rooms = 6;
  s.n_objects = 0;
  try {
    gen_scene(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kGeneration);
    EXPECT_NE(std::string(e.what()).find("rooms"), std::string::npos);
  }
}

SemanticMap map_with(const std::vector<PixelBox>& boxes, const std::vector<Label>& ls) {
  SemanticMap m{Grid<Label>(64, 64, labels::kFloor), {}};
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    for (int y = boxes[i].ymin; y < boxes[i].ymax; ++y) {
      for (int x = boxes[i].xmin; x < boxes[i].xmax; ++x) m.labels.at(x, y) = ls[i];
    }
    m.instances.push_back(make_instance(ls[i], boxes[i]));
  }
  return m;
}

TEST(GenInstruction, SingleChair) {
  const LabelMapping mapping = standard_label_mapping();
  const SemanticMap m = map_with({{20, 20, 30, 30}}, {labels::kChair});
  bool saw_none = false;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Instruction ins = gen_instruction(m, mapping, seed);
    EXPECT_NE(ins.text.find("chair"), std::string::npos);
    EXPECT_EQ(ins.spec.target_label, labels::kChair);
    EXPECT_FALSE(ins.spec.instance_index.has_value());
    if (ins.spec.side == Side::kNone) {
      saw_none = true;
      EXPECT_EQ(ins.text.find("spot"), std::string::npos);
    }
  }
  EXPECT_TRUE(saw_none);
}

TEST(GenInstruction, TwoChairsGetOrdinal) {
  const LabelMapping mapping = standard_label_mapping();
  const SemanticMap m = map_with({{5, 20, 15, 30}, {40, 20, 50, 30}}, {labels::kChair, labels::kChair});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Instruction ins = gen_instruction(m, mapping, seed);
    ASSERT_TRUE(ins.spec.instance_index.has_value());
    EXPECT_NE(ins.axis, OrdinalAxis::kNone);
    const bool first = ins.text.find("first") != std::string::npos;
    const bool second = ins.text.find("second") != std::string::npos;
    EXPECT_NE(first, second);
    if (ins.axis == OrdinalAxis::kFromLeft) {
      EXPECT_EQ(*ins.spec.instance_index, first ? 0u : 1u) << ins.text;
    }
  }
}

TEST(GenInstruction, RenderExample) {
  const LabelMapping mapping = standard_label_mapping();
  const SemanticMap m = map_with({{5, 40, 15, 50}, {40, 5, 50, 15}}, {labels::kSofa, labels::kSofa});
  GoalSpec spec;
  spec.target_label = labels::kSofa;
  spec.instance_index = 0;
  spec.side = Side::kLeft;
  EXPECT_EQ(render_instruction("Go to", spec, OrdinalAxis::kFromTop, m, mapping),
            "Go to the spot left of the sofa, the second from the upper side.");
  EXPECT_EQ(render_instruction("Go to", spec, OrdinalAxis::kFromLeft, m, mapping),
            "Go to the spot left of the sofa, the first from the left side.");
  EXPECT_THROW(parse_instruction("Fly to the sofa.", m, mapping), Error);
  EXPECT_THROW(parse_instruction("Go to the sofa", m, mapping), Error);
}

TEST(GenInstruction, NoTargetsThrows) {
  const LabelMapping mapping = standard_label_mapping();
  const SemanticMap m = map_with({{0, 0, 64, 2}}, {labels::kWall});
  try {
    gen_instruction(m, mapping, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kTargetNotFound);
  }
}

TEST(GenInstruction, TemplateRoundTrip) {
  int generated = 0;
  for (std::uint64_t seed = 0; generated < 1000; ++seed) {
    SceneSpec s;
    s.seed = seed % 40;
    s.n_objects = 4 + static_cast<int>(seed % 3);
    const Scene scene = gen_scene(s);
    const Instruction ins = gen_instruction(scene.map, scene.mapping, seed);
    const std::string text = render_instruction(ins.verb, ins.spec, ins.axis, scene.map, scene.mapping);
    EXPECT_EQ(text, ins.text);
    EXPECT_EQ(parse_instruction(text, scene.map, scene.mapping), ins.spec) << text;
    ++generated;
  }
}

TEST(Ordinals, Words) {
  EXPECT_EQ(ordinal_word(1), "first");
  EXPECT_EQ(ordinal_word(10), "tenth");
  EXPECT_EQ(ordinal_word(11), "11th");
  EXPECT_EQ(ordinal_word(22), "22nd");
}

}  // namespace
}  // namespace flownav
