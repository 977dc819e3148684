#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flownav/field_gen.hpp"
#include "flownav/grid.hpp"

namespace flownav {

// Label ids used by generated scenes.
namespace labels {
inline constexpr Label kFloor = 0;
inline constexpr Label kWall = 1;
inline constexpr Label kChair = 2;
inline constexpr Label kTable = 3;
inline constexpr Label kSofa = 4;
inline constexpr Label kBed = 5;
inline constexpr Label kCabinet = 6;
inline constexpr Label kPlant = 7;
inline constexpr Label kTv = 8;
inline constexpr Label kToilet = 9;
}  // namespace labels

// floor is free; wall and the furniture classes are obstacles; furniture is targetable.
LabelMapping standard_label_mapping();

struct SceneSpec {
  int width = 224;
  int height = 224;
  int n_rooms = 2;
  int n_objects = 4;
  int corridor_width = 16;  // door width and minimum gap around objects, px
  std::vector<Label> object_label_pool{labels::kChair, labels::kTable, labels::kSofa, labels::kBed,
                                       labels::kCabinet, labels::kPlant, labels::kTv, labels::kToilet};
  std::uint64_t seed = 0;

  void validate() const;
};

struct Scene {
  SemanticMap map;
  LabelMapping mapping;
};

inline constexpr int kWallThickness = 6;

// Rooms come from a binary space partition of the interior; every partition
// wall has one door of corridor_width. Objects are axis-aligned rectangles kept
// corridor_width away from walls and each other, so free space stays connected.
// Walls and objects are both recorded as instances (walls first).
// Throws kGeneration when the layout cannot be packed after bounded retries.
Scene gen_scene(const SceneSpec& spec);

enum class OrdinalAxis { kNone, kFromLeft, kFromTop };

struct Instruction {
  std::string text;
  GoalSpec spec;
  std::string verb;
  OrdinalAxis axis = OrdinalAxis::kNone;
};

const std::vector<std::string>& instruction_verbs();

// Picks a targetable instance, a verb and an optional side modifier. Adds an
// ordinal descriptor ("the second from the left side") and sets
// spec.instance_index exactly when the label has several instances.
// Throws kTargetNotFound when the map has no targetable instance.
Instruction gen_instruction(const SemanticMap& map, const LabelMapping& mapping, std::uint64_t seed);

// Surface text for the given slots. `axis` must be kNone iff spec has no
// instance_index.
std::string render_instruction(const std::string& verb, const GoalSpec& spec, OrdinalAxis axis,
                               const SemanticMap& map, const LabelMapping& mapping);

// Inverse of render_instruction under the fixed template grammar. Throws
// kInput for text outside the grammar.
GoalSpec parse_instruction(const std::string& text, const SemanticMap& map, const LabelMapping& mapping);

std::string ordinal_word(std::size_t rank);  // 1 -> "first"

}  // namespace flownav
