#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flownav/field_gen.hpp"
#include "flownav/grid.hpp"
#include "flownav/trajectory.hpp"

namespace flownav {

// FFLD raster file, little-endian:
//   char[4] "FFLD" | u32 version (1) | u32 width | u32 height | u32 channels (1|2)
//   | width * height * channels float32, row-major, channels interleaved.
inline constexpr std::uint32_t kFfldVersion = 1;

struct FieldFile {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint32_t channels = 0;
  std::vector<float> values;
};

std::vector<std::uint8_t> encode_ffld(const ScalarField& field);
std::vector<std::uint8_t> encode_ffld(const FlowFieldGrid& field);
FieldFile decode_ffld(std::span<const std::uint8_t> bytes);

void write_ffld(const std::filesystem::path& path, const ScalarField& field);
void write_ffld(const std::filesystem::path& path, const FlowFieldGrid& field);
FieldFile read_ffld_file(const std::filesystem::path& path);
// Throws kIo when the file does not hold the requested channel count.
ScalarField read_scalar_field(const std::filesystem::path& path);
FlowFieldGrid read_flow_field(const std::filesystem::path& path);

// Scenes: 8-bit grayscale PNG (pixel value = label id) plus a JSON sidecar next
// to it with the same stem (`scene.png` -> `scene.json`) holding the label
// mapping and the instance boxes.
std::filesystem::path sidecar_path(const std::filesystem::path& png_path);
void write_label_png(const std::filesystem::path& path, const Grid<Label>& labels);
Grid<Label> read_label_png(const std::filesystem::path& path);
std::string scene_sidecar_json(const SemanticMap& map, const LabelMapping& mapping);
void save_scene(const std::filesystem::path& png_path, const SemanticMap& map, const LabelMapping& mapping);

struct LoadedScene {
  SemanticMap map;
  LabelMapping mapping;
};
LoadedScene load_scene(const std::filesystem::path& png_path);

// Trajectories: JSON array of [u, v] pairs.
std::string trajectory_json(const Trajectory& traj);
Trajectory parse_trajectory_json(std::string_view text);
void write_trajectory(const std::filesystem::path& path, const Trajectory& traj);
Trajectory read_trajectory(const std::filesystem::path& path);

std::string goal_spec_json(const GoalSpec& spec);
GoalSpec parse_goal_spec_json(std::string_view text);

// Annotation bundle directory: field.ffld, trajectory.json, meta.json.
struct BundleMeta {
  std::string scene;        // path of the scene PNG
  GoalSpec goal;
  std::string instruction;  // surface text, may be empty
  std::uint64_t seed = 0;
  std::string config_json = "{}";  // effective configuration echo
};

struct AnnotationBundle {
  Annotation annotation;
  BundleMeta meta;
};

void save_bundle(const std::filesystem::path& dir, const Annotation& annotation, const BundleMeta& meta);
AnnotationBundle load_bundle(const std::filesystem::path& dir);

std::string read_text_file(const std::filesystem::path& path);
std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path);
// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file_atomic(const std::filesystem::path& path, std::string_view text);

// 64-bit FNV-1a, for golden-output fingerprints.
std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes);
std::string hex64(std::uint64_t value);

}  // namespace flownav
