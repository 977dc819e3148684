#include "flownav/io.hpp"

#include <png.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"

namespace flownav {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

Error io_error(const std::string& what) { return Error(ErrorKind::kIo, what); }

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[at + i]) << (8 * i);
  return v;
}

void put_f32(std::vector<std::uint8_t>& out, double value) {
  put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(value)));
}

std::vector<std::uint8_t> ffld_header(int w, int h, std::uint32_t channels) {
  std::vector<std::uint8_t> out{'F', 'F', 'L', 'D'};
  put_u32(out, kFfldVersion);
  put_u32(out, static_cast<std::uint32_t>(w));
  put_u32(out, static_cast<std::uint32_t>(h));
  put_u32(out, channels);
  out.reserve(out.size() + static_cast<std::size_t>(w) * h * channels * 4);
  return out;
}

}  // namespace

std::vector<std::uint8_t> encode_ffld(const ScalarField& field) {
  auto out = ffld_header(field.width(), field.height(), 1);
  for (double v : field.data()) put_f32(out, v);
  return out;
}

std::vector<std::uint8_t> encode_ffld(const FlowFieldGrid& field) {
  auto out = ffld_header(field.width(), field.height(), 2);
  for (const Vec2& v : field.data()) {
    put_f32(out, v.x);
    put_f32(out, v.y);
  }
  return out;
}

FieldFile decode_ffld(std::span<const std::uint8_t> bytes) {
  constexpr std::size_t kHeader = 20;
  if (bytes.size() < kHeader || std::memcmp(bytes.data(), "FFLD", 4) != 0) {
    throw io_error("FFLD: bad magic");
  }
  FieldFile f;
  const std::uint32_t version = get_u32(bytes, 4);
  if (version != kFfldVersion) throw io_error("FFLD: unsupported version " + std::to_string(version));
  f.width = get_u32(bytes, 8);
  f.height = get_u32(bytes, 12);
  f.channels = get_u32(bytes, 16);
  if (f.channels != 1 && f.channels != 2) throw io_error("FFLD: channels must be 1 or 2");
  const std::size_t count = static_cast<std::size_t>(f.width) * f.height * f.channels;
  if (bytes.size() != kHeader + 4 * count) throw io_error("FFLD: payload size does not match header");
  f.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    f.values[i] = std::bit_cast<float>(get_u32(bytes, kHeader + 4 * i));
  }
  return f;
}

void write_ffld(const fs::path& path, const ScalarField& field) { write_file_atomic(path, encode_ffld(field)); }
void write_ffld(const fs::path& path, const FlowFieldGrid& field) { write_file_atomic(path, encode_ffld(field)); }

FieldFile read_ffld_file(const fs::path& path) {
  try {
    return decode_ffld(read_binary_file(path));
  } catch (const Error& e) {
    throw io_error(path.string() + ": " + e.what());
  }
}

ScalarField read_scalar_field(const fs::path& path) {
  FieldFile f = read_ffld_file(path);
  if (f.channels != 1) throw io_error(path.string() + ": expected a 1-channel FFLD field");
  std::vector<double> data(f.values.begin(), f.values.end());
  return ScalarField(static_cast<int>(f.width), static_cast<int>(f.height), std::move(data));
}

FlowFieldGrid read_flow_field(const fs::path& path) {
  FieldFile f = read_ffld_file(path);
  if (f.channels != 2) throw io_error(path.string() + ": expected a 2-channel FFLD field");
  std::vector<Vec2> data(f.values.size() / 2);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = {f.values[2 * i], f.values[2 * i + 1]};
  return FlowFieldGrid(static_cast<int>(f.width), static_cast<int>(f.height), std::move(data));
}

// --- scenes -------------------------------------------------------------------

fs::path sidecar_path(const fs::path& png_path) {
  fs::path p = png_path;
  return p.replace_extension(".json");
}

void write_label_png(const fs::path& path, const Grid<Label>& labels) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(labels.width());
  image.height = static_cast<png_uint_32>(labels.height());
  image.format = PNG_FORMAT_GRAY;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, labels.data().data(), 0, nullptr)) {
    throw io_error(path.string() + ": PNG encode failed: " + image.message);
  }
  std::vector<std::uint8_t> buffer(size);
  if (!png_image_write_to_memory(&image, buffer.data(), &size, 0, labels.data().data(), 0, nullptr)) {
    throw io_error(path.string() + ": PNG encode failed: " + image.message);
  }
  buffer.resize(size);
  write_file_atomic(path, buffer);
}

Grid<Label> read_label_png(const fs::path& path) {
  const std::vector<std::uint8_t> bytes = read_binary_file(path);
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw io_error(path.string() + ": not a readable PNG: " + image.message);
  }
  if (image.format != PNG_FORMAT_GRAY) {
    png_image_free(&image);
    throw io_error(path.string() + ": label PNG must be 8-bit single-channel");
  }
  std::vector<Label> data(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, data.data(), 0, nullptr)) {
    throw io_error(path.string() + ": PNG decode failed: " + image.message);
  }
  return Grid<Label>(static_cast<int>(image.width), static_cast<int>(image.height), std::move(data));
}

namespace {

json mapping_to_json(const LabelMapping& m) {
  json names = json::object();
  for (const auto& [label, name] : m.names) names[std::to_string(label)] = name;
  return {{"free", m.free_labels},
          {"obstacle", m.obstacle_labels},
          {"targetable", m.targetable_labels},
          {"names", names}};
}

LabelMapping mapping_from_json(const json& j) {
  LabelMapping m;
  m.free_labels = j.at("free").get<std::set<Label>>();
  m.obstacle_labels = j.at("obstacle").get<std::set<Label>>();
  m.targetable_labels = j.at("targetable").get<std::set<Label>>();
  for (const auto& [key, value] : j.at("names").items()) {
    m.names[static_cast<Label>(std::stoi(key))] = value.get<std::string>();
  }
  return m;
}

json goal_to_json(const GoalSpec& g) {
  json j{{"target_label", g.target_label}, {"side", to_string(g.side)}};
  j["instance_index"] = g.instance_index ? json(*g.instance_index) : json(nullptr);
  return j;
}

GoalSpec goal_from_json(const json& j) {
  GoalSpec g;
  g.target_label = j.at("target_label").get<Label>();
  if (j.contains("instance_index") && !j.at("instance_index").is_null()) {
    g.instance_index = j.at("instance_index").get<std::size_t>();
  }
  g.side = parse_side(j.value("side", std::string("none")));
  return g;
}

json parse_json(std::string_view text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw io_error(what + ": invalid JSON: " + e.what());
  }
}

template <typename F>
auto with_schema(const std::string& what, F&& body) {
  try {
    return body();
  } catch (const json::exception& e) {
    throw io_error(what + ": unexpected JSON layout: " + e.what());
  }
}

}  // namespace

std::string scene_sidecar_json(const SemanticMap& map, const LabelMapping& mapping) {
  json instances = json::array();
  for (const auto& inst : map.instances) {
    instances.push_back({{"label", inst.label},
                         {"bbox", {inst.bbox.xmin, inst.bbox.ymin, inst.bbox.xmax, inst.bbox.ymax}},
                         {"center", {inst.center.x, inst.center.y}}});
  }
  const json j{{"format", "flownav-scene"},
               {"version", 1},
               {"width", map.width()},
               {"height", map.height()},
               {"labels", mapping_to_json(mapping)},
               {"instances", instances}};
  return j.dump(2) + "\n";
}

void save_scene(const fs::path& png_path, const SemanticMap& map, const LabelMapping& mapping) {
  write_label_png(png_path, map.labels);
  write_file_atomic(sidecar_path(png_path), scene_sidecar_json(map, mapping));
}

LoadedScene load_scene(const fs::path& png_path) {
  LoadedScene scene;
  scene.map.labels = read_label_png(png_path);
  const fs::path side = sidecar_path(png_path);
  const json j = parse_json(read_text_file(side), side.string());
  with_schema(side.string(), [&] {
    if (j.at("width").get<int>() != scene.map.width() || j.at("height").get<int>() != scene.map.height()) {
      throw io_error(side.string() + ": sidecar dimensions do not match the PNG");
    }
    scene.mapping = mapping_from_json(j.at("labels"));
    for (const auto& inst : j.at("instances")) {
      const auto b = inst.at("bbox").get<std::vector<int>>();
      const auto c = inst.at("center").get<std::vector<int>>();
      if (b.size() != 4 || c.size() != 2) throw io_error(side.string() + ": malformed instance");
      scene.map.instances.push_back({inst.at("label").get<Label>(), {b[0], b[1], b[2], b[3]}, {c[0], c[1]}});
    }
    return 0;
  });
  scene.mapping.validate();
  scene.map.validate(scene.mapping);
  return scene;
}

// --- trajectories ---------------------------------------------------------------

std::string trajectory_json(const Trajectory& traj) {
  json arr = json::array();
  for (const NormPoint& p : traj.points) arr.push_back({p.u(), p.v()});
  return arr.dump() + "\n";
}

Trajectory parse_trajectory_json(std::string_view text) {
  const json j = parse_json(text, "trajectory");
  return with_schema("trajectory", [&] {
    Trajectory t;
    for (const auto& p : j) {
      if (p.size() != 2) throw io_error("trajectory: every point must be [u, v]");
      const double u = p.at(0).get<double>();
      const double v = p.at(1).get<double>();
      if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0)) {
        throw Error(ErrorKind::kInput, "trajectory: point outside [0,1]^2");
      }
      t.points.emplace_back(u, v);
    }
    return t;
  });
}

void write_trajectory(const fs::path& path, const Trajectory& traj) {
  write_file_atomic(path, trajectory_json(traj));
}

Trajectory read_trajectory(const fs::path& path) {
  try {
    return parse_trajectory_json(read_text_file(path));
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::string goal_spec_json(const GoalSpec& spec) { return goal_to_json(spec).dump(); }

GoalSpec parse_goal_spec_json(std::string_view text) {
  const json j = parse_json(text, "goal spec");
  return with_schema("goal spec", [&] { return goal_from_json(j); });
}

// --- bundles --------------------------------------------------------------------

void save_bundle(const fs::path& dir, const Annotation& annotation, const BundleMeta& meta) {
  fs::create_directories(dir);
  write_ffld(dir / "field.ffld", annotation.field);
  write_trajectory(dir / "trajectory.json", annotation.trajectory);
  json goals = json::array();
  for (const Pixel& p : annotation.goal_pixels) goals.push_back({p.x, p.y});
  const json j{{"scene", meta.scene},
               {"goal", goal_to_json(meta.goal)},
               {"instruction", meta.instruction},
               {"seed", meta.seed},
               {"start", {annotation.start.x, annotation.start.y}},
               {"start_relaxed", annotation.start_relaxed},
               {"dropped_goals", annotation.dropped_goals},
               {"goal_pixels", goals},
               {"config", parse_json(meta.config_json, "config echo")}};
  write_file_atomic(dir / "meta.json", j.dump(2) + "\n");
}

AnnotationBundle load_bundle(const fs::path& dir) {
  AnnotationBundle b;
  b.annotation.field = read_flow_field(dir / "field.ffld");
  b.annotation.trajectory = read_trajectory(dir / "trajectory.json");
  const fs::path meta_path = dir / "meta.json";
  const json j = parse_json(read_text_file(meta_path), meta_path.string());
  with_schema(meta_path.string(), [&] {
    b.meta.scene = j.at("scene").get<std::string>();
    b.meta.goal = goal_from_json(j.at("goal"));
    b.meta.instruction = j.value("instruction", std::string());
    b.meta.seed = j.at("seed").get<std::uint64_t>();
    b.meta.config_json = j.at("config").dump();
    const auto s = j.at("start").get<std::vector<int>>();
    b.annotation.start = {s.at(0), s.at(1)};
    b.annotation.start_relaxed = j.value("start_relaxed", 0);
    b.annotation.dropped_goals = j.value("dropped_goals", std::size_t{0});
    for (const auto& p : j.at("goal_pixels")) b.annotation.goal_pixels.push_back({p.at(0), p.at(1)});
    return 0;
  });
  return b;
}

// --- files ----------------------------------------------------------------------

std::vector<std::uint8_t> read_binary_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const fs::path& path, std::span<const std::uint8_t> bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw io_error("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw io_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

void write_file_atomic(const fs::path& path, std::string_view text) {
  write_file_atomic(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, value >>= 4) s[static_cast<std::size_t>(i)] = digits[value & 0xF];
  return s;
}

}  // namespace flownav
