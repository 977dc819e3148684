#include "flownav/scene_gen.hpp"

#include <algorithm>
#include <array>
#include <string_view>

#include "flownav/rng.hpp"

namespace flownav {

LabelMapping standard_label_mapping() {
  using namespace labels;
  LabelMapping m;
  m.free_labels = {kFloor};
  m.obstacle_labels = {kWall, kChair, kTable, kSofa, kBed, kCabinet, kPlant, kTv, kToilet};
  m.targetable_labels = {kChair, kTable, kSofa, kBed, kCabinet, kPlant, kTv, kToilet};
  m.names = {{kFloor, "floor"}, {kWall, "wall"},       {kChair, "chair"}, {kTable, "table"},
             {kSofa, "sofa"},   {kBed, "bed"},         {kCabinet, "cabinet"},
             {kPlant, "plant"}, {kTv, "tv"},           {kToilet, "toilet"}};
  return m;
}

void SceneSpec::validate() const {
  if (width < 32 || height < 32) throw Error(ErrorKind::kConfig, "generator: width and height must be >= 32");
  if (corridor_width < 3) throw Error(ErrorKind::kConfig, "generator: corridor_width must be >= 3");
  if (n_rooms < 1) throw Error(ErrorKind::kConfig, "generator: n_rooms must be >= 1");
  if (n_objects < 0) throw Error(ErrorKind::kConfig, "generator: n_objects must be >= 0");
  if (n_objects > 0 && object_label_pool.empty()) {
    throw Error(ErrorKind::kConfig, "generator: object_label_pool is empty");
  }
  const LabelMapping mapping = standard_label_mapping();
  for (Label l : object_label_pool) {
    if (!mapping.is_targetable(l)) {
      throw Error(ErrorKind::kConfig, "generator: object_label_pool holds non-targetable label " + std::to_string(l));
    }
  }
}

namespace {

bool overlaps(const PixelBox& a, const PixelBox& b) {
  return a.xmin < b.xmax && b.xmin < a.xmax && a.ymin < b.ymax && b.ymin < a.ymax;
}

PixelBox grow(const PixelBox& b, int m) { return {b.xmin - m, b.ymin - m, b.xmax + m, b.ymax + m}; }

void fill(SemanticMap& map, const PixelBox& b, Label label) {
  for (int y = b.ymin; y < b.ymax; ++y) {
    for (int x = b.xmin; x < b.xmax; ++x) map.labels.at(x, y) = label;
  }
}

void add_wall(SemanticMap& map, const PixelBox& b) {
  if (b.width() <= 0 || b.height() <= 0) return;
  fill(map, b, labels::kWall);
  map.instances.push_back(make_instance(labels::kWall, b));
}

struct Partition {
  std::vector<PixelBox> rooms;
  std::vector<PixelBox> walls;
  std::vector<PixelBox> doors;
};

// Splits the largest splittable room until `n_rooms` exist.
Partition partition_rooms(const SceneSpec& spec, Rng& rng) {
  const int t = kWallThickness;
  const int cw = spec.corridor_width;
  const int min_room = std::max(32, 2 * cw + 8);
  Partition part;
  part.rooms.push_back({t, t, spec.width - t, spec.height - t});

  while (static_cast<int>(part.rooms.size()) < spec.n_rooms) {
    std::vector<std::size_t> order(part.rooms.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const auto area = [&](std::size_t i) { return part.rooms[i].width() * part.rooms[i].height(); };
      return area(a) > area(b);
    });

    bool split = false;
    for (std::size_t leaf : order) {
      const PixelBox room = part.rooms[leaf];
      const bool vertical = room.width() >= room.height();
      const int lo = (vertical ? room.xmin : room.ymin) + min_room;
      const int hi = (vertical ? room.xmax : room.ymax) - min_room - t;
      const int span_lo = vertical ? room.ymin : room.xmin;
      const int span_hi = vertical ? room.ymax : room.xmax;
      if (hi < lo || span_hi - span_lo < cw + 2) continue;

      for (int attempt = 0; attempt < 64 && !split; ++attempt) {
        const int p = rng.between(lo, hi);
        const PixelBox wall = vertical ? PixelBox{p, room.ymin, p + t, room.ymax}
                                       : PixelBox{room.xmin, p, room.xmax, p + t};
        const bool blocks_door = std::any_of(part.doors.begin(), part.doors.end(), [&](const PixelBox& d) {
          return overlaps(grow(wall, cw / 2 + 1), d);
        });
        if (blocks_door) continue;

        const int g = rng.between(span_lo + 1, span_hi - cw - 1);
        const PixelBox door = vertical ? PixelBox{p, g, p + t, g + cw} : PixelBox{g, p, g + cw, p + t};
        if (vertical) {
          part.walls.push_back({p, room.ymin, p + t, g});
          part.walls.push_back({p, g + cw, p + t, room.ymax});
          part.rooms[leaf] = {room.xmin, room.ymin, p, room.ymax};
          part.rooms.push_back({p + t, room.ymin, room.xmax, room.ymax});
        } else {
          part.walls.push_back({room.xmin, p, g, p + t});
          part.walls.push_back({g + cw, p, room.xmax, p + t});
          part.rooms[leaf] = {room.xmin, room.ymin, room.xmax, p};
          part.rooms.push_back({room.xmin, p + t, room.xmax, room.ymax});
        }
        part.doors.push_back(door);
        split = true;
      }
      if (split) break;
    }
    if (!split) {
      throw Error(ErrorKind::kGeneration, "generator: cannot partition the map into " +
                                              std::to_string(spec.n_rooms) + " rooms of at least " +
                                              std::to_string(min_room) + " px");
    }
  }
  return part;
}

}  // namespace

Scene gen_scene(const SceneSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  Scene scene{{Grid<Label>(spec.width, spec.height, labels::kFloor), {}}, standard_label_mapping()};
  SemanticMap& map = scene.map;
  const int t = kWallThickness;
  const int w = spec.width;
  const int h = spec.height;

  add_wall(map, {0, 0, w, t});
  add_wall(map, {0, h - t, w, h});
  add_wall(map, {0, t, t, h - t});
  add_wall(map, {w - t, t, w, h - t});

  const Partition part = partition_rooms(spec, rng);
  for (const PixelBox& b : part.walls) add_wall(map, b);

  const int clear = spec.corridor_width;
  constexpr int kMinObject = 6;
  constexpr int kMaxObject = 28;
  std::vector<PixelBox> objects;
  for (int n = 0; n < spec.n_objects; ++n) {
    bool placed = false;
    for (int attempt = 0; attempt < 500 && !placed; ++attempt) {
      const PixelBox& room = part.rooms[rng.below(part.rooms.size())];
      const int max_w = std::min(kMaxObject, room.width() - 2 * clear);
      const int max_h = std::min(kMaxObject, room.height() - 2 * clear);
      if (max_w < kMinObject || max_h < kMinObject) continue;
      const int ow = rng.between(kMinObject, max_w);
      const int oh = rng.between(kMinObject, max_h);
      const int x = rng.between(room.xmin + clear, room.xmax - clear - ow);
      const int y = rng.between(room.ymin + clear, room.ymax - clear - oh);
      const PixelBox box{x, y, x + ow, y + oh};
      const bool crowded = std::any_of(objects.begin(), objects.end(),
                                       [&](const PixelBox& o) { return overlaps(grow(box, clear), o); });
      if (crowded) continue;
      objects.push_back(box);
      const Label label = spec.object_label_pool[rng.below(spec.object_label_pool.size())];
      fill(map, box, label);
      map.instances.push_back(make_instance(label, box));
      placed = true;
    }
    if (!placed) {
      throw Error(ErrorKind::kGeneration, "generator: cannot place object " + std::to_string(n + 1) + " of " +
                                              std::to_string(spec.n_objects) + " with " +
                                              std::to_string(clear) + " px clearance");
    }
  }
  return scene;
}

// --- instructions ----------------------------------------------------------

const std::vector<std::string>& instruction_verbs() {
  static const std::vector<std::string> verbs{"Navigate to", "Move toward", "Go to",
                                              "Head to",     "Walk over to", "Approach"};
  return verbs;
}

namespace {

constexpr std::array<std::pair<Side, std::string_view>, 4> kModifiers{{
    {Side::kLeft, "left of"},
    {Side::kRight, "right of"},
    {Side::kTop, "behind"},
    {Side::kBottom, "in front of"},
}};

constexpr std::array<std::string_view, 10> kOrdinals{"first",   "second", "third", "fourth",
                                                    "fifth",   "sixth",  "seventh", "eighth",
                                                    "ninth",   "tenth"};

std::string_view modifier_of(Side side) {
  for (const auto& [s, text] : kModifiers) {
    if (s == side) return text;
  }
  return {};
}

// Same-label instances ordered along the axis; ties by instance index.
std::vector<std::size_t> ranked(const SemanticMap& map, Label label, OrdinalAxis axis) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < map.instances.size(); ++i) {
    if (map.instances[i].label == label) idx.push_back(i);
  }
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const PixelBox& ba = map.instances[a].bbox;
    const PixelBox& bb = map.instances[b].bbox;
    return axis == OrdinalAxis::kFromTop ? ba.center_y() < bb.center_y() : ba.center_x() < bb.center_x();
  });
  return idx;
}

bool consume(std::string_view& s, std::string_view prefix) {
  if (s.substr(0, prefix.size()) != prefix) return false;
  s.remove_prefix(prefix.size());
  return true;
}

std::size_t parse_ordinal(std::string_view word) {
  for (std::size_t i = 0; i < kOrdinals.size(); ++i) {
    if (word == kOrdinals[i]) return i + 1;
  }
  std::size_t n = 0;
  std::size_t i = 0;
  while (i < word.size() && word[i] >= '0' && word[i] <= '9') n = n * 10 + static_cast<std::size_t>(word[i++] - '0');
  if (i == 0 || n == 0 || ordinal_word(n) != word) {
    throw Error(ErrorKind::kInput, "instruction: bad ordinal '" + std::string(word) + "'");
  }
  return n;
}

}  // namespace

std::string ordinal_word(std::size_t rank) {
  if (rank >= 1 && rank <= kOrdinals.size()) return std::string(kOrdinals[rank - 1]);
  const std::size_t mod100 = rank % 100;
  const char* suffix = "th";
  if (mod100 < 11 || mod100 > 13) {
    switch (rank % 10) {
      case 1: suffix = "st"; break;
      case 2: suffix = "nd"; break;
      case 3: suffix = "rd"; break;
      default: break;
    }
  }
  return std::to_string(rank) + suffix;
}

std::string render_instruction(const std::string& verb, const GoalSpec& spec, OrdinalAxis axis,
                               const SemanticMap& map, const LabelMapping& mapping) {
  std::string text = verb + " the ";
  if (spec.side != Side::kNone) text += "spot " + std::string(modifier_of(spec.side)) + " the ";
  text += mapping.name_of(spec.target_label);
  if (spec.instance_index) {
    if (axis == OrdinalAxis::kNone) {
      throw Error(ErrorKind::kInput, "instruction: an instance index needs an ordinal axis");
    }
    const auto order = ranked(map, spec.target_label, axis);
    const auto it = std::find(order.begin(), order.end(), *spec.instance_index);
    if (it == order.end()) throw Error(ErrorKind::kTargetNotFound, "instruction: instance not in map");
    text += ", the " + ordinal_word(static_cast<std::size_t>(it - order.begin()) + 1) + " from the " +
            (axis == OrdinalAxis::kFromTop ? "upper" : "left") + " side";
  }
  return text + ".";
}

GoalSpec parse_instruction(const std::string& text, const SemanticMap& map, const LabelMapping& mapping) {
  std::string_view s(text);
  const auto fail = [&text](const char* why) {
    return Error(ErrorKind::kInput, std::string("instruction: ") + why + ": '" + text + "'");
  };
  if (s.empty() || s.back() != '.') throw fail("missing final period");
  s.remove_suffix(1);

  // Longest verb first so that prefixes cannot shadow each other.
  std::vector<std::string> verbs = instruction_verbs();
  std::sort(verbs.begin(), verbs.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
  bool matched = false;
  for (const auto& v : verbs) {
    std::string_view probe = s;
    if (consume(probe, v) && consume(probe, " the ")) {
      s = probe;
      matched = true;
      break;
    }
  }
  if (!matched) throw fail("unknown verb");

  GoalSpec spec;
  if (consume(s, "spot ")) {
    bool found = false;
    for (const auto& [side, phrase] : kModifiers) {
      std::string_view probe = s;
      if (consume(probe, phrase) && consume(probe, " the ")) {
        spec.side = side;
        s = probe;
        found = true;
        break;
      }
    }
    if (!found) throw fail("unknown spatial modifier");
  }

  const std::size_t comma = s.find(", the ");
  const std::string name(s.substr(0, comma));
  spec.target_label = mapping.label_named(name);
  if (!mapping.is_targetable(spec.target_label)) throw fail("target is not targetable");
  if (comma == std::string_view::npos) return spec;

  s.remove_prefix(comma + 6);
  const std::size_t space = s.find(' ');
  if (space == std::string_view::npos) throw fail("truncated descriptor");
  const std::size_t rank = parse_ordinal(s.substr(0, space));
  s.remove_prefix(space);
  OrdinalAxis axis;
  if (s == " from the left side") {
    axis = OrdinalAxis::kFromLeft;
  } else if (s == " from the upper side") {
    axis = OrdinalAxis::kFromTop;
  } else {
    throw fail("unknown descriptor");
  }
  const auto order = ranked(map, spec.target_label, axis);
  if (rank > order.size()) throw Error(ErrorKind::kTargetNotFound, "instruction: ordinal beyond instance count");
  spec.instance_index = order[rank - 1];
  return spec;
}

Instruction gen_instruction(const SemanticMap& map, const LabelMapping& mapping, std::uint64_t seed) {
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < map.instances.size(); ++i) {
    if (mapping.is_targetable(map.instances[i].label)) candidates.push_back(i);
  }
  if (candidates.empty()) throw Error(ErrorKind::kTargetNotFound, "instruction: no targetable instance");

  Rng rng(seed);
  Instruction ins;
  const std::size_t chosen = candidates[rng.below(candidates.size())];
  ins.verb = instruction_verbs()[rng.below(instruction_verbs().size())];
  ins.spec.target_label = map.instances[chosen].label;
  if (rng.chance(0.5)) {
    constexpr std::array<Side, 4> sides{Side::kLeft, Side::kRight, Side::kTop, Side::kBottom};
    ins.spec.side = sides[rng.below(sides.size())];
  }
  const auto same = std::count_if(map.instances.begin(), map.instances.end(),
                                  [&](const ObjectInstance& o) { return o.label == ins.spec.target_label; });
  if (same > 1) {
    ins.spec.instance_index = chosen;
    ins.axis = rng.chance(0.5) ? OrdinalAxis::kFromLeft : OrdinalAxis::kFromTop;
  }
  ins.text = render_instruction(ins.verb, ins.spec, ins.axis, map, mapping);
  return ins;
}

}  // namespace flownav
