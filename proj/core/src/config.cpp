#include "flownav/config.hpp"

#include <charconv>
#include <cstdlib>
#include <functional>

#include "json.hpp"

#include "flownav/io.hpp"

namespace flownav {

namespace {

using json = nlohmann::json;

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expected) {
  throw Error(ErrorKind::kConfig, "config key '" + key + "': expected " + expected + ", got '" + value + "'");
}

double parse_double(const std::string& key, const std::string& value) {
  const std::string_view v = trim(value);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, value, "a number");
  return out;
}

long long parse_integer(const std::string& key, const std::string& value) {
  const std::string_view v = trim(value);
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, value, "an integer");
  return out;
}

int parse_int(const std::string& key, const std::string& value) {
  const long long v = parse_integer(key, value);
  if (v < INT32_MIN || v > INT32_MAX) bad_value(key, value, "a 32-bit integer");
  return static_cast<int>(v);
}

bool parse_bool(const std::string& key, const std::string& value) {
  const std::string_view v = trim(value);
  if (v == "true") return true;
  if (v == "false") return false;
  bad_value(key, value, "true or false");
}

std::string parse_string(const std::string& key, const std::string& value) {
  const std::string_view v = trim(value);
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return std::string(v.substr(1, v.size() - 2));
  // Bare words are accepted on the command line.
  if (!v.empty() && v.find_first_of("\"[]=") == std::string_view::npos) return std::string(v);
  bad_value(key, value, "a string");
}

std::vector<Label> parse_label_list(const std::string& key, const std::string& value) {
  std::string_view v = trim(value);
  if (v.size() < 2 || v.front() != '[' || v.back() != ']') bad_value(key, value, "an integer array");
  v = trim(v.substr(1, v.size() - 2));
  std::vector<Label> out;
  while (!v.empty()) {
    const auto comma = v.find(',');
    const std::string item(trim(v.substr(0, comma)));
    const long long n = parse_integer(key, item);
    if (n < 0 || n > 255) bad_value(key, value, "label ids in [0, 255]");
    out.push_back(static_cast<Label>(n));
    if (comma == std::string_view::npos) break;
    v = trim(v.substr(comma + 1));
  }
  return out;
}

struct Field {
  std::function<void(RunConfig&, const std::string& key, const std::string& value)> set;
  std::function<json(const RunConfig&)> get;
};

#define FLOWNAV_DOUBLE(section, member)                                                             \
  {                                                                                                 \
    #section "." #member, {                                                                         \
      [](RunConfig& c, const std::string& k, const std::string& v) { c.section.member = parse_double(k, v); }, \
          [](const RunConfig& c) { return json(c.section.member); }                                  \
    }                                                                                               \
  }
#define FLOWNAV_INT(section, member)                                                                \
  {                                                                                                 \
    #section "." #member, {                                                                         \
      [](RunConfig& c, const std::string& k, const std::string& v) { c.section.member = parse_int(k, v); }, \
          [](const RunConfig& c) { return json(c.section.member); }                                  \
    }                                                                                               \
  }
#define FLOWNAV_BOOL(section, member)                                                               \
  {                                                                                                 \
    #section "." #member, {                                                                         \
      [](RunConfig& c, const std::string& k, const std::string& v) { c.section.member = parse_bool(k, v); }, \
          [](const RunConfig& c) { return json(c.section.member); }                                  \
    }                                                                                               \
  }

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> table{
      FLOWNAV_DOUBLE(annotation, rho_safe),
      FLOWNAV_DOUBLE(annotation, lambda_safe),
      FLOWNAV_DOUBLE(annotation, w_g),
      FLOWNAV_DOUBLE(annotation, w_obs),
      FLOWNAV_DOUBLE(annotation, gaussian_sigma),
      FLOWNAV_INT(annotation, goal_band),
      FLOWNAV_DOUBLE(annotation, start_min_goal_dist),
      FLOWNAV_DOUBLE(annotation, start_min_obs_dist),
      FLOWNAV_INT(annotation, traj_waypoints),
      FLOWNAV_DOUBLE(annotation, epsilon),
      FLOWNAV_BOOL(annotation, allow_corner_cutting),
      FLOWNAV_INT(rollout, steps),
      FLOWNAV_INT(rollout, grid_size),
      FLOWNAV_DOUBLE(rollout, alpha),
      FLOWNAV_DOUBLE(rollout, beta),
      FLOWNAV_DOUBLE(rollout, epsilon),
      {"rollout.mode",
       {[](RunConfig& c, const std::string& k, const std::string& v) {
          c.rollout.mode = parse_rollout_mode(parse_string(k, v));
        },
        [](const RunConfig& c) { return json(to_string(c.rollout.mode)); }}},
      FLOWNAV_INT(planner, grid_size),
      FLOWNAV_DOUBLE(planner, inflate_radius),
      FLOWNAV_DOUBLE(planner, side_offset),
      FLOWNAV_INT(planner, waypoints),
      FLOWNAV_BOOL(planner, allow_corner_cutting),
      FLOWNAV_INT(generator, width),
      FLOWNAV_INT(generator, height),
      FLOWNAV_INT(generator, n_rooms),
      FLOWNAV_INT(generator, n_objects),
      FLOWNAV_INT(generator, corridor_width),
      {"generator.object_label_pool",
       {[](RunConfig& c, const std::string& k, const std::string& v) {
          c.generator.object_label_pool = parse_label_list(k, v);
        },
        [](const RunConfig& c) {
          json arr = json::array();
          for (Label l : c.generator.object_label_pool) arr.push_back(static_cast<int>(l));
          return arr;
        }}},
  };
  return table;
}

#undef FLOWNAV_DOUBLE
#undef FLOWNAV_INT
#undef FLOWNAV_BOOL

// Strips a trailing comment that is not inside a string.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : fields()) keys.push_back(k);
  return keys;
}

void RunConfig::validate() const {
  annotation.validate();
  rollout.validate();
  planner.validate();
  generator.validate();
}

void RunConfig::set(const std::string& dotted_key, const std::string& value) {
  const auto it = fields().find(std::string(trim(dotted_key)));
  if (it == fields().end()) throw Error(ErrorKind::kConfig, "unknown config key '" + dotted_key + "'");
  it->second.set(*this, it->first, value);
}

void RunConfig::merge_text(std::string_view text, const std::string& origin) {
  std::string section;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    const std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    const std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorKind::kConfig, where + "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "annotation" && section != "rollout" && section != "planner" && section != "generator") {
        throw Error(ErrorKind::kConfig, where + "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorKind::kConfig, where + "expected key = value");
    if (section.empty()) throw Error(ErrorKind::kConfig, where + "key outside of a section");
    const std::string key = section + "." + std::string(trim(line.substr(0, eq)));
    try {
      set(key, std::string(trim(line.substr(eq + 1))));
    } catch (const Error& e) {
      throw Error(ErrorKind::kConfig, where + e.what());
    }
  }
}

void RunConfig::merge_file(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    throw Error(ErrorKind::kConfig, std::string("cannot read config: ") + e.what());
  }
  merge_text(text, path.string());
}

std::string RunConfig::to_json() const {
  json out = json::object();
  for (const auto& [key, field] : fields()) {
    const auto dot = key.find('.');
    out[key.substr(0, dot)][key.substr(dot + 1)] = field.get(*this);
  }
  return out.dump();
}

RunConfig RunConfig::from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kConfig, std::string("config JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::kConfig, "config JSON: expected an object");
  RunConfig cfg;
  for (const auto& [section, body] : doc.items()) {
    if (!body.is_object()) throw Error(ErrorKind::kConfig, "config JSON: section '" + section + "' is not an object");
    for (const auto& [key, value] : body.items()) {
      // Reuse the text syntax: JSON scalars and int arrays print as valid values.
      cfg.set(section + "." + key, value.dump());
    }
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  RunConfig cfg;
  if (const char* env = std::getenv("FLOWNAV_CONFIG"); env != nullptr && *env != '\0') {
    cfg.merge_file(env);
  }
  if (!path.empty()) cfg.merge_file(path);
  for (const std::string& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::kConfig, "override '" + o + "': expected section.key=value");
    cfg.set(o.substr(0, eq), o.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

}  // namespace flownav
