#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "flownav/field_gen.hpp"
#include "flownav/planner.hpp"
#include "flownav/rollout.hpp"
#include "flownav/scene_gen.hpp"

namespace flownav {

// Effective configuration of a run. Files use a TOML subset:
//
//   # comment
//   [annotation]
//   rho_safe = 50.0
//   allow_corner_cutting = true
//   [rollout]
//   mode = "stabilized"
//   [generator]
//   object_label_pool = [2, 3, 4]
//
// Sections: annotation, rollout, planner, generator. Unknown sections or keys
// are rejected with kConfig.
struct RunConfig {
  AnnotationConfig annotation;
  RolloutConfig rollout;
  PlannerConfig planner;
  SceneSpec generator;

  void validate() const;

  // Applies one `section.key = value` assignment; value uses file syntax.
  void set(const std::string& dotted_key, const std::string& value);
  void merge_text(std::string_view text, const std::string& origin = "<config>");
  void merge_file(const std::filesystem::path& path);

  // Canonical JSON echo, with every known key present.
  std::string to_json() const;
  static RunConfig from_json(std::string_view text);
};

std::vector<std::string> config_keys();

// Defaults, then the file named by FLOWNAV_CONFIG (if set), then `path` (if
// non-empty), then `overrides` ("section.key=value"). The result is validated.
RunConfig load_run_config(const std::filesystem::path& path, const std::vector<std::string>& overrides);

}  // namespace flownav
