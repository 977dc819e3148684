#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "flownav/config.hpp"
#include "flownav/field_gen.hpp"
#include "flownav/io.hpp"
#include "flownav/metrics.hpp"
#include "flownav/planner.hpp"
#include "flownav/render.hpp"
#include "flownav/rollout.hpp"
#include "flownav/scene_gen.hpp"
#include "flownav/supervision.hpp"

namespace flownav::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kClassification:
    case ErrorKind::kConfig:
    case ErrorKind::kInput:
    case ErrorKind::kIo:
      return kExitInput;
    case ErrorKind::kTargetNotFound:
    case ErrorKind::kUnreachable:
    case ErrorKind::kGeneration:
    case ErrorKind::kInternal:
      return kExitPipeline;
  }
  return kExitPipeline;
}

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;

  RunConfig load() const { return load_run_config(config_path, overrides); }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "TOML-style config file (after FLOWNAV_CONFIG)");
  cmd->add_option("--set", c.overrides, "Override a config key, section.key=value (repeatable)");
}

NormPoint parse_point(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw Error(ErrorKind::kInput, "point '" + text + "': expected u,v");
  try {
    std::size_t used_u = 0;
    std::size_t used_v = 0;
    const double u = std::stod(text.substr(0, comma), &used_u);
    const double v = std::stod(text.substr(comma + 1), &used_v);
    if (used_u != comma || used_v != text.size() - comma - 1) throw std::invalid_argument("trailing");
    if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorKind::kInput, "point '" + text + "' lies outside [0,1]^2");
    }
    return {u, v};
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error(ErrorKind::kInput, "point '" + text + "': expected u,v");
  }
}

// Goal slots given on the command line.
struct GoalArgs {
  std::string instruction;
  std::string label;
  std::string side = "none";
  int instance = -1;

  bool given() const { return !instruction.empty() || !label.empty(); }

  GoalSpec resolve(const SemanticMap& map, const LabelMapping& mapping) const {
    if (!instruction.empty()) return parse_instruction(instruction, map, mapping);
    if (label.empty()) throw Error(ErrorKind::kInput, "a goal needs --instruction or --label");
    GoalSpec spec;
    spec.target_label = mapping.label_named(label);
    spec.side = parse_side(side);
    if (instance >= 0) spec.instance_index = static_cast<std::size_t>(instance);
    return spec;
  }
};

void add_goal(CLI::App* cmd, GoalArgs& g) {
  cmd->add_option("--instruction", g.instruction, "Instruction text in the template grammar");
  cmd->add_option("--label", g.label, "Target label name (alternative to --instruction)");
  cmd->add_option("--side", g.side, "none|left|right|top|bottom (with --label)");
  cmd->add_option("--instance", g.instance, "Instance index among instances of --label");
}

BinaryMask obstacle_mask(const LoadedScene& scene) { return invert(extract_free(scene.map, scene.mapping)); }

NormPoint start_point(const Annotation& a) {
  return pixel_center(a.start, a.field.width(), a.field.height());
}

// Resolves a bundle-relative scene path against the bundle directory when the
// path does not exist as given.
fs::path bundle_scene_path(const fs::path& bundle_dir, const std::string& scene) {
  const fs::path p(scene);
  if (p.is_absolute() || fs::exists(p)) return p;
  return bundle_dir / p;
}

std::string metrics_json(const TrajectoryMetrics& m) {
  return json{{"fge", m.fge}, {"cr", m.cr}, {"curv", m.curv}, {"plr", m.plr}}.dump();
}

template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), 1, std::max<std::size_t>(n, 1));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) fn(i);
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
}

std::vector<json> read_jsonl(const fs::path& path) {
  std::istringstream in(read_text_file(path));
  std::vector<json> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kInput, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!out.back().is_object()) {
      throw Error(ErrorKind::kInput, path.string() + ":" + std::to_string(line_no) + ": expected an object");
    }
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// --- gen ------------------------------------------------------------------------

struct GenArgs {
  Common common;
  std::uint64_t seed = 0;
  int count = 1;
  std::string out;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  RunConfig cfg = a.common.load();
  if (a.count < 1) throw Error(ErrorKind::kInput, "--count must be >= 1");
  if (a.count == 1 && fs::path(a.out).extension() == ".png") {
    SceneSpec spec = cfg.generator;
    spec.seed = a.seed;
    const Scene scene = gen_scene(spec);
    save_scene(a.out, scene.map, scene.mapping);
    const Instruction ins = gen_instruction(scene.map, scene.mapping, a.seed);
    out << json{{"scene", a.out}, {"instruction", ins.text}, {"seed", a.seed}}.dump() << "\n";
    return kExitOk;
  }
  const fs::path dir(a.out);
  fs::create_directories(dir);
  std::string manifest;
  for (int i = 0; i < a.count; ++i) {
    const std::uint64_t seed = a.seed + static_cast<std::uint64_t>(i);
    SceneSpec spec = cfg.generator;
    spec.seed = seed;
    const Scene scene = gen_scene(spec);
    char name[32];
    std::snprintf(name, sizeof name, "scene_%06llu.png", static_cast<unsigned long long>(seed));
    save_scene(dir / name, scene.map, scene.mapping);
    const Instruction ins = gen_instruction(scene.map, scene.mapping, seed);
    manifest += json{{"scene", name}, {"instruction", ins.text}, {"seed", seed}}.dump() + "\n";
  }
  write_file_atomic(dir / "manifest.jsonl", manifest);
  out << "wrote " << a.count << " scenes to " << dir.string() << "\n";
  return kExitOk;
}

// --- annotate ---------------------------------------------------------------------

struct AnnotateArgs {
  Common common;
  std::string scene;
  GoalArgs goal;
  std::uint64_t seed = 0;
  std::string out;
  std::string batch;
  int jobs = 1;
};

void annotate_one(const fs::path& scene_path, const std::string& scene_field, const GoalSpec* goal,
                  const std::string& instruction, std::uint64_t seed, const RunConfig& cfg, const fs::path& out_dir) {
  const LoadedScene scene = load_scene(scene_path);
  const GoalSpec spec = goal ? *goal : parse_instruction(instruction, scene.map, scene.mapping);
  const Annotation ann = annotate(scene.map, scene.mapping, spec, cfg.annotation, seed);
  BundleMeta meta{scene_field, spec, instruction, seed, cfg.to_json()};
  save_bundle(out_dir, ann, meta);
}

int cmd_annotate(const AnnotateArgs& a, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = a.common.load();
  if (a.batch.empty()) {
    if (a.scene.empty() || a.out.empty()) throw Error(ErrorKind::kInput, "annotate needs --scene and --out");
    const LoadedScene scene = load_scene(a.scene);
    const GoalSpec spec = a.goal.resolve(scene.map, scene.mapping);
    annotate_one(a.scene, fs::absolute(a.scene).string(), &spec, a.goal.instruction, a.seed, cfg, a.out);
    out << "wrote bundle " << a.out << "\n";
    return kExitOk;
  }

  if (a.out.empty()) throw Error(ErrorKind::kInput, "annotate --batch needs --out (output directory)");
  const fs::path manifest_path(a.batch);
  const std::vector<json> entries = read_jsonl(manifest_path);
  const fs::path out_dir(a.out);
  fs::create_directories(out_dir);
  std::vector<json> rows(entries.size());
  parallel_for(entries.size(), a.jobs, [&](std::size_t i) {
    char name[32];
    std::snprintf(name, sizeof name, "ep_%06zu", i);
    const fs::path bundle = out_dir / name;
    const json& e = entries[i];
    json row{{"bundle", name}, {"scene", e.value("scene", std::string())}, {"instruction", e.value("instruction", std::string())}};
    try {
      fs::path scene = e.at("scene").get<std::string>();
      if (scene.is_relative()) scene = manifest_path.parent_path() / scene;
      const std::uint64_t seed = e.value("seed", std::uint64_t{0});
      const std::string instruction = e.value("instruction", std::string());
      if (instruction.empty()) throw Error(ErrorKind::kInput, "manifest entry has no instruction");
      annotate_one(scene, fs::absolute(scene).string(), nullptr, instruction, seed, cfg, bundle);
      row["status"] = "ok";
    } catch (const Error& e) {
      row["status"] = "error";
      row["error"] = e.what();
    } catch (const std::exception& e) {
      row["status"] = "error";
      row["error"] = e.what();
    }
    rows[i] = std::move(row);
  });
  std::string manifest;
  std::size_t failed = 0;
  for (const json& r : rows) {
    manifest += r.dump() + "\n";
    failed += r.at("status") != "ok";
  }
  write_file_atomic(out_dir / "bundles.jsonl", manifest);
  out << "annotated " << rows.size() - failed << " of " << rows.size() << " episodes\n";
  if (failed) err << failed << " episodes failed; see bundles.jsonl\n";
  return failed ? kExitPipeline : kExitOk;
}

// --- rollout / plan -----------------------------------------------------------------

struct PolicyArgs {
  Common common;
  std::string bundle;
  std::string field;
  std::string scene;
  GoalArgs goal;
  std::string start;
  std::string out;
};

Trajectory run_rollout(const FlowFieldGrid& field, const NormPoint& x0, const RolloutConfig& cfg) {
  const AnnotatedFieldProvider provider(field);
  return euler_rollout(query_grid(provider, cfg.grid_size), x0, cfg);
}

int cmd_rollout(const PolicyArgs& a, std::ostream& out) {
  const RunConfig cfg = a.common.load();
  if (a.out.empty()) throw Error(ErrorKind::kInput, "rollout needs --out");
  FlowFieldGrid field;
  std::optional<NormPoint> x0;
  if (!a.bundle.empty()) {
    const AnnotationBundle b = load_bundle(a.bundle);
    field = b.annotation.field;
    x0 = start_point(b.annotation);
  }
  if (!a.field.empty()) field = read_flow_field(a.field);
  if (!a.start.empty()) x0 = parse_point(a.start);
  if (field.empty()) throw Error(ErrorKind::kInput, "rollout needs --field or --bundle");
  if (!x0) throw Error(ErrorKind::kInput, "rollout needs --start or --bundle");
  write_trajectory(a.out, run_rollout(field, *x0, cfg.rollout));
  out << "wrote " << a.out << "\n";
  return kExitOk;
}

int cmd_plan(const PolicyArgs& a, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = a.common.load();
  if (a.out.empty()) throw Error(ErrorKind::kInput, "plan needs --out");
  std::optional<LoadedScene> scene;
  std::optional<GoalSpec> spec;
  std::optional<NormPoint> x0;
  if (!a.bundle.empty()) {
    const AnnotationBundle b = load_bundle(a.bundle);
    scene = load_scene(bundle_scene_path(a.bundle, b.meta.scene));
    spec = b.meta.goal;
    x0 = start_point(b.annotation);
  }
  if (!a.scene.empty()) scene = load_scene(a.scene);
  if (!scene) throw Error(ErrorKind::kInput, "plan needs --scene or --bundle");
  if (a.goal.given()) spec = a.goal.resolve(scene->map, scene->mapping);
  if (!a.start.empty()) x0 = parse_point(a.start);
  if (!spec) throw Error(ErrorKind::kInput, "plan needs a goal (--instruction, --label or --bundle)");
  if (!x0) throw Error(ErrorKind::kInput, "plan needs --start or --bundle");
  const PlanResult plan = plan_episode(scene->map, scene->mapping, *spec, *x0, cfg.planner);
  if (!plan.found) {
    err << "planner failure: no path on the inflated occupancy grid\n";
    return kExitPlannerFailure;
  }
  write_trajectory(a.out, plan.trajectory);
  out << "wrote " << a.out << "\n";
  return kExitOk;
}

// --- eval -----------------------------------------------------------------------------

struct EvalArgs {
  Common common;
  std::string pred;
  std::string ref;
  std::string scene;
  std::string bundle;
  std::string batch;
  std::string policy = "stabilized";
  std::string out;
  int jobs = 1;
};

struct EpisodeRow {
  std::string id;
  std::string status = "ok";
  TrajectoryMetrics metrics;
  std::string message;
};

// Predicted trajectory of `policy` on an annotated episode; nullopt on planner failure.
std::optional<Trajectory> run_policy(const std::string& policy, const AnnotationBundle& b, const LoadedScene& scene,
                                     const RunConfig& cfg) {
  const NormPoint x0 = start_point(b.annotation);
  if (policy == "planner") {
    const PlanResult plan = plan_episode(scene.map, scene.mapping, b.meta.goal, x0, cfg.planner);
    if (!plan.found) return std::nullopt;
    return plan.trajectory;
  }
  RolloutConfig rc = cfg.rollout;
  rc.mode = parse_rollout_mode(policy);
  return run_rollout(b.annotation.field, x0, rc);
}

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = a.common.load();
  if (a.batch.empty()) {
    if (a.pred.empty()) throw Error(ErrorKind::kInput, "eval needs --pred (or --batch)");
    const Trajectory pred = read_trajectory(a.pred);
    Trajectory ref;
    std::optional<LoadedScene> scene;
    if (!a.bundle.empty()) {
      const AnnotationBundle b = load_bundle(a.bundle);
      ref = b.annotation.trajectory;
      scene = load_scene(bundle_scene_path(a.bundle, b.meta.scene));
    }
    if (!a.ref.empty()) ref = read_trajectory(a.ref);
    if (!a.scene.empty()) scene = load_scene(a.scene);
    if (ref.points.empty()) throw Error(ErrorKind::kInput, "eval needs --ref or --bundle");
    if (!scene) throw Error(ErrorKind::kInput, "eval needs --scene or --bundle");
    const TrajectoryMetrics m = evaluate_trajectory(pred, ref, obstacle_mask(*scene));
    const std::string text = metrics_json(m) + "\n";
    if (a.out.empty()) {
      out << text;
    } else {
      write_file_atomic(a.out, text);
    }
    return kExitOk;
  }

  if (a.policy != "planner") parse_rollout_mode(a.policy);
  const fs::path manifest_path(a.batch);
  const std::vector<json> entries = read_jsonl(manifest_path);
  std::vector<EpisodeRow> rows(entries.size());
  parallel_for(entries.size(), a.jobs, [&](std::size_t i) {
    EpisodeRow& row = rows[i];
    const json& e = entries[i];
    row.id = e.value("id", e.value("bundle", std::to_string(i)));
    try {
      if (e.value("status", std::string("ok")) != "ok") {
        row.status = "error";
        row.message = e.value("error", std::string("annotation failed"));
        return;
      }
      fs::path dir = e.at("bundle").get<std::string>();
      if (dir.is_relative()) dir = manifest_path.parent_path() / dir;
      const AnnotationBundle b = load_bundle(dir);
      const LoadedScene scene = load_scene(bundle_scene_path(dir, b.meta.scene));
      std::optional<Trajectory> pred;
      if (e.contains("pred")) {
        fs::path p = e.at("pred").get<std::string>();
        if (p.is_relative()) p = manifest_path.parent_path() / p;
        pred = read_trajectory(p);
      } else {
        pred = run_policy(a.policy, b, scene, cfg);
      }
      if (!pred) {
        row.status = "planner_failure";
        row.message = "no path on the inflated occupancy grid";
        return;
      }
      row.metrics = evaluate_trajectory(*pred, b.annotation.trajectory, obstacle_mask(scene));
    } catch (const std::exception& ex) {
      row.status = "error";
      row.message = ex.what();
    }
  });

  std::string csv = "id,status,fge,cr,curv,plr,message\n";
  std::vector<TrajectoryMetrics> ok;
  std::size_t planner_failures = 0;
  std::size_t errors = 0;
  for (const EpisodeRow& r : rows) {
    csv += csv_field(r.id) + "," + r.status + ",";
    if (r.status == "ok") {
      csv += fmt(r.metrics.fge) + "," + std::to_string(r.metrics.cr) + "," + fmt(r.metrics.curv) + "," +
             fmt(r.metrics.plr);
      ok.push_back(r.metrics);
    } else {
      csv += ",,,";
      (r.status == "planner_failure" ? planner_failures : errors)++;
    }
    csv += "," + csv_field(r.message) + "\n";
  }
  if (a.out.empty()) {
    out << csv;
  } else {
    write_file_atomic(a.out, csv);
  }
  json summary{{"episodes", rows.size()}, {"evaluated", ok.size()}, {"planner_failures", planner_failures},
               {"errors", errors}};
  if (!ok.empty()) {
    const MetricsSummary s = aggregate(ok);
    summary["mean"] = {{"fge", s.fge}, {"cr", s.cr}, {"curv", s.curv}, {"plr", s.plr}};
  }
  err << summary.dump() << "\n";
  if (errors) return kExitPipeline;
  if (planner_failures) return kExitPlannerFailure;
  return kExitOk;
}

// --- render -----------------------------------------------------------------------------

struct RenderArgs {
  Common common;
  std::string scene;
  std::string bundle;
  std::string field;
  std::string traj;
  std::string out;
  int stride = 5;
  bool no_field = false;
};

int cmd_render(const RenderArgs& a, std::ostream& out) {
  const RunConfig cfg = a.common.load();
  if (a.out.empty()) throw Error(ErrorKind::kInput, "render needs --out");
  std::optional<LoadedScene> scene;
  std::optional<AnnotationBundle> bundle;
  if (!a.bundle.empty()) {
    bundle = load_bundle(a.bundle);
    scene = load_scene(bundle_scene_path(a.bundle, bundle->meta.scene));
  }
  if (!a.scene.empty()) scene = load_scene(a.scene);
  if (!scene) throw Error(ErrorKind::kInput, "render needs --scene or --bundle");

  std::optional<FlowFieldGrid> field;
  if (bundle) field = bundle->annotation.field;
  if (!a.field.empty()) field = read_flow_field(a.field);
  std::optional<Trajectory> traj;
  if (!a.traj.empty()) traj = read_trajectory(a.traj);

  RenderInput in;
  in.map = &scene->map;
  if (field && !a.no_field) in.field = &*field;
  if (bundle) {
    in.reference = &bundle->annotation.trajectory;
    in.goal_band = bundle->annotation.goal_pixels;
  }
  if (traj) in.trajectory = &*traj;
  RenderOptions opts;
  opts.query_grid = cfg.rollout.grid_size;
  opts.stride = a.stride;
  write_file_atomic(a.out, render_svg(in, opts));
  out << "wrote " << a.out << "\n";
  return kExitOk;
}

// --- loss-eval ----------------------------------------------------------------------------

struct LossArgs {
  std::string pred;
  std::string target;
  int bins = 10;
  int samples = 1000;
  double lambda = kDefaultMagnitudeWeight;
  std::uint64_t seed = 0;
};

int cmd_loss(const LossArgs& a, std::ostream& out) {
  const FlowFieldGrid pred = read_flow_field(a.pred);
  const FlowFieldGrid target = read_flow_field(a.target);
  const SampleBatch batch = stratified_sample(a.bins, a.samples, a.seed);
  const std::vector<Vec2> p = sample_targets(pred, batch.points);
  const std::vector<Vec2> t = sample_targets(target, batch.points);
  out << json{{"samples", batch.points.size()},
              {"per_bin", batch.per_bin},
              {"direction", direction_loss(p, t)},
              {"magnitude", magnitude_loss(p, t)},
              {"total", total_loss(p, t, a.lambda)}}
             .dump()
      << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Language-conditioned navigation flow fields: scene generation, annotation, rollout, evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "flownav 0.1.0");

  GenArgs gen;
  CLI::App* c_gen = app.add_subcommand("gen", "Generate a synthetic scene (or a dataset with --count)");
  add_common(c_gen, gen.common);
  c_gen->add_option("--seed", gen.seed, "Scene seed (first seed with --count)");
  c_gen->add_option("--count", gen.count, "Number of scenes; writes a directory with manifest.jsonl");
  c_gen->add_option("--out", gen.out, "Scene PNG path, or output directory")->required();

  AnnotateArgs ann;
  CLI::App* c_ann = app.add_subcommand("annotate", "Compute the ground-truth flow field and reference trajectory");
  add_common(c_ann, ann.common);
  c_ann->add_option("--scene", ann.scene, "Scene PNG (sidecar JSON next to it)");
  add_goal(c_ann, ann.goal);
  c_ann->add_option("--seed", ann.seed, "Start-sampling seed");
  c_ann->add_option("--out", ann.out, "Bundle directory (output directory with --batch)");
  c_ann->add_option("--batch", ann.batch, "JSONL manifest of {scene, instruction, seed}");
  c_ann->add_option("--jobs", ann.jobs, "Worker threads for --batch");

  PolicyArgs ro;
  CLI::App* c_ro = app.add_subcommand("rollout", "Integrate a flow field into a trajectory");
  add_common(c_ro, ro.common);
  c_ro->add_option("--bundle", ro.bundle, "Annotation bundle (field and start)");
  c_ro->add_option("--field", ro.field, "FFLD flow field");
  c_ro->add_option("--start", ro.start, "Start point u,v in [0,1]^2");
  c_ro->add_option("--out", ro.out, "Trajectory JSON")->required();

  PolicyArgs pl;
  CLI::App* c_pl = app.add_subcommand("plan", "A* baseline on inflated instance boxes");
  add_common(c_pl, pl.common);
  c_pl->add_option("--bundle", pl.bundle, "Annotation bundle (scene, goal and start)");
  c_pl->add_option("--scene", pl.scene, "Scene PNG");
  add_goal(c_pl, pl.goal);
  c_pl->add_option("--start", pl.start, "Start point u,v in [0,1]^2");
  c_pl->add_option("--out", pl.out, "Trajectory JSON")->required();

  EvalArgs ev;
  CLI::App* c_ev = app.add_subcommand("eval", "Trajectory metrics (FGE, CR, Curv, PLR)");
  add_common(c_ev, ev.common);
  c_ev->add_option("--pred", ev.pred, "Predicted trajectory JSON");
  c_ev->add_option("--ref", ev.ref, "Reference trajectory JSON");
  c_ev->add_option("--scene", ev.scene, "Scene PNG for collision checks");
  c_ev->add_option("--bundle", ev.bundle, "Annotation bundle (reference and scene)");
  c_ev->add_option("--batch", ev.batch, "JSONL manifest of {bundle[, pred, id, status]}");
  c_ev->add_option("--policy", ev.policy, "stabilized|raw_inverse|unit_speed|planner for --batch");
  c_ev->add_option("--out", ev.out, "Metrics JSON, or CSV report with --batch");
  c_ev->add_option("--jobs", ev.jobs, "Worker threads for --batch");

  RenderArgs rd;
  CLI::App* c_rd = app.add_subcommand("render", "Static SVG overlay of a scene, field and trajectories");
  add_common(c_rd, rd.common);
  c_rd->add_option("--scene", rd.scene, "Scene PNG");
  c_rd->add_option("--bundle", rd.bundle, "Annotation bundle (field, reference, goal band)");
  c_rd->add_option("--field", rd.field, "FFLD flow field");
  c_rd->add_option("--traj", rd.traj, "Trajectory JSON to overlay");
  c_rd->add_option("--stride", rd.stride, "Arrow stride on the query grid");
  c_rd->add_flag("--no-field", rd.no_field, "Omit field arrows");
  c_rd->add_option("--out", rd.out, "SVG path")->required();

  LossArgs ls;
  CLI::App* c_ls = app.add_subcommand("loss-eval", "Direction and magnitude losses between two fields");
  c_ls->add_option("--pred", ls.pred, "Predicted FFLD field")->required();
  c_ls->add_option("--target", ls.target, "Target FFLD field")->required();
  c_ls->add_option("--bins", ls.bins, "Stratification grid size");
  c_ls->add_option("--samples", ls.samples, "Number of query points");
  c_ls->add_option("--lambda", ls.lambda, "Magnitude loss weight");
  c_ls->add_option("--seed", ls.seed, "Sampling seed");

  std::vector<const char*> argv;
  for (const std::string& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream o;
    std::ostringstream e_out;
    const int code = app.exit(e, o, e_out);
    out << o.str();
    err << e_out.str();
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*c_gen) return cmd_gen(gen, out);
    if (*c_ann) return cmd_annotate(ann, out, err);
    if (*c_ro) return cmd_rollout(ro, out);
    if (*c_pl) return cmd_plan(pl, out, err);
    if (*c_ev) return cmd_eval(ev, out, err);
    if (*c_rd) return cmd_render(rd, out);
    if (*c_ls) return cmd_loss(ls, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const fs::filesystem_error& e) {
    err << "error (io): " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitPipeline;
  }
  return kExitUsage;
}

}  // namespace flownav::cli
