#include "flownav/render.hpp"

#include <array>
#include <cstdio>

#include "flownav/rollout.hpp"

namespace flownav {

namespace {

std::string num(double v) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.3f", v);
  return buf.data();
}

const char* label_color(Label l) {
  static constexpr std::array<const char*, 10> kPalette{"#ffffff", "#202020", "#d95f02", "#7570b3", "#e7298a",
                                                        "#66a61e", "#e6ab02", "#1b9e77", "#a6761d", "#666666"};
  return kPalette[l % kPalette.size()];
}

void polyline(std::string& out, const Trajectory& traj, int w, int h, const char* cls) {
  out += "<polyline class=\"";
  out += cls;
  out += "\" fill=\"none\" points=\"";
  for (std::size_t i = 0; i < traj.points.size(); ++i) {
    if (i) out += ' ';
    out += num(traj.points[i].u() * w) + "," + num(traj.points[i].v() * h);
  }
  out += "\"/>\n";
}

}  // namespace

std::string render_svg(const RenderInput& input, const RenderOptions& opts) {
  if (input.map == nullptr) throw Error(ErrorKind::kInput, "render: a scene is required");
  if (opts.query_grid < 1 || opts.stride < 1 || opts.query_grid % opts.stride != 0) {
    throw Error(ErrorKind::kInput, "render: stride must be positive and divide the query grid");
  }
  const SemanticMap& map = *input.map;
  const int w = map.width();
  const int h = map.height();

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + std::to_string(w) + " " +
         std::to_string(h) + "\" width=\"" + std::to_string(w * 4) + "\" height=\"" + std::to_string(h * 4) +
         "\" shape-rendering=\"crispEdges\">\n";
  out +=
      "<style>.arrow{stroke:#1f78b4;stroke-width:0.4}.traj{stroke:#e31a1c;stroke-width:0.8}"
      ".ref{stroke:#33a02c;stroke-width:0.8;stroke-dasharray:2 1}.goal{fill:#33a02c;fill-opacity:0.5}</style>\n";

  out += "<g class=\"map\">\n";
  for (int y = 0; y < h; ++y) {
    int x = 0;
    while (x < w) {
      const Label l = map.labels.at(x, y);
      int end = x + 1;
      while (end < w && map.labels.at(end, y) == l) ++end;
      out += "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) + "\" width=\"" +
             std::to_string(end - x) + "\" height=\"1\" fill=\"" + label_color(l) + "\"/>\n";
      x = end;
    }
  }
  out += "</g>\n";

  if (!input.goal_band.empty()) {
    out += "<g class=\"goal\">\n";
    for (const Pixel& p : input.goal_band) {
      out += "<rect x=\"" + std::to_string(p.x) + "\" y=\"" + std::to_string(p.y) + "\" width=\"1\" height=\"1\"/>\n";
    }
    out += "</g>\n";
  }

  if (input.field != nullptr) {
    const FlowFieldGrid q = resample_field(*input.field, opts.query_grid);
    const double cell_w = static_cast<double>(w) / opts.query_grid;
    const double cell_h = static_cast<double>(h) / opts.query_grid;
    const double len = opts.arrow_scale * opts.stride;
    out += "<g class=\"field\">\n";
    for (int i = 0; i < opts.query_grid; i += opts.stride) {
      for (int j = 0; j < opts.query_grid; j += opts.stride) {
        const Vec2 v = q.at(j, i);
        const double n = v.norm();
        const Vec2 d = n > 0.0 ? v / n : Vec2{};
        const double x0 = (j + 0.5) * cell_w;
        const double y0 = (i + 0.5) * cell_h;
        out += "<line class=\"arrow\" x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" +
               num(x0 + d.x * len * cell_w) + "\" y2=\"" + num(y0 + d.y * len * cell_h) + "\"/>\n";
      }
    }
    out += "</g>\n";
  }

  if (input.reference != nullptr) polyline(out, *input.reference, w, h, "ref");
  if (input.trajectory != nullptr) polyline(out, *input.trajectory, w, h, "traj");
  out += "</svg>\n";
  return out;
}

}  // namespace flownav
