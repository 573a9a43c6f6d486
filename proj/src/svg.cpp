#include "polyrl/svg.hpp"

#include "polyrl/csv.hpp"

namespace polyrl {

std::vector<TrajectoryPoint> read_trajectory_csv(const std::filesystem::path& path) {
  const auto rows = read_csv(path);
  if (rows.empty() || rows[0].size() != 6 || rows[0][0] != "episode")
    throw IoError("trajectory CSV: missing or malformed header in " + path.string());
  std::vector<TrajectoryPoint> out;
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != 6) throw IoError("trajectory CSV: malformed row");
    TrajectoryPoint p;
    p.episode = static_cast<int>(parse_double_field(row[0]));
    p.step = static_cast<int>(parse_double_field(row[1]));
    p.position = Point2(parse_double_field(row[2]), parse_double_field(row[3]));
    p.reward = parse_double_field(row[4]);
    p.done = parse_double_field(row[5]) != 0.0;
    out.push_back(p);
  }
  return out;
}

namespace {
// SVG y grows downward; flip into conventional orientation.
double flip_y(const NavSpec& spec, double y) { return spec.height - y; }

void append_attr(std::string& out, const char* name, double v) {
  out += ' ';
  out += name;
  out += "=\"";
  out += format_double(v);
  out += '"';
}
}  // namespace

std::string render_svg(const std::vector<TrajectoryPoint>& trajectory,
                       const NavSpec& spec, double cell_size) {
  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\"";
  append_attr(svg, "width", spec.width);
  append_attr(svg, "height", spec.height);
  svg += " viewBox=\"0 0 " + format_double(spec.width) + " " +
         format_double(spec.height) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\"";
  append_attr(svg, "width", spec.width);
  append_attr(svg, "height", spec.height);
  svg += " fill=\"white\" stroke=\"black\" stroke-width=\"0.5\"/>\n";

  if (cell_size > 0.0 && !trajectory.empty()) {
    CoverageGrid grid(spec.width, spec.height, cell_size);
    for (const auto& p : trajectory) grid.visit(p.position);
    for (int cy = 0; cy < grid.ny(); ++cy)
      for (int cx = 0; cx < grid.nx(); ++cx)
        if (grid.visited(cx, cy)) {
          svg += "<rect";
          append_attr(svg, "x", cx * cell_size);
          append_attr(svg, "y", flip_y(spec, (cy + 1) * cell_size));
          append_attr(svg, "width", cell_size);
          append_attr(svg, "height", cell_size);
          svg += " fill=\"#ffe9b0\" stroke=\"none\"/>\n";
        }
  }

  if (spec.has_puddle) {
    svg += "<rect";
    append_attr(svg, "x", spec.puddle_low.x());
    append_attr(svg, "y", flip_y(spec, spec.puddle_high.y()));
    append_attr(svg, "width", spec.puddle_high.x() - spec.puddle_low.x());
    append_attr(svg, "height", spec.puddle_high.y() - spec.puddle_low.y());
    svg += " fill=\"#9ec5e8\" stroke=\"none\"/>\n";
  }

  for (const Wall& w : spec.walls) {
    svg += "<line";
    append_attr(svg, "x1", w.a.x());
    append_attr(svg, "y1", flip_y(spec, w.a.y()));
    append_attr(svg, "x2", w.b.x());
    append_attr(svg, "y2", flip_y(spec, w.b.y()));
    svg += " stroke=\"black\" stroke-width=\"0.7\"/>\n";
  }

  svg += "<circle";
  append_attr(svg, "cx", spec.start.x());
  append_attr(svg, "cy", flip_y(spec, spec.start.y()));
  append_attr(svg, "r", std::max(spec.start_radius, 0.5));
  svg += " fill=\"#d33\"/>\n";
  svg += "<circle";
  append_attr(svg, "cx", spec.goal.x());
  append_attr(svg, "cy", flip_y(spec, spec.goal.y()));
  append_attr(svg, "r", spec.goal_radius);
  svg += " fill=\"#2a2\"/>\n";

  // One polyline per episode.
  size_t i = 0;
  while (i < trajectory.size()) {
    const int episode = trajectory[i].episode;
    svg += "<polyline points=\"";
    bool first = true;
    while (i < trajectory.size() && trajectory[i].episode == episode) {
      if (!first) svg += ' ';
      svg += format_double(trajectory[i].position.x()) + "," +
             format_double(flip_y(spec, trajectory[i].position.y()));
      first = false;
      ++i;
    }
    svg += "\" fill=\"none\" stroke=\"#555\" stroke-width=\"0.3\"/>\n";
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace polyrl
