#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "polyrl/envs.hpp"

namespace polyrl {

struct TrajectoryPoint {
  int episode;
  int step;
  Point2 position;
  double reward;
  bool done;
};

// Parses the trajectory CSV schema (episode,step,x,y,reward,done).
std::vector<TrajectoryPoint> read_trajectory_csv(const std::filesystem::path& path);

// Renders the environment overlays (outer box, walls, start/goal discs,
// puddle) plus one polyline per episode; cell_size > 0 also shades visited
// coverage cells. Output is deterministic.
std::string render_svg(const std::vector<TrajectoryPoint>& trajectory,
                       const NavSpec& spec, double cell_size = 0.0);

}  // namespace polyrl
