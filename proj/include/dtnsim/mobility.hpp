#pragma once

#include <cstddef>
#include <vector>

#include "dtnsim/map_graph.hpp"
#include "dtnsim/rng.hpp"

namespace dtnsim {

/// Closed interval [min, max].
struct Range {
  double min = 0.0;
  double max = 0.0;

  bool contains(double v) const { return v >= min && v <= max; }
  friend bool operator==(const Range&, const Range&) = default;
};

struct GroupMotion {
  Range speed;  // m/s, redrawn once per path
  Range wait;   // s, pause at each destination
};

/// Shortest-path map-based movement. While `path` is empty the node sits on
/// `vertex`; otherwise it is `leg_progress` metres along
/// path[leg_index] -> path[leg_index + 1].
struct MobilityState {
  Point position;
  VertexId vertex = 0;
  std::vector<VertexId> path;
  std::size_t leg_index = 0;
  double leg_progress = 0.0;
  double speed = 0.0;
  double wait_until = 0.0;

  bool moving() const { return !path.empty(); }
};

/// Places a node on a uniformly random vertex with an idle path.
MobilityState init_position(Rng& rng, const RoadGraph& graph, const GroupMotion& motion);

/// Advances the node by speed * dt metres along its path, drawing a new
/// destination, path and speed once the current pause is over.
void step(MobilityState& state, Rng& rng, const RoadGraph& graph, const GroupMotion& motion,
          double now, double dt);

/// Recomputes `position` from the path cursor.
Point cursor_position(const MobilityState& state, const RoadGraph& graph);

/// Piecewise-constant scripted trajectory: at time t the node sits at the
/// last waypoint whose time is <= t. Used for hand-built scenarios.
struct ScriptedMotion {
  struct Waypoint {
    double time;
    Point position;
  };
  std::vector<Waypoint> waypoints;  // sorted by time, first at t <= 0

  Point at(double t) const;
};

}  // namespace dtnsim
