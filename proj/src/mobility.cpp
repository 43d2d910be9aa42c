#include "dtnsim/mobility.hpp"

#include <algorithm>

namespace dtnsim {

MobilityState init_position(Rng& rng, const RoadGraph& graph, const GroupMotion& motion) {
  MobilityState state;
  state.vertex = static_cast<VertexId>(rng.below(graph.vertex_count()));
  state.position = graph.position(state.vertex);
  state.speed = rng.uniform(motion.speed.min, motion.speed.max);
  state.wait_until = 0.0;
  return state;
}

Point cursor_position(const MobilityState& state, const RoadGraph& graph) {
  if (!state.moving()) return graph.position(state.vertex);
  const Point a = graph.position(state.path[state.leg_index]);
  const Point b = graph.position(state.path[state.leg_index + 1]);
  const double len = graph.edge_length(state.path[state.leg_index], state.path[state.leg_index + 1]);
  const double f = len > 0.0 ? state.leg_progress / len : 0.0;
  return {a.x + (b.x - a.x) * f, a.y + (b.y - a.y) * f};
}

void step(MobilityState& state, Rng& rng, const RoadGraph& graph, const GroupMotion& motion,
          double now, double dt) {
  if (now < state.wait_until) return;

  if (!state.moving()) {
    const std::size_t n = graph.vertex_count();
    if (n < 2) return;
    auto dest = static_cast<VertexId>(rng.below(n - 1));
    if (dest >= state.vertex) ++dest;
    state.path = shortest_path(graph, state.vertex, dest).vertices;
    state.leg_index = 0;
    state.leg_progress = 0.0;
    state.speed = rng.uniform(motion.speed.min, motion.speed.max);
  }

  double remaining = state.speed * dt;
  while (remaining > 0.0) {
    const VertexId from = state.path[state.leg_index];
    const VertexId to = state.path[state.leg_index + 1];
    const double left = graph.edge_length(from, to) - state.leg_progress;
    if (remaining < left) {
      state.leg_progress += remaining;
      break;
    }
    remaining -= left;
    ++state.leg_index;
    state.leg_progress = 0.0;
    state.vertex = to;
    if (state.leg_index + 1 == state.path.size()) {
      // Arrived; distance left over in this step is dropped.
      state.path.clear();
      state.leg_index = 0;
      state.wait_until = now + rng.uniform(motion.wait.min, motion.wait.max);
      break;
    }
  }
  state.position = cursor_position(state, graph);
}

Point ScriptedMotion::at(double t) const {
  // Tolerance absorbs tick-time rounding (k * dt) against scripted times.
  constexpr double kEps = 1e-9;
  auto it = std::upper_bound(waypoints.begin(), waypoints.end(), t + kEps,
                             [](double v, const Waypoint& w) { return v < w.time; });
  if (it == waypoints.begin()) return waypoints.empty() ? Point{} : waypoints.front().position;
  return std::prev(it)->position;
}

}  // namespace dtnsim
