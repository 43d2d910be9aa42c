#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "dtnsim/mobility.hpp"

using namespace dtnsim;

namespace {

double point_segment_distance(Point p, Point a, Point b) {
  const double vx = b.x - a.x, vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  double t = len2 > 0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

double distance_to_graph(const RoadGraph& g, Point p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : g.edges()) best = std::min(best, point_segment_distance(p, g.position(e.a), g.position(e.b)));
  for (const auto& v : g.vertices()) best = std::min(best, distance(p, v));
  return best;
}

// A(0,0) - B(10,0) - C(10,10)
RoadGraph elbow() {
  RoadGraph g;
  g.add_vertex({0, 0});
  g.add_vertex({10, 0});
  g.add_vertex({10, 10});
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  return g;
}

const GroupMotion kUnitSpeed{{1.0, 1.0}, {0.0, 0.0}};

}  // namespace

TEST(InitPosition, SingleVertexGraph) {
  RoadGraph g;
  g.add_vertex({42, 7});
  Rng rng(3);
  const auto s = init_position(rng, g, kUnitSpeed);
  EXPECT_EQ(s.vertex, 0u);
  EXPECT_EQ(s.position, (Point{42, 7}));
  EXPECT_FALSE(s.moving());
  EXPECT_EQ(s.wait_until, 0.0);
}

TEST(InitPosition, ReproducibleWithSameSeed) {
  const auto g = generate_grid_map(2, 2, 10);
  Rng a(99), b(99);
  const auto sa = init_position(a, g, kUnitSpeed);
  const auto sb = init_position(b, g, kUnitSpeed);
  EXPECT_EQ(sa.vertex, sb.vertex);
  EXPECT_LT(sa.vertex, 4u);
}

TEST(InitPosition, OccupancyUniformWithinThreeSigma) {
  const auto g = generate_grid_map(10, 10, 500);
  std::vector<int> counts(100, 0);
  constexpr int kSeeds = 1000, kNodes = 100;
  for (int seed = 0; seed < kSeeds; ++seed) {
    for (int node = 0; node < kNodes; ++node) {
      Rng rng(derive_seed(static_cast<std::uint64_t>(seed), 1 + static_cast<std::uint64_t>(node)));
      ++counts[init_position(rng, g, kUnitSpeed).vertex];
    }
  }
  const double n = kSeeds * kNodes, p = 0.01;
  const double mean = n * p, sigma = std::sqrt(n * p * (1 - p));
  for (int v = 0; v < 100; ++v) EXPECT_NEAR(counts[v], mean, 3 * sigma) << "vertex " << v;
}

TEST(Step, LinearMotionAlongFirstLeg) {
  const auto g = elbow();
  MobilityState s;
  s.vertex = 0;
  s.path = {0, 1};
  s.speed = 1.0;
  Rng rng(1);
  step(s, rng, g, kUnitSpeed, 1.0, 1.0);
  EXPECT_NEAR(s.position.x, 1.0, 1e-12);
  EXPECT_NEAR(s.position.y, 0.0, 1e-12);
  EXPECT_NEAR(s.leg_progress, 1.0, 1e-12);
}

TEST(Step, CarriesOverLegBoundary) {
  const auto g = elbow();
  MobilityState s;
  s.vertex = 0;
  s.path = {0, 1, 2};
  s.leg_progress = 9.5;
  s.speed = 1.0;
  Rng rng(1);
  step(s, rng, g, kUnitSpeed, 1.0, 1.0);
  EXPECT_EQ(s.leg_index, 1u);
  EXPECT_NEAR(s.leg_progress, 0.5, 1e-12);
  EXPECT_NEAR(s.position.x, 10.0, 1e-12);
  EXPECT_NEAR(s.position.y, 0.5, 1e-12);
}

TEST(Step, PausedNodeDoesNotMove) {
  const auto g = elbow();
  MobilityState s;
  s.vertex = 0;
  s.path = {0, 1};
  s.speed = 1.0;
  s.wait_until = 100.0;
  const auto before = s.position;
  Rng rng(1);
  step(s, rng, g, kUnitSpeed, 50.0, 1.0);
  EXPECT_EQ(s.position, before);
  EXPECT_EQ(s.leg_progress, 0.0);
}

TEST(Step, ArrivalDrawsWaitThenNewPath) {
  const auto g = elbow();
  const GroupMotion motion{{1.0, 1.0}, {5.0, 5.0}};
  MobilityState s;
  s.vertex = 0;
  s.path = {0, 1};
  s.leg_progress = 9.5;
  s.speed = 1.0;
  Rng rng(1);
  step(s, rng, g, motion, 10.0, 1.0);
  EXPECT_FALSE(s.moving());
  EXPECT_EQ(s.vertex, 1u);
  EXPECT_EQ(s.position, (Point{10, 0}));
  EXPECT_DOUBLE_EQ(s.wait_until, 15.0);
  step(s, rng, g, motion, 11.0, 1.0);
  EXPECT_EQ(s.position, (Point{10, 0}));
  step(s, rng, g, motion, 15.0, 1.0);
  EXPECT_TRUE(s.moving());
  EXPECT_NE(s.path.back(), 1u);
}

TEST(Step, SingleVertexGraphStaysPut) {
  RoadGraph g;
  g.add_vertex({1, 1});
  Rng rng(5);
  auto s = init_position(rng, g, kUnitSpeed);
  for (int i = 1; i <= 100; ++i) step(s, rng, g, kUnitSpeed, i * 0.1, 0.1);
  EXPECT_EQ(s.position, (Point{1, 1}));
}

TEST(StepProperty, StaysOnGraphWithSpeedInRange) {
  const auto g = generate_grid_map(4, 5, 37.5);
  const GroupMotion motion{{0.5, 1.5}, {0.0, 3.0}};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    auto s = init_position(rng, g, motion);
    for (int i = 1; i <= 3000; ++i) {
      step(s, rng, g, motion, i * 0.1, 0.1);
      ASSERT_LE(distance_to_graph(g, s.position), 1e-6);
      ASSERT_TRUE(motion.speed.contains(s.speed));
      if (s.moving()) {
        const double len = g.edge_length(s.path[s.leg_index], s.path[s.leg_index + 1]);
        ASSERT_GE(s.leg_progress, 0.0);
        ASSERT_LE(s.leg_progress, len);
      }
    }
  }
}

TEST(StepProperty, DistanceWithinOnePathEqualsSpeedTimesTime) {
  const auto g = generate_grid_map(6, 6, 100);
  Rng rng(11);
  auto s = init_position(rng, g, kUnitSpeed);
  step(s, rng, g, kUnitSpeed, 0.1, 0.1);  // draws the first path
  ASSERT_TRUE(s.moving());
  const auto path = s.path;
  auto travelled = [&] {
    double d = 0.0;
    for (std::size_t i = 0; i < s.leg_index; ++i) d += g.edge_length(path[i], path[i + 1]);
    return d + s.leg_progress;
  };
  const double start = travelled();
  int steps = 0;
  while (true) {
    MobilityState probe = s;
    Rng probe_rng = rng;
    step(probe, probe_rng, g, kUnitSpeed, (steps + 2) * 0.1, 0.1);
    if (!probe.moving()) break;
    s = probe;
    rng = probe_rng;
    ++steps;
  }
  ASSERT_GT(steps, 100);
  const double expected = steps * 0.1 * s.speed;
  EXPECT_NEAR(travelled() - start, expected, 1e-6 * expected);
}

TEST(StepProperty, DestinationsCoverEveryVertex) {
  const auto g = generate_grid_map(3, 3, 10);
  Rng rng(2024);
  auto s = init_position(rng, g, kUnitSpeed);
  std::set<VertexId> seen;
  for (int i = 1; i <= 20000; ++i) {
    step(s, rng, g, kUnitSpeed, i * 1.0, 1.0);
    if (s.moving()) seen.insert(s.path.back());
  }
  EXPECT_EQ(seen.size(), g.vertex_count());
}

TEST(StepProperty, TrajectoryBitIdenticalForSameSeed) {
  const auto g = generate_grid_map(5, 5, 50);
  const GroupMotion motion{{0.5, 1.5}, {0.0, 10.0}};
  Rng r1(77), r2(77);
  auto a = init_position(r1, g, motion);
  auto b = init_position(r2, g, motion);
  for (int i = 1; i <= 5000; ++i) {
    step(a, r1, g, motion, i * 0.1, 0.1);
    step(b, r2, g, motion, i * 0.1, 0.1);
    ASSERT_EQ(a.position, b.position);
  }
}

TEST(ScriptedMotion, PiecewiseConstant) {
  ScriptedMotion m{{{0.0, {0, 0}}, {10.0, {5, 5}}, {20.0, {9, 9}}}};
  EXPECT_EQ(m.at(0.0), (Point{0, 0}));
  EXPECT_EQ(m.at(9.9), (Point{0, 0}));
  EXPECT_EQ(m.at(100 * 0.1), (Point{5, 5}));
  EXPECT_EQ(m.at(19.99), (Point{5, 5}));
  EXPECT_EQ(m.at(500.0), (Point{9, 9}));
}
