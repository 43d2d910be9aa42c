#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dtnsim {

using VertexId = std::uint32_t;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double distance(Point a, Point b);

struct Edge {
  VertexId a = 0;
  VertexId b = 0;
  double length = 0.0;
};

class MapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parse failure; line() is 1-based, 0 when the error is not tied to a line.
class MapParseError : public MapError {
 public:
  MapParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DisconnectedMapError : public MapError {
 public:
  explicit DisconnectedMapError(std::size_t components);
  std::size_t components() const { return components_; }

 private:
  std::size_t components_;
};

/// Undirected road network. Vertices are dense ids [0, vertex_count()).
class RoadGraph {
 public:
  struct Neighbor {
    VertexId vertex;
    double length;
  };

  VertexId add_vertex(Point p);
  /// Adds an undirected edge with Euclidean length. Self-loops and duplicate
  /// edges are rejected with MapError.
  void add_edge(VertexId a, VertexId b);

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  Point position(VertexId v) const { return vertices_.at(v); }
  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  /// Neighbors sorted by vertex id.
  const std::vector<Neighbor>& neighbors(VertexId v) const { return adjacency_.at(v); }
  bool has_edge(VertexId a, VertexId b) const;
  /// Length of edge a-b; throws MapError when absent.
  double edge_length(VertexId a, VertexId b) const;

  /// Axis-aligned bounding box of all vertices.
  Point min_corner() const;
  Point max_corner() const;

 private:
  std::vector<Point> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
};

/// Line-oriented WKT subset: one `LINESTRING (x y, x y, ...)` per line, blank
/// lines and `#` comments skipped. Coincident points merge into one vertex.
RoadGraph parse_map(std::string_view text);
RoadGraph load_map_file(const std::string& path);

/// Number of connected components (0 for an empty graph).
std::size_t count_components(const RoadGraph& graph);
/// Throws DisconnectedMapError when the graph has more than one component.
void validate_connectivity(const RoadGraph& graph);

struct Path {
  std::vector<VertexId> vertices;
  double length = 0.0;
};

/// Minimum-length path; among equal-length alternatives the smallest next
/// vertex id is taken at every step.
Path shortest_path(const RoadGraph& graph, VertexId from, VertexId to);

/// rows x cols lattice, vertex (r, c) at (c * spacing, r * spacing) with id
/// r * cols + c.
RoadGraph generate_grid_map(std::size_t rows, std::size_t cols, double spacing);

}  // namespace dtnsim
