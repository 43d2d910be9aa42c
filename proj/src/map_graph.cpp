#include "dtnsim/map_graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <queue>
#include <sstream>
#include <utility>

namespace dtnsim {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

MapParseError::MapParseError(std::size_t line, const std::string& what)
    : MapError(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

DisconnectedMapError::DisconnectedMapError(std::size_t components)
    : MapError("road graph is disconnected: " + std::to_string(components) + " components"),
      components_(components) {}

VertexId RoadGraph::add_vertex(Point p) {
  vertices_.push_back(p);
  adjacency_.emplace_back();
  return static_cast<VertexId>(vertices_.size() - 1);
}

bool RoadGraph::has_edge(VertexId a, VertexId b) const {
  if (a >= vertices_.size() || b >= vertices_.size()) return false;
  const auto& adj = adjacency_[a];
  auto it = std::lower_bound(adj.begin(), adj.end(), b,
                             [](const Neighbor& n, VertexId v) { return n.vertex < v; });
  return it != adj.end() && it->vertex == b;
}

double RoadGraph::edge_length(VertexId a, VertexId b) const {
  const auto& adj = adjacency_.at(a);
  auto it = std::lower_bound(adj.begin(), adj.end(), b,
                             [](const Neighbor& n, VertexId v) { return n.vertex < v; });
  if (it == adj.end() || it->vertex != b) {
    throw MapError("no edge between " + std::to_string(a) + " and " + std::to_string(b));
  }
  return it->length;
}

void RoadGraph::add_edge(VertexId a, VertexId b) {
  if (a >= vertices_.size() || b >= vertices_.size()) throw MapError("edge endpoint out of range");
  if (a == b) throw MapError("self-loop at vertex " + std::to_string(a));
  if (has_edge(a, b)) {
    throw MapError("duplicate edge " + std::to_string(a) + "-" + std::to_string(b));
  }
  const double len = distance(vertices_[a], vertices_[b]);
  edges_.push_back({a, b, len});
  auto insert = [&](VertexId from, VertexId to) {
    auto& adj = adjacency_[from];
    auto it = std::lower_bound(adj.begin(), adj.end(), to,
                               [](const Neighbor& n, VertexId v) { return n.vertex < v; });
    adj.insert(it, Neighbor{to, len});
  };
  insert(a, b);
  insert(b, a);
}

Point RoadGraph::min_corner() const {
  Point p{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (const auto& v : vertices_) {
    p.x = std::min(p.x, v.x);
    p.y = std::min(p.y, v.y);
  }
  return p;
}

Point RoadGraph::max_corner() const {
  Point p{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& v : vertices_) {
    p.x = std::max(p.x, v.x);
    p.y = std::max(p.y, v.y);
  }
  return p;
}

namespace {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

double parse_number(std::string_view token, std::size_t line) {
  double value = 0.0;
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value)) {
    throw MapParseError(line, "bad coordinate '" + std::string(token) + "'");
  }
  return value;
}

std::vector<Point> parse_linestring(std::string_view record, std::size_t line) {
  constexpr std::string_view kTag = "LINESTRING";
  if (record.substr(0, kTag.size()) != kTag) {
    throw MapParseError(line, "expected LINESTRING record");
  }
  record = trim(record.substr(kTag.size()));
  if (record.size() < 2 || record.front() != '(' || record.back() != ')') {
    throw MapParseError(line, "expected parenthesised coordinate list");
  }
  record = record.substr(1, record.size() - 2);

  std::vector<Point> points;
  while (true) {
    const auto comma = record.find(',');
    const auto pair = trim(record.substr(0, comma));
    const auto space = pair.find_first_of(" \t");
    if (pair.empty() || space == std::string_view::npos) {
      throw MapParseError(line, "expected 'x y' coordinate pair");
    }
    const auto xs = trim(pair.substr(0, space));
    const auto ys = trim(pair.substr(space));
    if (ys.find_first_of(" \t") != std::string_view::npos) {
      throw MapParseError(line, "too many values in coordinate pair");
    }
    points.push_back({parse_number(xs, line), parse_number(ys, line)});
    if (comma == std::string_view::npos) break;
    record = record.substr(comma + 1);
  }
  if (points.size() < 2) throw MapParseError(line, "LINESTRING needs at least 2 points");
  return points;
}

}  // namespace

RoadGraph parse_map(std::string_view text) {
  RoadGraph graph;
  std::map<std::pair<double, double>, VertexId> index;
  auto vertex_for = [&](Point p) {
    auto [it, inserted] = index.try_emplace({p.x, p.y}, 0);
    if (inserted) it->second = graph.add_vertex(p);
    return it->second;
  };

  std::size_t line_no = 0;
  std::size_t records = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    const auto raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    const auto points = parse_linestring(line, line_no);
    ++records;
    for (std::size_t i = 1; i < points.size(); ++i) {
      const VertexId a = vertex_for(points[i - 1]);
      const VertexId b = vertex_for(points[i]);
      // Repeated points and segments shared between records collapse.
      if (a == b || graph.has_edge(a, b)) continue;
      graph.add_edge(a, b);
    }
  }
  if (records == 0) throw MapParseError(0, "map contains no LINESTRING records");
  return graph;
}

RoadGraph load_map_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MapError("cannot open map file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_map(ss.str());
}

std::size_t count_components(const RoadGraph& graph) {
  const std::size_t n = graph.vertex_count();
  std::vector<bool> seen(n, false);
  std::vector<VertexId> stack;
  std::size_t components = 0;
  for (VertexId start = 0; start < n; ++start) {
    if (seen[start]) continue;
    ++components;
    seen[start] = true;
    stack.push_back(start);
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      for (const auto& nb : graph.neighbors(v)) {
        if (!seen[nb.vertex]) {
          seen[nb.vertex] = true;
          stack.push_back(nb.vertex);
        }
      }
    }
  }
  return components;
}

void validate_connectivity(const RoadGraph& graph) {
  if (graph.vertex_count() == 0) throw MapError("road graph has no vertices");
  const auto components = count_components(graph);
  if (components > 1) throw DisconnectedMapError(components);
}

Path shortest_path(const RoadGraph& graph, VertexId from, VertexId to) {
  const std::size_t n = graph.vertex_count();
  if (from >= n || to >= n) throw MapError("unknown vertex id in shortest_path query");
  if (from == to) return {{from}, 0.0};

  // Distances to the target; the forward walk then picks the smallest-id
  // neighbor that stays on some shortest path.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, kInf);
  using Item = std::pair<double, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[to] = 0.0;
  queue.push({0.0, to});
  while (!queue.empty()) {
    const auto [d, v] = queue.top();
    queue.pop();
    if (d > dist[v]) continue;
    for (const auto& nb : graph.neighbors(v)) {
      const double nd = d + nb.length;
      if (nd < dist[nb.vertex]) {
        dist[nb.vertex] = nd;
        queue.push({nd, nb.vertex});
      }
    }
  }
  if (dist[from] == kInf) throw MapError("no path between vertices");

  Path path;
  path.vertices.push_back(from);
  VertexId current = from;
  while (current != to) {
    const double here = dist[current];
    const double tol = 1e-9 * std::max(1.0, here);
    VertexId next = current;
    for (const auto& nb : graph.neighbors(current)) {
      if (std::abs(nb.length + dist[nb.vertex] - here) <= tol && dist[nb.vertex] < here) {
        next = nb.vertex;
        break;  // neighbors are id-sorted
      }
    }
    if (next == current) throw MapError("shortest path reconstruction failed");
    path.length += graph.edge_length(current, next);
    path.vertices.push_back(next);
    current = next;
  }
  return path;
}

RoadGraph generate_grid_map(std::size_t rows, std::size_t cols, double spacing) {
  if (rows < 2 || cols < 2) throw MapError("grid map needs at least 2 rows and 2 columns");
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw MapError("grid spacing must be positive");
  RoadGraph graph;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      graph.add_vertex({static_cast<double>(c) * spacing, static_cast<double>(r) * spacing});
    }
  }
  auto id = [cols](std::size_t r, std::size_t c) { return static_cast<VertexId>(r * cols + c); };
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) graph.add_edge(id(r, c), id(r, c + 1));
      if (r + 1 < rows) graph.add_edge(id(r, c), id(r + 1, c));
    }
  }
  return graph;
}

}  // namespace dtnsim
