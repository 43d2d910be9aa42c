#include "dtnsim/config.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "dtnsim/reports.hpp"

namespace dtnsim {

std::uint32_t ScenarioConfig::total_hosts() const {
  std::uint32_t n = 0;
  for (const auto& g : groups) n += g.hosts;
  return n;
}

bool ScenarioConfig::operator==(const ScenarioConfig& o) const {
  return name == o.name && end_time == o.end_time && dt == o.dt && seed == o.seed &&
         world_width == o.world_width && world_height == o.world_height && kernel == o.kernel &&
         map_file == o.map_file && grid_rows == o.grid_rows && grid_cols == o.grid_cols &&
         grid_spacing == o.grid_spacing && groups == o.groups && radio.range == o.radio.range &&
         radio.bitrate == o.radio.bitrate && interval == o.interval && size_min == o.size_min &&
         size_max == o.size_max && ttl_minutes == o.ttl_minutes && traffic_mode == o.traffic_mode &&
         source_hosts == o.source_hosts && destination_hosts == o.destination_hosts &&
         source_group == o.source_group && policy == o.policy && buffer_size == o.buffer_size &&
         warmup == o.warmup && event_log == o.event_log;
}

namespace {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::vector<std::string_view> split_list(std::string_view value) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto comma = value.find(',');
    parts.push_back(trim(value.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    value = value.substr(comma + 1);
  }
  return parts;
}

/// Key/value store that tracks which keys were consumed.
class Entries {
 public:
  void add(std::string key, std::string value, std::size_t line) {
    if (values_.count(key)) {
      throw ConfigError("line " + std::to_string(line) + ": duplicate key '" + key + "'");
    }
    values_.emplace(std::move(key), std::move(value));
  }

  std::optional<std::string> take(const std::string& key) {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    used_.insert(key);
    return it->second;
  }

  void reject_unused() const {
    for (const auto& [key, value] : values_) {
      if (!used_.count(key)) throw ConfigError("unknown key '" + key + "'");
    }
  }

 private:
  std::map<std::string, std::string> values_;
  std::set<std::string> used_;
};

double parse_real(std::string_view s, const std::string& key) {
  s = trim(s);
  double multiplier = 1.0;
  if (!s.empty() && (s.back() == 'k' || s.back() == 'M')) {
    multiplier = s.back() == 'k' ? 1e3 : 1e6;
    s.remove_suffix(1);
  }
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError("key '" + key + "': expected a number, got '" + std::string(s) + "'");
  }
  return v * multiplier;
}

std::uint64_t parse_count(std::string_view s, const std::string& key) {
  const double v = parse_real(s, key);
  if (v < 0.0 || v != std::floor(v) || v > 1.8e19) {
    throw ConfigError("key '" + key + "': expected a non-negative integer");
  }
  return static_cast<std::uint64_t>(v);
}

Range parse_range(std::string_view s, const std::string& key) {
  const auto parts = split_list(s);
  if (parts.size() == 1) {
    const double v = parse_real(parts[0], key);
    return {v, v};
  }
  if (parts.size() != 2) throw ConfigError("key '" + key + "': expected 'min, max'");
  Range r{parse_real(parts[0], key), parse_real(parts[1], key)};
  if (r.min > r.max) throw ConfigError("key '" + key + "': min exceeds max");
  return r;
}

bool parse_bool(std::string_view s, const std::string& key) {
  s = trim(s);
  if (s == "true") return true;
  if (s == "false") return false;
  throw ConfigError("key '" + key + "': expected true or false");
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError("key '" + key + "': " + what);
}

}  // namespace

ScenarioConfig parse_config(std::string_view text) {
  Entries entries;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    const auto line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    entries.add(std::string(key), std::string(trim(line.substr(eq + 1))), line_no);
  }

  ScenarioConfig c;
  auto get = [&](const std::string& key, auto&& apply) {
    if (auto v = entries.take(key)) {
      apply(*v);
    } else {
      c.defaulted.insert(key);
    }
  };

  get("Scenario.name", [&](const std::string& v) {
    require(!v.empty(), "Scenario.name", "must not be empty");
    c.name = v;
  });
  get("Scenario.endTime", [&](const std::string& v) { c.end_time = parse_real(v, "Scenario.endTime"); });
  require(c.end_time > 0.0, "Scenario.endTime", "must be positive");
  get("Scenario.updateInterval", [&](const std::string& v) { c.dt = parse_real(v, "Scenario.updateInterval"); });
  require(c.dt > 0.0, "Scenario.updateInterval", "must be positive");
  get("Scenario.contactKernel", [&](const std::string& v) {
    try {
      c.kernel = parse_contact_kernel(v);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("key 'Scenario.contactKernel': ") + e.what());
    }
  });

  get("MovementModel.rngSeed", [&](const std::string& v) { c.seed = parse_count(v, "MovementModel.rngSeed"); });
  get("MovementModel.worldSize", [&](const std::string& v) {
    const auto parts = split_list(v);
    require(parts.size() == 2, "MovementModel.worldSize", "expected 'width, height'");
    c.world_width = parse_real(parts[0], "MovementModel.worldSize");
    c.world_height = parse_real(parts[1], "MovementModel.worldSize");
  });
  require(c.world_width > 0.0 && c.world_height > 0.0, "MovementModel.worldSize", "must be positive");

  get("MapBasedMovement.mapFile", [&](const std::string& v) {
    require(!v.empty(), "MapBasedMovement.mapFile", "must not be empty");
    c.map_file = v;
  });
  get("MapBasedMovement.gridRows", [&](const std::string& v) {
    c.grid_rows = static_cast<std::uint32_t>(parse_count(v, "MapBasedMovement.gridRows"));
  });
  require(c.grid_rows >= 2, "MapBasedMovement.gridRows", "must be at least 2");
  get("MapBasedMovement.gridCols", [&](const std::string& v) {
    c.grid_cols = static_cast<std::uint32_t>(parse_count(v, "MapBasedMovement.gridCols"));
  });
  require(c.grid_cols >= 2, "MapBasedMovement.gridCols", "must be at least 2");
  get("MapBasedMovement.gridSpacing", [&](const std::string& v) {
    c.grid_spacing = parse_real(v, "MapBasedMovement.gridSpacing");
  });
  require(c.grid_spacing > 0.0, "MapBasedMovement.gridSpacing", "must be positive");

  const auto groups_value = entries.take("Scenario.nrofHostGroups");
  if (!groups_value) throw ConfigError("missing required key 'Scenario.nrofHostGroups'");
  const auto group_count = parse_count(*groups_value, "Scenario.nrofHostGroups");
  require(group_count >= 1 && group_count <= 1000, "Scenario.nrofHostGroups", "must be between 1 and 1000");

  const auto shared_id = entries.take("Group.groupID");
  const auto shared_hosts = entries.take("Group.nrofHosts");
  const auto shared_speed = entries.take("Group.speed");
  const auto shared_wait = entries.take("Group.waitTime");
  const auto shared_activity = entries.take("Group.activity");
  for (std::uint64_t g = 1; g <= group_count; ++g) {
    const std::string prefix = "Group" + std::to_string(g) + ".";
    GroupConfig group;
    auto group_value = [&](const char* name, const std::optional<std::string>& shared) {
      const std::string key = prefix + name;
      if (auto v = entries.take(key)) return std::optional<std::pair<std::string, std::string>>({key, *v});
      if (shared) return std::optional<std::pair<std::string, std::string>>({std::string("Group.") + name, *shared});
      c.defaulted.insert(key);
      return std::optional<std::pair<std::string, std::string>>{};
    };
    if (auto v = group_value("groupID", shared_id)) {
      group.id = v->second;
    } else {
      group.id = "group" + std::to_string(g);
    }
    if (auto v = group_value("nrofHosts", shared_hosts)) {
      group.hosts = static_cast<std::uint32_t>(parse_count(v->second, v->first));
      require(group.hosts >= 1, v->first, "must be at least 1");
    } else {
      throw ConfigError("missing required key '" + prefix + "nrofHosts'");
    }
    if (auto v = group_value("speed", shared_speed)) {
      group.speed = parse_range(v->second, v->first);
      require(group.speed.min > 0.0, v->first, "speeds must be positive");
    }
    if (auto v = group_value("waitTime", shared_wait)) {
      group.wait = parse_range(v->second, v->first);
      require(group.wait.min >= 0.0, v->first, "wait times must be non-negative");
    }
    if (auto v = group_value("activity", shared_activity)) {
      group.activity = parse_real(v->second, v->first);
    }
    c.groups.push_back(std::move(group));
  }
  require(c.total_hosts() >= 2, "Scenario.nrofHostGroups", "scenario needs at least 2 hosts in total");

  get("Interface.range", [&](const std::string& v) { c.radio.range = parse_real(v, "Interface.range"); });
  require(c.radio.range > 0.0, "Interface.range", "must be positive");
  get("Interface.transmitSpeed", [&](const std::string& v) {
    c.radio.bitrate = parse_real(v, "Interface.transmitSpeed");
  });
  require(c.radio.bitrate > 0.0, "Interface.transmitSpeed", "must be positive");

  get("Events.interval", [&](const std::string& v) { c.interval = parse_range(v, "Events.interval"); });
  require(c.interval.min > 0.0, "Events.interval", "must be positive");
  get("Events.size", [&](const std::string& v) {
    const auto parts = split_list(v);
    require(parts.size() == 1 || parts.size() == 2, "Events.size", "expected 'min, max'");
    c.size_min = parse_count(parts[0], "Events.size");
    c.size_max = parts.size() == 2 ? parse_count(parts[1], "Events.size") : c.size_min;
  });
  require(c.size_min > 0 && c.size_min <= c.size_max, "Events.size", "expected 0 < min <= max");
  get("Events.msgTtl", [&](const std::string& v) { c.ttl_minutes = parse_real(v, "Events.msgTtl"); });
  require(c.ttl_minutes > 0.0, "Events.msgTtl", "must be positive");
  get("Events.mode", [&](const std::string& v) {
    try {
      c.traffic_mode = parse_traffic_mode(v);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("key 'Events.mode': ") + e.what());
    }
  });
  auto host_range = [&](const std::string& key, std::optional<HostRange>& out) {
    get(key, [&](const std::string& v) {
      const auto parts = split_list(v);
      require(parts.size() == 2, key, "expected 'first, last' (last exclusive)");
      HostRange r{static_cast<std::uint32_t>(parse_count(parts[0], key)),
                  static_cast<std::uint32_t>(parse_count(parts[1], key))};
      require(r.first < r.last && r.last <= c.total_hosts(), key, "host range out of bounds");
      out = r;
    });
  };
  host_range("Events.hosts", c.source_hosts);
  host_range("Events.tohosts", c.destination_hosts);
  get("Events.sourceGroup", [&](const std::string& v) {
    const auto g = parse_count(v, "Events.sourceGroup");
    require(g >= 1 && g <= c.groups.size(), "Events.sourceGroup", "no such group");
    c.source_group = static_cast<std::uint32_t>(g);
  });

  get("Router.policy", [&](const std::string& v) {
    try {
      c.policy = parse_policy(v);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("key 'Router.policy': ") + e.what());
    }
  });
  get("Router.bufferSize", [&](const std::string& v) { c.buffer_size = parse_count(v, "Router.bufferSize"); });

  get("Report.warmup", [&](const std::string& v) { c.warmup = parse_real(v, "Report.warmup"); });
  require(c.warmup >= 0.0 && c.warmup < c.end_time, "Report.warmup", "must lie in [0, endTime)");
  get("Report.eventLog", [&](const std::string& v) { c.event_log = parse_bool(v, "Report.eventLog"); });

  entries.reject_unused();
  try {
    build_traffic(c).validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("Events: ") + e.what());
  }
  return c;
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ScenarioConfig& c) {
  std::ostringstream out;
  auto range = [](Range r) { return format_double(r.min) + ", " + format_double(r.max); };
  out << "Scenario.name = " << c.name << '\n'
      << "Scenario.endTime = " << format_double(c.end_time) << '\n'
      << "Scenario.updateInterval = " << format_double(c.dt) << '\n'
      << "Scenario.contactKernel = " << to_string(c.kernel) << '\n'
      << "Scenario.nrofHostGroups = " << c.groups.size() << '\n'
      << "MovementModel.rngSeed = " << c.seed << '\n'
      << "MovementModel.worldSize = " << format_double(c.world_width) << ", " << format_double(c.world_height) << '\n';
  if (c.map_file) out << "MapBasedMovement.mapFile = " << *c.map_file << '\n';
  out << "MapBasedMovement.gridRows = " << c.grid_rows << '\n'
      << "MapBasedMovement.gridCols = " << c.grid_cols << '\n'
      << "MapBasedMovement.gridSpacing = " << format_double(c.grid_spacing) << '\n';
  for (std::size_t i = 0; i < c.groups.size(); ++i) {
    const auto& g = c.groups[i];
    const std::string p = "Group" + std::to_string(i + 1) + ".";
    out << p << "groupID = " << g.id << '\n'
        << p << "nrofHosts = " << g.hosts << '\n'
        << p << "speed = " << range(g.speed) << '\n'
        << p << "waitTime = " << range(g.wait) << '\n'
        << p << "activity = " << format_double(g.activity) << '\n';
  }
  out << "Interface.range = " << format_double(c.radio.range) << '\n'
      << "Interface.transmitSpeed = " << format_double(c.radio.bitrate) << '\n'
      << "Events.interval = " << range(c.interval) << '\n'
      << "Events.size = " << c.size_min << ", " << c.size_max << '\n'
      << "Events.msgTtl = " << format_double(c.ttl_minutes) << '\n'
      << "Events.mode = " << to_string(c.traffic_mode) << '\n';
  if (c.source_hosts) out << "Events.hosts = " << c.source_hosts->first << ", " << c.source_hosts->last << '\n';
  if (c.destination_hosts) {
    out << "Events.tohosts = " << c.destination_hosts->first << ", " << c.destination_hosts->last << '\n';
  }
  if (c.source_group) out << "Events.sourceGroup = " << *c.source_group << '\n';
  out << "Router.policy = " << to_string(c.policy) << '\n'
      << "Router.bufferSize = " << c.buffer_size << '\n'
      << "Report.warmup = " << format_double(c.warmup) << '\n'
      << "Report.eventLog = " << (c.event_log ? "true" : "false") << '\n';
  return out.str();
}

std::shared_ptr<const RoadGraph> build_map(const ScenarioConfig& c, const std::string& base_dir) {
  RoadGraph graph;
  if (c.map_file) {
    std::filesystem::path path(*c.map_file);
    if (path.is_relative() && !base_dir.empty()) path = std::filesystem::path(base_dir) / path;
    graph = load_map_file(path.string());
  } else {
    graph = generate_grid_map(c.grid_rows, c.grid_cols, c.grid_spacing);
  }
  validate_connectivity(graph);
  const Point lo = graph.min_corner();
  const Point hi = graph.max_corner();
  if (lo.x < 0.0 || lo.y < 0.0 || hi.x > c.world_width || hi.y > c.world_height) {
    throw MapError("road graph exceeds world bounds " + format_double(c.world_width) + " x " +
                   format_double(c.world_height));
  }
  return std::make_shared<const RoadGraph>(std::move(graph));
}

TrafficConfig build_traffic(const ScenarioConfig& c) {
  TrafficConfig t;
  t.interval = c.interval;
  t.size_min = c.size_min;
  t.size_max = c.size_max;
  t.ttl = c.ttl_seconds();
  t.mode = c.traffic_mode;
  const std::uint32_t total = c.total_hosts();

  auto ids = [](std::uint32_t first, std::uint32_t last) {
    std::vector<NodeId> v;
    for (std::uint32_t i = first; i < last; ++i) v.push_back(i);
    return v;
  };
  if (c.traffic_mode == TrafficMode::uniform) {
    t.source_pool = c.source_hosts ? ids(c.source_hosts->first, c.source_hosts->last) : ids(0, total);
    t.destination_pool =
        c.destination_hosts ? ids(c.destination_hosts->first, c.destination_hosts->last) : ids(0, total);
    return t;
  }

  // fixed_source: one group sends, everyone else receives.
  const std::uint32_t group = c.source_group.value_or(static_cast<std::uint32_t>(c.groups.size()));
  std::uint32_t first = 0;
  for (std::uint32_t g = 0; g + 1 < group; ++g) first += c.groups[g].hosts;
  const std::uint32_t last = first + c.groups[group - 1].hosts;
  t.source_pool = ids(first, last);
  if (c.destination_hosts) {
    t.destination_pool = ids(c.destination_hosts->first, c.destination_hosts->last);
  } else {
    for (std::uint32_t i = 0; i < total; ++i) {
      if (i < first || i >= last) t.destination_pool.push_back(i);
    }
  }
  return t;
}

WorldConfig build_world_config(const ScenarioConfig& c, Policy policy) {
  WorldConfig w;
  w.dt = c.dt;
  w.policy = policy;
  w.radio = c.radio;
  for (const auto& g : c.groups) w.groups.push_back({g.id, g.hosts, {g.speed, g.wait}, g.activity});
  w.traffic = build_traffic(c);
  w.buffer_limit = c.buffer_size;
  w.kernel = c.kernel;
  return w;
}

}  // namespace dtnsim
