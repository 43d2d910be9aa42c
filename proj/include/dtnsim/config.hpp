#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dtnsim/contact_kernels.hpp"
#include "dtnsim/map_graph.hpp"
#include "dtnsim/mobility.hpp"
#include "dtnsim/routing.hpp"
#include "dtnsim/traffic.hpp"
#include "dtnsim/world.hpp"

namespace dtnsim {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GroupConfig {
  std::string id;
  std::uint32_t hosts = 0;
  Range speed{0.5, 1.5};
  Range wait{0.0, 0.0};
  double activity = 0.0;

  friend bool operator==(const GroupConfig&, const GroupConfig&) = default;
};

/// Half-open node id range [first, last).
struct HostRange {
  std::uint32_t first = 0;
  std::uint32_t last = 0;

  friend bool operator==(const HostRange&, const HostRange&) = default;
};

/// Scenario settings in a flat `Section.key = value` dialect. Group keys use
/// `GroupN.` (1-based) with `Group.` supplying defaults for every group.
struct ScenarioConfig {
  std::string name = "default";
  double end_time = 43'200.0;
  double dt = 0.1;
  std::uint64_t seed = 1;
  double world_width = 4'500.0;
  double world_height = 4'500.0;
  ContactKernel kernel = ContactKernel::automatic;

  std::optional<std::string> map_file;
  std::uint32_t grid_rows = 10;
  std::uint32_t grid_cols = 10;
  double grid_spacing = 500.0;

  std::vector<GroupConfig> groups;
  RadioInterface radio;

  Range interval{25.0, 35.0};
  std::uint64_t size_min = 500'000;
  std::uint64_t size_max = 1'000'000;
  double ttl_minutes = 300.0;
  TrafficMode traffic_mode = TrafficMode::uniform;
  std::optional<HostRange> source_hosts;
  std::optional<HostRange> destination_hosts;
  std::optional<std::uint32_t> source_group;  // 1-based, fixed_source mode

  Policy policy = Policy::afc;
  std::uint64_t buffer_size = 0;

  double warmup = 0.0;
  bool event_log = false;

  /// Keys that were not present in the input and took their default.
  std::set<std::string> defaulted;

  std::uint32_t total_hosts() const;
  double ttl_seconds() const { return ttl_minutes * 60.0; }

  /// Equality over settings only; `defaulted` is provenance, not content.
  bool operator==(const ScenarioConfig& other) const;
};

/// Parses and validates; throws ConfigError naming the offending key.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config_file(const std::string& path);
/// Every setting written explicitly; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig& config);

/// Grid or map file per the config; checked for connectivity and bounds.
/// Relative map paths resolve against `base_dir` when given.
std::shared_ptr<const RoadGraph> build_map(const ScenarioConfig& config, const std::string& base_dir = {});
TrafficConfig build_traffic(const ScenarioConfig& config);
WorldConfig build_world_config(const ScenarioConfig& config, Policy policy);

}  // namespace dtnsim
