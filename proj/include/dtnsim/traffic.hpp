#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "dtnsim/mobility.hpp"
#include "dtnsim/rng.hpp"
#include "dtnsim/sim_types.hpp"

namespace dtnsim {

enum class TrafficMode {
  uniform,       // endpoints drawn from the configured host ranges
  fixed_source,  // sources restricted to one designated group
};

TrafficMode parse_traffic_mode(std::string_view name);
std::string_view to_string(TrafficMode mode);

struct TrafficConfig {
  Range interval{25.0, 35.0};                      // s
  std::uint64_t size_min = 500'000;                // bytes
  std::uint64_t size_max = 1'000'000;              // bytes
  double ttl = 18'000.0;                           // s
  std::vector<NodeId> source_pool;
  std::vector<NodeId> destination_pool;
  TrafficMode mode = TrafficMode::uniform;

  /// Throws std::invalid_argument on an unusable configuration.
  void validate() const;
};

/// Single global message source. The first message is due one interval
/// after t = 0; each emission schedules the next one a fresh interval later.
class TrafficGenerator {
 public:
  TrafficGenerator(TrafficConfig config, Rng rng, MessageId first_id = 0);

  /// Emits at most one message when `now` has reached the due time.
  std::optional<Message> next_message(double now);

  double next_due() const { return next_due_; }
  const TrafficConfig& config() const { return config_; }

  double draw_interval();
  std::uint64_t draw_size();

 private:
  TrafficConfig config_;
  Rng rng_;
  MessageId next_id_;
  double next_due_;
};

}  // namespace dtnsim
