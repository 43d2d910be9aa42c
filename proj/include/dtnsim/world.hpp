#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "dtnsim/contact_kernels.hpp"
#include "dtnsim/map_graph.hpp"
#include "dtnsim/routing.hpp"
#include "dtnsim/sim_types.hpp"
#include "dtnsim/traffic.hpp"

namespace dtnsim {

struct GroupSpec {
  std::string name;
  std::uint32_t hosts = 0;
  GroupMotion motion;
  double activity = 0.0;
};

struct WorldConfig {
  double dt = 0.1;
  Policy policy = Policy::afc;
  RadioInterface radio;
  std::vector<GroupSpec> groups;      // node ids assigned group by group
  std::optional<TrafficConfig> traffic;
  std::uint64_t buffer_limit = 0;     // bytes per node, 0 = unbounded
  ContactKernel kernel = ContactKernel::automatic;
  bool check_invariants = false;      // custody and trail checks every step
};

/// Seconds needed to push `size` bytes over a link; bitrate must be positive.
double transfer_duration(double size, double bitrate);

/// Time-stepped store-carry-forward simulation. Each call to advance() runs,
/// in order: clock, mobility, contact detection, transfer progress, traffic,
/// TTL expiry.
class World {
 public:
  World(WorldConfig config, std::shared_ptr<const RoadGraph> graph, std::uint64_t seed);

  /// Adds a node that follows a fixed script instead of the road graph.
  /// Must be called before start().
  NodeId add_scripted_node(std::uint32_t group, double activity, ScriptedMotion script);

  /// Contact detection at t = 0. Implied by the first advance().
  void start();
  void advance();
  /// Advances until now() reaches end_time (rounded to whole ticks).
  void run_until(double end_time);

  /// Creates a message at the current time in the source's buffer.
  const Message& inject_message(NodeId source, NodeId destination, std::uint64_t size, double ttl);

  /// Rejected (false) when the link is busy, the sender lacks custody or is
  /// already sending the message, the receiver holds it, or it has expired.
  bool start_transfer(Connection& connection, NodeId sender, MessageId message);

  double now() const { return static_cast<double>(tick_) * config_.dt; }
  std::uint64_t tick() const { return tick_; }
  const WorldConfig& config() const { return config_; }
  const std::vector<NodeState>& nodes() const { return nodes_; }
  const std::map<NodePair, Connection>& connections() const { return connections_; }
  Connection* connection(NodeId a, NodeId b);
  const std::vector<Event>& events() const { return events_; }

  std::size_t live_messages() const { return live_.size(); }
  /// Messages whose custodian count is not exactly one, plus trail
  /// inconsistencies, at this instant.
  std::size_t check_invariants_now() const;
  /// Sum of check_invariants_now() over every step end (when enabled).
  std::size_t invariant_violations() const { return violations_; }

 private:
  void move_nodes();
  void detect_contacts();
  void progress_transfers();
  void generate_traffic();
  void expire_messages();
  void service_idle_links();
  void try_fill(Connection& connection);
  void abort_transfer(Connection& connection);
  void complete_transfer(Connection& connection);
  bool make_room(NodeState& node, std::uint64_t bytes);
  void add_custody(NodeState& node, Message msg);
  Message take_custody(NodeState& node, MessageId id);
  void log(EventType type, MessageId id, NodeId from, NodeId to, std::uint64_t value = 0);

  WorldConfig config_;
  std::shared_ptr<const RoadGraph> graph_;
  std::uint64_t seed_;
  std::vector<NodeState> nodes_;
  std::vector<GroupMotion> motion_;  // per node
  std::vector<Rng> node_rng_;
  std::optional<TrafficGenerator> traffic_;
  std::map<NodePair, Connection> connections_;
  std::vector<Event> events_;
  std::unordered_set<MessageId> live_;
  MessageId next_message_id_ = 0;
  std::uint64_t tick_ = 0;
  bool started_ = false;
  bool links_dirty_ = false;
  std::size_t violations_ = 0;

  std::vector<double> xs_, ys_, ranges_;
  std::vector<NodePair> pairs_;
};

}  // namespace dtnsim
