#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dtnsim/mobility.hpp"

namespace dtnsim {

using NodeId = std::uint32_t;
using MessageId = std::uint64_t;

struct Message {
  MessageId id = 0;
  NodeId source = 0;
  NodeId destination = 0;
  std::uint64_t size = 0;  // bytes
  double created_at = 0.0;
  double ttl = 0.0;
  std::uint32_t hop_count = 0;
  std::vector<NodeId> path_trail;  // starts with source, one entry per hop

  /// A message is live up to and including created_at + ttl.
  bool expired_at(double now) const { return now - created_at > ttl; }
};

/// One message held by a node. `sending` marks it as the payload of an
/// outgoing transfer; such a record cannot be offered on another connection.
struct Custody {
  Message message;
  bool sending = false;
};

struct RadioInterface {
  double range = 10.0;          // metres
  double bitrate = 250'000.0;   // bytes per second
};

struct NodeState {
  NodeId id = 0;
  std::uint32_t group = 0;
  double activity = 0.0;
  MobilityState mobility;
  std::optional<ScriptedMotion> script;
  RadioInterface radio;
  std::vector<Custody> buffer;  // ordered by message id (creation order)
  std::uint64_t buffered_bytes = 0;

  Point position() const { return mobility.position; }
  const Custody* find(MessageId id) const;
  Custody* find(MessageId id);
  bool holds(MessageId id) const { return find(id) != nullptr; }
};

struct Transfer {
  MessageId message = 0;
  NodeId sender = 0;
  double bytes_remaining = 0.0;
  std::uint64_t started_tick = 0;
};

/// Live link between two in-range nodes, a < b.
struct Connection {
  NodeId a = 0;
  NodeId b = 0;
  double established_at = 0.0;
  std::optional<Transfer> active;
  /// Messages that completed a transfer over this link during this session.
  std::vector<MessageId> carried;
  /// Endpoint offered the free slot first; alternates after each transfer.
  NodeId next_sender = 0;

  NodeId peer_of(NodeId n) const { return n == a ? b : a; }
  bool has_carried(MessageId id) const;
};

enum class EventType : char {
  created = 'C',
  started = 'S',
  aborted = 'A',
  relayed = 'R',
  delivered = 'D',
  expired = 'E',
  dropped = 'X',
};

/// One log record. Field meaning by type:
///   created   from = source, to = destination, value = size in bytes
///   started / aborted / relayed   from = sender, to = receiver
///   delivered from = last sender, to = destination, value = hop count
///   expired / dropped             from = holder
struct Event {
  double time = 0.0;
  EventType type = EventType::created;
  MessageId message = 0;
  NodeId from = 0;
  NodeId to = 0;
  std::uint64_t value = 0;

  friend bool operator==(const Event&, const Event&) = default;
};

}  // namespace dtnsim
