#include "dtnsim/world.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace dtnsim {

namespace {
constexpr double kByteEpsilon = 1e-6;
}

double transfer_duration(double size, double bitrate) {
  if (!(bitrate > 0.0)) throw std::invalid_argument("bitrate must be positive");
  if (size < 0.0) throw std::invalid_argument("size must be non-negative");
  return size / bitrate;
}

World::World(WorldConfig config, std::shared_ptr<const RoadGraph> graph, std::uint64_t seed)
    : config_(std::move(config)), graph_(std::move(graph)), seed_(seed) {
  if (!(config_.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  std::uint32_t group_index = 0;
  for (const auto& group : config_.groups) {
    if (group.hosts > 0 && (!graph_ || graph_->vertex_count() == 0)) {
      throw std::invalid_argument("map-based groups need a non-empty road graph");
    }
    for (std::uint32_t h = 0; h < group.hosts; ++h) {
      NodeState node;
      node.id = static_cast<NodeId>(nodes_.size());
      node.group = group_index;
      node.activity = group.activity;
      node.radio = config_.radio;
      Rng rng(derive_seed(seed_, 1 + node.id));
      node.mobility = init_position(rng, *graph_, group.motion);
      nodes_.push_back(std::move(node));
      motion_.push_back(group.motion);
      node_rng_.push_back(rng);
    }
    ++group_index;
  }
  if (config_.traffic) {
    traffic_.emplace(*config_.traffic, Rng(derive_seed(seed_, 0)));
  }
}

NodeId World::add_scripted_node(std::uint32_t group, double activity, ScriptedMotion script) {
  if (started_) throw std::logic_error("scripted nodes must be added before start()");
  NodeState node;
  node.id = static_cast<NodeId>(nodes_.size());
  node.group = group;
  node.activity = activity;
  node.radio = config_.radio;
  node.mobility.position = script.at(0.0);
  node.script = std::move(script);
  nodes_.push_back(std::move(node));
  motion_.push_back({});
  node_rng_.emplace_back(derive_seed(seed_, 1 + nodes_.back().id));
  return nodes_.back().id;
}

Connection* World::connection(NodeId a, NodeId b) {
  auto it = connections_.find({std::min(a, b), std::max(a, b)});
  return it == connections_.end() ? nullptr : &it->second;
}

void World::log(EventType type, MessageId id, NodeId from, NodeId to, std::uint64_t value) {
  events_.push_back({now(), type, id, from, to, value});
}

void World::start() {
  if (started_) return;
  started_ = true;
  detect_contacts();
  service_idle_links();
}

void World::advance() {
  start();
  ++tick_;                 // (1)
  move_nodes();            // (2)
  detect_contacts();       // (3)
  service_idle_links();
  progress_transfers();    // (4)
  service_idle_links();
  generate_traffic();      // (5)
  service_idle_links();
  expire_messages();       // (6)
  service_idle_links();
  if (config_.check_invariants) violations_ += check_invariants_now();
}

void World::run_until(double end_time) {
  start();
  const auto last = static_cast<std::uint64_t>(std::llround(end_time / config_.dt));
  while (tick_ < last) advance();
}

void World::move_nodes() {
  const double t = now();
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    auto& node = nodes_[i];
    if (node.script) {
      node.mobility.position = node.script->at(t);
    } else {
      step(node.mobility, node_rng_[i], *graph_, motion_[i], t, config_.dt);
    }
  }
}

void World::detect_contacts() {
  const std::size_t n = nodes_.size();
  xs_.resize(n);
  ys_.resize(n);
  ranges_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs_[i] = nodes_[i].mobility.position.x;
    ys_[i] = nodes_[i].mobility.position.y;
    ranges_[i] = nodes_[i].radio.range;
  }
  in_range_pairs(config_.kernel, {xs_, ys_, ranges_}, pairs_);

  // Drops first so that custody freed by an abort is visible to new links.
  for (auto it = connections_.begin(); it != connections_.end();) {
    if (std::binary_search(pairs_.begin(), pairs_.end(), it->first)) {
      ++it;
      continue;
    }
    if (it->second.active) abort_transfer(it->second);
    it = connections_.erase(it);
    links_dirty_ = true;
  }
  for (const auto& pair : pairs_) {
    auto [it, inserted] = connections_.try_emplace(pair);
    if (!inserted) continue;
    auto& c = it->second;
    c.a = pair.a;
    c.b = pair.b;
    c.established_at = now();
    c.next_sender = pair.a;
    links_dirty_ = true;
  }
}

void World::service_idle_links() {
  if (!links_dirty_) return;
  links_dirty_ = false;
  for (auto& [pair, c] : connections_) {
    if (!c.active) try_fill(c);
  }
}

void World::try_fill(Connection& c) {
  const NodeId first = c.next_sender;
  for (NodeId carrier : {first, c.peer_of(first)}) {
    const NodeId peer = c.peer_of(carrier);
    if (auto id = select_transfer(config_.policy, nodes_[carrier], nodes_[peer], c, now())) {
      start_transfer(c, carrier, *id);
      return;
    }
  }
}

bool World::start_transfer(Connection& c, NodeId sender, MessageId id) {
  if (c.active) return false;
  if (sender != c.a && sender != c.b) return false;
  auto& from = nodes_[sender];
  const auto& to = nodes_[c.peer_of(sender)];
  Custody* custody = from.find(id);
  if (!custody || custody->sending) return false;
  if (to.holds(id)) return false;
  if (custody->message.expired_at(now())) return false;

  custody->sending = true;
  c.active = Transfer{id, sender, static_cast<double>(custody->message.size), tick_};
  log(EventType::started, id, sender, to.id);
  return true;
}

void World::abort_transfer(Connection& c) {
  const Transfer t = *c.active;
  c.active.reset();
  if (Custody* custody = nodes_[t.sender].find(t.message)) custody->sending = false;
  log(EventType::aborted, t.message, t.sender, c.peer_of(t.sender));
  links_dirty_ = true;
}

void World::progress_transfers() {
  for (auto& [pair, c] : connections_) {
    if (!c.active || c.active->started_tick >= tick_) continue;
    const double rate = std::min(nodes_[c.a].radio.bitrate, nodes_[c.b].radio.bitrate);
    c.active->bytes_remaining -= rate * config_.dt;
    if (c.active->bytes_remaining <= kByteEpsilon) complete_transfer(c);
  }
}

void World::complete_transfer(Connection& c) {
  const Transfer t = *c.active;
  const NodeId receiver = c.peer_of(t.sender);
  const Custody* held = nodes_[t.sender].find(t.message);
  if (!held || held->message.expired_at(now())) {
    abort_transfer(c);
    return;
  }
  const std::uint64_t size = held->message.size;
  if (receiver != held->message.destination && !make_room(nodes_[receiver], size)) {
    abort_transfer(c);
    return;
  }
  c.active.reset();
  Message msg = take_custody(nodes_[t.sender], t.message);
  ++msg.hop_count;
  msg.path_trail.push_back(receiver);
  c.carried.push_back(msg.id);
  c.next_sender = receiver;
  log(EventType::relayed, msg.id, t.sender, receiver);
  if (receiver == msg.destination) {
    log(EventType::delivered, msg.id, t.sender, receiver, msg.hop_count);
    live_.erase(msg.id);
  } else {
    add_custody(nodes_[receiver], std::move(msg));
  }
  links_dirty_ = true;
}

void World::generate_traffic() {
  if (!traffic_) return;
  if (auto msg = traffic_->next_message(now())) {
    inject_message(msg->source, msg->destination, msg->size, msg->ttl);
  }
}

const Message& World::inject_message(NodeId source, NodeId destination, std::uint64_t size, double ttl) {
  if (source >= nodes_.size() || destination >= nodes_.size()) {
    throw std::out_of_range("message endpoint out of range");
  }
  if (source == destination) throw std::invalid_argument("message source equals destination");
  Message msg;
  msg.id = next_message_id_++;
  msg.source = source;
  msg.destination = destination;
  msg.size = size;
  msg.created_at = now();
  msg.ttl = ttl;
  msg.path_trail = {source};
  log(EventType::created, msg.id, source, destination, size);
  live_.insert(msg.id);
  auto& node = nodes_[source];
  make_room(node, size);
  add_custody(node, std::move(msg));
  links_dirty_ = true;
  return node.find(next_message_id_ - 1)->message;
}

void World::expire_messages() {
  const double t = now();
  for (auto& node : nodes_) {
    for (std::size_t i = 0; i < node.buffer.size();) {
      const Message& msg = node.buffer[i].message;
      if (!msg.expired_at(t)) {
        ++i;
        continue;
      }
      if (node.buffer[i].sending) {
        for (auto& [pair, c] : connections_) {
          if (c.active && c.active->sender == node.id && c.active->message == msg.id) {
            abort_transfer(c);
            break;
          }
        }
      }
      const MessageId id = msg.id;
      log(EventType::expired, id, node.id, node.id);
      live_.erase(id);
      take_custody(node, id);
    }
  }
}

bool World::make_room(NodeState& node, std::uint64_t bytes) {
  const std::uint64_t limit = config_.buffer_limit;
  if (limit == 0) return true;
  if (bytes > limit) return false;
  while (node.buffered_bytes + bytes > limit) {
    auto victim = std::find_if(node.buffer.begin(), node.buffer.end(),
                               [](const Custody& c) { return !c.sending; });
    if (victim == node.buffer.end()) return false;
    const MessageId id = victim->message.id;
    log(EventType::dropped, id, node.id, node.id);
    live_.erase(id);
    take_custody(node, id);
  }
  return true;
}

void World::add_custody(NodeState& node, Message msg) {
  node.buffered_bytes += msg.size;
  auto it = std::lower_bound(node.buffer.begin(), node.buffer.end(), msg.id,
                             [](const Custody& c, MessageId v) { return c.message.id < v; });
  node.buffer.insert(it, Custody{std::move(msg), false});
}

Message World::take_custody(NodeState& node, MessageId id) {
  auto it = std::lower_bound(node.buffer.begin(), node.buffer.end(), id,
                             [](const Custody& c, MessageId v) { return c.message.id < v; });
  if (it == node.buffer.end() || it->message.id != id) throw std::logic_error("custody record missing");
  Message msg = std::move(it->message);
  node.buffered_bytes -= msg.size;
  node.buffer.erase(it);
  return msg;
}

std::size_t World::check_invariants_now() const {
  std::size_t violations = 0;
  std::unordered_map<MessageId, std::size_t> custodians;
  for (const auto& node : nodes_) {
    for (const auto& c : node.buffer) {
      ++custodians[c.message.id];
      const auto& m = c.message;
      if (m.path_trail.empty() || m.path_trail.front() != m.source ||
          m.hop_count + 1 != m.path_trail.size() || m.path_trail.back() != node.id) {
        ++violations;
      }
    }
  }
  for (MessageId id : live_) {
    auto it = custodians.find(id);
    if (it == custodians.end() || it->second != 1) ++violations;
  }
  for (const auto& [id, count] : custodians) {
    if (!live_.count(id)) ++violations;
  }
  return violations;
}

}  // namespace dtnsim
