#include "dtnsim/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dtnsim {

TrafficMode parse_traffic_mode(std::string_view name) {
  if (name == "uniform") return TrafficMode::uniform;
  if (name == "fixed_source") return TrafficMode::fixed_source;
  throw std::invalid_argument("unknown traffic mode '" + std::string(name) + "'");
}

std::string_view to_string(TrafficMode mode) {
  return mode == TrafficMode::uniform ? "uniform" : "fixed_source";
}

void TrafficConfig::validate() const {
  if (!(interval.min > 0.0) || interval.min > interval.max || !std::isfinite(interval.max)) {
    throw std::invalid_argument("traffic interval must satisfy 0 < min <= max");
  }
  if (size_min > size_max) throw std::invalid_argument("traffic size range must satisfy min <= max");
  if (!(ttl > 0.0)) throw std::invalid_argument("message ttl must be positive");
  if (source_pool.empty()) throw std::invalid_argument("traffic source pool is empty");
  if (destination_pool.empty()) throw std::invalid_argument("traffic destination pool is empty");
  const bool any_pair = std::any_of(source_pool.begin(), source_pool.end(), [&](NodeId s) {
    return std::any_of(destination_pool.begin(), destination_pool.end(),
                       [s](NodeId d) { return d != s; });
  });
  if (!any_pair) {
    throw std::invalid_argument("traffic pools admit no source/destination pair with source != destination");
  }
}

TrafficGenerator::TrafficGenerator(TrafficConfig config, Rng rng, MessageId first_id)
    : config_(std::move(config)), rng_(rng), next_id_(first_id) {
  config_.validate();
  next_due_ = draw_interval();
}

double TrafficGenerator::draw_interval() { return rng_.uniform(config_.interval.min, config_.interval.max); }

std::uint64_t TrafficGenerator::draw_size() {
  return config_.size_min + rng_.below(config_.size_max - config_.size_min + 1);
}

std::optional<Message> TrafficGenerator::next_message(double now) {
  if (now < next_due_) return std::nullopt;

  const auto& sources = config_.source_pool;
  const auto& dests = config_.destination_pool;
  NodeId source = sources[rng_.below(sources.size())];
  auto has_other = [&](NodeId s) {
    return std::any_of(dests.begin(), dests.end(), [s](NodeId d) { return d != s; });
  };
  while (!has_other(source)) source = sources[rng_.below(sources.size())];
  NodeId destination = dests[rng_.below(dests.size())];
  while (destination == source) destination = dests[rng_.below(dests.size())];

  Message msg;
  msg.id = next_id_++;
  msg.source = source;
  msg.destination = destination;
  msg.size = draw_size();
  msg.created_at = now;
  msg.ttl = config_.ttl;
  msg.hop_count = 0;
  msg.path_trail = {source};

  next_due_ = now + draw_interval();
  return msg;
}

}  // namespace dtnsim
