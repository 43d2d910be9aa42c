#include "dtnsim/routing.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace dtnsim {

Policy parse_policy(std::string_view name) {
  if (name == "direct_delivery") return Policy::direct_delivery;
  if (name == "first_contact") return Policy::first_contact;
  if (name == "afc") return Policy::afc;
  throw std::invalid_argument("unknown routing policy '" + std::string(name) +
                              "' (expected direct_delivery, first_contact or afc)");
}

std::string_view to_string(Policy policy) {
  switch (policy) {
    case Policy::direct_delivery: return "direct_delivery";
    case Policy::first_contact: return "first_contact";
    case Policy::afc: return "afc";
  }
  return "afc";
}

bool direct_delivery_decide(const NodeState&, const NodeState& peer, const Message& msg) {
  return peer.id == msg.destination;
}

bool first_contact_decide(const NodeState&, const NodeState& peer, const Message& msg,
                          const Connection& session) {
  return !peer.holds(msg.id) && !session.has_carried(msg.id);
}

bool afc_decide(const NodeState& carrier, const NodeState& peer, const Message& msg,
                const Connection& session) {
  if (peer.holds(msg.id) || session.has_carried(msg.id)) return false;
  return peer.id == msg.destination || peer.activity > carrier.activity;
}

bool decide(Policy policy, const NodeState& carrier, const NodeState& peer, const Message& msg,
            const Connection& session) {
  switch (policy) {
    case Policy::direct_delivery: return direct_delivery_decide(carrier, peer, msg);
    case Policy::first_contact: return first_contact_decide(carrier, peer, msg, session);
    case Policy::afc: return afc_decide(carrier, peer, msg, session);
  }
  return false;
}

std::optional<MessageId> select_transfer(Policy policy, const NodeState& carrier,
                                         const NodeState& peer, const Connection& session,
                                         double now) {
  for (const auto& custody : carrier.buffer) {
    if (custody.sending || custody.message.expired_at(now)) continue;
    if (decide(policy, carrier, peer, custody.message, session)) return custody.message.id;
  }
  return std::nullopt;
}

}  // namespace dtnsim
