#pragma once

#include <optional>
#include <string_view>

#include "dtnsim/sim_types.hpp"

namespace dtnsim {

enum class Policy {
  direct_delivery,
  first_contact,
  afc,  // activity-based first contact
};

Policy parse_policy(std::string_view name);
std::string_view to_string(Policy policy);

/// Only single-copy policies hand custody over on relay. All three policies
/// here are single-copy.
constexpr bool is_single_copy(Policy) { return true; }

// Decide functions. Preconditions: carrier and peer are connected through
// `session`, carrier holds custody of msg.

/// Source keeps the message until it meets the destination.
bool direct_delivery_decide(const NodeState& carrier, const NodeState& peer, const Message& msg);

/// Any peer that lacks the message and has not already exchanged it on this
/// link session.
bool first_contact_decide(const NodeState& carrier, const NodeState& peer, const Message& msg,
                          const Connection& session);

/// First contact gated on activity: forward only to the destination or to a
/// peer whose activity strictly exceeds the carrier's.
bool afc_decide(const NodeState& carrier, const NodeState& peer, const Message& msg,
                const Connection& session);

bool decide(Policy policy, const NodeState& carrier, const NodeState& peer, const Message& msg,
            const Connection& session);

/// Picks the oldest buffered message the policy would forward from carrier
/// to peer. Messages already being sent elsewhere or expired at `now` are
/// skipped.
std::optional<MessageId> select_transfer(Policy policy, const NodeState& carrier,
                                         const NodeState& peer, const Connection& session,
                                         double now);

}  // namespace dtnsim
