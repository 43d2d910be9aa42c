#include <gtest/gtest.h>

#include "dtnsim/routing.hpp"

using namespace dtnsim;

namespace {

NodeState node(NodeId id, double activity) {
  NodeState n;
  n.id = id;
  n.activity = activity;
  return n;
}

Message message(MessageId id, NodeId source, NodeId destination) {
  Message m;
  m.id = id;
  m.source = source;
  m.destination = destination;
  m.size = 500'000;
  m.created_at = static_cast<double>(id);
  m.ttl = 18'000;
  m.path_trail = {source};
  return m;
}

void give(NodeState& n, Message m) { n.buffer.push_back({std::move(m), false}); }

Connection link(NodeId a, NodeId b) {
  Connection c;
  c.a = std::min(a, b);
  c.b = std::max(a, b);
  c.next_sender = c.a;
  return c;
}

}  // namespace

TEST(DirectDelivery, OnlyToDestination) {
  const auto carrier = node(0, 0), dest = node(3, 0), staff = node(7, 1), other = node(2, 0);
  const auto m = message(1, 0, 3);
  EXPECT_TRUE(direct_delivery_decide(carrier, dest, m));
  EXPECT_FALSE(direct_delivery_decide(carrier, other, m));
  EXPECT_FALSE(direct_delivery_decide(carrier, staff, m));
}

TEST(FirstContact, AnyFreshPeer) {
  const auto carrier = node(0, 0), peer = node(5, 0);
  const auto m = message(1, 0, 9);
  EXPECT_TRUE(first_contact_decide(carrier, peer, m, link(0, 5)));
}

TEST(FirstContact, PeerAlreadyHoldingIsSkipped) {
  const auto carrier = node(0, 0);
  auto peer = node(5, 0);
  const auto m = message(1, 0, 9);
  give(peer, m);
  EXPECT_FALSE(first_contact_decide(carrier, peer, m, link(0, 5)));
}

TEST(FirstContact, NoBounceBackWithinSession) {
  const auto carrier = node(5, 0), peer = node(0, 0);
  const auto m = message(1, 0, 9);
  auto session = link(0, 5);
  session.carried.push_back(m.id);
  EXPECT_FALSE(first_contact_decide(carrier, peer, m, session));
  EXPECT_TRUE(first_contact_decide(carrier, peer, m, link(0, 5)));  // new session
}

TEST(Afc, StudentUploadsToStaff) {
  const auto student = node(64, 0), staff = node(110, 1);
  const auto m = message(1, 64, 3);
  EXPECT_TRUE(afc_decide(student, staff, m, link(64, 110)));
}

TEST(Afc, StaffDoesNotHandToStudent) {
  const auto staff = node(110, 1), student = node(64, 0);
  const auto m = message(1, 0, 3);
  EXPECT_FALSE(afc_decide(staff, student, m, link(64, 110)));
}

TEST(Afc, EqualActivityBlockedUnlessDestination) {
  const auto staff = node(110, 1), other_staff = node(111, 1), dest = node(3, 0);
  const auto m = message(1, 0, 3);
  EXPECT_FALSE(afc_decide(staff, other_staff, m, link(110, 111)));
  EXPECT_TRUE(afc_decide(staff, dest, m, link(3, 110)));
  const auto m2 = message(2, 0, 111);
  EXPECT_TRUE(afc_decide(staff, other_staff, m2, link(110, 111)));
}

TEST(Policies, DecideIsPure) {
  const auto a = node(0, 0), b = node(1, 1);
  const auto m = message(4, 0, 2);
  const auto s = link(0, 1);
  for (Policy p : {Policy::direct_delivery, Policy::first_contact, Policy::afc}) {
    EXPECT_EQ(decide(p, a, b, m, s), decide(p, a, b, m, s));
  }
}

TEST(Policies, ParseRoundTrip) {
  for (Policy p : {Policy::direct_delivery, Policy::first_contact, Policy::afc}) {
    EXPECT_EQ(parse_policy(to_string(p)), p);
  }
  EXPECT_THROW(parse_policy("epidemic"), std::invalid_argument);
}

TEST(SelectTransfer, OldestEligibleFirst) {
  auto carrier = node(0, 0);
  const auto peer = node(1, 1);
  give(carrier, message(3, 0, 9));
  give(carrier, message(5, 0, 9));
  give(carrier, message(8, 0, 9));
  EXPECT_EQ(select_transfer(Policy::afc, carrier, peer, link(0, 1), 100.0), MessageId{3});
  carrier.buffer[0].sending = true;
  EXPECT_EQ(select_transfer(Policy::afc, carrier, peer, link(0, 1), 100.0), MessageId{5});
}

TEST(SelectTransfer, NothingEligible) {
  auto carrier = node(0, 0);
  const auto peer = node(1, 0);
  give(carrier, message(3, 0, 9));
  EXPECT_FALSE(select_transfer(Policy::direct_delivery, carrier, peer, link(0, 1), 0.0));
  EXPECT_FALSE(select_transfer(Policy::afc, carrier, peer, link(0, 1), 0.0));
  EXPECT_FALSE(select_transfer(Policy::first_contact, node(0, 0), peer, link(0, 1), 0.0));
}

TEST(SelectTransfer, SkipsExpired) {
  auto carrier = node(0, 0);
  const auto peer = node(1, 0);
  give(carrier, message(0, 0, 1));
  EXPECT_TRUE(select_transfer(Policy::direct_delivery, carrier, peer, link(0, 1), 18'000.0));
  EXPECT_FALSE(select_transfer(Policy::direct_delivery, carrier, peer, link(0, 1), 18'000.1));
}
