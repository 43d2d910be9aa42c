// Acceptance suite: runs every criterion and prints one PASS/FAIL line each.
// Exits nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dtnsim/runner.hpp"
#include "dtnsim/world.hpp"

using namespace dtnsim;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

const std::vector<std::uint64_t> kSeeds{1, 2, 3, 4, 5};
const std::vector<Policy> kPolicies{Policy::afc, Policy::direct_delivery, Policy::first_contact};

std::string fmt(double v, int decimals = 4) { return format_fixed(v, decimals); }

ScenarioConfig default_scenario() {
  return load_config_file(std::string(DTNSIM_SOURCE_DIR) + "/scenarios/default.cfg");
}

/// Every (policy, seed) run of the default scenario, with the custody check on.
struct Sweep {
  ScenarioConfig config;
  CompareResult result;

  std::vector<const RunResult*> runs(Policy p) const {
    std::vector<const RunResult*> out;
    for (const auto& c : result.cells) {
      if (c.policy == p && c.result) out.push_back(&*c.result);
    }
    return out;
  }

  double mean(Policy p, Metric m) const {
    for (const auto& a : aggregate(result, m)) {
      if (a.policy == p && a.mean) return *a.mean;
    }
    return std::nan("");
  }
};

const Sweep& sweep() {
  static const Sweep s = [] {
    Sweep out;
    out.config = default_scenario();
    CompareRequest request;
    request.policies = kPolicies;
    request.seeds = kSeeds;
    request.jobs = std::max(1u, std::thread::hardware_concurrency());
    request.check_invariants = true;
    out.result = compare(out.config, request);
    return out;
  }();
  return s;
}

std::string cell_failures() {
  std::string s;
  for (const auto& c : sweep().result.cells) {
    if (!c.result) s += " " + std::string(to_string(c.policy)) + "/" + std::to_string(c.seed) + ": " + c.error;
  }
  return s;
}

Verdict direct_delivery_hops() {
  const auto config = default_scenario();
  const auto t0 = std::chrono::steady_clock::now();
  RunRequest request;
  request.seed = 1;
  request.policy = Policy::direct_delivery;
  const auto timed = execute(config, request);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::size_t bad = 0, delivered = 0;
  bool formatted = true;
  std::vector<const RunResult*> runs = sweep().runs(Policy::direct_delivery);
  runs.push_back(&timed);
  for (const RunResult* r : runs) {
    for (const auto& e : r->events) {
      if (e.type != EventType::delivered) continue;
      ++delivered;
      if (e.value != 1) ++bad;
    }
    formatted = formatted && format_fixed(r->stats.hopcount_avg, 4) == "1.0000";
  }
  const bool pass = bad == 0 && delivered > 0 && formatted && seconds < 120.0;
  return {pass, std::to_string(delivered) + " deliveries over " + std::to_string(runs.size()) +
                    " runs, " + std::to_string(bad) + " with hop_count != 1, hopcount_avg " +
                    format_fixed(timed.stats.hopcount_avg, 4) + ", single run " + fmt(seconds, 1) + " s"};
}

Verdict directional_ordering() {
  const auto& s = sweep();
  if (s.result.failures) return {false, "runs failed:" + cell_failures()};
  const double dp_afc = s.mean(Policy::afc, Metric::delivery_prob);
  const double dp_dd = s.mean(Policy::direct_delivery, Metric::delivery_prob);
  const double dp_fc = s.mean(Policy::first_contact, Metric::delivery_prob);
  const double h_afc = s.mean(Policy::afc, Metric::hopcount_avg);
  const double h_dd = s.mean(Policy::direct_delivery, Metric::hopcount_avg);
  const double h_fc = s.mean(Policy::first_contact, Metric::hopcount_avg);
  const bool pass = dp_afc > dp_dd && dp_dd > dp_fc && h_fc > h_afc && h_afc > h_dd && h_fc >= 5.0 * h_afc;
  return {pass, "delivery afc " + fmt(dp_afc) + " > dd " + fmt(dp_dd) + " > fc " + fmt(dp_fc) + "; hops fc " +
                    fmt(h_fc) + " > afc " + fmt(h_afc) + " > dd " + fmt(h_dd) + "; fc/afc " +
                    fmt(h_fc / h_afc, 2) + " (" + std::to_string(kSeeds.size()) + " seeds)"};
}

Verdict latency_advantage() {
  const auto& s = sweep();
  if (s.result.failures) return {false, "runs failed:" + cell_failures()};
  const double l_afc = s.mean(Policy::afc, Metric::latency_avg);
  const double l_dd = s.mean(Policy::direct_delivery, Metric::latency_avg);
  return {l_afc < l_dd, "mean latency afc " + fmt(l_afc, 1) + " s vs dd " + fmt(l_dd, 1) + " s"};
}

Verdict custody_invariant() {
  const auto& s = sweep();
  std::size_t violations = 0, runs = 0;
  for (Policy p : {Policy::first_contact, Policy::afc}) {
    for (const RunResult* r : s.runs(p)) {
      violations += r->invariant_violations;
      ++runs;
    }
  }
  const bool pass = runs == 2 * kSeeds.size() && violations == 0;
  return {pass, std::to_string(violations) + " violations over " + std::to_string(runs) + " full runs"};
}

Verdict monotone_custody() {
  const auto& s = sweep();
  std::vector<double> activity;
  for (const auto& g : s.config.groups) activity.insert(activity.end(), g.hosts, g.activity);
  std::size_t checked = 0, bad = 0, runs = 0;
  std::uint32_t max_hops = 0;
  for (const RunResult* r : s.runs(Policy::afc)) {
    ++runs;
    for (const auto& rec : delivery_records(r->events)) {
      ++checked;
      max_hops = std::max(max_hops, rec.hop_count);
      bool ok = rec.hop_count <= 3 && rec.trail.size() == rec.hop_count + 1u;
      // Every hop except the last must climb in activity.
      for (std::size_t i = 1; ok && i + 1 < rec.trail.size(); ++i) {
        ok = activity[rec.trail[i]] > activity[rec.trail[i - 1]];
      }
      if (!ok) ++bad;
    }
  }
  const bool pass = runs == kSeeds.size() && checked > 0 && bad == 0;
  return {pass, std::to_string(bad) + " violations among " + std::to_string(checked) +
                    " deliveries over " + std::to_string(runs) + " seeds, max hops " + std::to_string(max_hops)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict determinism() {
  const fs::path work = fs::path(DTNSIM_WORK_DIR) / "determinism";
  fs::remove_all(work);
  const std::string config = std::string(DTNSIM_SOURCE_DIR) + "/scenarios/default.cfg";
  for (const char* run : {"a", "b"}) {
    const std::string cmd = std::string("\"") + DTNSIM_CLI + "\" run -c \"" + config + "\" -s 3 --event-log -o \"" +
                            (work / run).string() + "\" > \"" + (work.string() + "_" + run + ".stdout") + "\"";
    fs::create_directories(work);
    if (std::system(cmd.c_str()) != 0) return {false, "run " + std::string(run) + " failed"};
  }
  std::string detail;
  bool pass = true;
  for (const char* f : {"summary.txt", "events.tsv"}) {
    const auto a = slurp(work / "a" / f);
    const auto b = slurp(work / "b" / f);
    const bool same = !a.empty() && a == b;
    pass = pass && same;
    detail += std::string(f) + (same ? " identical (" + std::to_string(a.size()) + " bytes) " : " DIFFERS ");
  }
  return {pass, detail};
}

/// Two stationary nodes 5 m apart; returns delivery time minus creation.
std::optional<double> two_node_transfer(std::uint64_t size) {
  WorldConfig c;
  c.policy = Policy::direct_delivery;
  World w(c, nullptr, 1);
  w.add_scripted_node(0, 0.0, {{{0.0, {0.0, 0.0}}}});
  w.add_scripted_node(0, 0.0, {{{0.0, {5.0, 0.0}}}});
  w.inject_message(0, 1, size, 18'000.0);
  w.run_until(20.0);
  for (const auto& e : w.events()) {
    if (e.type == EventType::delivered) return e.time;
  }
  return std::nullopt;
}

Verdict transfer_timing() {
  const double dt = WorldConfig{}.dt;
  const auto big = two_node_transfer(1'000'000);
  const auto half = two_node_transfer(500'000);
  const bool pass = big && half && std::abs(*big - 4.0) <= dt && std::abs(*half - 2.0) <= dt;
  return {pass, "1,000,000 B in " + format_fixed(big, 3) + " s, 500,000 B in " + format_fixed(half, 3) + " s"};
}

Verdict ttl_enforcement() {
  const auto& s = sweep();
  const double ttl = s.config.ttl_seconds();
  const double end = s.config.end_time;
  std::size_t late = 0, unexpired = 0, runs = 0, old_undelivered = 0;
  for (const auto& cell : s.result.cells) {
    if (!cell.result) continue;
    ++runs;
    std::map<MessageId, double> created;
    std::map<MessageId, char> outcome;
    for (const auto& e : cell.result->events) {
      if (e.type == EventType::created) created[e.message] = e.time;
      if (e.type == EventType::delivered) {
        outcome[e.message] = 'D';
        if (e.time - created[e.message] > ttl) ++late;
      }
      if (e.type == EventType::expired) outcome[e.message] = 'E';
      if (e.type == EventType::dropped) outcome[e.message] = 'X';
    }
    for (const auto& [id, t] : created) {
      if (end - t <= ttl || outcome[id] == 'D') continue;
      ++old_undelivered;
      if (outcome[id] != 'E') ++unexpired;
    }
  }
  const bool pass = runs == s.result.cells.size() && late == 0 && unexpired == 0;
  return {pass, std::to_string(late) + " deliveries beyond TTL, " + std::to_string(unexpired) + " of " +
                    std::to_string(old_undelivered) + " old undelivered messages not expired, " +
                    std::to_string(runs) + " runs"};
}

// Four-node routing oracle. Nodes: S (student source), T (staff relay),
// B (student bystander), D (student destination). Each contact is a
// half-open interval during which both nodes sit 5 m apart at a private
// meeting spot; otherwise every node rests at a distant home.
enum Role : NodeId { S = 0, T = 1, B = 2, D = 3 };

struct Contact {
  NodeId u, v;
  double start, end;
};

const std::vector<Contact> kContacts{
    {S, B, 10, 30}, {T, S, 40, 41}, {S, T, 50, 70}, {B, D, 100, 120}, {T, D, 150, 170}, {D, S, 300, 320},
};
const double kActivity[4] = {0.0, 1.0, 0.0, 0.0};
constexpr std::uint64_t kOracleSize = 500'000;
constexpr double kRate = 250'000.0;

ScriptedMotion script_for(NodeId n) {
  const Point home{1'000.0 * n, 5'000.0};
  std::vector<ScriptedMotion::Waypoint> wp{{0.0, home}};
  for (std::size_t k = 0; k < kContacts.size(); ++k) {
    const auto& c = kContacts[k];
    if (c.u != n && c.v != n) continue;
    const Point spot{200.0 * static_cast<double>(k) + (n == std::min(c.u, c.v) ? 0.0 : 5.0), 0.0};
    wp.push_back({c.start, spot});
    wp.push_back({c.end, home});
  }
  return {wp};
}

/// Contact intervals observed by sampling the scripts every dt.
std::vector<Contact> sampled_contacts(double dt, double horizon) {
  std::vector<ScriptedMotion> scripts;
  for (NodeId n = 0; n < 4; ++n) scripts.push_back(script_for(n));
  std::vector<Contact> out;
  std::map<std::pair<NodeId, NodeId>, double> open;
  for (std::uint64_t tick = 0; tick * dt <= horizon; ++tick) {
    const double t = static_cast<double>(tick) * dt;
    for (NodeId a = 0; a < 4; ++a) {
      for (NodeId b = a + 1; b < 4; ++b) {
        const bool near = distance(scripts[a].at(t), scripts[b].at(t)) <= 10.0;
        auto it = open.find({a, b});
        if (near && it == open.end()) open[{a, b}] = t;
        if (!near && it != open.end()) {
          out.push_back({a, b, it->second, t});
          open.erase(it);
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Contact& x, const Contact& y) { return x.start < y.start; });
  return out;
}

struct OracleOutcome {
  std::vector<NodeId> trail;
  std::optional<double> delivered_at;
};

/// Hand simulation of one message over the contact table: each contact in
/// time order either hands custody across (if the policy allows and the
/// contact lasts a full transfer time) or does nothing.
OracleOutcome enumerate(Policy p) {
  OracleOutcome o{{S}, std::nullopt};
  NodeId holder = S;
  double free_at = 0.0;
  const double need = kOracleSize / kRate;
  for (const auto& c : kContacts) {
    if (o.delivered_at) break;
    if (c.u != holder && c.v != holder) continue;
    const NodeId peer = c.u == holder ? c.v : c.u;
    bool allowed = false;
    switch (p) {
      case Policy::direct_delivery: allowed = peer == D; break;
      case Policy::first_contact: allowed = true; break;
      case Policy::afc: allowed = peer == D || kActivity[peer] > kActivity[holder]; break;
    }
    const double begin = std::max(c.start, free_at);
    if (!allowed || c.end - begin < need) continue;
    holder = peer;
    free_at = begin + need;
    o.trail.push_back(peer);
    if (peer == D) o.delivered_at = free_at;
  }
  return o;
}

Verdict routing_oracle() {
  const double dt = WorldConfig{}.dt;
  std::string detail;
  bool pass = true;

  const auto observed = sampled_contacts(dt, 400.0);
  bool table_ok = observed.size() == kContacts.size();
  for (std::size_t i = 0; table_ok && i < observed.size(); ++i) {
    const auto& want = kContacts[i];
    table_ok = std::min(want.u, want.v) == observed[i].u && std::max(want.u, want.v) == observed[i].v &&
               std::abs(observed[i].start - want.start) < 1e-9 && std::abs(observed[i].end - want.end) < 1e-9;
  }
  if (!table_ok) {
    pass = false;
    detail += "contact table mismatch; ";
  }

  // Hand-derived expectations, independent of enumerate().
  const std::map<Policy, OracleOutcome> expected{
      {Policy::direct_delivery, {{S, D}, 302.0}},
      {Policy::first_contact, {{S, B, D}, 102.0}},
      {Policy::afc, {{S, T, D}, 152.0}},
  };
  for (Policy p : kPolicies) {
    const auto oracle = enumerate(p);
    const auto& hand = expected.at(p);
    if (oracle.trail != hand.trail || oracle.delivered_at != hand.delivered_at) {
      pass = false;
      detail += std::string(to_string(p)) + " enumeration disagrees with hand derivation; ";
    }

    WorldConfig c;
    c.policy = p;
    c.check_invariants = true;
    World w(c, nullptr, 1);
    for (NodeId n = 0; n < 4; ++n) w.add_scripted_node(n == T ? 1 : 0, kActivity[n], script_for(n));
    w.inject_message(S, D, kOracleSize, 18'000.0);
    w.run_until(400.0);
    const auto records = delivery_records(w.events());
    const bool match = records.size() == 1 && records[0].trail == oracle.trail && oracle.delivered_at &&
                       std::llround(records[0].delivered_at / dt) == std::llround(*oracle.delivered_at / dt) &&
                       w.invariant_violations() == 0;
    pass = pass && match;
    std::string trail;
    for (NodeId n : records.empty() ? std::vector<NodeId>{} : records[0].trail) trail += "STBD"[n];
    detail += std::string(to_string(p)) + " " + (trail.empty() ? "undelivered" : trail) + "@" +
              (records.empty() ? "NA" : format_fixed(records[0].delivered_at, 1)) + (match ? " ok; " : " MISMATCH; ");
  }
  return {pass, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"1 direct-delivery hop count exactly 1", direct_delivery_hops},
      {"2 delivery and hop-count ordering", directional_ordering},
      {"3 A-FC latency below Direct Delivery", latency_advantage},
      {"4 single-copy custody invariant", custody_invariant},
      {"5 A-FC monotone custody", monotone_custody},
      {"6 determinism of run outputs", determinism},
      {"7 transfer timing", transfer_timing},
      {"8 TTL enforcement", ttl_enforcement},
      {"9 four-node routing oracle", routing_oracle},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failed;
    while (!v.detail.empty() && (v.detail.back() == ' ' || v.detail.back() == ';')) v.detail.pop_back();
    std::cout << (v.pass ? "PASS" : "FAIL") << "  criterion " << name << ": " << v.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
