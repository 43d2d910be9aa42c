#include "dtnsim/reports.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace dtnsim {

EventLogError::EventLogError(std::size_t index, const std::string& what)
    : std::runtime_error("event record " + std::to_string(index) + ": " + what), index_(index) {}

namespace {

struct Tracked {
  double created_at = 0.0;
  bool counted = false;  // created at or after warm-up
  bool finished = false;
};

}  // namespace

RunStats compute_stats(const std::vector<Event>& log, double warmup) {
  RunStats s;
  std::unordered_map<MessageId, Tracked> messages;
  std::vector<double> latencies;
  double hop_sum = 0.0;

  for (std::size_t i = 0; i < log.size(); ++i) {
    const Event& e = log[i];
    if (e.type == EventType::created) {
      auto [it, inserted] = messages.try_emplace(e.message);
      if (!inserted) throw EventLogError(i, "message " + std::to_string(e.message) + " created twice");
      it->second.created_at = e.time;
      it->second.counted = e.time >= warmup;
      if (it->second.counted) ++s.created;
      continue;
    }
    auto it = messages.find(e.message);
    if (it == messages.end()) {
      throw EventLogError(i, "message " + std::to_string(e.message) + " was never created");
    }
    Tracked& m = it->second;
    const bool terminal = e.type == EventType::delivered || e.type == EventType::expired ||
                          e.type == EventType::dropped;
    if (terminal) {
      if (m.finished) throw EventLogError(i, "message " + std::to_string(e.message) + " already finished");
      m.finished = true;
    }
    if (!m.counted) continue;
    switch (e.type) {
      case EventType::started: ++s.started_transfers; break;
      case EventType::aborted: ++s.aborted_transfers; break;
      case EventType::relayed: ++s.relayed; break;
      case EventType::expired: ++s.expired; break;
      case EventType::dropped: ++s.dropped; break;
      case EventType::delivered:
        ++s.delivered;
        latencies.push_back(e.time - m.created_at);
        hop_sum += static_cast<double>(e.value);
        break;
      case EventType::created: break;
    }
  }

  s.delivery_probability = s.created == 0 ? 0.0 : static_cast<double>(s.delivered) / static_cast<double>(s.created);
  if (s.delivered > 0) {
    const double n = static_cast<double>(s.delivered);
    double sum = 0.0;
    for (double l : latencies) sum += l;
    s.latency_avg = sum / n;
    std::sort(latencies.begin(), latencies.end());
    const std::size_t mid = latencies.size() / 2;
    s.latency_median = latencies.size() % 2 ? latencies[mid] : 0.5 * (latencies[mid - 1] + latencies[mid]);
    s.hopcount_avg = hop_sum / n;
    s.overhead_ratio = (static_cast<double>(s.relayed) - n) / n;
  }
  return s;
}

std::vector<DeliveryRecord> delivery_records(const std::vector<Event>& log) {
  std::unordered_map<MessageId, DeliveryRecord> open;
  std::vector<DeliveryRecord> done;
  for (std::size_t i = 0; i < log.size(); ++i) {
    const Event& e = log[i];
    if (e.type == EventType::created) {
      open[e.message] = DeliveryRecord{e.message, e.time, 0.0, 0, {e.from}};
      continue;
    }
    auto it = open.find(e.message);
    if (it == open.end()) continue;
    if (e.type == EventType::relayed) {
      it->second.trail.push_back(e.to);
    } else if (e.type == EventType::delivered) {
      it->second.delivered_at = e.time;
      it->second.hop_count = static_cast<std::uint32_t>(e.value);
      done.push_back(std::move(it->second));
      open.erase(it);
    } else if (e.type == EventType::expired || e.type == EventType::dropped) {
      open.erase(it);
    }
  }
  return done;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_fixed(std::optional<double> v, int decimals) {
  if (!v) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, *v);
  return buf;
}

void write_event_log(const std::vector<Event>& log, std::ostream& out) {
  for (const Event& e : log) {
    out << format_double(e.time) << '\t' << static_cast<char>(e.type) << '\t' << e.message << '\t'
        << e.from << '\t' << e.to << '\t' << e.value << '\n';
  }
}

namespace {

template <typename T>
T parse_field(std::string_view s, std::size_t index, const char* name) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw EventLogError(index, std::string("bad ") + name + " field '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::vector<Event> read_event_log(std::istream& in) {
  std::vector<Event> log;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::size_t index = log.size();
    std::vector<std::string_view> fields;
    std::string_view rest = line;
    while (true) {
      const auto tab = rest.find('\t');
      fields.push_back(rest.substr(0, tab));
      if (tab == std::string_view::npos) break;
      rest = rest.substr(tab + 1);
    }
    if (fields.size() != 6) throw EventLogError(index, "expected 6 tab-separated fields");
    if (fields[1].size() != 1 || std::string_view("CSARDEX").find(fields[1][0]) == std::string_view::npos) {
      throw EventLogError(index, "unknown event type '" + std::string(fields[1]) + "'");
    }
    Event e;
    e.time = parse_field<double>(fields[0], index, "time");
    e.type = static_cast<EventType>(fields[1][0]);
    e.message = parse_field<MessageId>(fields[2], index, "message");
    e.from = parse_field<NodeId>(fields[3], index, "from");
    e.to = parse_field<NodeId>(fields[4], index, "to");
    e.value = parse_field<std::uint64_t>(fields[5], index, "value");
    log.push_back(e);
  }
  return log;
}

void write_summary(const RunStats& s, const RunMetadata& metadata, std::ostream& out) {
  for (const auto& [key, value] : metadata) out << key << ": " << value << '\n';
  out << "created: " << s.created << '\n'
      << "delivered: " << s.delivered << '\n'
      << "expired: " << s.expired << '\n'
      << "dropped: " << s.dropped << '\n'
      << "buffered_at_end: " << s.still_buffered() << '\n'
      << "transfers_started: " << s.started_transfers << '\n'
      << "transfers_aborted: " << s.aborted_transfers << '\n'
      << "relayed: " << s.relayed << '\n'
      << "delivery_prob: " << format_fixed(s.delivery_probability, 4) << '\n'
      << "latency_avg: " << format_fixed(s.latency_avg, 1) << '\n'
      << "latency_med: " << format_fixed(s.latency_median, 1) << '\n'
      << "hopcount_avg: " << format_fixed(s.hopcount_avg, 4) << '\n'
      << "overhead_ratio: " << format_fixed(s.overhead_ratio, 4) << '\n';
  if (!out) throw std::runtime_error("failed to write summary");
}

std::string comparison_row(std::string_view protocol, std::uint64_t seed, const RunStats& s) {
  std::ostringstream row;
  row << protocol << ',' << seed << ',' << s.created << ',' << s.delivered << ','
      << format_fixed(s.delivery_probability, 4) << ',' << format_fixed(s.latency_avg, 1) << ','
      << format_fixed(s.latency_median, 1) << ',' << format_fixed(s.hopcount_avg, 4) << ','
      << format_fixed(s.overhead_ratio, 4);
  return row.str();
}

}  // namespace dtnsim
