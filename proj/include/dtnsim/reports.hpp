#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dtnsim/sim_types.hpp"

namespace dtnsim {

class EventLogError : public std::runtime_error {
 public:
  EventLogError(std::size_t index, const std::string& what);
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// Per-run aggregate. Optional fields are empty when undefined (no
/// deliveries).
struct RunStats {
  std::uint64_t created = 0;
  std::uint64_t delivered = 0;
  std::uint64_t expired = 0;
  std::uint64_t dropped = 0;
  std::uint64_t aborted_transfers = 0;
  std::uint64_t started_transfers = 0;
  std::uint64_t relayed = 0;  // completed transfers, including final hops
  double delivery_probability = 0.0;
  std::optional<double> latency_avg;
  std::optional<double> latency_median;
  std::optional<double> hopcount_avg;
  std::optional<double> overhead_ratio;

  /// Messages neither delivered, expired nor dropped by end of log.
  std::uint64_t still_buffered() const { return created - delivered - expired - dropped; }
};

/// Metrics over the event log. Messages created before `warmup` seconds are
/// excluded from every count. Throws EventLogError on records that reference
/// unknown messages or repeat a terminal outcome.
RunStats compute_stats(const std::vector<Event>& log, double warmup = 0.0);

/// Per-message outcome reconstructed from the log.
struct DeliveryRecord {
  MessageId message;
  double created_at;
  double delivered_at;
  std::uint32_t hop_count;
  std::vector<NodeId> trail;  // source then each receiver
};
std::vector<DeliveryRecord> delivery_records(const std::vector<Event>& log);

/// Tab-separated event log: time, type letter, message, from, to, value.
void write_event_log(const std::vector<Event>& log, std::ostream& out);
std::vector<Event> read_event_log(std::istream& in);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);
/// Fixed-point with `decimals` digits, or "NA" when empty.
std::string format_fixed(std::optional<double> v, int decimals);

/// Ordered key/value pairs describing how a run was configured.
using RunMetadata = std::vector<std::pair<std::string, std::string>>;

/// Key-value summary: metadata, counters, then ratios (4 decimals) and
/// seconds (1 decimal).
void write_summary(const RunStats& stats, const RunMetadata& metadata, std::ostream& out);

inline constexpr std::string_view kComparisonHeader =
    "protocol,seed,created,delivered,delivery_prob,latency_avg,latency_med,hopcount_avg,overhead_ratio";
std::string comparison_row(std::string_view protocol, std::uint64_t seed, const RunStats& stats);

}  // namespace dtnsim
