#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dtnsim/config.hpp"
#include "dtnsim/reports.hpp"
#include "dtnsim/routing.hpp"

namespace dtnsim {

struct RunResult {
  Policy policy = Policy::afc;
  std::uint64_t seed = 0;
  RunStats stats;
  RunMetadata metadata;
  std::vector<Event> events;
  std::size_t invariant_violations = 0;
  std::uint64_t buffered_at_end = 0;  // counted from node buffers
};

struct RunRequest {
  std::optional<std::uint64_t> seed;    // overrides the config seed
  std::optional<Policy> policy;         // overrides Router.policy
  bool check_invariants = false;
  std::string base_dir;                 // for relative map paths
};

/// One deterministic simulation, fully in memory.
RunResult execute(const ScenarioConfig& config, const RunRequest& request = {});

RunMetadata run_metadata(const ScenarioConfig& config, Policy policy, std::uint64_t seed);

/// Writes summary.txt, row.csv and, when requested, events.tsv into out_dir.
void write_run_artifacts(const RunResult& result, const std::filesystem::path& out_dir, bool event_log);

struct CompareRequest {
  std::vector<Policy> policies;
  std::vector<std::uint64_t> seeds;
  unsigned jobs = 0;  // 0 = hardware concurrency
  std::string base_dir;
  bool check_invariants = false;
};

struct CompareCell {
  Policy policy;
  std::uint64_t seed;
  std::optional<RunResult> result;  // empty on failure
  std::string error;
};

struct MetricAggregate {
  Policy policy;
  std::size_t runs = 0;  // runs with a defined value
  std::optional<double> mean;
  std::optional<double> stddev;  // sample standard deviation, needs runs >= 2
};

struct CompareResult {
  std::vector<CompareCell> cells;  // sorted by (policy name, seed)
  std::size_t failures = 0;
};

/// Runs every (policy, seed) pair, concurrently when jobs > 1.
CompareResult compare(const ScenarioConfig& config, const CompareRequest& request);

enum class Metric { delivery_prob, latency_avg, hopcount_avg };
std::vector<MetricAggregate> aggregate(const CompareResult& result, Metric metric);

/// comparison.csv, delivery_prob.csv, latency_avg.csv, hopcount_avg.csv,
/// ranking.txt and, when any run failed, failures.txt.
void write_compare_artifacts(const CompareResult& result, const std::filesystem::path& out_dir);

}  // namespace dtnsim
