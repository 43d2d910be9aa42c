#include "dtnsim/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "dtnsim/world.hpp"

namespace dtnsim {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw std::runtime_error("cannot create output directory '" + dir.string() + "'");
  }
}

std::string join(const std::set<std::string>& keys) {
  std::string s;
  for (const auto& k : keys) {
    if (!s.empty()) s += ',';
    s += k;
  }
  return s.empty() ? "none" : s;
}

}  // namespace

RunMetadata run_metadata(const ScenarioConfig& c, Policy policy, std::uint64_t seed) {
  RunMetadata m;
  m.emplace_back("scenario", c.name);
  m.emplace_back("policy", std::string(to_string(policy)));
  m.emplace_back("seed", std::to_string(seed));
  m.emplace_back("duration_s", format_fixed(c.end_time, 1));
  m.emplace_back("dt_s", format_double(c.dt));
  m.emplace_back("map", c.map_file ? "file " + *c.map_file
                                   : "grid " + std::to_string(c.grid_rows) + "x" + std::to_string(c.grid_cols) +
                                         " spacing " + format_double(c.grid_spacing));
  std::string groups;
  for (const auto& g : c.groups) {
    if (!groups.empty()) groups += "; ";
    groups += g.id + " n=" + std::to_string(g.hosts) + " speed=" + format_double(g.speed.min) + "-" +
              format_double(g.speed.max) + " wait=" + format_double(g.wait.min) + "-" +
              format_double(g.wait.max) + " activity=" + format_double(g.activity);
  }
  m.emplace_back("groups", groups);
  m.emplace_back("placement", "uniform random vertex");
  m.emplace_back("traffic_mode", std::string(to_string(c.traffic_mode)));
  m.emplace_back("warmup_s", format_double(c.warmup));
  m.emplace_back("defaulted", join(c.defaulted));
  return m;
}

RunResult execute(const ScenarioConfig& config, const RunRequest& request) {
  RunResult result;
  result.policy = request.policy.value_or(config.policy);
  result.seed = request.seed.value_or(config.seed);

  auto graph = build_map(config, request.base_dir);
  WorldConfig wc = build_world_config(config, result.policy);
  wc.check_invariants = request.check_invariants;
  World world(std::move(wc), graph, result.seed);
  world.run_until(config.end_time);

  result.events = world.events();
  result.stats = compute_stats(result.events, config.warmup);
  result.metadata = run_metadata(config, result.policy, result.seed);
  result.invariant_violations = world.invariant_violations();
  for (const auto& node : world.nodes()) result.buffered_at_end += node.buffer.size();
  return result;
}

void write_run_artifacts(const RunResult& r, const std::filesystem::path& out_dir, bool event_log) {
  ensure_dir(out_dir);
  {
    auto out = open_out(out_dir / "summary.txt");
    write_summary(r.stats, r.metadata, out);
  }
  {
    auto out = open_out(out_dir / "row.csv");
    out << kComparisonHeader << '\n' << comparison_row(to_string(r.policy), r.seed, r.stats) << '\n';
    if (!out) throw std::runtime_error("failed to write row.csv");
  }
  if (event_log) {
    auto out = open_out(out_dir / "events.tsv");
    write_event_log(r.events, out);
    if (!out) throw std::runtime_error("failed to write events.tsv");
  }
}

CompareResult compare(const ScenarioConfig& config, const CompareRequest& request) {
  if (request.policies.empty()) throw std::invalid_argument("compare needs at least one policy");
  if (request.seeds.empty()) throw std::invalid_argument("compare needs at least one seed");

  CompareResult out;
  for (Policy p : request.policies) {
    for (std::uint64_t s : request.seeds) out.cells.push_back({p, s, std::nullopt, {}});
  }
  std::stable_sort(out.cells.begin(), out.cells.end(), [](const CompareCell& x, const CompareCell& y) {
    const auto nx = to_string(x.policy), ny = to_string(y.policy);
    return nx != ny ? nx < ny : x.seed < y.seed;
  });

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < out.cells.size(); i = next++) {
      auto& cell = out.cells[i];
      try {
        RunRequest rr;
        rr.seed = cell.seed;
        rr.policy = cell.policy;
        rr.base_dir = request.base_dir;
        rr.check_invariants = request.check_invariants;
        cell.result = execute(config, rr);
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
    }
  };
  unsigned jobs = request.jobs ? request.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, out.cells.size()));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  for (const auto& cell : out.cells) out.failures += cell.result ? 0 : 1;
  return out;
}

std::vector<MetricAggregate> aggregate(const CompareResult& result, Metric metric) {
  std::vector<Policy> order;
  std::map<Policy, std::vector<double>> values;
  for (const auto& cell : result.cells) {
    if (std::find(order.begin(), order.end(), cell.policy) == order.end()) order.push_back(cell.policy);
    if (!cell.result) continue;
    const auto& s = cell.result->stats;
    std::optional<double> v;
    switch (metric) {
      case Metric::delivery_prob: v = s.delivery_probability; break;
      case Metric::latency_avg: v = s.latency_avg; break;
      case Metric::hopcount_avg: v = s.hopcount_avg; break;
    }
    if (v) values[cell.policy].push_back(*v);
  }
  std::vector<MetricAggregate> out;
  for (Policy p : order) {
    MetricAggregate a{p, 0, std::nullopt, std::nullopt};
    const auto& v = values[p];
    a.runs = v.size();
    if (!v.empty()) {
      double sum = 0.0;
      for (double x : v) sum += x;
      const double mean = sum / static_cast<double>(v.size());
      a.mean = mean;
      if (v.size() >= 2) {
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        a.stddev = std::sqrt(ss / static_cast<double>(v.size() - 1));
      }
    }
    out.push_back(a);
  }
  return out;
}

namespace {

const char* metric_name(Metric m) {
  switch (m) {
    case Metric::delivery_prob: return "delivery_prob";
    case Metric::latency_avg: return "latency_avg";
    case Metric::hopcount_avg: return "hopcount_avg";
  }
  return "";
}

int metric_decimals(Metric m) { return m == Metric::latency_avg ? 1 : 4; }

}  // namespace

void write_compare_artifacts(const CompareResult& result, const std::filesystem::path& out_dir) {
  ensure_dir(out_dir);
  {
    auto out = open_out(out_dir / "comparison.csv");
    out << kComparisonHeader << '\n';
    for (const auto& cell : result.cells) {
      if (cell.result) out << comparison_row(to_string(cell.policy), cell.seed, cell.result->stats) << '\n';
    }
  }

  std::ostringstream ranking;
  for (Metric m : {Metric::delivery_prob, Metric::latency_avg, Metric::hopcount_avg}) {
    const auto agg = aggregate(result, m);
    auto out = open_out(out_dir / (std::string(metric_name(m)) + ".csv"));
    out << "protocol,runs,mean,sd\n";
    for (const auto& a : agg) {
      out << to_string(a.policy) << ',' << a.runs << ',' << format_fixed(a.mean, metric_decimals(m)) << ','
          << format_fixed(a.stddev, metric_decimals(m)) << '\n';
    }

    // Higher delivery is better; lower latency and hop count are better.
    auto ranked = agg;
    std::stable_sort(ranked.begin(), ranked.end(), [m](const MetricAggregate& x, const MetricAggregate& y) {
      if (!x.mean || !y.mean) return x.mean.has_value() && !y.mean.has_value();
      return m == Metric::delivery_prob ? *x.mean > *y.mean : *x.mean < *y.mean;
    });
    ranking << metric_name(m) << (m == Metric::delivery_prob ? " (higher is better)" : " (lower is better)")
            << '\n';
    int place = 1;
    for (const auto& a : ranked) {
      ranking << "  " << place++ << ". " << to_string(a.policy) << "  " << format_fixed(a.mean, metric_decimals(m))
              << " +/- " << format_fixed(a.stddev, metric_decimals(m)) << "  (" << a.runs << " runs)\n";
    }
  }
  {
    auto out = open_out(out_dir / "ranking.txt");
    out << ranking.str();
  }
  if (result.failures > 0) {
    auto out = open_out(out_dir / "failures.txt");
    for (const auto& cell : result.cells) {
      if (!cell.result) out << to_string(cell.policy) << ',' << cell.seed << ',' << cell.error << '\n';
    }
  }
}

}  // namespace dtnsim
