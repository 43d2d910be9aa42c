// dtnsim: run and compare single-copy DTN routing policies on a campus
// scenario.
//
//   dtnsim run --config scenarios/default.cfg --seed 7 --out out/run7 --event-log
//   dtnsim compare --config scenarios/default.cfg --policies afc,direct_delivery,first_contact
//       --seeds 1-5 --jobs 4 --out out/cmp
//   dtnsim validate-map campus.wkt

#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <iostream>

#include "dtnsim/config.hpp"
#include "dtnsim/map_graph.hpp"
#include "dtnsim/runner.hpp"

namespace {

using namespace dtnsim;

std::uint64_t to_u64(std::string_view s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw CLI::ValidationError("seed", "bad seed '" + std::string(s) + "'");
  }
  return v;
}

// "1-5" or "3" items, already split on commas by CLI11.
std::vector<std::uint64_t> expand_seeds(const std::vector<std::string>& items) {
  std::vector<std::uint64_t> seeds;
  for (const auto& item : items) {
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      seeds.push_back(to_u64(item));
      continue;
    }
    const auto lo = to_u64(std::string_view(item).substr(0, dash));
    const auto hi = to_u64(std::string_view(item).substr(dash + 1));
    if (lo > hi) throw CLI::ValidationError("seeds", "empty seed range '" + item + "'");
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  return seeds;
}

std::string base_dir_of(const std::string& config_path) {
  return std::filesystem::path(config_path).parent_path().string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delay-tolerant campus network simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> policy;
  bool event_log = false;
  bool check = false;

  auto* run = app.add_subcommand("run", "Execute one deterministic run");
  run->add_option("-c,--config", config_path, "Scenario config file")->required()->check(CLI::ExistingFile);
  run->add_option("-s,--seed", seed, "Override MovementModel.rngSeed");
  run->add_option("-p,--policy", policy, "Override Router.policy");
  run->add_option("-o,--out", out_dir, "Output directory");
  run->add_flag("-e,--event-log", event_log, "Write events.tsv");
  run->add_flag("--check-invariants", check, "Assert custody invariants every step");

  std::vector<std::string> policy_list{"afc", "direct_delivery", "first_contact"};
  std::vector<std::string> seed_list{"1-5"};
  unsigned jobs = 0;
  auto* cmp = app.add_subcommand("compare", "Run every policy x seed combination");
  cmp->add_option("-c,--config", config_path, "Scenario config file")->required()->check(CLI::ExistingFile);
  cmp->add_option("-p,--policies", policy_list, "Comma-separated policies")->delimiter(',');
  cmp->add_option("-s,--seeds", seed_list, "Comma-separated seeds or ranges (1-5)")->delimiter(',');
  cmp->add_option("-j,--jobs", jobs, "Concurrent runs (0 = all cores)");
  cmp->add_option("-o,--out", out_dir, "Output directory");
  cmp->add_flag("--check-invariants", check, "Assert custody invariants every step");

  std::string map_path;
  auto* vm = app.add_subcommand("validate-map", "Parse a LINESTRING map and check connectivity");
  vm->add_option("map", map_path, "Map file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto config = load_config_file(config_path);
      RunRequest request;
      request.seed = seed;
      if (policy) request.policy = parse_policy(*policy);
      request.check_invariants = check;
      request.base_dir = base_dir_of(config_path);
      const auto result = execute(config, request);
      const bool log = event_log || config.event_log;
      write_run_artifacts(result, out_dir, log);
      write_summary(result.stats, result.metadata, std::cout);
      if (check && result.invariant_violations > 0) {
        std::cerr << "invariant violations: " << result.invariant_violations << '\n';
        return 3;
      }
      return 0;
    }

    if (*cmp) {
      const auto config = load_config_file(config_path);
      CompareRequest request;
      for (const auto& p : policy_list) request.policies.push_back(parse_policy(p));
      request.seeds = expand_seeds(seed_list);
      request.jobs = jobs;
      request.base_dir = base_dir_of(config_path);
      request.check_invariants = check;
      const auto result = compare(config, request);
      write_compare_artifacts(result, out_dir);
      std::ifstream ranking(std::filesystem::path(out_dir) / "ranking.txt");
      std::cout << ranking.rdbuf();
      if (result.failures > 0) {
        std::cerr << result.failures << " run(s) failed; see " << out_dir << "/failures.txt\n";
        return 1;
      }
      return 0;
    }

    if (*vm) {
      const auto graph = load_map_file(map_path);
      const auto components = count_components(graph);
      const Point lo = graph.min_corner();
      const Point hi = graph.max_corner();
      std::cout << "vertices: " << graph.vertex_count() << '\n'
                << "edges: " << graph.edge_count() << '\n'
                << "components: " << components << '\n'
                << "bounds: " << lo.x << ' ' << lo.y << " .. " << hi.x << ' ' << hi.y << '\n';
      if (components != 1) {
        std::cerr << "map is disconnected (" << components << " components)\n";
        return 1;
      }
      std::cout << "ok\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
