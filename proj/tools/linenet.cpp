#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "linenet/acceptance.hpp"
#include "linenet/campaign.hpp"
#include "linenet/channel_sim.hpp"
#include "linenet/config.hpp"
#include "linenet/metrics.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitTimeout = 2;
constexpr int kExitAcceptFailed = 3;

struct RunOptions {
  std::string scheme = "greedy";
  std::size_t k = 0;
  std::vector<double> eps;
  std::uint64_t seed = 1;
  std::size_t payload_size = 1;
  std::string trace_out;
  std::uint64_t horizon = 0;
  double c = 2.0;
  double delta = 0.5;
  unsigned q = 256;
};

int cmd_run(const RunOptions& o) {
  using namespace linenet;
  auto scheme = parse_scheme(o.scheme);
  if (!scheme) {
    std::cerr << "--scheme: unknown scheme '" << o.scheme << "'\n";
    return kExitUsage;
  }
  NetworkConfig cfg;
  cfg.k = o.k;
  for (double e : o.eps) cfg.links.push_back({e});
  cfg.scheme = *scheme;
  cfg.params.c = o.c;
  cfg.params.delta = o.delta;
  cfg.params.q = o.q;
  cfg.payload_size = o.payload_size;
  cfg.seed = o.seed;
  if (o.horizon) cfg.horizon = o.horizon;
  cfg.record_events = !o.trace_out.empty();
  RunTrace trace;
  try {
    trace = run(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitUsage;
  }
  if (!o.trace_out.empty()) {
    std::ofstream out(o.trace_out);
    if (!out) {
      std::cerr << "--trace-out: cannot open " << o.trace_out << '\n';
      return kExitUsage;
    }
    write_trace_jsonl(trace, out);
  }
  auto rec = measure(trace);
  auto j = to_json(rec);
  j["scheme"] = scheme_name(cfg.scheme);
  j["k"] = cfg.k;
  j["eps"] = o.eps;
  j["seed"] = cfg.seed;
  std::cout << j.dump() << '\n';
  return rec.success ? kExitOk : kExitTimeout;
}

struct CampaignOptions {
  std::string spec_path;
  unsigned threads = 0;
};

int cmd_campaign(const CampaignOptions& o) {
  using namespace linenet;
  std::ifstream in(o.spec_path);
  if (!in) {
    std::cerr << "cannot open campaign file " << o.spec_path << '\n';
    return kExitUsage;
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << o.spec_path << ": invalid JSON: " << e.what() << '\n';
    return kExitUsage;
  }
  CampaignSpec spec;
  try {
    spec = parse_campaign(doc, std::filesystem::path(o.spec_path).parent_path().string());
  } catch (const CampaignError& e) {
    std::cerr << o.spec_path << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << o.spec_path << ": invalid configuration: " << e.what() << '\n';
    return kExitUsage;
  }
  const unsigned threads = o.threads ? o.threads : default_threads();
  auto aggregates = run_campaign(spec, threads);
  const std::string csv = to_csv(aggregates);
  if (spec.csv_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(spec.csv_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << spec.csv_path << '\n';
      return kExitUsage;
    }
    out << csv;
  }
  if (!spec.json_path.empty()) {
    std::ofstream out(spec.json_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << spec.json_path << '\n';
      return kExitUsage;
    }
    out << to_json(aggregates).dump(2) << '\n';
  }
  return kExitOk;
}

struct AcceptOptions {
  std::string only;
  std::uint64_t seed = linenet::kDefaultAcceptanceSeed;
  unsigned threads = 0;
  std::string csv_dir;
};

int cmd_accept(const AcceptOptions& o) {
  using namespace linenet;
  std::optional<std::string> only;
  if (!o.only.empty()) {
    if (!find_criterion(o.only)) {
      std::cerr << "--only: unknown criterion '" << o.only << "'\n";
      return kExitUsage;
    }
    only = o.only;
  }
  const unsigned threads = o.threads ? o.threads : default_threads();
  auto results = run_acceptance(o.seed, only, threads, std::cerr);
  std::vector<std::string> failed;
  for (const auto& r : results) {
    nlohmann::json j = {{"criterion", r.number}, {"name", r.name},       {"pass", r.pass},
                        {"seconds", r.seconds},  {"summary", r.summary}};
    std::cout << j.dump() << '\n';
    if (!r.pass) failed.push_back(std::to_string(r.number) + " " + r.name);
    if (!o.csv_dir.empty()) {
      std::filesystem::create_directories(o.csv_dir);
      std::ofstream out(std::filesystem::path(o.csv_dir) / (std::to_string(r.number) + "-" + r.name + ".csv"),
                        std::ios::binary);
      out << r.csv;
    }
  }
  if (failed.empty()) return kExitOk;
  std::cerr << "failed criteria:";
  for (const auto& f : failed) std::cerr << "\n  " << f;
  std::cerr << '\n';
  return kExitAcceptFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coding over erasure line networks: simulator, campaigns and acceptance checks"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run = app.add_subcommand("run", "Simulate one transfer and print its metrics as JSON");
  run->add_option("--scheme", run_opts.scheme,
                  "forward, feedback, decode-reencode, systematic-fixed, systematic-sparse, greedy, gfq-dense")
      ->required();
  run->add_option("--k", run_opts.k, "Number of source symbols")->required();
  run->add_option("--eps", run_opts.eps, "Erasure probability of the next link (repeat per link)")
      ->required()
      ->take_all()
      ->expected(1, -1);
  run->add_option("--seed", run_opts.seed, "Master seed");
  run->add_option("--payload-size", run_opts.payload_size, "Payload bytes per symbol");
  run->add_option("--trace-out", run_opts.trace_out, "Write slot events as JSON lines to this file");
  run->add_option("--horizon", run_opts.horizon, "Maximum number of slots");
  run->add_option("--c", run_opts.c, "Log-overhead constant");
  run->add_option("--delta", run_opts.delta, "Density slack of the sparse systematic code");
  run->add_option("--q", run_opts.q, "Field order for gfq-dense");

  CampaignOptions campaign_opts;
  auto* campaign = app.add_subcommand("campaign", "Run an experiment grid described by a JSON file");
  campaign->add_option("spec", campaign_opts.spec_path, "Campaign JSON file")->required();
  campaign->add_option("--threads", campaign_opts.threads, "Worker threads (default: LINENET_THREADS or 1)");

  AcceptOptions accept_opts;
  auto* accept = app.add_subcommand("accept", "Run the acceptance criteria and report pass/fail per criterion");
  accept->add_option("--only", accept_opts.only, "Run a single criterion, by number or name");
  accept->add_option("--seed", accept_opts.seed, "Master seed");
  accept->add_option("--threads", accept_opts.threads, "Worker threads (default: LINENET_THREADS or 1)");
  accept->add_option("--csv-dir", accept_opts.csv_dir, "Write each criterion's measurements as CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  try {
    if (*run) return cmd_run(run_opts);
    if (*campaign) return cmd_campaign(campaign_opts);
    if (*accept) return cmd_accept(accept_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
