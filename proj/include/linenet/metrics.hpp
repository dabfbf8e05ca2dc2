#pragma once

// Per-run metrics, the random-walk oracle for feedback queues, and Monte
// Carlo experiments over grids of configurations.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "linenet/channel_sim.hpp"
#include "linenet/config.hpp"
#include "linenet/parallel.hpp"
#include "linenet/rng.hpp"

namespace linenet {

struct MetricsRecord {
  bool success = false;
  std::optional<std::uint64_t> completion_slot;
  std::optional<double> delay_slots;
  std::vector<std::uint32_t> peak_memory;  // per relay
  double achieved_rate = 0.0;              // k / d, 0 on TIMEOUT
  std::optional<double> overhead;          // (received - k) / k at success
  std::uint64_t received = 0;
  std::uint64_t xor_ops = 0;   // relay payload XORs
  std::uint64_t row_ops = 0;   // destination decoder operations
  std::vector<std::uint32_t> memory_at_source_done;

  std::uint32_t max_peak_memory() const;
};

/// d - k / min_i(1 - eps_i); nullopt unless the trace decoded.
std::optional<double> delay(const RunTrace& trace, std::size_t k, std::span<const double> eps);

MetricsRecord measure(const RunTrace& trace);
nlohmann::json to_json(const MetricsRecord& r);

/// Monte Carlo estimate of E|S_steps| for a symmetric +-1 random walk.
double random_walk_oracle(std::uint64_t steps, std::uint64_t trials, Rng& rng);

struct Aggregate {
  SchemeId scheme{};
  std::size_t k = 0;
  std::vector<double> eps;
  std::size_t trials = 0;
  double success_rate = 0.0;
  double mean_delay = 0.0;   // over successful trials; NaN if none
  double sd_delay = 0.0;
  double p50_delay = 0.0;
  double p90_delay = 0.0;
  double mean_peak_mem = 0.0;
  double sd_peak_mem = 0.0;
  double mean_overhead = 0.0;  // over successful trials
  double mean_rate = 0.0;      // over all trials
  double xor_ops = 0.0;        // mean relay + decoder operations
  std::vector<MetricsRecord> records;  // in trial order

  std::size_t hops() const { return eps.size(); }
};

/// Summary of a set of records in trial order.
Aggregate aggregate(const NetworkConfig& cell, std::vector<MetricsRecord> records);

/// Seed of trial `trial` of cell `cell`.
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t cell, std::size_t trial);

/// Runs `trials` simulations of every cell (the cell's own seed is ignored)
/// on up to `threads` threads; 0 means default_threads(). Results do not
/// depend on the thread count.
std::vector<Aggregate> run_experiment(std::span<const NetworkConfig> cells, std::size_t trials,
                                      std::uint64_t master_seed, unsigned threads = 0);

/// LINENET_THREADS from the environment, else 1.
unsigned default_threads();

inline constexpr const char* kCsvHeader =
    "scheme,k,L,eps,trials,success_rate,mean_delay,sd_delay,mean_peak_mem,sd_peak_mem,mean_overhead,mean_rate,"
    "xor_ops";

std::string to_csv(std::span<const Aggregate> rows);
nlohmann::json to_json(std::span<const Aggregate> rows);

}  // namespace linenet
