#include "linenet/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace linenet {

std::uint32_t MetricsRecord::max_peak_memory() const {
  return peak_memory.empty() ? 0 : *std::max_element(peak_memory.begin(), peak_memory.end());
}

std::optional<double> delay(const RunTrace& trace, std::size_t k, std::span<const double> eps) {
  if (!trace.decode_success || !trace.completion_slot) return std::nullopt;
  double cap = 1.0;
  for (double e : eps) cap = std::min(cap, 1.0 - e);
  return static_cast<double>(*trace.completion_slot) - static_cast<double>(k) / cap;
}

MetricsRecord measure(const RunTrace& trace) {
  const auto& cfg = trace.config;
  std::vector<double> eps;
  for (const auto& l : cfg.links) eps.push_back(l.epsilon);
  MetricsRecord r;
  r.success = trace.decode_success;
  r.completion_slot = trace.completion_slot;
  r.delay_slots = delay(trace, cfg.k, eps);
  r.peak_memory = trace.peak_memory;
  r.received = trace.received_at_destination;
  if (r.success) {
    r.achieved_rate = static_cast<double>(cfg.k) / static_cast<double>(*trace.completion_slot);
    r.overhead = (static_cast<double>(r.received) - static_cast<double>(cfg.k)) / static_cast<double>(cfg.k);
  }
  r.xor_ops = trace.relay_xor_ops;
  r.row_ops = trace.decoder_ops;
  r.memory_at_source_done = trace.memory_at_source_done;
  return r;
}

nlohmann::json to_json(const MetricsRecord& r) {
  nlohmann::json j;
  j["success"] = r.success;
  j["completion_slot"] = r.completion_slot ? nlohmann::json(*r.completion_slot) : nlohmann::json(nullptr);
  j["delay_slots"] = r.delay_slots ? nlohmann::json(*r.delay_slots) : nlohmann::json(nullptr);
  j["peak_memory"] = r.peak_memory;
  j["achieved_rate"] = r.achieved_rate;
  j["overhead"] = r.overhead ? nlohmann::json(*r.overhead) : nlohmann::json(nullptr);
  j["received"] = r.received;
  j["op_counters"] = {{"xor", r.xor_ops}, {"row", r.row_ops}};
  return j;
}

double random_walk_oracle(std::uint64_t steps, std::uint64_t trials, Rng& rng) {
  if (trials == 0) throw std::invalid_argument("random_walk_oracle: trials must be >= 1");
  double total = 0.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::int64_t ups = 0;
    std::uint64_t left = steps;
    for (; left >= 64; left -= 64) ups += std::popcount(rng.bits());
    if (left > 0) ups += std::popcount(rng.bits() >> (64 - left));
    total += static_cast<double>(std::llabs(2 * ups - static_cast<std::int64_t>(steps)));
  }
  return total / static_cast<double>(trials);
}

namespace {

struct Moments {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double sd = std::numeric_limits<double>::quiet_NaN();
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  if (v.empty()) return m;
  double s = 0.0;
  for (double x : v) s += x;
  m.mean = s / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m.mean) * (x - m.mean);
  m.sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  return m;
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  double pos = q * static_cast<double>(v.size() - 1);
  auto lo = static_cast<std::size_t>(std::floor(pos));
  std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string eps_list(const std::vector<double>& eps) {
  std::string s;
  char buf[32];
  for (std::size_t i = 0; i < eps.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%g", eps[i]);
    if (i) s += ';';
    s += buf;
  }
  return s;
}

nlohmann::json number_or_null(double x) { return std::isnan(x) ? nlohmann::json(nullptr) : nlohmann::json(x); }

}  // namespace

Aggregate aggregate(const NetworkConfig& cell, std::vector<MetricsRecord> records) {
  Aggregate a;
  a.scheme = cell.scheme;
  a.k = cell.k;
  for (const auto& l : cell.links) a.eps.push_back(l.epsilon);
  a.trials = records.size();
  std::vector<double> delays, mems, overheads;
  double rate = 0.0, ops = 0.0;
  std::size_t ok = 0;
  for (const auto& r : records) {
    if (r.success) {
      ++ok;
      delays.push_back(*r.delay_slots);
      overheads.push_back(*r.overhead);
    }
    mems.push_back(r.max_peak_memory());
    rate += r.achieved_rate;
    ops += static_cast<double>(r.xor_ops + r.row_ops);
  }
  const double n = static_cast<double>(std::max<std::size_t>(a.trials, 1));
  a.success_rate = static_cast<double>(ok) / n;
  auto d = moments(delays);
  a.mean_delay = d.mean;
  a.sd_delay = d.sd;
  a.p50_delay = quantile(delays, 0.5);
  a.p90_delay = quantile(delays, 0.9);
  auto m = moments(mems);
  a.mean_peak_mem = m.mean;
  a.sd_peak_mem = m.sd;
  a.mean_overhead = moments(overheads).mean;
  a.mean_rate = rate / n;
  a.xor_ops = ops / n;
  a.records = std::move(records);
  return a;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t cell, std::size_t trial) {
  return derive_seed(master_seed, cell, trial);
}

unsigned default_threads() {
  if (const char* env = std::getenv("LINENET_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return 1;
}

std::vector<Aggregate> run_experiment(std::span<const NetworkConfig> cells, std::size_t trials,
                                      std::uint64_t master_seed, unsigned threads) {
  if (trials == 0) throw ConfigError("trials must be >= 1");
  for (const auto& c : cells) c.validate();
  if (threads == 0) threads = default_threads();
  std::vector<std::vector<MetricsRecord>> records(cells.size(), std::vector<MetricsRecord>(trials));
  parallel_for(cells.size() * trials, threads, [&](std::size_t job) {
    const std::size_t cell = job / trials, trial = job % trials;
    NetworkConfig cfg = cells[cell];
    cfg.seed = trial_seed(master_seed, cell, trial);
    cfg.record_events = false;
    records[cell][trial] = measure(run(cfg));
  });
  std::vector<Aggregate> out;
  for (std::size_t c = 0; c < cells.size(); ++c) out.push_back(aggregate(cells[c], std::move(records[c])));
  return out;
}

std::string to_csv(std::span<const Aggregate> rows) {
  std::string s = kCsvHeader;
  s += '\n';
  for (const auto& a : rows) {
    s += std::string(scheme_name(a.scheme)) + ',' + std::to_string(a.k) + ',' + std::to_string(a.hops()) + ',' +
         eps_list(a.eps) + ',' + std::to_string(a.trials) + ',' + fmt(a.success_rate) + ',' + fmt(a.mean_delay) +
         ',' + fmt(a.sd_delay) + ',' + fmt(a.mean_peak_mem) + ',' + fmt(a.sd_peak_mem) + ',' +
         fmt(a.mean_overhead) + ',' + fmt(a.mean_rate) + ',' + fmt(a.xor_ops) + '\n';
  }
  return s;
}

nlohmann::json to_json(std::span<const Aggregate> rows) {
  auto arr = nlohmann::json::array();
  for (const auto& a : rows) {
    arr.push_back({{"scheme", scheme_name(a.scheme)},
                   {"k", a.k},
                   {"L", a.hops()},
                   {"eps", a.eps},
                   {"trials", a.trials},
                   {"success_rate", a.success_rate},
                   {"mean_delay", number_or_null(a.mean_delay)},
                   {"sd_delay", number_or_null(a.sd_delay)},
                   {"p50_delay", number_or_null(a.p50_delay)},
                   {"p90_delay", number_or_null(a.p90_delay)},
                   {"mean_peak_mem", number_or_null(a.mean_peak_mem)},
                   {"sd_peak_mem", number_or_null(a.sd_peak_mem)},
                   {"mean_overhead", number_or_null(a.mean_overhead)},
                   {"mean_rate", a.mean_rate},
                   {"xor_ops", a.xor_ops}});
  }
  return arr;
}

}  // namespace linenet
