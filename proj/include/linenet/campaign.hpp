#pragma once

// Experiment campaigns described by a JSON document.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "linenet/config.hpp"
#include "linenet/general_net.hpp"
#include "linenet/metrics.hpp"

namespace linenet {

/// Schema violation; path() is a JSON pointer to the offending value.
class CampaignError : public std::runtime_error {
 public:
  CampaignError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct CampaignCell {
  NetworkConfig config;           // seed is replaced per trial
  std::optional<ErasureDag> dag;  // set for multipath cells; config.links then lists every edge
};

struct CampaignSpec {
  std::uint64_t master_seed = 1;
  std::size_t trials = 1;
  std::vector<CampaignCell> cells;
  std::string csv_path;   // empty = standard output
  std::string json_path;  // empty = no JSON output
};

/// Parses and validates a campaign document. `base_dir` resolves relative
/// DAG file names.
CampaignSpec parse_campaign(const nlohmann::json& doc, const std::string& base_dir = ".");

/// Runs every cell; deterministic in (master seed, cell order, trial index).
std::vector<Aggregate> run_campaign(const CampaignSpec& spec, unsigned threads = 0);

}  // namespace linenet
