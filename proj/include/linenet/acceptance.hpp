#pragma once

// Acceptance suite: each criterion is a seeded Monte Carlo check with its
// tolerances fixed here in code.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace linenet {

struct CriterionResult {
  int number = 0;
  std::string name;
  bool pass = false;
  std::string summary;  // one line: measured values against thresholds
  std::string csv;      // measured table; reruns with the same seed must reproduce it byte for byte
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

struct Criterion {
  int number;
  std::string name;
  double budget_seconds;
  std::function<CriterionResult(std::uint64_t seed, unsigned threads)> run;
};

const std::vector<Criterion>& acceptance_criteria();

/// Finds a criterion by number ("4") or name ("feedback-memory").
const Criterion* find_criterion(const std::string& key);

CriterionResult run_criterion(const Criterion& c, std::uint64_t master_seed, unsigned threads);

/// Runs all criteria (or just `only`), printing one line per criterion to
/// `out`. Throws std::invalid_argument for an unknown `only`.
std::vector<CriterionResult> run_acceptance(std::uint64_t master_seed, const std::optional<std::string>& only,
                                            unsigned threads, std::ostream& out);

std::string format_result(const CriterionResult& r);

inline constexpr std::uint64_t kDefaultAcceptanceSeed = 20240601;

}  // namespace linenet
