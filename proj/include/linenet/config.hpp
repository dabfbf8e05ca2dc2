#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace linenet {

/// Raised for invalid network or scheme configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class SchemeId {
  kForwardOnly,
  kFeedbackOptimal,
  kDecodeReencode,
  kSystematicFixed,
  kSystematicSparse,
  kGreedyRandom,
  kGfqDense,
};

inline constexpr SchemeId kAllSchemes[] = {
    SchemeId::kForwardOnly,      SchemeId::kFeedbackOptimal,   SchemeId::kDecodeReencode,
    SchemeId::kSystematicFixed,  SchemeId::kSystematicSparse, SchemeId::kGreedyRandom,
    SchemeId::kGfqDense,
};

std::string_view scheme_name(SchemeId id);
std::optional<SchemeId> parse_scheme(std::string_view name);

/// Whether the relay logic works without knowing the link erasure rates.
bool scheme_adaptable(SchemeId id);
bool scheme_uses_feedback(SchemeId id);

struct SchemeParams {
  double c = 2.0;        // log-overhead constant
  double delta = 0.5;    // density slack of the sparse systematic code
  unsigned q = 256;      // field order of gfq_dense
  std::optional<std::size_t> overhead_l;  // greedy extra receptions; unset = automatic
  double lt_c = 0.03;
  double lt_delta = 0.5;
  double systematic_margin = 0.05;  // LT margin on the source block of systematic schemes

  void validate() const;
};

struct LinkSpec {
  double epsilon = 0.0;
};

struct NetworkConfig {
  std::size_t k = 0;
  std::vector<LinkSpec> links;
  SchemeId scheme = SchemeId::kGreedyRandom;
  SchemeParams params;
  std::size_t payload_size = 1;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> horizon;
  bool record_events = true;

  std::size_t hops() const { return links.size(); }
  double min_capacity() const;  // min over links of 1 - epsilon
  double max_epsilon() const;
  std::uint64_t effective_horizon() const;
  void validate() const;
};

/// Extra receptions l = ceil(2·sqrt(k·eps·ln(k·eps))) used to judge the
/// greedy scheme's decoding overhead.
std::size_t greedy_overhead(std::size_t k, double eps);

/// Packets sent by the source of a systematic scheme:
/// ceil(k / (1 - eps) · (1 + margin)).
std::size_t systematic_source_count(std::size_t k, double eps, double margin);

/// Parity packets appended by a systematic relay: ceil(k·eps / (1 - eps)).
std::size_t systematic_parity_count(std::size_t k, double eps);

/// Density (1 + delta)·ln(eps·k)/(eps·k) of the sparse systematic code.
/// Throws ConfigError when eps·k <= e.
double sparse_parity_density(std::size_t k, double eps, double delta);

}  // namespace linenet
