#include "linenet/config.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace linenet {

namespace {

struct SchemeInfo {
  SchemeId id;
  std::string_view name;
  bool adaptable;
};

constexpr SchemeInfo kInfo[] = {
    {SchemeId::kForwardOnly, "forward", true},
    {SchemeId::kFeedbackOptimal, "feedback", true},
    {SchemeId::kDecodeReencode, "decode-reencode", true},
    {SchemeId::kSystematicFixed, "systematic-fixed", false},
    {SchemeId::kSystematicSparse, "systematic-sparse", false},
    {SchemeId::kGreedyRandom, "greedy", true},
    {SchemeId::kGfqDense, "gfq-dense", true},
};

}  // namespace

std::string_view scheme_name(SchemeId id) {
  for (const auto& info : kInfo)
    if (info.id == id) return info.name;
  return "unknown";
}

std::optional<SchemeId> parse_scheme(std::string_view name) {
  for (const auto& info : kInfo)
    if (info.name == name) return info.id;
  if (name == "forward-only") return SchemeId::kForwardOnly;
  if (name == "feedback-optimal") return SchemeId::kFeedbackOptimal;
  if (name == "greedy-random") return SchemeId::kGreedyRandom;
  return std::nullopt;
}

bool scheme_adaptable(SchemeId id) {
  for (const auto& info : kInfo)
    if (info.id == id) return info.adaptable;
  return false;
}

bool scheme_uses_feedback(SchemeId id) { return id == SchemeId::kFeedbackOptimal; }

void SchemeParams::validate() const {
  if (!(c > 1.0)) throw ConfigError("scheme parameter c must be > 1");
  if (!(delta > 0.0)) throw ConfigError("scheme parameter delta must be > 0");
  if (q < 2 || (q & (q - 1)) != 0) throw ConfigError("field order q must be a power of 2");
  if (!(lt_c > 0.0)) throw ConfigError("LT parameter c_rs must be > 0");
  if (!(lt_delta > 0.0 && lt_delta < 1.0)) throw ConfigError("LT parameter delta_rs must be in (0, 1)");
  if (!(systematic_margin >= 0.0)) throw ConfigError("systematic margin must be >= 0");
}

double NetworkConfig::min_capacity() const {
  double c = 1.0;
  for (const auto& l : links) c = std::min(c, 1.0 - l.epsilon);
  return c;
}

double NetworkConfig::max_epsilon() const {
  double e = 0.0;
  for (const auto& l : links) e = std::max(e, l.epsilon);
  return e;
}

std::uint64_t NetworkConfig::effective_horizon() const {
  if (horizon) return *horizon;
  double cap = 1.0 - max_epsilon();
  if (cap <= 0.0) return 4 * static_cast<std::uint64_t>(k);
  return static_cast<std::uint64_t>(std::ceil(4.0 * static_cast<double>(k) / cap));
}

void NetworkConfig::validate() const {
  if (k == 0) throw ConfigError("k must be >= 1");
  if (links.empty()) throw ConfigError("at least one link (eps) is required");
  for (const auto& l : links)
    if (!(l.epsilon >= 0.0 && l.epsilon <= 1.0)) throw ConfigError("eps must be in [0, 1]");
  if (payload_size == 0) throw ConfigError("payload size must be >= 1");
  if (horizon && *horizon < k) throw ConfigError("horizon must be >= k");
  params.validate();
}

std::size_t greedy_overhead(std::size_t k, double eps) {
  double ke = static_cast<double>(k) * eps;
  if (ke <= 1.0) return 0;
  return static_cast<std::size_t>(std::ceil(2.0 * std::sqrt(ke * std::log(ke))));
}

std::size_t systematic_source_count(std::size_t k, double eps, double margin) {
  return static_cast<std::size_t>(std::ceil(static_cast<double>(k) / (1.0 - eps) * (1.0 + margin)));
}

std::size_t systematic_parity_count(std::size_t k, double eps) {
  return static_cast<std::size_t>(std::ceil(static_cast<double>(k) * eps / (1.0 - eps) - 1e-9));
}

double sparse_parity_density(std::size_t k, double eps, double delta) {
  double ek = eps * static_cast<double>(k);
  if (!(ek > std::numbers::e))
    throw ConfigError("systematic-sparse requires eps*k > e (parity density undefined), got eps*k = " +
                      std::to_string(ek));
  return std::min(1.0, (1.0 + delta) * std::log(ek) / ek);
}

}  // namespace linenet
