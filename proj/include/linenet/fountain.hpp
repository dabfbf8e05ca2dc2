#pragma once

// LT fountain coding: degree distributions, encoding, peeling and
// maximum-likelihood decoding, and the fixed systematic parity code.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "linenet/rng.hpp"

namespace linenet::fountain {

using Symbol = std::vector<std::uint8_t>;

struct DegreeMass {
  std::size_t degree;
  double mass;
};

class DegreeDistribution {
 public:
  /// Masses are renormalized; degrees must be >= 1.
  explicit DegreeDistribution(std::vector<DegreeMass> masses);

  std::span<const DegreeMass> masses() const { return masses_; }
  std::size_t sample(Rng& rng) const;
  double mean() const;
  std::size_t max_degree() const { return masses_.back().degree; }
  std::size_t mode() const;

 private:
  std::vector<DegreeMass> masses_;  // ascending degree, positive mass
  std::vector<double> cdf_;
};

inline constexpr double kDefaultRobustC = 0.03;
inline constexpr double kDefaultRobustDelta = 0.5;

/// Degree at which the robust soliton places its spike, round(k / R) with
/// R = c·ln(k/delta)·sqrt(k), clipped to [1, k].
std::size_t robust_soliton_spike(std::size_t k, double c, double delta);

/// Luby's robust soliton distribution over degrees 1..k.
DegreeDistribution robust_soliton(std::size_t k, double c = kDefaultRobustC,
                                  double delta = kDefaultRobustDelta);

/// Restriction of `dist` to degrees >= min_degree, renormalized. Falls back
/// to a point mass at min_degree if nothing survives.
DegreeDistribution truncate_below(const DegreeDistribution& dist, std::size_t min_degree);

/// Parity degree distribution of the fixed systematic code over k positions
/// with m parity rows: the robust soliton truncated below
/// ceil(k·ln(k)/m), so a given erased position is missed by every parity
/// with probability about 1/k.
DegreeDistribution default_parity_distribution(std::size_t k, std::size_t m,
                                               double c = kDefaultRobustC,
                                               double delta = kDefaultRobustDelta);

struct EncodedSymbol {
  std::vector<std::uint32_t> neighbors;  // ascending source indices
  Symbol payload;
};

/// d distinct indices drawn uniformly from [0, k), ascending.
std::vector<std::uint32_t> sample_neighbors(std::size_t k, std::size_t d, Rng& rng);

/// XOR of source[neighbors].
Symbol combine(std::span<const Symbol> source, std::span<const std::uint32_t> neighbors);

EncodedSymbol lt_encode_next(std::span<const Symbol> source, const DegreeDistribution& dist, Rng& rng);

enum class DecodeStatus { kComplete, kIncomplete, kSingular, kInconsistent };

struct DecodeResult {
  DecodeStatus status = DecodeStatus::kIncomplete;
  std::vector<Symbol> symbols;  // size k; entries valid where known[i]
  std::vector<bool> known;
  bool ok() const { return status == DecodeStatus::kComplete; }
};

/// Belief-propagation (peeling) erasure decoder.
DecodeResult peel_decode(std::span<const EncodedSymbol> received, std::size_t k);

/// Maximum-likelihood decoder: builds the |received| × k incidence matrix
/// and solves one GF(2) system per payload bit.
DecodeResult gaussian_fallback_decode(std::span<const EncodedSymbol> received, std::size_t k);

/// Neighbor sets of m parity rows over k systematic positions. Rows are
/// resampled until pairwise distinct (while distinct rows remain possible).
std::vector<std::vector<std::uint32_t>> parity_structure(std::size_t k, std::size_t m,
                                                         const DegreeDistribution& dist, Rng& rng);

std::vector<EncodedSymbol> systematic_parity(std::span<const Symbol> source, std::size_t m,
                                             const DegreeDistribution& dist, Rng& rng);

}  // namespace linenet::fountain
