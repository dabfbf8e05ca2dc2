#include "linenet/fountain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "linenet/gf2.hpp"
#include "linenet/sparse_system.hpp"

namespace linenet::fountain {

DegreeDistribution::DegreeDistribution(std::vector<DegreeMass> masses) {
  std::sort(masses.begin(), masses.end(),
            [](const DegreeMass& a, const DegreeMass& b) { return a.degree < b.degree; });
  double total = 0.0;
  for (const auto& dm : masses) {
    if (dm.degree == 0) throw std::invalid_argument("DegreeDistribution: degree 0");
    if (dm.mass < 0.0) throw std::invalid_argument("DegreeDistribution: negative mass");
    total += dm.mass;
  }
  if (!(total > 0.0)) throw std::invalid_argument("DegreeDistribution: no mass");
  for (const auto& dm : masses)
    if (dm.mass > 0.0) masses_.push_back({dm.degree, dm.mass / total});
  double acc = 0.0;
  for (const auto& dm : masses_) {
    acc += dm.mass;
    cdf_.push_back(acc);
  }
  cdf_.back() = 1.0;
}

std::size_t DegreeDistribution::sample(Rng& rng) const {
  double u = rng.unit();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return masses_[static_cast<std::size_t>(it - cdf_.begin())].degree;
}

double DegreeDistribution::mean() const {
  double m = 0.0;
  for (const auto& dm : masses_) m += static_cast<double>(dm.degree) * dm.mass;
  return m;
}

std::size_t DegreeDistribution::mode() const {
  return std::max_element(masses_.begin(), masses_.end(),
                          [](const DegreeMass& a, const DegreeMass& b) { return a.mass < b.mass; })
      ->degree;
}

namespace {

double robust_r(std::size_t k, double c, double delta) {
  return c * std::log(static_cast<double>(k) / delta) * std::sqrt(static_cast<double>(k));
}

void check_robust_params(std::size_t k, double c, double delta) {
  if (k == 0) throw std::invalid_argument("robust_soliton: k must be >= 1");
  if (!(c > 0.0)) throw std::invalid_argument("robust_soliton: c must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("robust_soliton: delta must be in (0, 1)");
}

}  // namespace

std::size_t robust_soliton_spike(std::size_t k, double c, double delta) {
  check_robust_params(k, c, delta);
  double r = robust_r(k, c, delta);
  auto spike = static_cast<std::size_t>(std::llround(static_cast<double>(k) / r));
  return std::clamp<std::size_t>(spike, 1, k);
}

DegreeDistribution robust_soliton(std::size_t k, double c, double delta) {
  check_robust_params(k, c, delta);
  if (k == 1) return DegreeDistribution({{1, 1.0}});
  const double kd = static_cast<double>(k);
  const double r = robust_r(k, c, delta);
  const std::size_t spike = robust_soliton_spike(k, c, delta);
  std::vector<DegreeMass> masses;
  masses.reserve(k);
  for (std::size_t d = 1; d <= k; ++d) {
    double dd = static_cast<double>(d);
    double rho = d == 1 ? 1.0 / kd : 1.0 / (dd * (dd - 1.0));
    double tau = 0.0;
    if (d < spike)
      tau = r / (dd * kd);
    else if (d == spike)
      tau = std::max(0.0, r * std::log(r / delta) / kd);
    masses.push_back({d, rho + tau});
  }
  return DegreeDistribution(std::move(masses));
}

DegreeDistribution truncate_below(const DegreeDistribution& dist, std::size_t min_degree) {
  std::vector<DegreeMass> kept;
  for (const auto& dm : dist.masses())
    if (dm.degree >= min_degree) kept.push_back(dm);
  if (kept.empty()) return DegreeDistribution({{std::max<std::size_t>(min_degree, 1), 1.0}});
  return DegreeDistribution(std::move(kept));
}

DegreeDistribution default_parity_distribution(std::size_t k, std::size_t m, double c, double delta) {
  auto base = robust_soliton(k, c, delta);
  if (m == 0 || k < 2) return base;
  double kd = static_cast<double>(k);
  auto dmin = static_cast<std::size_t>(std::ceil(kd * std::log(kd) / static_cast<double>(m)));
  return truncate_below(base, std::clamp<std::size_t>(dmin, 1, k));
}

std::vector<std::uint32_t> sample_neighbors(std::size_t k, std::size_t d, Rng& rng) {
  if (d > k) throw std::invalid_argument("sample_neighbors: d > k");
  std::vector<std::uint32_t> out;
  out.reserve(d);
  // Floyd's algorithm.
  for (std::size_t j = k - d; j < k; ++j) {
    auto t = static_cast<std::uint32_t>(rng.uniform(j + 1));
    if (std::find(out.begin(), out.end(), t) != out.end())
      out.push_back(static_cast<std::uint32_t>(j));
    else
      out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Symbol combine(std::span<const Symbol> source, std::span<const std::uint32_t> neighbors) {
  Symbol out(source.empty() ? 0 : source.front().size(), 0);
  for (auto i : neighbors) {
    const Symbol& s = source[i];
    for (std::size_t b = 0; b < out.size(); ++b) out[b] ^= s[b];
  }
  return out;
}

EncodedSymbol lt_encode_next(std::span<const Symbol> source, const DegreeDistribution& dist, Rng& rng) {
  if (source.empty()) throw std::invalid_argument("lt_encode_next: empty source");
  std::size_t d = std::min(dist.sample(rng), source.size());
  EncodedSymbol out;
  out.neighbors = sample_neighbors(source.size(), d, rng);
  out.payload = combine(source, out.neighbors);
  return out;
}

namespace {

std::size_t payload_size(std::span<const EncodedSymbol> received) {
  return received.empty() ? 0 : received.front().payload.size();
}

}  // namespace

DecodeResult peel_decode(std::span<const EncodedSymbol> received, std::size_t k) {
  const std::size_t pb = payload_size(received);
  gf2::SparseSystem sys(k, pb);
  for (const auto& s : received) {
    if (s.payload.size() != pb) throw std::invalid_argument("peel_decode: payload sizes differ");
    sys.add_equation(s.neighbors, s.payload);
  }
  DecodeResult out;
  out.symbols.assign(k, Symbol(pb, 0));
  out.known.assign(k, false);
  for (std::uint32_t i = 0; i < k; ++i)
    if (sys.is_resolved(i)) {
      auto v = sys.value(i);
      out.symbols[i].assign(v.begin(), v.end());
      out.known[i] = true;
    }
  if (sys.inconsistent())
    out.status = DecodeStatus::kInconsistent;
  else
    out.status = sys.complete() ? DecodeStatus::kComplete : DecodeStatus::kIncomplete;
  return out;
}

DecodeResult gaussian_fallback_decode(std::span<const EncodedSymbol> received, std::size_t k) {
  const std::size_t pb = payload_size(received);
  DecodeResult out;
  out.symbols.assign(k, Symbol(pb, 0));
  out.known.assign(k, false);
  gf2::BitMatrix a(received.size(), k);
  for (std::size_t r = 0; r < received.size(); ++r)
    for (auto i : received[r].neighbors) a.flip(r, i);
  if (gf2::rank(a) < k) {
    out.status = DecodeStatus::kSingular;
    return out;
  }
  for (std::size_t bit = 0; bit < pb * 8; ++bit) {
    gf2::BitVector y(received.size());
    for (std::size_t r = 0; r < received.size(); ++r)
      if ((received[r].payload[bit / 8] >> (bit % 8)) & 1u) y.set(r, true);
    auto sol = gf2::solve(a, y);
    if (sol.status == gf2::SolveStatus::kInconsistent) {
      out.status = DecodeStatus::kInconsistent;
      return out;
    }
    for (std::size_t i = 0; i < k; ++i)
      if (sol.x.get(i)) out.symbols[i][bit / 8] |= static_cast<std::uint8_t>(1u << (bit % 8));
  }
  out.known.assign(k, true);
  out.status = DecodeStatus::kComplete;
  return out;
}

std::vector<std::vector<std::uint32_t>> parity_structure(std::size_t k, std::size_t m,
                                                         const DegreeDistribution& dist, Rng& rng) {
  std::vector<std::vector<std::uint32_t>> rows;
  rows.reserve(m);
  if (k == 0) return rows;
  std::set<std::vector<std::uint32_t>> seen;
  // Only insist on distinct rows while the row space is not exhausted.
  const bool can_be_distinct = k >= 64 || m < (std::uint64_t{1} << k);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<std::uint32_t> row;
    for (int attempt = 0; attempt < 64; ++attempt) {
      row = sample_neighbors(k, std::min(dist.sample(rng), k), rng);
      if (!can_be_distinct || !seen.contains(row)) break;
    }
    seen.insert(row);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<EncodedSymbol> systematic_parity(std::span<const Symbol> source, std::size_t m,
                                             const DegreeDistribution& dist, Rng& rng) {
  std::vector<EncodedSymbol> out;
  out.reserve(m);
  for (auto& row : parity_structure(source.size(), m, dist, rng)) {
    EncodedSymbol s;
    s.payload = combine(source, row);
    s.neighbors = std::move(row);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace linenet::fountain
