#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "linenet/fountain.hpp"
#include "linenet/rng.hpp"

using namespace linenet;
using namespace linenet::fountain;

namespace {

std::vector<Symbol> random_source(std::size_t k, std::size_t pb, Rng& rng) {
  std::vector<Symbol> s(k, Symbol(pb));
  for (auto& x : s)
    for (auto& b : x) b = static_cast<std::uint8_t>(rng.bits());
  return s;
}

DegreeDistribution point_mass(std::size_t d) { return DegreeDistribution({{d, 1.0}}); }

}  // namespace

TEST_CASE("robust soliton") {
  auto one = robust_soliton(1);
  REQUIRE(one.masses().size() == 1);
  CHECK(one.masses()[0].degree == 1);
  CHECK(one.masses()[0].mass == doctest::Approx(1.0));

  for (std::size_t k : {2u, 10u, 1000u, 20000u}) {
    auto d = robust_soliton(k);
    double total = 0.0;
    for (auto m : d.masses()) total += m.mass;
    CHECK(total == doctest::Approx(1.0));
    CHECK(d.max_degree() <= k);
  }

  // Independent evaluation of the spike position round(k/R), R = c ln(k/delta) sqrt(k).
  const double r = 0.03 * std::log(1000 / 0.5) * std::sqrt(1000.0);
  const auto spike = static_cast<std::size_t>(std::llround(1000 / r));
  CHECK(robust_soliton_spike(1000, 0.03, 0.5) == spike);
  CHECK(spike == 139);
  // The spike carries more mass than its neighbours.
  auto d = robust_soliton(1000);
  double at = 0, before = 0;
  for (auto m : d.masses()) {
    if (m.degree == spike) at = m.mass;
    if (m.degree == spike - 1) before = m.mass;
  }
  CHECK(at > 10 * before);
  CHECK(d.mode() == 2);

  CHECK_THROWS(robust_soliton(0));
  CHECK_THROWS(robust_soliton(10, 0.0, 0.5));
  CHECK_THROWS(robust_soliton(10, 0.1, 1.0));
}

TEST_CASE("degree distribution sampling follows its masses") {
  DegreeDistribution d({{1, 1.0}, {3, 3.0}});
  Rng rng(4);
  int threes = 0;
  for (int i = 0; i < 40000; ++i) {
    auto x = d.sample(rng);
    CHECK((x == 1 || x == 3));
    threes += x == 3;
  }
  CHECK(threes / 40000.0 == doctest::Approx(0.75).epsilon(0.02));
  CHECK(d.mean() == doctest::Approx(2.5));
  CHECK_THROWS(DegreeDistribution({{0, 1.0}}));
  CHECK_THROWS(DegreeDistribution({{1, 0.0}}));
}

TEST_CASE("truncated parity distribution") {
  auto t = truncate_below(robust_soliton(100), 20);
  CHECK(t.masses().front().degree >= 20);
  auto fallback = truncate_below(point_mass(3), 10);
  CHECK(fallback.max_degree() == 10);
  auto p = default_parity_distribution(1000, 250);
  CHECK(p.masses().front().degree == static_cast<std::size_t>(std::ceil(1000 * std::log(1000.0) / 250)));
}

TEST_CASE("sample_neighbors draws distinct sorted indices uniformly") {
  Rng rng(5);
  std::vector<int> hits(10, 0);
  for (int t = 0; t < 20000; ++t) {
    auto n = sample_neighbors(10, 3, rng);
    REQUIRE(n.size() == 3);
    CHECK(std::is_sorted(n.begin(), n.end()));
    CHECK(std::adjacent_find(n.begin(), n.end()) == n.end());
    for (auto i : n) ++hits[i];
  }
  for (int h : hits) CHECK(h / 60000.0 == doctest::Approx(0.1).epsilon(0.05));
  CHECK(sample_neighbors(5, 5, rng) == std::vector<std::uint32_t>{0, 1, 2, 3, 4});
  CHECK_THROWS(sample_neighbors(3, 4, rng));
}

TEST_CASE("LT encoding") {
  Rng rng(6);
  auto one = random_source(1, 4, rng);
  auto e = lt_encode_next(one, robust_soliton(1), rng);
  CHECK(e.neighbors == std::vector<std::uint32_t>{0});
  CHECK(e.payload == one[0]);

  auto src = random_source(10, 4, rng);
  auto all = lt_encode_next(src, point_mass(10), rng);
  Symbol x(4, 0);
  for (auto& s : src)
    for (std::size_t b = 0; b < 4; ++b) x[b] ^= s[b];
  CHECK(all.payload == x);

  Rng a(77), b(77);
  auto dist = robust_soliton(10);
  for (int i = 0; i < 20; ++i) {
    auto ea = lt_encode_next(src, dist, a);
    auto eb = lt_encode_next(src, dist, b);
    CHECK(ea.neighbors == eb.neighbors);
    CHECK(ea.payload == eb.payload);
  }
}

TEST_CASE("peeling decoder") {
  Symbol s0{0x12}, s1{0x34};
  Symbol s01{0x12 ^ 0x34};
  std::vector<EncodedSymbol> chain{{{0}, s0}, {{0, 1}, s01}};
  auto r = peel_decode(chain, 2);
  REQUIRE(r.ok());
  CHECK(r.symbols[0] == s0);
  CHECK(r.symbols[1] == s1);

  std::vector<EncodedSymbol> stuck{{{0, 1}, s01}};
  CHECK(peel_decode(stuck, 2).status == DecodeStatus::kIncomplete);

  Rng rng(7);
  const std::size_t k = 1000;
  auto dist = robust_soliton(k);
  int ok = 0;
  for (int t = 0; t < 200; ++t) {
    auto src = random_source(k, 1, rng);
    std::vector<EncodedSymbol> rx;
    for (int i = 0; i < 1500; ++i) rx.push_back(lt_encode_next(src, dist, rng));
    auto res = peel_decode(rx, k);
    if (res.ok()) {
      ++ok;
      CHECK(res.symbols == src);
    }
  }
  CHECK(ok >= 195);
}

TEST_CASE("maximum-likelihood decoder") {
  Rng rng(8);
  auto src = random_source(6, 2, rng);
  std::vector<EncodedSymbol> unit;
  for (std::uint32_t i = 0; i < 6; ++i) unit.push_back({{i}, src[i]});
  auto r = gaussian_fallback_decode(unit, 6);
  REQUIRE(r.ok());
  CHECK(r.symbols == src);

  std::vector<EncodedSymbol> dup{{{0}, {1}}, {{0}, {1}}};
  CHECK(gaussian_fallback_decode(dup, 2).status == DecodeStatus::kSingular);

  // Wherever peeling succeeds, elimination succeeds with the same output.
  auto dist = robust_soliton(200);
  for (int t = 0; t < 100; ++t) {
    auto s = random_source(200, 1, rng);
    std::vector<EncodedSymbol> rx;
    for (int i = 0; i < 215; ++i) rx.push_back(lt_encode_next(s, dist, rng));
    auto peel = peel_decode(rx, 200);
    auto ml = gaussian_fallback_decode(rx, 200);
    if (peel.ok()) {
      REQUIRE(ml.ok());
      CHECK(ml.symbols == peel.symbols);
    }
  }
}

TEST_CASE("systematic parity") {
  Rng rng(9);
  auto src = random_source(8, 1, rng);
  CHECK(systematic_parity(src, 0, robust_soliton(8), rng).empty());
  auto p = systematic_parity(src, 1, point_mass(8), rng);
  REQUIRE(p.size() == 1);
  std::uint8_t x = 0;
  for (auto& s : src) x ^= s[0];
  CHECK(p[0].payload[0] == x);

  auto rows = parity_structure(8, 50, robust_soliton(8), rng);
  std::set<std::vector<std::uint32_t>> distinct(rows.begin(), rows.end());
  CHECK(distinct.size() == 50);

  // Erase a random fifth of the systematic symbols and decode with all parities.
  const std::size_t k = 1000, m = 250;
  auto dist = default_parity_distribution(k, m);
  int ok = 0;
  for (int t = 0; t < 200; ++t) {
    auto s = random_source(k, 1, rng);
    auto parity = systematic_parity(s, m, dist, rng);
    std::vector<EncodedSymbol> rx;
    for (std::uint32_t i = 0; i < k; ++i)
      if (!rng.bernoulli(0.2)) rx.push_back({{i}, s[i]});
    rx.insert(rx.end(), parity.begin(), parity.end());
    auto r = gaussian_fallback_decode(rx, k);
    if (r.ok()) {
      ++ok;
      CHECK(r.symbols == s);
    }
  }
  CHECK(ok >= 180);
}
