#include <doctest.h>

#include <stdexcept>

#include <set>
#include <vector>

#include "linenet/gf256.hpp"
#include "linenet/rng.hpp"

using namespace linenet;
using gf256::Element;

namespace {

// Shift-and-add multiplication modulo x^8 + x^4 + x^3 + x^2 + 1.
Element slow_mul(Element a, Element b) {
  unsigned acc = 0, x = a;
  for (int i = 0; i < 8; ++i) {
    if ((b >> i) & 1u) acc ^= x;
    x <<= 1;
    if (x & 0x100) x ^= 0x11d;
  }
  return static_cast<Element>(acc);
}

}  // namespace

TEST_CASE("field multiplication matches shift-and-add") {
  const auto& f = gf256::Field::instance();
  for (unsigned a = 0; a < 256; ++a)
    for (unsigned b = 0; b < 256; ++b)
      REQUIRE(f.mul(static_cast<Element>(a), static_cast<Element>(b)) ==
              slow_mul(static_cast<Element>(a), static_cast<Element>(b)));
}

TEST_CASE("inverses, mul_add and scale") {
  const auto& f = gf256::Field::instance();
  for (unsigned a = 1; a < 256; ++a) CHECK(f.mul(static_cast<Element>(a), f.inv(static_cast<Element>(a))) == 1);
  CHECK_THROWS_AS(f.inv(0), std::domain_error);
  Rng rng(1);
  std::vector<Element> dst(37), src(37);
  for (auto& x : dst) x = static_cast<Element>(rng.bits());
  for (auto& x : src) x = static_cast<Element>(rng.bits());
  for (unsigned c = 0; c < 256; ++c) {
    auto d = dst;
    f.mul_add(d, src, static_cast<Element>(c));
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(d[i] == (dst[i] ^ slow_mul(src[i], static_cast<Element>(c))));
    auto s = dst;
    f.scale(s, static_cast<Element>(c));
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i] == slow_mul(dst[i], static_cast<Element>(c)));
  }
}

TEST_CASE("random_element stays inside the subfield") {
  Rng rng(2);
  for (unsigned q : {2u, 4u, 16u, 256u}) {
    std::set<Element> seen;
    for (int i = 0; i < 20000; ++i) seen.insert(gf256::random_element(q, rng));
    CHECK(seen.size() == q);
    // Closed under multiplication: a subfield, not just a subset.
    for (Element a : seen)
      for (Element b : seen) CHECK(seen.contains(gf256::Field::instance().mul(a, b)));
  }
  CHECK_THROWS_AS(gf256::random_element(8, rng), std::invalid_argument);
  CHECK_FALSE(gf256::supported_order(3));
}

TEST_CASE("GF(256) eliminator solves random systems") {
  Rng rng(3);
  const auto& f = gf256::Field::instance();
  const std::size_t k = 40, pb = 5;
  std::vector<std::vector<Element>> source(k, std::vector<Element>(pb));
  for (auto& s : source)
    for (auto& b : s) b = static_cast<Element>(rng.bits());
  gf256::Eliminator e(k, pb);
  std::size_t inserted = 0;
  while (!e.full_rank()) {
    std::vector<Element> coeffs(k), payload(pb, 0);
    for (std::size_t c = 0; c < k; ++c) {
      coeffs[c] = static_cast<Element>(rng.bits());
      f.mul_add(payload, source[c], coeffs[c]);
    }
    e.insert(coeffs, payload);
    ++inserted;
  }
  CHECK(inserted <= k + 2);
  CHECK(e.solve() == source);

  gf256::Eliminator dup(2, 1);
  std::vector<Element> row{1, 2}, twice{2, 4}, pl{7}, pl2{f.mul(7, 2)};
  CHECK(dup.insert(row, pl));
  CHECK_FALSE(dup.insert(twice, pl2));
  CHECK(dup.rank() == 1);
  CHECK_THROWS_AS(dup.solve(), std::logic_error);
}
