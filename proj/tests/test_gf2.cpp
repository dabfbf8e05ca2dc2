#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <set>
#include <vector>

#include "linenet/eliminator.hpp"
#include "linenet/gf2.hpp"
#include "linenet/rng.hpp"
#include "linenet/sparse_system.hpp"

using namespace linenet;
using gf2::BitMatrix;
using gf2::BitVector;

namespace {

// Rank by counting the distinct images M·x over all 2^cols inputs.
std::size_t image_rank(const BitMatrix& m) {
  REQUIRE(m.cols() <= 12);
  std::set<std::vector<bool>> image;
  for (std::uint32_t x = 0; x < (1u << m.cols()); ++x) {
    std::vector<bool> y(m.rows(), false);
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) y[r] = y[r] ^ (m.get(r, c) && ((x >> c) & 1u));
    image.insert(y);
  }
  return static_cast<std::size_t>(std::log2(static_cast<double>(image.size())) + 0.5);
}

std::uint64_t brute_kernel(const BitMatrix& m) {
  std::uint64_t n = 0;
  for (std::uint32_t x = 0; x < (1u << m.cols()); ++x) {
    bool zero = true;
    for (std::size_t r = 0; r < m.rows() && zero; ++r) {
      bool s = false;
      for (std::size_t c = 0; c < m.cols(); ++c) s = s ^ (m.get(r, c) && ((x >> c) & 1u));
      zero = !s;
    }
    n += zero;
  }
  return n;
}

BitMatrix naive_multiply(const BitMatrix& a, const BitMatrix& b) {
  BitMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      bool s = false;
      for (std::size_t t = 0; t < a.cols(); ++t) s = s ^ (a.get(i, t) && b.get(t, j));
      out.set(i, j, s);
    }
  return out;
}

BitMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  BitMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, rng.coin());
  return m;
}

}  // namespace

TEST_CASE("rank of small matrices") {
  CHECK(gf2::rank(BitMatrix::identity(3)) == 3);
  CHECK(gf2::rank(BitMatrix::zeros(2, 3)) == 0);
  CHECK(gf2::rank(BitMatrix::from_rows({"11", "11", "01"})) == 2);
  CHECK(gf2::rank(BitMatrix()) == 0);
}

TEST_CASE("rank agrees with the image-size oracle") {
  Rng rng(11);
  for (int t = 0; t < 300; ++t) {
    auto m = random_matrix(1 + rng.uniform(12), 1 + rng.uniform(10), rng);
    auto r = gf2::rank(m);
    CHECK(r == image_rank(m));
    CHECK(r <= std::min(m.rows(), m.cols()));
  }
}

TEST_CASE("padding bits stay clear across rows wider than one word") {
  Rng rng(3);
  auto m = random_matrix(70, 130, rng);
  auto t = m.transposed();
  CHECK(t.transposed() == m);
  CHECK(t.popcount() == m.popcount());
  CHECK(gf2::rank(m) == gf2::rank(t));
}

TEST_CASE("solve") {
  SUBCASE("identity") {
    auto s = gf2::solve(BitMatrix::identity(2), BitVector::from_string("10"));
    REQUIRE(s.ok());
    CHECK(s.x.to_string() == "10");
  }
  SUBCASE("zero matrix is singular") {
    CHECK(gf2::solve(BitMatrix::zeros(2, 2), BitVector::from_string("10")).status == gf2::SolveStatus::kSingular);
  }
  SUBCASE("overdetermined consistent system") {
    auto s = gf2::solve(BitMatrix::from_rows({"10", "11", "01"}), BitVector::from_string("110"));
    REQUIRE(s.ok());
    CHECK(s.x.to_string() == "10");
  }
  SUBCASE("inconsistent system") {
    auto s = gf2::solve(BitMatrix::from_rows({"10", "01", "11"}), BitVector::from_string("100"));
    CHECK(s.status == gf2::SolveStatus::kInconsistent);
    auto d = gf2::solve(BitMatrix::from_rows({"10", "10"}), BitVector::from_string("10"));
    CHECK(d.status == gf2::SolveStatus::kSingular);
  }
  SUBCASE("random full-rank systems recover the planted solution") {
    Rng rng(5);
    for (int t = 0; t < 50; ++t) {
      auto a = gf2::random_full_column_rank(90, 80, rng);
      BitVector x(80);
      for (std::size_t i = 0; i < 80; ++i) x.set(i, rng.coin());
      auto s = gf2::solve(a, a.apply(x));
      REQUIRE(s.ok());
      CHECK(s.x == x);
    }
  }
}

TEST_CASE("kernel_size") {
  CHECK(gf2::kernel_size(BitMatrix::identity(3)) == 1);
  CHECK(gf2::kernel_size(BitMatrix::zeros(2, 2)) == 4);
  CHECK(gf2::kernel_size(BitMatrix::from_rows({"11", "11"})) == 2);
  CHECK_THROWS_AS(gf2::kernel_size(BitMatrix(2, gf2::kKernelMaxCols + 1)), std::domain_error);
  Rng rng(8);
  for (int t = 0; t < 100; ++t) {
    auto m = random_matrix(1 + rng.uniform(8), 1 + rng.uniform(8), rng);
    CHECK(gf2::kernel_size(m) == brute_kernel(m));
  }
}

TEST_CASE("random_lower_triangular shape") {
  Rng rng(1);
  auto one = gf2::random_lower_triangular(1, 2.0, rng);
  CHECK(one.rows() == 1);
  CHECK(one.cols() == 1);
  auto m = gf2::random_lower_triangular(4, 2.0, rng);
  CHECK(m.rows() == 8);
  CHECK(m.cols() == 4);
  for (int t = 0; t < 200; ++t) {
    m = gf2::random_lower_triangular(4, 2.0, rng);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i + 1; j < 4; ++j) CHECK_FALSE(m.get(i, j));
  }
  CHECK(gf2::lower_triangular_rows(64, 2.0) == 76);
}

TEST_CASE("random_lower_triangular is rank deficient rarely at k = 64") {
  Rng rng(2024);
  int deficient = 0;
  for (int t = 0; t < 10000; ++t) deficient += gf2::rank(gf2::random_lower_triangular(64, 2.0, rng)) < 64;
  CHECK(deficient / 10000.0 <= 0.012);
}

TEST_CASE("sparse_random_matrix") {
  Rng rng(4);
  auto ones = gf2::sparse_random_matrix(5, 7, 1.0, rng);
  CHECK(ones.popcount() == 35);
  auto half = gf2::sparse_random_matrix(200, 200, 0.5, rng);
  CHECK(std::abs(half.popcount() / 40000.0 - 0.5) <= 0.02);
  CHECK_THROWS(gf2::sparse_random_matrix(2, 2, 0.0, rng));

  const std::size_t l = 512;
  const std::size_t rows = l + static_cast<std::size_t>(std::ceil(2.0 * std::log2(static_cast<double>(l))));
  const double p = 1.5 * std::log(static_cast<double>(l)) / static_cast<double>(l);
  int full = 0;
  for (int t = 0; t < 1000; ++t) full += gf2::has_full_column_rank(gf2::sparse_random_matrix(rows, l, p, rng));
  CHECK(full >= 900);
}

TEST_CASE("multiply") {
  Rng rng(6);
  auto b = random_matrix(3, 2, rng);
  CHECK(gf2::multiply(BitMatrix::identity(3), b) == b);
  CHECK(gf2::multiply(BitMatrix::from_rows({"10", "11", "01"}), BitMatrix::from_rows({"1", "1"})) ==
        BitMatrix::from_rows({"1", "0", "1"}));
  CHECK_THROWS_AS(gf2::multiply(BitMatrix(2, 3), BitMatrix(2, 3)), std::invalid_argument);
  for (int t = 0; t < 50; ++t) {
    auto x = random_matrix(1 + rng.uniform(70), 1 + rng.uniform(70), rng);
    auto y = random_matrix(x.cols(), 1 + rng.uniform(70), rng);
    CHECK(gf2::multiply(x, y) == naive_multiply(x, y));
  }
  for (int t = 0; t < 1000; ++t) {
    std::size_t k = 1 + rng.uniform(20);
    auto inner = gf2::random_full_column_rank(k + rng.uniform(10), k, rng);
    auto outer = gf2::random_full_column_rank(inner.rows() + rng.uniform(10), inner.rows(), rng);
    CHECK(gf2::has_full_column_rank(gf2::multiply(outer, inner)));
  }
}

TEST_CASE("direct_sum") {
  CHECK(gf2::direct_sum(BitMatrix::identity(2), BitMatrix::identity(3)) == BitMatrix::identity(5));
  CHECK(gf2::rank(gf2::direct_sum(BitMatrix::zeros(2, 2), BitMatrix::identity(2))) == 2);
  auto a = BitMatrix::from_rows({"110", "011", "101"});  // rank 2
  auto b = BitMatrix::identity(3);
  REQUIRE(gf2::rank(a) == 2);
  CHECK(gf2::rank(gf2::direct_sum(a, b)) == 5);
}

TEST_CASE("partition_columns and hconcat round-trip") {
  Rng rng(7);
  auto a = random_matrix(4, 6, rng);
  std::size_t halves[] = {3, 3};
  auto parts = gf2::partition_columns(a, halves);
  REQUIRE(parts.size() == 2);
  CHECK(parts[0].cols() == 3);
  CHECK(gf2::hconcat(parts) == a);
  std::size_t whole[] = {6};
  CHECK(gf2::partition_columns(a, whole)[0] == a);
  std::size_t bad[] = {2, 2};
  CHECK_THROWS_AS(gf2::partition_columns(a, bad), std::invalid_argument);
  std::size_t twos[] = {2, 2};
  for (const auto& p : gf2::partition_columns(BitMatrix::identity(4), twos)) CHECK(gf2::rank(p) == 2);
  auto wide = random_matrix(5, 150, rng);
  std::size_t uneven[] = {63, 1, 70, 16};
  CHECK(gf2::hconcat(gf2::partition_columns(wide, uneven)) == wide);
}

TEST_CASE("random permutation and full-column-rank generators") {
  Rng rng(9);
  auto p = gf2::random_permutation(20, rng);
  CHECK(p.popcount() == 20);
  CHECK(gf2::rank(p) == 20);
  for (int t = 0; t < 100; ++t) {
    std::size_t cols = 1 + rng.uniform(40);
    auto m = gf2::random_full_column_rank(cols + rng.uniform(20), cols, rng);
    CHECK(gf2::rank(m) == cols);
  }
}

TEST_CASE("Eliminator matches rank and recovers planted payloads") {
  Rng rng(12);
  for (std::size_t cols : {1u, 7u, 64u, 65u, 200u, 700u}) {
    CAPTURE(cols);
    const std::size_t pb = 3;
    std::vector<std::vector<std::uint8_t>> source(cols, std::vector<std::uint8_t>(pb));
    for (auto& s : source)
      for (auto& b : s) b = static_cast<std::uint8_t>(rng.bits());
    gf2::Eliminator batched(cols, pb);
    gf2::Eliminator direct(cols, pb);
    BitMatrix seen(0, cols);
    std::vector<BitVector> rows;
    const std::size_t n = cols + 20;
    for (std::size_t i = 0; i < n; ++i) {
      BitVector r(cols);
      // Some sparse rows, some dense, some repeats.
      const bool sparse = rng.coin();
      for (std::size_t c = 0; c < cols; ++c) r.set(c, sparse ? rng.bernoulli(3.0 / cols) : rng.coin());
      if (i > 0 && rng.uniform(10) == 0) r = rows[rng.uniform(rows.size())];
      rows.push_back(r);
      std::vector<std::uint8_t> payload(pb, 0);
      for (std::size_t c = 0; c < cols; ++c)
        if (r.get(c))
          for (std::size_t b = 0; b < pb; ++b) payload[b] ^= source[c][b];
      direct.insert(r.words(), payload);
      batched.enqueue(r.words(), payload);
      if (rng.uniform(97) == 0) batched.flush();
    }
    batched.flush();
    BitMatrix all(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t c = 0; c < cols; ++c) all.set(i, c, rows[i].get(c));
    const auto expected = gf2::rank(all);
    CHECK(direct.rank() == expected);
    CHECK(batched.rank() == expected);
    if (expected == cols) {
      CHECK(direct.solve() == source);
      CHECK(batched.solve() == source);
    } else {
      CHECK_THROWS_AS(batched.solve(), std::logic_error);
    }
  }
}

TEST_CASE("SparseSystem peels, inactivates and reports inconsistency") {
  SUBCASE("chain peeling") {
    gf2::SparseSystem sys(2, 1);
    std::uint32_t a[] = {0};
    std::uint32_t ab[] = {0, 1};
    std::uint8_t s0[] = {5}, s01[] = {5 ^ 9};
    sys.add_equation(a, s0);
    sys.add_equation(ab, s01);
    REQUIRE(sys.complete());
    CHECK(sys.value(1)[0] == 9);
  }
  SUBCASE("inconsistent duplicate") {
    gf2::SparseSystem sys(1, 1);
    std::uint32_t a[] = {0};
    std::uint8_t x[] = {1}, y[] = {2};
    sys.add_equation(a, x);
    sys.add_equation(a, y);
    CHECK(sys.inconsistent());
  }
  SUBCASE("random systems agree with dense elimination") {
    Rng rng(21);
    for (int t = 0; t < 40; ++t) {
      const std::size_t k = 50 + rng.uniform(150);
      std::vector<std::uint8_t> src(k);
      for (auto& b : src) b = static_cast<std::uint8_t>(rng.bits());
      gf2::SparseSystem sys(k, 1);
      gf2::Eliminator dense(k, 1);
      for (std::size_t e = 0; e < k + 10; ++e) {
        std::vector<std::uint32_t> vars;
        const std::size_t d = 1 + rng.uniform(4);
        std::uint8_t p = 0;
        BitVector row(k);
        for (std::size_t j = 0; j < d; ++j) {
          auto v = static_cast<std::uint32_t>(rng.uniform(k));
          vars.push_back(v);
          p ^= src[v];
          row.flip(v);
        }
        std::uint8_t pl[] = {p};
        sys.add_equation(vars, pl);
        dense.insert(row.words(), pl);
      }
      CHECK_FALSE(sys.inconsistent());
      const bool solved = sys.solve_residual();
      CHECK(solved == dense.full_rank());
      if (solved)
        for (std::uint32_t v = 0; v < k; ++v) CHECK(sys.value(v)[0] == src[v]);
    }
  }
}
