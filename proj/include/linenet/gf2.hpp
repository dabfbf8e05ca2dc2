#pragma once

// Dense linear algebra over GF(2) on bit-packed 64-bit words.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "linenet/rng.hpp"

namespace linenet::gf2 {

inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t len) : len_(len), words_(words_for(len), 0) {}

  /// Parses a string of '0'/'1' characters, index 0 first.
  static BitVector from_string(std::string_view bits);

  std::size_t size() const { return len_; }

  bool get(std::size_t i) const { return (words_[i / kWordBits] >> (i % kWordBits)) & 1u; }
  void set(std::size_t i, bool v) {
    std::uint64_t mask = std::uint64_t{1} << (i % kWordBits);
    if (v)
      words_[i / kWordBits] |= mask;
    else
      words_[i / kWordBits] &= ~mask;
  }
  void flip(std::size_t i) { words_[i / kWordBits] ^= std::uint64_t{1} << (i % kWordBits); }

  std::span<std::uint64_t> words() { return words_; }
  std::span<const std::uint64_t> words() const { return words_; }

  std::size_t popcount() const;
  bool none() const;

  BitVector& operator^=(const BitVector& other);
  bool operator==(const BitVector& other) const = default;

  std::string to_string() const;

 private:
  std::size_t len_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Row-major dense matrix over GF(2). Each row occupies `row_words()` words;
/// padding bits past `cols()` are always zero.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);

  static BitMatrix identity(std::size_t n);
  static BitMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  /// One string per row, e.g. {"10", "11", "01"}.
  static BitMatrix from_rows(std::initializer_list<std::string_view> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t row_words() const { return row_words_; }

  bool get(std::size_t r, std::size_t c) const {
    return (bits_[r * row_words_ + c / kWordBits] >> (c % kWordBits)) & 1u;
  }
  void set(std::size_t r, std::size_t c, bool v);
  void flip(std::size_t r, std::size_t c) {
    bits_[r * row_words_ + c / kWordBits] ^= std::uint64_t{1} << (c % kWordBits);
  }

  std::span<std::uint64_t> row(std::size_t r) { return {bits_.data() + r * row_words_, row_words_}; }
  std::span<const std::uint64_t> row(std::size_t r) const {
    return {bits_.data() + r * row_words_, row_words_};
  }

  void swap_rows(std::size_t a, std::size_t b);
  /// row(dst) ^= row(src)
  void add_row(std::size_t dst, std::size_t src);

  BitVector row_vector(std::size_t r) const;
  BitVector apply(const BitVector& x) const;  // M·x
  BitMatrix transposed() const;
  std::size_t popcount() const;

  bool operator==(const BitMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t row_words_ = 0;
  std::vector<std::uint64_t> bits_;
};

std::size_t rank(BitMatrix m);
bool has_full_column_rank(const BitMatrix& m);

enum class SolveStatus { kOk, kSingular, kInconsistent };

struct SolveResult {
  SolveStatus status = SolveStatus::kSingular;
  BitVector x;
  bool ok() const { return status == SolveStatus::kOk; }
};

/// Solves A·x = y. Succeeds only when A has full column rank and the system
/// is consistent; a rank-deficient A reports kSingular.
SolveResult solve(const BitMatrix& a, const BitVector& y);

inline constexpr std::size_t kKernelMaxCols = 30;

/// |{x : M·x = 0}| = 2^(cols - rank). Throws std::domain_error when
/// cols > kKernelMaxCols.
std::uint64_t kernel_size(const BitMatrix& m);

/// Number of rows k + ceil(c·log2(k)) of the random lower-triangular ensemble.
std::size_t lower_triangular_rows(std::size_t k, double c);

/// (k + ceil(c·log2 k)) × k matrix, entry (i, j) forced to zero when i < j,
/// fair coin otherwise.
BitMatrix random_lower_triangular(std::size_t k, double c, Rng& rng);

/// Entries i.i.d. Bernoulli(p), 0 < p <= 1.
BitMatrix sparse_random_matrix(std::size_t rows, std::size_t cols, double p, Rng& rng);

BitMatrix multiply(const BitMatrix& a, const BitMatrix& b);
BitMatrix direct_sum(const BitMatrix& a, const BitMatrix& b);
std::vector<BitMatrix> partition_columns(const BitMatrix& a, std::span<const std::size_t> sizes);
BitMatrix hconcat(std::span<const BitMatrix> blocks);

/// Random permutation matrix of order n.
BitMatrix random_permutation(std::size_t n, Rng& rng);

/// rows × cols matrix with full column rank (rows >= cols), uniformly mixed.
BitMatrix random_full_column_rank(std::size_t rows, std::size_t cols, Rng& rng);

}  // namespace linenet::gf2
