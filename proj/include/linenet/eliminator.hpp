#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace linenet::gf2 {

/// Incremental row-echelon basis over GF(2). Every row carries a byte payload
/// that is transformed along with the coefficients, so once the basis has
/// full column rank the payload of each unknown can be read back.
///
/// Rows may be inserted one at a time or queued and reduced in batches; the
/// batched path streams each existing pivot row once per batch, which is
/// what makes dense systems with tens of thousands of columns tractable.
class Eliminator {
 public:
  Eliminator(std::size_t columns, std::size_t payload_bytes);

  std::size_t columns() const { return cols_; }
  std::size_t coeff_words() const { return coeff_words_; }
  std::size_t rank() const { return rank_; }
  bool full_rank() const { return rank_ == cols_; }

  /// Returns true when the row was independent of the current basis.
  bool insert(std::span<const std::uint64_t> coeffs, std::span<const std::uint8_t> payload);

  void enqueue(std::span<const std::uint64_t> coeffs, std::span<const std::uint8_t> payload);
  std::size_t pending() const { return pending_count_; }
  /// Reduces all queued rows in arrival order; returns the rank increase.
  std::size_t flush();

  /// Payload of every unknown, in column order. Requires full_rank().
  std::vector<std::vector<std::uint8_t>> solve() const;

  /// Number of row XOR operations performed so far.
  std::uint64_t row_ops() const { return row_ops_; }

  static constexpr std::size_t kBatch = 256;

 private:
  bool install_reduced(std::uint64_t* row);
  void clear_pivots_naive();
  void clear_pivots_grouped();

  static constexpr std::size_t kGroup = 4;
  static constexpr std::size_t kTables = 4;
  static constexpr std::size_t kGroupedMin = 32;
  void load(std::uint64_t* dst, std::span<const std::uint64_t> coeffs,
            std::span<const std::uint8_t> payload) const;

  std::size_t cols_;
  std::size_t coeff_words_;
  std::size_t payload_bytes_;
  std::size_t stride_;
  std::vector<std::uint64_t> rows_;
  std::vector<std::int32_t> pivot_of_;
  std::vector<std::uint64_t> pending_;
  std::size_t pending_count_ = 0;
  std::size_t rank_ = 0;
  std::uint64_t row_ops_ = 0;
};

}  // namespace linenet::gf2
