#include "linenet/eliminator.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <stdexcept>

#include "linenet/gf2.hpp"

namespace linenet::gf2 {

namespace {

inline void xor_words(std::uint64_t* __restrict dst, const std::uint64_t* __restrict src,
                      std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] ^= src[i];
}

}  // namespace

Eliminator::Eliminator(std::size_t columns, std::size_t payload_bytes)
    : cols_(columns),
      coeff_words_(words_for(columns)),
      payload_bytes_(payload_bytes),
      stride_(coeff_words_ + (payload_bytes + 7) / 8),
      pivot_of_(columns, -1) {
  rows_.reserve(stride_ * columns);
}

void Eliminator::load(std::uint64_t* dst, std::span<const std::uint64_t> coeffs,
                      std::span<const std::uint8_t> payload) const {
  if (coeffs.size() != coeff_words_) throw std::invalid_argument("Eliminator: coefficient width mismatch");
  if (payload.size() != payload_bytes_) throw std::invalid_argument("Eliminator: payload size mismatch");
  std::fill(dst, dst + stride_, 0);
  std::copy(coeffs.begin(), coeffs.end(), dst);
  if (!payload.empty()) std::memcpy(dst + coeff_words_, payload.data(), payload.size());
}

// Reduces `row` against the basis until its lowest set bit has no pivot,
// then installs it there.
bool Eliminator::install_reduced(std::uint64_t* row) {
  for (std::size_t w = 0; w < coeff_words_; ++w) {
    while (row[w]) {
      auto bit = static_cast<std::size_t>(std::countr_zero(row[w]));
      std::size_t c = w * kWordBits + bit;
      std::int32_t p = pivot_of_[c];
      if (p < 0) {
        pivot_of_[c] = static_cast<std::int32_t>(rank_);
        rows_.insert(rows_.end(), row, row + stride_);
        ++rank_;
        return true;
      }
      xor_words(row + w, rows_.data() + static_cast<std::size_t>(p) * stride_ + w, stride_ - w);
      ++row_ops_;
    }
  }
  return false;
}

bool Eliminator::insert(std::span<const std::uint64_t> coeffs, std::span<const std::uint8_t> payload) {
  std::vector<std::uint64_t> row(stride_);
  load(row.data(), coeffs, payload);
  return install_reduced(row.data());
}

void Eliminator::enqueue(std::span<const std::uint64_t> coeffs, std::span<const std::uint8_t> payload) {
  pending_.resize((pending_count_ + 1) * stride_);
  load(pending_.data() + pending_count_ * stride_, coeffs, payload);
  ++pending_count_;
  if (pending_count_ == kBatch) flush();
}

void Eliminator::clear_pivots_naive() {
  for (std::size_t c = 0; c < cols_; ++c) {
    std::int32_t p = pivot_of_[c];
    if (p < 0) continue;
    const std::size_t w = c / kWordBits;
    const std::uint64_t mask = std::uint64_t{1} << (c % kWordBits);
    const std::uint64_t* prow = rows_.data() + static_cast<std::size_t>(p) * stride_;
    for (std::size_t i = 0; i < pending_count_; ++i) {
      std::uint64_t* row = pending_.data() + i * stride_;
      if (row[w] & mask) {
        xor_words(row + w, prow + w, stride_ - w);
        ++row_ops_;
      }
    }
  }
}

// Pivots are taken in groups of kGroup consecutive pivot columns. For each
// group the 2^kGroup combinations of its pivot rows are tabulated once, and
// every batch row is then cleared of the whole group with a single XOR.
// kTables consecutive groups are applied in one pass over each batch row;
// the fill-in that earlier groups cause at later pivot columns is tracked
// on a word holding the row's bits at those columns.
void Eliminator::clear_pivots_grouped() {
  constexpr std::size_t kSpan = kGroup * kTables;
  static_assert(kSpan <= 64 && kTables <= 4);
  std::vector<std::size_t> cols;
  cols.reserve(kSpan);
  std::vector<std::uint64_t> table;
  std::vector<std::uint64_t> effect;  // bits of each table row at the span's columns
  auto bit_at = [](const std::uint64_t* row, std::size_t c) {
    return (row[c / kWordBits] >> (c % kWordBits)) & 1u;
  };
  auto process = [&] {
    const std::size_t span = cols.size();
    const std::size_t groups = (span + kGroup - 1) / kGroup;
    const std::size_t w0 = cols[0] / kWordBits;
    const std::size_t len = stride_ - w0;
    const std::size_t n = std::size_t{1} << kGroup;
    table.assign(groups * n * len, 0);
    effect.assign(groups * n, 0);
    std::uint64_t follow[kSpan] = {};  // bits of pivot row j at the later columns of its group
    for (std::size_t t = 0; t < groups; ++t) {
      const std::size_t first = t * kGroup;
      const std::size_t g = std::min(kGroup, span - first);
      const std::uint64_t* prow[kGroup];
      std::uint64_t reach[kGroup] = {};  // bits of pivot row j at every column of the span
      for (std::size_t j = 0; j < g; ++j) {
        prow[j] = rows_.data() + static_cast<std::size_t>(pivot_of_[cols[first + j]]) * stride_;
        for (std::size_t u = 0; u < span; ++u) reach[j] |= bit_at(prow[j], cols[u]) << u;
        follow[first + j] = ((reach[j] >> first) & ((std::uint64_t{1} << g) - 1)) & ~((std::uint64_t{2} << j) - 1);
      }
      std::uint64_t* tab = table.data() + t * n * len;
      std::uint64_t* eff = effect.data() + t * n;
      for (std::size_t m = 1; m < (std::size_t{1} << g); ++m) {
        std::size_t low = static_cast<std::size_t>(std::countr_zero(m));
        std::uint64_t* dst = tab + m * len;
        std::memcpy(dst, tab + (m & (m - 1)) * len, len * sizeof(std::uint64_t));
        xor_words(dst, prow[low] + w0, len);
        eff[m] = eff[m & (m - 1)] ^ reach[low];
        ++row_ops_;
      }
    }
    const std::uint64_t* pick[kTables];
    for (std::size_t i = 0; i < pending_count_; ++i) {
      std::uint64_t* row = pending_.data() + i * stride_;
      std::uint64_t x = 0;
      for (std::size_t u = 0; u < span; ++u) x |= bit_at(row, cols[u]) << u;
      std::size_t picked = 0;
      for (std::size_t t = 0; t < groups; ++t) {
        const std::size_t first = t * kGroup;
        const std::size_t g = std::min(kGroup, span - first);
        std::uint64_t b = (x >> first) & ((std::uint64_t{1} << g) - 1);
        std::uint64_t comb = 0;
        for (std::size_t j = 0; j < g; ++j)
          if ((b >> j) & 1u) {
            comb |= std::uint64_t{1} << j;
            b ^= follow[first + j];
          }
        if (comb) {
          x ^= effect[t * n + comb];
          pick[picked++] = table.data() + (t * n + comb) * len;
        }
      }
      if (picked == 0) continue;
      std::uint64_t* dst = row + w0;
      switch (picked) {
        case 1:
          for (std::size_t w = 0; w < len; ++w) dst[w] ^= pick[0][w];
          break;
        case 2:
          for (std::size_t w = 0; w < len; ++w) dst[w] ^= pick[0][w] ^ pick[1][w];
          break;
        case 3:
          for (std::size_t w = 0; w < len; ++w) dst[w] ^= pick[0][w] ^ pick[1][w] ^ pick[2][w];
          break;
        default:
          for (std::size_t w = 0; w < len; ++w) dst[w] ^= pick[0][w] ^ pick[1][w] ^ pick[2][w] ^ pick[3][w];
          break;
      }
      row_ops_ += picked;
    }
    cols.clear();
  };
  for (std::size_t c = 0; c < cols_; ++c) {
    if (pivot_of_[c] < 0) continue;
    cols.push_back(c);
    if (cols.size() == kSpan) process();
  }
  if (!cols.empty()) process();
}

std::size_t Eliminator::flush() {
  if (pending_count_ == 0) return 0;
  const std::size_t before = rank_;
  // Phase 1: clear every existing pivot column from the whole batch. Pivots
  // are visited in column order; a pivot row only has bits at or above its
  // column, so later pivots see the fill-in from earlier ones.
  if (rank_ > 0) {
    if (pending_count_ >= kGroupedMin)
      clear_pivots_grouped();
    else
      clear_pivots_naive();
  }
  // Phase 2: rows of the batch against each other, in arrival order.
  for (std::size_t i = 0; i < pending_count_; ++i) install_reduced(pending_.data() + i * stride_);
  pending_count_ = 0;
  pending_.clear();
  return rank_ - before;
}

std::vector<std::vector<std::uint8_t>> Eliminator::solve() const {
  if (!full_rank()) throw std::logic_error("Eliminator::solve: basis is not full rank");
  const std::size_t pw = stride_ - coeff_words_;
  std::vector<std::uint64_t> value(cols_ * pw, 0);
  for (std::size_t c = cols_; c-- > 0;) {
    const std::uint64_t* row = rows_.data() + static_cast<std::size_t>(pivot_of_[c]) * stride_;
    std::uint64_t* out = value.data() + c * pw;
    std::copy(row + coeff_words_, row + stride_, out);
    // Bits above the pivot refer to already-solved unknowns.
    std::size_t w = c / kWordBits;
    std::uint64_t word = row[w] & ~((std::uint64_t{2} << (c % kWordBits)) - 1);
    if (c % kWordBits == 63) word = 0;
    for (;;) {
      while (word) {
        std::size_t j = w * kWordBits + static_cast<std::size_t>(std::countr_zero(word));
        word &= word - 1;
        const std::uint64_t* src = value.data() + j * pw;
        for (std::size_t i = 0; i < pw; ++i) out[i] ^= src[i];
      }
      if (++w >= coeff_words_) break;
      word = row[w];
    }
  }
  std::vector<std::vector<std::uint8_t>> out(cols_, std::vector<std::uint8_t>(payload_bytes_));
  for (std::size_t c = 0; c < cols_; ++c)
    if (payload_bytes_) std::memcpy(out[c].data(), value.data() + c * pw, payload_bytes_);
  return out;
}

}  // namespace linenet::gf2
