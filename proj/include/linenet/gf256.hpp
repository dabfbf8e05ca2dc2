#pragma once

// GF(256) arithmetic (polynomial x^8 + x^4 + x^3 + x^2 + 1) and a dense
// eliminator over it. Fields GF(2), GF(4) and GF(16) are used as subfields of
// GF(256), so payload bytes are always GF(256) symbols.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "linenet/rng.hpp"

namespace linenet::gf256 {

using Element = std::uint8_t;

class Field {
 public:
  static const Field& instance();

  Element mul(Element a, Element b) const { return mul_[a][b]; }
  Element inv(Element a) const;  // a != 0
  Element exp(unsigned i) const { return exp_[i % 255]; }
  unsigned log(Element a) const { return log_[a]; }  // a != 0

  /// dst[i] ^= c * src[i]
  void mul_add(std::span<Element> dst, std::span<const Element> src, Element c) const;
  /// dst[i] = c * dst[i]
  void scale(std::span<Element> dst, Element c) const;

 private:
  Field();
  std::array<Element, 512> exp_{};
  std::array<unsigned, 256> log_{};
  std::array<std::array<Element, 256>, 256> mul_{};
  std::array<std::array<Element, 16>, 256> lo_{};
  std::array<std::array<Element, 16>, 256> hi_{};
};

/// Field orders that embed in GF(256): 2, 4, 16, 256.
bool supported_order(unsigned q);

/// Uniform element of the order-q subfield.
Element random_element(unsigned q, Rng& rng);

/// Incremental echelon basis over GF(256) with byte payloads (one payload
/// byte is one field symbol). Pivot rows are normalized to a leading 1.
class Eliminator {
 public:
  Eliminator(std::size_t columns, std::size_t payload_bytes);

  std::size_t columns() const { return cols_; }
  std::size_t rank() const { return rank_; }
  bool full_rank() const { return rank_ == cols_; }

  bool insert(std::span<const Element> coeffs, std::span<const Element> payload);
  std::vector<std::vector<Element>> solve() const;

  std::uint64_t row_ops() const { return row_ops_; }

 private:
  std::size_t cols_;
  std::size_t pb_;
  std::size_t stride_;
  std::vector<Element> rows_;
  std::vector<std::int32_t> pivot_of_;
  std::size_t rank_ = 0;
  std::uint64_t row_ops_ = 0;
};

}  // namespace linenet::gf256
