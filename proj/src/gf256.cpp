#include "linenet/gf256.hpp"

#include <algorithm>
#include <stdexcept>

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace linenet::gf256 {

namespace {
constexpr unsigned kPoly = 0x11d;
}

Field::Field() {
  unsigned x = 1;
  for (unsigned i = 0; i < 255; ++i) {
    exp_[i] = static_cast<Element>(x);
    log_[x] = i;
    x <<= 1;
    if (x & 0x100) x ^= kPoly;
  }
  for (unsigned i = 255; i < 512; ++i) exp_[i] = exp_[i - 255];
  for (unsigned a = 0; a < 256; ++a)
    for (unsigned b = 0; b < 256; ++b)
      mul_[a][b] = (a == 0 || b == 0) ? 0 : exp_[log_[a] + log_[b]];
  for (unsigned c = 0; c < 256; ++c)
    for (unsigned n = 0; n < 16; ++n) {
      lo_[c][n] = mul_[c][n];
      hi_[c][n] = mul_[c][n << 4];
    }
}

const Field& Field::instance() {
  static const Field field;
  return field;
}

Element Field::inv(Element a) const {
  if (a == 0) throw std::domain_error("gf256: inverse of zero");
  return exp_[255 - log_[a]];
}

void Field::mul_add(std::span<Element> dst, std::span<const Element> src, Element c) const {
  if (c == 0) return;
  std::size_t n = std::min(dst.size(), src.size());
  std::size_t i = 0;
  if (c == 1) {
    for (; i < n; ++i) dst[i] ^= src[i];
    return;
  }
#if defined(__AVX2__)
  const __m256i lo = _mm256_broadcastsi128_si256(_mm_loadu_si128(reinterpret_cast<const __m128i*>(lo_[c].data())));
  const __m256i hi = _mm256_broadcastsi128_si256(_mm_loadu_si128(reinterpret_cast<const __m128i*>(hi_[c].data())));
  const __m256i mask = _mm256_set1_epi8(0x0f);
  for (; i + 32 <= n; i += 32) {
    __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src.data() + i));
    __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst.data() + i));
    __m256i pl = _mm256_shuffle_epi8(lo, _mm256_and_si256(s, mask));
    __m256i ph = _mm256_shuffle_epi8(hi, _mm256_and_si256(_mm256_srli_epi16(s, 4), mask));
    d = _mm256_xor_si256(d, _mm256_xor_si256(pl, ph));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst.data() + i), d);
  }
#endif
  const auto& row = mul_[c];
  for (; i < n; ++i) dst[i] ^= row[src[i]];
}

void Field::scale(std::span<Element> dst, Element c) const {
  const auto& row = mul_[c];
  for (auto& x : dst) x = row[x];
}

bool supported_order(unsigned q) { return q == 2 || q == 4 || q == 16 || q == 256; }

Element random_element(unsigned q, Rng& rng) {
  if (!supported_order(q)) throw std::invalid_argument("gf256: unsupported field order");
  auto u = static_cast<unsigned>(rng.uniform(q));
  if (u == 0) return 0;
  // Nonzero elements of the order-q subfield are powers of g^(255/(q-1)).
  return Field::instance().exp((u - 1) * (255 / (q - 1)));
}

Eliminator::Eliminator(std::size_t columns, std::size_t payload_bytes)
    : cols_(columns), pb_(payload_bytes), stride_(columns + payload_bytes), pivot_of_(columns, -1) {}

bool Eliminator::insert(std::span<const Element> coeffs, std::span<const Element> payload) {
  if (coeffs.size() != cols_ || payload.size() != pb_)
    throw std::invalid_argument("gf256::Eliminator: row width mismatch");
  const Field& f = Field::instance();
  std::vector<Element> row(stride_);
  std::copy(coeffs.begin(), coeffs.end(), row.begin());
  std::copy(payload.begin(), payload.end(), row.begin() + static_cast<std::ptrdiff_t>(cols_));
  for (std::size_t c = 0; c < cols_; ++c) {
    Element a = row[c];
    if (a == 0) continue;
    std::int32_t p = pivot_of_[c];
    if (p < 0) {
      f.scale(std::span(row).subspan(c), f.inv(a));
      pivot_of_[c] = static_cast<std::int32_t>(rank_);
      rows_.insert(rows_.end(), row.begin(), row.end());
      ++rank_;
      return true;
    }
    const Element* prow = rows_.data() + static_cast<std::size_t>(p) * stride_;
    f.mul_add(std::span(row).subspan(c), std::span(prow + c, stride_ - c), a);
    ++row_ops_;
  }
  return false;
}

std::vector<std::vector<Element>> Eliminator::solve() const {
  if (!full_rank()) throw std::logic_error("gf256::Eliminator::solve: not full rank");
  const Field& f = Field::instance();
  std::vector<std::vector<Element>> value(cols_);
  for (std::size_t c = cols_; c-- > 0;) {
    const Element* row = rows_.data() + static_cast<std::size_t>(pivot_of_[c]) * stride_;
    std::vector<Element> v(row + cols_, row + stride_);
    for (std::size_t j = c + 1; j < cols_; ++j)
      if (row[j]) f.mul_add(v, value[j], row[j]);
    value[c] = std::move(v);
  }
  return value;
}

}  // namespace linenet::gf256
