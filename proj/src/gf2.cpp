#include "linenet/gf2.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace linenet::gf2 {

namespace {

std::uint64_t tail_mask(std::size_t bits) {
  std::size_t r = bits % kWordBits;
  return r == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << r) - 1;
}

}  // namespace

BitVector BitVector::from_string(std::string_view bits) {
  BitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1')
      v.set(i, true);
    else if (bits[i] != '0')
      throw std::invalid_argument("BitVector::from_string: expected '0' or '1'");
  }
  return v;
}

std::size_t BitVector::popcount() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool BitVector::none() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

BitVector& BitVector::operator^=(const BitVector& other) {
  if (other.len_ != len_) throw std::invalid_argument("BitVector: length mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

std::string BitVector::to_string() const {
  std::string s(len_, '0');
  for (std::size_t i = 0; i < len_; ++i)
    if (get(i)) s[i] = '1';
  return s;
}

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), row_words_(words_for(cols)), bits_(rows * row_words_, 0) {}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

BitMatrix BitMatrix::from_rows(std::initializer_list<std::string_view> rows) {
  std::size_t cols = rows.size() == 0 ? 0 : rows.begin()->size();
  BitMatrix m(rows.size(), cols);
  std::size_t r = 0;
  for (auto row : rows) {
    if (row.size() != cols) throw std::invalid_argument("BitMatrix::from_rows: ragged rows");
    for (std::size_t c = 0; c < cols; ++c) {
      if (row[c] == '1')
        m.set(r, c, true);
      else if (row[c] != '0')
        throw std::invalid_argument("BitMatrix::from_rows: expected '0' or '1'");
    }
    ++r;
  }
  return m;
}

void BitMatrix::set(std::size_t r, std::size_t c, bool v) {
  std::uint64_t& w = bits_[r * row_words_ + c / kWordBits];
  std::uint64_t mask = std::uint64_t{1} << (c % kWordBits);
  if (v)
    w |= mask;
  else
    w &= ~mask;
}

void BitMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  std::swap_ranges(bits_.begin() + a * row_words_, bits_.begin() + (a + 1) * row_words_,
                   bits_.begin() + b * row_words_);
}

void BitMatrix::add_row(std::size_t dst, std::size_t src) {
  std::uint64_t* d = bits_.data() + dst * row_words_;
  const std::uint64_t* s = bits_.data() + src * row_words_;
  for (std::size_t i = 0; i < row_words_; ++i) d[i] ^= s[i];
}

BitVector BitMatrix::row_vector(std::size_t r) const {
  BitVector v(cols_);
  std::copy_n(bits_.begin() + r * row_words_, row_words_, v.words().begin());
  return v;
}

BitVector BitMatrix::apply(const BitVector& x) const {
  if (x.size() != cols_) throw std::invalid_argument("BitMatrix::apply: dimension mismatch");
  BitVector y(rows_);
  auto xw = x.words();
  for (std::size_t r = 0; r < rows_; ++r) {
    std::uint64_t acc = 0;
    auto rw = row(r);
    for (std::size_t i = 0; i < row_words_; ++i) acc ^= rw[i] & xw[i];
    y.set(r, std::popcount(acc) & 1);
  }
  return y;
}

BitMatrix BitMatrix::transposed() const {
  BitMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (get(r, c)) t.set(c, r, true);
  return t;
}

std::size_t BitMatrix::popcount() const {
  std::size_t n = 0;
  for (auto w : bits_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::size_t rank(BitMatrix m) {
  std::size_t r = 0;
  const std::size_t rows = m.rows();
  for (std::size_t c = 0; c < m.cols() && r < rows; ++c) {
    const std::size_t w = c / kWordBits;
    const std::uint64_t mask = std::uint64_t{1} << (c % kWordBits);
    std::size_t p = r;
    while (p < rows && !(m.row(p)[w] & mask)) ++p;
    if (p == rows) continue;
    m.swap_rows(r, p);
    auto pivot = m.row(r);
    for (std::size_t i = r + 1; i < rows; ++i) {
      auto row = m.row(i);
      if (row[w] & mask)
        for (std::size_t j = w; j < m.row_words(); ++j) row[j] ^= pivot[j];
    }
    ++r;
  }
  return r;
}

bool has_full_column_rank(const BitMatrix& m) { return rank(m) == m.cols(); }

SolveResult solve(const BitMatrix& a, const BitVector& y) {
  if (a.rows() != y.size()) throw std::invalid_argument("solve: A.rows != y.len");
  const std::size_t n = a.cols();
  BitMatrix aug(a.rows(), n + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    std::copy(a.row(r).begin(), a.row(r).end(), aug.row(r).begin());
    if (y.get(r)) aug.set(r, n, true);
  }
  // Reduced row echelon form.
  std::size_t r = 0;
  std::vector<std::size_t> pivot_row(n, 0);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = r;
    while (p < aug.rows() && !aug.get(p, c)) ++p;
    if (p == aug.rows()) return {SolveStatus::kSingular, {}};
    aug.swap_rows(r, p);
    for (std::size_t i = 0; i < aug.rows(); ++i)
      if (i != r && aug.get(i, c)) aug.add_row(i, r);
    pivot_row[c] = r++;
  }
  for (std::size_t i = r; i < aug.rows(); ++i)
    if (aug.get(i, n)) return {SolveStatus::kInconsistent, {}};
  BitVector x(n);
  for (std::size_t c = 0; c < n; ++c) x.set(c, aug.get(pivot_row[c], n));
  return {SolveStatus::kOk, std::move(x)};
}

std::uint64_t kernel_size(const BitMatrix& m) {
  if (m.cols() > kKernelMaxCols)
    throw std::domain_error("kernel_size: cols exceeds " + std::to_string(kKernelMaxCols));
  return std::uint64_t{1} << (m.cols() - rank(m));
}

std::size_t lower_triangular_rows(std::size_t k, double c) {
  if (k == 0) throw std::invalid_argument("lower_triangular_rows: k must be >= 1");
  double extra = c * std::log2(static_cast<double>(k));
  // Guard against log2 results like 6.000000000001 rounding up spuriously.
  return k + static_cast<std::size_t>(std::ceil(extra - 1e-9));
}

BitMatrix random_lower_triangular(std::size_t k, double c, Rng& rng) {
  if (k == 0) throw std::invalid_argument("random_lower_triangular: k must be >= 1");
  if (!(c > 1.0)) throw std::invalid_argument("random_lower_triangular: c must be > 1");
  const std::size_t rows = lower_triangular_rows(k, c);
  BitMatrix m(rows, k);
  for (std::size_t i = 0; i < rows; ++i) {
    // Row i (0-based) may be nonzero in columns 0..i.
    std::size_t width = std::min(i + 1, k);
    auto row = m.row(i);
    std::size_t full = width / kWordBits;
    for (std::size_t w = 0; w < full; ++w) row[w] = rng.bits();
    if (width % kWordBits) row[full] = rng.bits() & tail_mask(width);
  }
  return m;
}

BitMatrix sparse_random_matrix(std::size_t rows, std::size_t cols, double p, Rng& rng) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("sparse_random_matrix: p must be in (0, 1]");
  BitMatrix m(rows, cols);
  const std::uint64_t total = static_cast<std::uint64_t>(rows) * cols;
  if (p >= 1.0) {
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) m.set(r, c, true);
    return m;
  }
  // Geometric skipping visits only the nonzero entries.
  std::uint64_t pos = rng.geometric(p);
  while (pos < total) {
    m.set(pos / cols, pos % cols, true);
    std::uint64_t gap = rng.geometric(p);
    if (gap >= total) break;
    pos += gap + 1;
  }
  return m;
}

BitMatrix multiply(const BitMatrix& a, const BitMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply: A.cols != B.rows");
  BitMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto dst = out.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (!a.get(i, j)) continue;
      auto src = b.row(j);
      for (std::size_t w = 0; w < dst.size(); ++w) dst[w] ^= src[w];
    }
  }
  return out;
}

BitMatrix direct_sum(const BitMatrix& a, const BitMatrix& b) {
  BitMatrix out(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (a.get(r, c)) out.set(r, c, true);
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c)
      if (b.get(r, c)) out.set(a.rows() + r, a.cols() + c, true);
  return out;
}

std::vector<BitMatrix> partition_columns(const BitMatrix& a, std::span<const std::size_t> sizes) {
  std::size_t total = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
  if (total != a.cols()) throw std::invalid_argument("partition_columns: sizes do not sum to A.cols");
  std::vector<BitMatrix> parts;
  parts.reserve(sizes.size());
  std::size_t offset = 0;
  for (auto width : sizes) {
    BitMatrix part(a.rows(), width);
    for (std::size_t r = 0; r < a.rows(); ++r)
      for (std::size_t c = 0; c < width; ++c)
        if (a.get(r, offset + c)) part.set(r, c, true);
    parts.push_back(std::move(part));
    offset += width;
  }
  return parts;
}

BitMatrix hconcat(std::span<const BitMatrix> blocks) {
  if (blocks.empty()) return {};
  std::size_t rows = blocks.front().rows();
  std::size_t cols = 0;
  for (const auto& b : blocks) {
    if (b.rows() != rows) throw std::invalid_argument("hconcat: row count mismatch");
    cols += b.cols();
  }
  BitMatrix out(rows, cols);
  std::size_t offset = 0;
  for (const auto& b : blocks) {
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < b.cols(); ++c)
        if (b.get(r, c)) out.set(r, offset + c, true);
    offset += b.cols();
  }
  return out;
}

BitMatrix random_permutation(std::size_t n, Rng& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.uniform(i)]);
  BitMatrix p(n, n);
  for (std::size_t i = 0; i < n; ++i) p.set(i, perm[i], true);
  return p;
}

BitMatrix random_full_column_rank(std::size_t rows, std::size_t cols, Rng& rng) {
  if (rows < cols) throw std::invalid_argument("random_full_column_rank: rows < cols");
  for (;;) {
    BitMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c)
        if (rng.coin()) m.set(r, c, true);
    if (has_full_column_rank(m)) return m;
  }
}

}  // namespace linenet::gf2
