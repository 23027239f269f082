#include "smap/toeplitz.h"

#include <algorithm>
#include <bit>
#include <map>
#include <stdexcept>

#include "fft.h"

namespace smap {
namespace {

// Blocks at or below this size are multiplied directly.
constexpr std::size_t kDirectBlock = 16;

std::size_t pow2_at_least(std::size_t n) { return std::bit_ceil(std::max<std::size_t>(n, 1)); }

// y[0..rows) += T x for the Toeplitz matrix with entries diag(i - j), where
// diag(d) is read from column (d >= 0) and row (d <= 0) generators.
void toeplitz_accumulate(const cplx* column, const cplx* row, std::size_t rows, std::size_t cols,
                         const cplx* x, cplx* y) {
  if (rows <= kDirectBlock || cols <= kDirectBlock) {
    for (std::size_t i = 0; i < rows; ++i) {
      cplx acc = 0.0;
      for (std::size_t j = 0; j < cols; ++j) acc += (i >= j ? column[i - j] : row[j - i]) * x[j];
      y[i] += acc;
    }
    return;
  }
  const std::size_t p = pow2_at_least(rows + cols - 1);
  CVector c(p), v(p);
  for (std::size_t i = 0; i < rows; ++i) c[i] = column[i];
  for (std::size_t q = 1; q < cols; ++q) c[p - q] = row[q];
  std::copy(x, x + cols, v.begin());
  detail::fft_forward(c, c);
  detail::fft_forward(v, v);
  for (std::size_t i = 0; i < p; ++i) c[i] *= v[i];
  detail::fft_backward(c, c);
  const double inv = 1.0 / static_cast<double>(p);
  for (std::size_t i = 0; i < rows; ++i) y[i] += c[i] * inv;
}

void type_m_blocks(std::size_t cols, std::size_t row0, std::size_t col0,
                   std::vector<BlockSpec>& out) {
  if (cols == 1) {
    out.push_back({row0 + 1, col0, 1, 1});
    return;
  }
  const std::size_t half = cols / 2;
  out.push_back({row0 + cols, col0, half, half});
  out.push_back({row0 + cols + half, col0, half, half});
  type_m_blocks(half, row0, col0, out);
  type_m_blocks(half, row0 + cols, col0 + half, out);
}

const TypeMPartition& cached_partition_v(std::size_t window) {
  thread_local std::map<std::size_t, TypeMPartition> cache;
  auto it = cache.find(window);
  if (it == cache.end()) it = cache.emplace(window, partition_v(window)).first;
  return it->second;
}

struct Branches {
  CVector plus;
  CVector full;
};

// k >= j branch and full convolution on the output range.
Branches both_branches(const IndexedSeq& w, const IndexedSeq& z, int out_first,
                       std::size_t out_count) {
  Branches result{CVector(out_count), full_convolution(w, z, out_first, out_count)};
  if (out_count == 0 || w.values.empty() || z.values.empty()) return result;
  const int out_last = out_first + static_cast<int>(out_count) - 1;
  // Smallest window {-M+1..M} holding every input and output index.
  int reach = std::max({-w.first + 1, w.last(), -z.first + 1, z.last(), -out_first + 1, out_last, 2});
  const std::size_t window = pow2_at_least(2 * static_cast<std::size_t>(reach));
  const long m = static_cast<long>(window / 2);

  // Generator g(d) = w_d on d in [-(L-1), L-1].
  const long span = static_cast<long>(window) - 1;
  CVector gen(2 * span + 1);
  for (long d = -span; d <= span; ++d) gen[d + span] = w.at(static_cast<int>(d));
  CVector zvec(window);
  for (std::size_t c = 0; c < window; ++c) zvec[c] = z.at(static_cast<int>(c) + 1 - static_cast<int>(m));

  CVector y(window);
  CVector row_gen;
  for (const BlockSpec& b : cached_partition_v(window).blocks) {
    const long d0 = static_cast<long>(b.row0) - static_cast<long>(b.col0);
    // Column generator is gen[d0 ..], row generator runs backwards from d0.
    row_gen.resize(b.cols);
    for (std::size_t q = 0; q < b.cols; ++q) row_gen[q] = gen[d0 - static_cast<long>(q) + span];
    toeplitz_accumulate(&gen[d0 + span], row_gen.data(), b.rows, b.cols, &zvec[b.col0],
                        &y[b.row0]);
  }
  for (std::size_t i = 0; i < out_count; ++i) {
    const long n = out_first + static_cast<long>(i);
    result.plus[i] = y[n - 1 + m];
  }
  return result;
}

}  // namespace

CVector toeplitz_multiply(const ToeplitzBlock& block, std::span<const cplx> vec) {
  if (vec.size() != block.cols()) {
    throw std::invalid_argument("toeplitz_multiply: vector length does not match block columns");
  }
  if (block.rows() == 0 || block.cols() == 0 || block.first_column[0] != block.first_row[0]) {
    throw std::invalid_argument("toeplitz_multiply: inconsistent generators");
  }
  CVector y(block.rows());
  toeplitz_accumulate(block.first_column.data(), block.first_row.data(), block.rows(),
                      block.cols(), vec.data(), y.data());
  return y;
}

TypeMPartition partition_type_m(std::size_t cols) {
  if (!std::has_single_bit(cols)) {
    throw std::invalid_argument("partition_type_m: column count must be a power of two");
  }
  TypeMPartition p{2 * cols, cols, {}};
  type_m_blocks(cols, 0, 0, p.blocks);
  return p;
}

TypeMPartition partition_v(std::size_t window) {
  if (window < 4 || !std::has_single_bit(window)) {
    throw std::invalid_argument("partition_v: window must be a power of two >= 4");
  }
  const std::size_t m = window / 2;
  TypeMPartition p{window, window, {}};
  p.blocks.push_back({m, 0, m, m});
  p.blocks.push_back({0, 0, m / 2, m / 2});
  p.blocks.push_back({m / 2, 0, m / 2, m / 2});
  type_m_blocks(m / 2, 0, m / 2, p.blocks);
  type_m_blocks(m / 2, m, m, p.blocks);
  return p;
}

bool v_pattern(std::size_t window, std::size_t r, std::size_t c) {
  return 2 * c <= r + window / 2 - 1;
}

ToeplitzBlock materialize(const BlockSpec& spec, const std::function<cplx(long)>& g) {
  ToeplitzBlock b;
  b.row_offset = spec.row0;
  b.col_offset = spec.col0;
  const long d0 = static_cast<long>(spec.row0) - static_cast<long>(spec.col0);
  b.first_column.resize(spec.rows);
  b.first_row.resize(spec.cols);
  for (std::size_t i = 0; i < spec.rows; ++i) b.first_column[i] = g(d0 + static_cast<long>(i));
  for (std::size_t j = 0; j < spec.cols; ++j) b.first_row[j] = g(d0 - static_cast<long>(j));
  return b;
}

CVector full_convolution(const IndexedSeq& w, const IndexedSeq& z, int out_first,
                         std::size_t out_count) {
  CVector out(out_count);
  if (w.values.empty() || z.values.empty()) return out;
  const std::size_t p = pow2_at_least(w.values.size() + z.values.size() - 1);
  CVector a(p), b(p);
  std::copy(w.values.begin(), w.values.end(), a.begin());
  std::copy(z.values.begin(), z.values.end(), b.begin());
  detail::fft_forward(a, a);
  detail::fft_forward(b, b);
  for (std::size_t i = 0; i < p; ++i) a[i] *= b[i];
  detail::fft_backward(a, a);
  const double inv = 1.0 / static_cast<double>(p);
  const long base = static_cast<long>(w.first) + z.first;
  const long top = static_cast<long>(w.last()) + z.last();
  for (std::size_t i = 0; i < out_count; ++i) {
    const long n = out_first + static_cast<long>(i);
    if (n >= base && n <= top) out[i] = a[n - base] * inv;
  }
  return out;
}

CVector restricted_conv_plus(const IndexedSeq& w, const IndexedSeq& z, int out_first,
                             std::size_t out_count) {
  return both_branches(w, z, out_first, out_count).plus;
}

CVector restricted_conv_minus(const IndexedSeq& w, const IndexedSeq& z, int out_first,
                              std::size_t out_count) {
  Branches b = both_branches(w, z, out_first, out_count);
  for (std::size_t i = 0; i < out_count; ++i) b.full[i] -= b.plus[i];
  return b.full;
}

CVector index_restricted_convolution(const IndexedSeq& w, const IndexedSeq& z, int out_first,
                                     std::size_t out_count) {
  Branches b = both_branches(w, z, out_first, out_count);
  CVector out(out_count);
  for (std::size_t i = 0; i < out_count; ++i) {
    const int n = out_first + static_cast<int>(i);
    if (n > 0) {
      // k + j > 0: k^2 >= j^2 iff k >= j.
      out[i] = b.plus[i];
    } else if (n == 0) {
      // k = -j: every pair qualifies.
      out[i] = b.full[i];
    } else {
      // k + j < 0: k^2 >= j^2 iff k <= j, which keeps the diagonal k = j.
      out[i] = b.full[i] - b.plus[i];
      if (n % 2 == 0) out[i] += w.at(n / 2) * z.at(n / 2);
    }
  }
  return out;
}

}  // namespace smap
