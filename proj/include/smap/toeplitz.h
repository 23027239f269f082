// Toeplitz products and the index-restricted convolution
//   S_n = sum_{k + j = n, k^2 >= j^2} w_k z_j
// evaluated through a recursive Toeplitz-block partition of the matrix V with
// entries V(n, j) = w_{n-j} when n - j >= j.

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "smap/spectral.h"

namespace smap {

// Entry (i, j) is first_column[i - j] for i >= j and first_row[j - i] otherwise.
struct ToeplitzBlock {
  CVector first_column;
  CVector first_row;
  std::size_t row_offset = 0;
  std::size_t col_offset = 0;

  std::size_t rows() const { return first_column.size(); }
  std::size_t cols() const { return first_row.size(); }
  cplx entry(std::size_t i, std::size_t j) const {
    return i >= j ? first_column[i - j] : first_row[j - i];
  }
};

// Circulant embedding of power-of-two size >= rows + cols - 1.
CVector toeplitz_multiply(const ToeplitzBlock& block, std::span<const cplx> vec);

struct BlockSpec {
  std::size_t row0 = 0;
  std::size_t col0 = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
};

struct TypeMPartition {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<BlockSpec> blocks;
};

// Blocks covering the pattern i >= 2j (1-based) of a 2C x C type-M matrix.
TypeMPartition partition_type_m(std::size_t cols);
// Blocks covering the nonzero pattern of V for an index window of size L
// (a power of two >= 4): row r is output index r + 1 - L/2, column c is
// input index c + 1 - L/2, and (r, c) is structurally nonzero iff
// 2c <= r + L/2 - 1.
TypeMPartition partition_v(std::size_t window);
bool v_pattern(std::size_t window, std::size_t r, std::size_t c);

// Toeplitz block of a matrix whose (r, c) entry is g(r - c).
ToeplitzBlock materialize(const BlockSpec& spec, const std::function<cplx(long)>& g);

// Integer-indexed sequence: values[p] is the term with index first + p.
struct IndexedSeq {
  int first = 0;
  CVector values;

  int last() const { return first + static_cast<int>(values.size()) - 1; }
  cplx at(int index) const {
    return index < first || index > last() ? cplx(0.0) : values[index - first];
  }
};

// Each returns outputs for indices out_first .. out_first + out_count - 1.
// sum over k + j = n of w_k z_j.
CVector full_convolution(const IndexedSeq& w, const IndexedSeq& z, int out_first,
                         std::size_t out_count);
// Branch k >= j, through the partition of V.
CVector restricted_conv_plus(const IndexedSeq& w, const IndexedSeq& z, int out_first,
                             std::size_t out_count);
// Branch k < j, as the full convolution minus the k >= j branch.
CVector restricted_conv_minus(const IndexedSeq& w, const IndexedSeq& z, int out_first,
                              std::size_t out_count);
// Branch k^2 >= j^2.
CVector index_restricted_convolution(const IndexedSeq& w, const IndexedSeq& z, int out_first,
                                     std::size_t out_count);

}  // namespace smap
