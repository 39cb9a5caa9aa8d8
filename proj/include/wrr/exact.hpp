#ifndef WRR_EXACT_HPP
#define WRR_EXACT_HPP

// Exact integer linear algebra for rank and sublattice-index questions.
// Everything here runs over arbitrary-precision integers so that rank
// decisions never depend on floating-point thresholds.

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include "wrr/common.hpp"

namespace wrr {

using BigInt = boost::multiprecision::cpp_int;

namespace detail {

// Columns stored as cols[c][r]. Reduces to column echelon form by integer
// column operations (which preserve the generated sublattice) and returns
// the pivot values, one per pivot row, all positive.
inline std::vector<BigInt> column_echelon_pivots(std::vector<std::vector<BigInt>>& cols,
                                                 int rows) {
  std::vector<BigInt> pivots;
  std::size_t j0 = 0;
  for (int r = 0; r < rows && j0 < cols.size(); ++r) {
    std::size_t c = j0;
    while (c < cols.size() && cols[c][r] == 0) ++c;
    if (c == cols.size()) continue;
    std::swap(cols[c], cols[j0]);
    for (std::size_t c2 = j0 + 1; c2 < cols.size(); ++c2) {
      while (cols[c2][r] != 0) {
        BigInt q = cols[j0][r] / cols[c2][r];
        if (q != 0) {
          for (int i = 0; i < rows; ++i) cols[j0][i] -= q * cols[c2][i];
        }
        std::swap(cols[j0], cols[c2]);
      }
    }
    if (cols[j0][r] < 0) {
      for (int i = 0; i < rows; ++i) cols[j0][i] = -cols[j0][i];
    }
    pivots.push_back(cols[j0][r]);
    ++j0;
  }
  return pivots;
}

inline std::vector<std::vector<BigInt>> to_big_columns(const IMat& m) {
  std::vector<std::vector<BigInt>> cols(m.cols(), std::vector<BigInt>(m.rows()));
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) cols[c][r] = m(r, c);
  return cols;
}

}  // namespace detail

// Rank over the rationals of the column span.
inline int exact_rank(const IMat& columns) {
  if (columns.cols() == 0) return 0;
  auto cols = detail::to_big_columns(columns);
  return static_cast<int>(detail::column_echelon_pivots(cols, static_cast<int>(columns.rows())).size());
}

inline IMat columns_matrix(const std::vector<IVec>& vs, int rows) {
  IMat m(rows, static_cast<Eigen::Index>(vs.size()));
  for (std::size_t j = 0; j < vs.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = vs[j];
  return m;
}

inline int exact_rank(const std::vector<IVec>& vs, int rows) {
  return exact_rank(columns_matrix(vs, rows));
}

// True when appending v to the columns enlarges the rational span.
inline bool rank_increases(const std::vector<IVec>& basis, const IVec& v) {
  const int rows = static_cast<int>(v.size());
  if (basis.empty()) return !v.isZero();
  IMat with(rows, static_cast<Eigen::Index>(basis.size()) + 1);
  with.leftCols(static_cast<Eigen::Index>(basis.size())) = columns_matrix(basis, rows);
  with.col(with.cols() - 1) = v;
  return exact_rank(with) > static_cast<int>(basis.size());
}

inline bool same_rational_span(const IMat& a, const IMat& b) {
  const int ra = exact_rank(a);
  const int rb = exact_rank(b);
  if (ra != rb) return false;
  IMat joined(a.rows(), a.cols() + b.cols());
  joined << a, b;
  return exact_rank(joined) == ra;
}

// Exact determinant (Bareiss fraction-free elimination).
inline BigInt exact_det(const IMat& m) {
  const int n = static_cast<int>(m.rows());
  if (n != m.cols()) fail("DimensionMismatch", "determinant of a non-square matrix");
  std::vector<std::vector<BigInt>> a(n, std::vector<BigInt>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = m(i, j);
  int sign = 1;
  BigInt prev = 1;
  for (int k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      int s = -1;
      for (int i = k + 1; i < n; ++i)
        if (a[i][k] != 0) { s = i; break; }
      if (s < 0) return 0;
      std::swap(a[k], a[s]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign > 0 ? a[n - 1][n - 1] : BigInt(-a[n - 1][n - 1]);
}

// Index in Z^n of the sublattice generated by the columns; 0 when the span
// has rank below n (infinite index).
inline std::int64_t sublattice_index(const IMat& columns) {
  const int n = static_cast<int>(columns.rows());
  auto cols = detail::to_big_columns(columns);
  auto pivots = detail::column_echelon_pivots(cols, n);
  if (static_cast<int>(pivots.size()) < n) return 0;
  BigInt idx = 1;
  for (const auto& p : pivots) idx *= p;
  if (idx > std::numeric_limits<std::int64_t>::max())
    fail("IndexOverflow", "sublattice index does not fit in 64 bits");
  return static_cast<std::int64_t>(idx);
}

}  // namespace wrr

#endif
