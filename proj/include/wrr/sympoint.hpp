#ifndef WRR_SYMPOINT_HPP
#define WRR_SYMPOINT_HPP

// Points of the symmetric space of unimodular lattices: right cosets of the
// rotation group inside the determinant-one group. A point is stored as a
// determinant-one representative together with its Gram matrix; every
// geometric predicate goes through the Gram matrix, so the choice of
// representative inside the coset never matters.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "wrr/common.hpp"
#include "wrr/exact.hpp"

namespace wrr {

class SymPoint {
public:
  int dim() const { return static_cast<int>(rep_.rows()); }
  const Mat& rep() const { return rep_; }
  const Mat& gram() const { return gram_; }

private:
  SymPoint(Mat rep, Mat gram) : rep_(std::move(rep)), gram_(std::move(gram)) {}
  friend SymPoint normalize(const Mat& m);

  Mat rep_;
  Mat gram_;
};

// Scales a matrix with positive determinant to determinant one.
inline SymPoint normalize(const Mat& m) {
  if (m.rows() != m.cols() || m.rows() < 1)
    fail("DimensionMismatch", "expected a square matrix");
  const int n = static_cast<int>(m.rows());
  double det = m.determinant();
  if (!(det >= 1e-300))
    fail("NonPositiveDeterminant",
         "matrix determinant " + std::to_string(det) + " is not positive");
  Mat rep = m / std::pow(det, 1.0 / n);
  // One refinement pass keeps |det - 1| at rounding level even when the
  // input determinant is far from one.
  det = rep.determinant();
  if (!(det >= 1e-300))
    fail("NonPositiveDeterminant", "determinant collapsed during normalization");
  rep /= std::pow(det, 1.0 / n);
  Mat gram = rep.transpose() * rep;
  gram = 0.5 * (gram + gram.transpose()).eval();
  return SymPoint(std::move(rep), std::move(gram));
}

// Length of the image of an integer vector under the lattice embedding.
inline double length(const SymPoint& a, const IVec& v) {
  if (v.size() != a.dim()) fail("DimensionMismatch", "vector size does not match point");
  if (v.isZero()) fail("ZeroVector", "length of the zero vector is not defined");
  const Vec vd = v.cast<double>();
  return std::sqrt(vd.dot(a.gram() * vd));
}

inline double length(const SymPoint& a, const Vec& x) {
  if (x.size() != a.dim()) fail("DimensionMismatch", "vector size does not match point");
  return std::sqrt(x.dot(a.gram() * x));
}

namespace detail {

// Symmetric power Q^t of a positive definite matrix, eigenvalues clamped
// away from zero before exponentiation.
inline Mat sym_power(const Mat& q, double t) {
  Eigen::SelfAdjointEigenSolver<Mat> es(q);
  Vec d = es.eigenvalues().cwiseMax(1e-14);
  Mat p = es.eigenvectors() *
          d.array().pow(t).matrix().asDiagonal() *
          es.eigenvectors().transpose();
  return 0.5 * (p + p.transpose()).eval();
}

}  // namespace detail

// Geodesic through two points, parameterized so t=0 gives a and t=1 gives b.
// Computed at Gram level: Q(t) = Qa^{1/2} (Qa^{-1/2} Qb Qa^{-1/2})^t Qa^{1/2}.
inline SymPoint geodesic(const SymPoint& a, const SymPoint& b, double t) {
  if (a.dim() != b.dim()) fail("DimensionMismatch", "geodesic endpoints differ in dimension");
  const Mat half = detail::sym_power(a.gram(), 0.5);
  const Mat mhalf = detail::sym_power(a.gram(), -0.5);
  Mat c = mhalf * b.gram() * mhalf;
  c = 0.5 * (c + c.transpose()).eval();
  Mat g = half * detail::sym_power(c, t) * half;
  g = 0.5 * (g + g.transpose()).eval();
  return normalize(detail::sym_power(g, 0.5));
}

// Integer matrix with determinant exactly one, acting on lattices from the right.
class UnimodularMatrix {
public:
  explicit UnimodularMatrix(IMat m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) fail("DimensionMismatch", "unimodular matrix must be square");
    if (exact_det(m_) != 1) fail("NotUnimodular", "determinant must be exactly 1");
  }
  const IMat& mat() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }

private:
  IMat m_;
};

inline SymPoint right_translate(const SymPoint& a, const UnimodularMatrix& g) {
  if (a.dim() != g.dim()) fail("DimensionMismatch", "translation dimension mismatch");
  return normalize(a.rep() * g.mat().cast<double>());
}

inline double gram_distance(const SymPoint& a, const SymPoint& b) {
  if (a.dim() != b.dim()) fail("DimensionMismatch", "points differ in dimension");
  return (a.gram() - b.gram()).norm();
}

// Equality of cosets: representatives differing by a rotation share a Gram matrix.
inline bool approx_equal(const SymPoint& a, const SymPoint& b) {
  return gram_distance(a, b) <= 1e-9 * a.dim();
}

// ---- matrix file format: first line holds n, then n rows of n entries ----

inline void write_matrix(std::ostream& out, const Mat& m) {
  out << m.rows() << "\n";
  char buf[64];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      out << (j ? " " : "") << buf;
    }
    out << "\n";
  }
}

inline void write_matrix_file(const std::string& path, const Mat& m) {
  std::ofstream out(path);
  if (!out) fail("IoError", "cannot open " + path + " for writing");
  write_matrix(out, m);
  if (!out) fail("IoError", "failed writing " + path);
}

inline Mat read_matrix(std::istream& in) {
  long long n = 0;
  if (!(in >> n) || n < 1 || n > 64)
    fail("ParseError", "matrix header must be a dimension between 1 and 64");
  Mat m(n, n);
  for (long long i = 0; i < n; ++i)
    for (long long j = 0; j < n; ++j)
      if (!(in >> m(i, j)))
        fail("ParseError", "expected " + std::to_string(n * n) + " matrix entries");
  return m;
}

inline Mat read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("IoError", "cannot open " + path);
  return read_matrix(in);
}

inline SymPoint read_point(const std::string& path) {
  return normalize(read_matrix_file(path));
}

}  // namespace wrr

#endif
