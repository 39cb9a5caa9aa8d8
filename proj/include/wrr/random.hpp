#ifndef WRR_RANDOM_HPP
#define WRR_RANDOM_HPP

// Deterministic sample generators behind a single 64 bit seed. Points are
// products of small shears, so determinants are exactly one before the final
// normalization; integer matrices are products of elementary column
// operations, so their determinants are exactly one, full stop.

#include <random>

#include "wrr/common.hpp"
#include "wrr/minima.hpp"
#include "wrr/sympoint.hpp"

namespace wrr {

inline SymPoint random_point(int n, std::mt19937_64& rng, double min_systole = 0.05) {
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::uniform_real_distribution<double> coeff(-0.6, 0.6);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Mat m = Mat::Identity(n, n);
    for (int s = 0; s < 3 * n * n; ++s) {
      const int i = pick(rng);
      const int j = pick(rng);
      if (i == j) continue;
      m.col(j) += coeff(rng) * m.col(i);
    }
    if (m.cwiseAbs().maxCoeff() > 50) continue;
    SymPoint p = normalize(m);
    if (systole(p).radius >= min_systole) return p;
  }
  fail("InternalError", "random point generation kept degenerating");
}

inline UnimodularMatrix random_unimodular(int n, std::mt19937_64& rng,
                                          std::int64_t max_entry = 20) {
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::uniform_int_distribution<int> coeff(-2, 2);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    IMat m = IMat::Identity(n, n);
    for (int s = 0; s < 2 * n + 4; ++s) {
      const int i = pick(rng);
      const int j = pick(rng);
      const int c = coeff(rng);
      if (i == j || c == 0) continue;
      m.col(j) += c * m.col(i);
    }
    if (m.cwiseAbs().maxCoeff() <= max_entry) return UnimodularMatrix(std::move(m));
  }
  fail("InternalError", "random unimodular generation kept overflowing");
}

inline Mat random_rotation(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = gauss(rng);
  Mat q = Eigen::HouseholderQR<Mat>(g).householderQ();
  if (q.determinant() < 0) q.col(0) = -q.col(0);
  return q;
}

inline Vec random_direction(int k, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    Vec x(k);
    for (int i = 0; i < k; ++i) x[i] = gauss(rng);
    const double nrm = x.norm();
    if (nrm > 1e-6) return x / nrm;
  }
}

inline IVec random_nonzero_ivec(int n, std::mt19937_64& rng, std::int64_t bound = 5) {
  std::uniform_int_distribution<std::int64_t> entry(-bound, bound);
  for (;;) {
    IVec v(n);
    for (int i = 0; i < n; ++i) v[i] = entry(rng);
    if (!v.isZero()) return v;
  }
}

}  // namespace wrr

#endif
