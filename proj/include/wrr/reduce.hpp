#ifndef WRR_REDUCE_HPP
#define WRR_REDUCE_HPP

// LLL reduction of the standard integer basis with respect to an arbitrary
// positive definite Gram matrix. Dimensions here are single digits, so the
// Gram-Schmidt data is recomputed from scratch after every basis change;
// robustness is worth far more than the wasted flops.

#include <cmath>
#include <cstdint>

#include "wrr/common.hpp"

namespace wrr {

struct ReducedBasis {
  IMat transform;   // unimodular; columns are the reduced basis in Z^n coordinates
  Mat basis_gram;   // transform^T Q transform
};

inline ReducedBasis lll_reduce(const Mat& q, double delta = 0.99) {
  const int n = static_cast<int>(q.rows());
  IMat u = IMat::Identity(n, n);
  Mat g(n, n), mu = Mat::Zero(n, n);
  Vec bstar(n);

  auto gram = [&]() {
    const Mat ud = u.cast<double>();
    g = ud.transpose() * q * ud;
  };
  auto gs = [&]() {
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < i; ++k) {
        double s = g(i, k);
        for (int l = 0; l < k; ++l) s -= mu(i, l) * mu(k, l) * bstar[l];
        mu(i, k) = s / bstar[k];
      }
      double s = g(i, i);
      for (int k = 0; k < i; ++k) s -= mu(i, k) * mu(i, k) * bstar[k];
      bstar[i] = s;
    }
  };

  gram();
  gs();
  int k = 1;
  long iter = 0;
  const long iter_cap = 100000L * n * n;
  while (k < n && ++iter < iter_cap) {
    for (int j = k - 1; j >= 0; --j) {
      if (std::abs(mu(k, j)) > 0.5) {
        const auto r = static_cast<std::int64_t>(std::llround(mu(k, j)));
        u.col(k) -= r * u.col(j);
        gram();
        gs();
      }
    }
    if (bstar[k] >= (delta - mu(k, k - 1) * mu(k, k - 1)) * bstar[k - 1]) {
      ++k;
    } else {
      u.col(k).swap(u.col(k - 1));
      gram();
      gs();
      k = k > 1 ? k - 1 : 1;
    }
  }
  gram();
  return ReducedBasis{std::move(u), std::move(g)};
}

}  // namespace wrr

#endif
