#ifndef WRR_LATTICES_HPP
#define WRR_LATTICES_HPP

// A few classical lattices used as reference points by tests and the
// verification suites.

#include <cmath>

#include "wrr/sympoint.hpp"

namespace wrr {

// Hexagonal plane lattice, covolume one: six shortest vectors.
inline SymPoint hexagonal() {
  Mat m(2, 2);
  m << 1.0, 0.5,
       0.0, std::sqrt(3.0) / 2.0;
  return normalize(m);
}

// Face centered cubic lattice (even coordinate-sum vectors of Z^3), covolume
// one: twelve shortest vectors.
inline SymPoint face_centered_cubic() {
  Mat m(3, 3);
  m << 1, 1, 0,
       0, 1, 1,
       1, 0, 1;
  return normalize(m);
}

// Vectors of Z^n whose coordinates all share one parity, covolume one. For
// n >= 5 the 2n shortest vectors span full rank but generate an index two
// sublattice.
inline SymPoint same_parity(int n) {
  Mat m = Mat::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) m(i, i) = 2.0;
  m.col(n - 1).setOnes();
  return normalize(m);
}

}  // namespace wrr

#endif
