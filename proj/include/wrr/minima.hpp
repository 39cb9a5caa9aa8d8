#ifndef WRR_MINIMA_HPP
#define WRR_MINIMA_HPP

// Shortest lattice vectors, successive minima, and the flag of subspaces
// spanned by minima tie classes. Enumeration is LLL followed by a depth
// first search in Cholesky coordinates; all rank decisions are exact.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "wrr/common.hpp"
#include "wrr/exact.hpp"
#include "wrr/reduce.hpp"
#include "wrr/sympoint.hpp"

namespace wrr {

struct ShortVectorSet {
  double radius = 0;
  // Closed under negation: canonical representatives first, negations after.
  std::vector<IVec> vectors;
};

struct SuccessiveMinima {
  Vec values;  // nondecreasing, values[i] = i+1 st minimum
};

struct MinimaFlag {
  Vec syst;
  std::vector<int> lambda_dims;     // dim of the span of the i-th tie class closure
  std::vector<IMat> lambda_bases;   // integer basis of each flag subspace
  std::vector<Mat> theta_bases;     // orthonormal new directions per level (may be empty)
};

namespace detail {

// qf(w) = sum_i d[i] * (w[i] + sum_{j>i} m(i,j) w[j])^2
struct QfData {
  Vec d;
  Mat m;
};

inline QfData ldl(const Mat& g) {
  const int n = static_cast<int>(g.rows());
  QfData qd{Vec(n), Mat::Zero(n, n)};
  Mat l = Mat::Identity(n, n);
  for (int j = 0; j < n; ++j) {
    double dj = g(j, j);
    for (int k = 0; k < j; ++k) dj -= l(j, k) * l(j, k) * qd.d[k];
    if (!(dj > 0)) fail("NotPositiveDefinite", "Gram matrix is numerically degenerate");
    qd.d[j] = dj;
    for (int i = j + 1; i < n; ++i) {
      double s = g(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * qd.d[k] * l(j, k);
      l(i, j) = s / dj;
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) qd.m(i, j) = l(j, i);
  return qd;
}

}  // namespace detail

// All nonzero lattice vectors of length at most r*(1+kTieTol), both signs,
// canonical representatives sorted by (length, descending lex) followed by
// their negations in the same order.
inline std::vector<IVec> enumerate_below(const SymPoint& a, double r,
                                         std::int64_t node_cap = 10000000) {
  if (!(r > 0)) fail("InvalidRadius", "enumeration radius must be positive");
  const int n = a.dim();
  const ReducedBasis rb = lll_reduce(a.gram());
  const detail::QfData qd = detail::ldl(rb.basis_gram);
  const double r_eff = r * (1.0 + kTieTol);

  double predicted = 1.0;
  for (int i = 0; i < n; ++i) {
    predicted *= 2.0 * r_eff / std::sqrt(qd.d[i]) + 1.0;
    if (predicted > 1e18) break;
  }
  if (predicted > static_cast<double>(node_cap))
    fail("RadiusTooLarge", "predicted enumeration tree of ~" +
                               std::to_string(predicted) + " nodes exceeds the cap");

  const double bound = r_eff * r_eff * (1.0 + 1e-12);
  const std::int64_t live_cap = 4 * node_cap;
  std::int64_t nodes = 0;
  IVec w = IVec::Zero(n);
  std::vector<IVec> half;

  // Depth first search from the last coordinate down; while every processed
  // coordinate above the current one is zero, the current one is restricted
  // to be nonnegative, which yields exactly one representative per +-pair.
  std::function<void(int, double, bool)> descend = [&](int i, double rem, bool upper_zero) {
    if (i < 0) {
      if (!upper_zero) half.push_back(w);
      return;
    }
    double c = 0;
    for (int j = i + 1; j < n; ++j) c -= qd.m(i, j) * w[j];
    const double span = std::sqrt(std::max(rem, 0.0) / qd.d[i]);
    auto lo = static_cast<std::int64_t>(std::ceil(c - span - 1e-9));
    auto hi = static_cast<std::int64_t>(std::floor(c + span + 1e-9));
    if (upper_zero) lo = std::max<std::int64_t>(lo, 0);
    for (std::int64_t wi = lo; wi <= hi; ++wi) {
      if (++nodes > live_cap) fail("RadiusTooLarge", "enumeration node cap exceeded");
      const double t = static_cast<double>(wi) - c;
      const double used = qd.d[i] * t * t;
      if (used <= rem + 1e-12 * bound) {
        w[i] = wi;
        descend(i - 1, rem - used, upper_zero && wi == 0);
      }
    }
    w[i] = 0;
  };
  descend(n - 1, bound, true);

  std::vector<std::pair<double, IVec>> reps;
  reps.reserve(half.size());
  for (const IVec& hw : half) {
    const IVec v = rb.transform * hw;
    const double len = length(a, v);
    if (len <= r_eff) reps.emplace_back(len, canonical_rep(v));
  }
  std::sort(reps.begin(), reps.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first < y.first;
    return lex_less(y.second, x.second);
  });
  std::vector<IVec> out;
  out.reserve(2 * reps.size());
  for (const auto& p : reps) out.push_back(p.second);
  for (const auto& p : reps) out.push_back(-p.second);
  return out;
}

// Shortest nonzero vectors: radius is the minimum length, vectors the full
// tie class within kTieTol, closed under negation.
inline ShortVectorSet systole(const SymPoint& a, std::int64_t node_cap = 10000000) {
  const ReducedBasis rb = lll_reduce(a.gram());
  const double r0 = std::sqrt(rb.basis_gram.diagonal().minCoeff());
  const auto all = enumerate_below(a, r0, node_cap);
  const double m = length(a, all.front());
  ShortVectorSet s;
  s.radius = m;
  std::vector<IVec> reps;
  for (const IVec& v : all) {
    if (!is_canonical(v)) continue;
    if (length(a, v) <= m * (1.0 + kTieTol)) reps.push_back(v);
  }
  s.vectors.reserve(2 * reps.size());
  for (const IVec& v : reps) s.vectors.push_back(v);
  for (const IVec& v : reps) s.vectors.push_back(-v);
  return s;
}

namespace detail {

// Canonical representatives sorted by length with a greedy maximal
// independent subset; shared by the minima and flag computations.
struct GreedyMinima {
  std::vector<IVec> chosen;
  Vec values;
};

inline GreedyMinima greedy_minima(const SymPoint& a, std::int64_t node_cap) {
  const int n = a.dim();
  const ReducedBasis rb = lll_reduce(a.gram());
  const double r = std::sqrt(rb.basis_gram.diagonal().maxCoeff());
  const auto all = enumerate_below(a, r, node_cap);
  GreedyMinima g;
  g.values = Vec(n);
  for (const IVec& v : all) {
    if (static_cast<int>(g.chosen.size()) == n) break;
    if (!is_canonical(v)) continue;
    if (rank_increases(g.chosen, v)) {
      g.values[static_cast<Eigen::Index>(g.chosen.size())] = length(a, v);
      g.chosen.push_back(v);
    }
  }
  if (static_cast<int>(g.chosen.size()) < n)
    fail("InternalError", "enumeration radius missed an independent set");
  return g;
}

}  // namespace detail

inline SuccessiveMinima successive_minima(const SymPoint& a,
                                          std::int64_t node_cap = 10000000) {
  return {detail::greedy_minima(a, node_cap).values};
}

inline MinimaFlag lambda_flag(const SymPoint& a, std::int64_t node_cap = 10000000) {
  const int n = a.dim();
  const auto g = detail::greedy_minima(a, node_cap);
  MinimaFlag f;
  f.syst = g.values;
  f.lambda_dims.resize(n);
  f.lambda_bases.resize(n);
  f.theta_bases.resize(n);
  Mat ortho(n, 0);
  int prev = 0;
  for (int i = 0; i < n; ++i) {
    const double thr = g.values[i] * (1.0 + kTieTol);
    int d = prev;
    while (d < n && g.values[d] <= thr) ++d;
    f.lambda_dims[i] = d;
    f.lambda_bases[i] = columns_matrix(
        std::vector<IVec>(g.chosen.begin(), g.chosen.begin() + d), n);
    Mat block(n, d - prev);
    for (int j = prev; j < d; ++j) {
      Vec x = a.rep() * g.chosen[j].cast<double>();
      Vec y = x - ortho * (ortho.transpose() * x);
      y -= ortho * (ortho.transpose() * y);
      const double nrm = y.norm();
      if (nrm < 1e-10 * x.norm())
        fail("InternalError", "flag orthogonalization degenerated");
      y /= nrm;
      block.col(j - prev) = y;
      ortho.conservativeResize(Eigen::NoChange, ortho.cols() + 1);
      ortho.col(ortho.cols() - 1) = y;
    }
    f.theta_bases[i] = std::move(block);
    prev = d;
  }
  return f;
}

// Exhaustive reference computation over the coordinate box [-box, box]^n.
// Deliberately avoids the reduction and enumeration machinery.
inline SuccessiveMinima brute_force_minima(const SymPoint& a, std::int64_t box) {
  const int n = a.dim();
  if (box < 1) fail("InvalidBox", "box must be at least 1");
  if (std::pow(static_cast<double>(box), n) > 1e8)
    fail("BoxTooLarge", "box^n exceeds 1e8");
  const Mat& q = a.gram();

  double total = std::pow(2.0 * static_cast<double>(box) + 1.0, n);
  std::size_t keep = 4096;
  for (;;) {
    using Item = std::pair<double, IVec>;
    auto by_len = [](const Item& x, const Item& y) { return x.first < y.first; };
    std::priority_queue<Item, std::vector<Item>, decltype(by_len)> heap(by_len);

    IVec w = IVec::Constant(n, -box);
    bool more = true;
    while (more) {
      if (is_canonical(w)) {
        const Vec wd = w.cast<double>();
        const double len = std::sqrt(wd.dot(q * wd));
        if (heap.size() < keep) {
          heap.emplace(len, w);
        } else if (len < heap.top().first) {
          heap.pop();
          heap.emplace(len, w);
        }
      }
      int i = 0;
      while (i < n && ++w[i] > box) w[i++] = -box;
      more = i < n;
    }

    std::vector<Item> items;
    items.reserve(heap.size());
    while (!heap.empty()) {
      items.push_back(heap.top());
      heap.pop();
    }
    std::sort(items.begin(), items.end(), [](const Item& x, const Item& y) {
      if (x.first != y.first) return x.first < y.first;
      return lex_less(y.second, x.second);
    });

    Vec values(n);
    std::vector<IVec> chosen;
    for (const auto& it : items) {
      if (static_cast<int>(chosen.size()) == n) break;
      if (rank_increases(chosen, it.second)) {
        values[static_cast<Eigen::Index>(chosen.size())] = it.first;
        chosen.push_back(it.second);
      }
    }
    if (static_cast<int>(chosen.size()) == n) return {values};
    if (static_cast<double>(keep) >= total) fail("InternalError", "box missed an independent set");
    keep *= 8;  // a tie class straddled the shortlist boundary; retry wider
  }
}

// Greedy independent subset of the canonical systole representatives, in
// enumeration order; spans the first flag subspace.
inline std::vector<IVec> systole_independent_subset(const ShortVectorSet& s) {
  std::vector<IVec> chosen;
  for (const IVec& v : s.vectors) {
    if (!is_canonical(v)) continue;
    if (rank_increases(chosen, v)) chosen.push_back(v);
  }
  return chosen;
}

// Smallest vector length strictly above the systole tie class, as a ratio to
// the systole. Searches up to 1.5x the systole and returns 1.5 if nothing
// shows up in that window.
inline double second_shortest_ratio(const SymPoint& a, std::int64_t node_cap = 10000000) {
  const ShortVectorSet s = systole(a, node_cap);
  const auto all = enumerate_below(a, 1.5 * s.radius, node_cap);
  double best = std::numeric_limits<double>::infinity();
  for (const IVec& v : all) {
    if (!is_canonical(v)) continue;
    const double len = length(a, v);
    if (len > s.radius * (1.0 + kTieTol)) best = std::min(best, len);
  }
  if (!std::isfinite(best)) return 1.5;
  return best / s.radius;
}

}  // namespace wrr

#endif
