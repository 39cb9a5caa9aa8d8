#ifndef WRR_RETRACT_HPP
#define WRR_RETRACT_HPP

// Strata of the space of lattices by the rank spanned by shortest vectors,
// the expanding flow that pushes a point into deeper strata, the crossing
// time of the next stratum, the retraction onto the well-rounded locus, and
// the expansion flow driven by the full minima flag.

#include <cmath>
#include <string>
#include <vector>

#include "wrr/common.hpp"
#include "wrr/exact.hpp"
#include "wrr/minima.hpp"
#include "wrr/sympoint.hpp"

namespace wrr {

struct StratumReport {
  int k = 0;
  bool well_rounded = false;
  bool extremely_well_rounded = false;
  // Index of the sublattice generated by the shortest vectors; 0 = infinite.
  std::int64_t systole_index = 0;
};

enum class FlowKind { TFlow, PhiFlow, Retraction };

struct FlowSample {
  double param;
  SymPoint point;
  StratumReport report;
  double syst1;
};

struct FlowPath {
  FlowKind kind;
  std::vector<FlowSample> samples;  // params strictly increasing
};

inline const SymPoint& endpoint(const FlowPath& p) {
  if (p.samples.empty()) fail("InternalError", "empty flow path");
  return p.samples.back().point;
}

namespace detail {

inline StratumReport stratum_of_set(const ShortVectorSet& s, int n) {
  StratumReport r;
  const auto sub = systole_independent_subset(s);
  r.k = static_cast<int>(sub.size());
  r.well_rounded = r.k == n;
  if (r.well_rounded) {
    std::vector<IVec> half;
    for (const IVec& v : s.vectors)
      if (is_canonical(v)) half.push_back(v);
    r.systole_index = sublattice_index(columns_matrix(half, n));
    r.extremely_well_rounded = r.systole_index == 1;
  }
  return r;
}

struct TFlowData {
  int k = 0;
  double syst1 = 0;
  Mat proj;                    // orthogonal projection onto the image of Lambda_1
  std::vector<IVec> lambda1;   // greedy integer basis of Lambda_1
};

inline TFlowData t_flow_data(const SymPoint& a) {
  const int n = a.dim();
  TFlowData d;
  const ShortVectorSet s = systole(a);
  d.syst1 = s.radius;
  d.lambda1 = systole_independent_subset(s);
  d.k = static_cast<int>(d.lambda1.size());
  Mat img(n, d.k);
  for (int j = 0; j < d.k; ++j) img.col(j) = a.rep() * d.lambda1[static_cast<std::size_t>(j)].cast<double>();
  Eigen::HouseholderQR<Mat> qr(img);
  const Mat q = qr.householderQ() * Mat::Identity(n, d.k);
  d.proj = q * q.transpose();
  return d;
}

inline SymPoint t_flow_apply(const SymPoint& a, const TFlowData& d, double lambda) {
  const int n = a.dim();
  if (lambda == 0 || d.k == n) return a;
  const double grow = std::exp((n - d.k) * lambda);
  const double shrink = std::exp(-d.k * lambda);
  const Mat t = grow * d.proj + shrink * (Mat::Identity(n, n) - d.proj);
  return normalize(t * a.rep());
}

}  // namespace detail

inline StratumReport stratum(const SymPoint& a) {
  return detail::stratum_of_set(systole(a), a.dim());
}

// Expands the directions spanned by the shortest vectors by e^{(n-k)lambda}
// and contracts everything orthogonal by e^{-k lambda}; fixes well-rounded
// points for every lambda.
inline SymPoint t_flow(const SymPoint& a, double lambda) {
  return detail::t_flow_apply(a, detail::t_flow_data(a), lambda);
}

// First flow time at which the shortest-vector tie class grows beyond the
// current span. Bracketing by doubling from 2^-10, then bisection; the value
// returned is the upper end of the final bracket, so flowing by it lands on
// the enlarged stratum.
inline double tau(const SymPoint& a, double lambda_max = 50.0) {
  const int n = a.dim();
  const detail::TFlowData d = detail::t_flow_data(a);
  if (d.k == n) return 0.0;

  // Monotone predicate: lengths of vectors outside Lambda_1, normalized by
  // the expansion factor, strictly decrease in lambda while lengths inside
  // stay put, so once a crossing happens the tie class keeps an outside
  // vector forever.
  auto crossed = [&](double lambda) {
    const SymPoint flowed = detail::t_flow_apply(a, d, lambda);
    const ShortVectorSet s = systole(flowed);
    for (const IVec& v : s.vectors)
      if (rank_increases(d.lambda1, v)) return true;
    return false;
  };

  double lo = 0.0;
  double hi = std::pow(2.0, -10);
  while (!crossed(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > lambda_max)
      fail("NoCrossing", "no stratum crossing below lambda = " + std::to_string(lambda_max));
  }
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (crossed(mid) ? hi : lo) = mid;
  }
  return hi;
}

// Chains flow legs until the point is well rounded. The path records the
// starting point and the endpoint of every leg; parameters accumulate the
// flow times, so they increase strictly.
inline FlowPath retract_point(const SymPoint& a) {
  const int n = a.dim();
  FlowPath path{FlowKind::Retraction, {}};
  SymPoint cur = a;
  ShortVectorSet s = systole(cur);
  StratumReport rep = detail::stratum_of_set(s, n);
  path.samples.push_back({0.0, cur, rep, s.radius});
  double cum = 0.0;
  int legs = 0;
  while (!rep.well_rounded) {
    if (++legs > n - 1)
      fail("LegLimitExceeded", "retraction exceeded " + std::to_string(n - 1) + " legs");
    const double t = tau(cur);
    if (!(t > 0))
      fail("LegLimitExceeded", "flow leg makes no progress; tie classification inconsistent");
    cur = t_flow(cur, t);
    cum += t;
    s = systole(cur);
    rep = detail::stratum_of_set(s, n);
    path.samples.push_back({cum, cur, rep, s.radius});
  }
  return path;
}

namespace detail {

inline int theta_dim(const MinimaFlag& f, int i) {
  return static_cast<int>(f.theta_bases[static_cast<std::size_t>(i)].cols());
}

inline double phi_ratio(const MinimaFlag& f, int n) {
  double logsum = 0;
  for (int i = 0; i < n; ++i) logsum += theta_dim(f, i) * std::log(f.syst[i]);
  return f.syst[0] * std::exp(-logsum / n);
}

inline SymPoint phi_apply(const SymPoint& a, const MinimaFlag& f, double t) {
  const int n = a.dim();
  if (t == 0 || f.lambda_dims[0] == n) return a;
  // Fold the normalizing constant into the weights while still in log scale;
  // the raw powers overflow long before the normalized matrix does.
  double logsum = 0;
  for (int i = 0; i < n; ++i) logsum += theta_dim(f, i) * std::log(f.syst[i]);
  const double mean = logsum / n;
  Mat m = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (theta_dim(f, i) == 0) continue;
    const Mat& o = f.theta_bases[static_cast<std::size_t>(i)];
    m += std::exp(t * (std::log(f.syst[i]) - mean)) * (o * o.transpose());
  }
  return normalize(m * a.rep());
}

}  // namespace detail

// Expansion flow weighted by the full minima flag. Fixes well-rounded points
// exactly; shrinks the systole of everything else at a fixed exponential
// rate per unit time.
inline SymPoint phi_flow(const SymPoint& a, double t) {
  if (t < 0) fail("InvalidTime", "flow time must be nonnegative");
  if (t == 0) return a;
  const MinimaFlag f = lambda_flag(a);
  return detail::phi_apply(a, f, t);
}

// Ratio of the systole to the weighted geometric mean of the minima; equals
// one exactly on well-rounded points and is strictly below one elsewhere.
// The systole of the flowed point decays as ratio^t.
inline double phi_decay_ratio(const SymPoint& a) {
  const MinimaFlag f = lambda_flag(a);
  if (f.lambda_dims[0] == a.dim()) return 1.0;
  return detail::phi_ratio(f, a.dim());
}

// Samples the expansion flow at the given times (strictly increasing, first
// one nonnegative) and records stratum data along the way.
inline FlowPath phi_path(const SymPoint& a, const std::vector<double>& ts) {
  if (ts.empty()) fail("InvalidTime", "need at least one sample time");
  FlowPath path{FlowKind::PhiFlow, {}};
  const MinimaFlag f = lambda_flag(a);
  double prev = -1.0;
  for (const double t : ts) {
    if (t < 0) fail("InvalidTime", "flow time must be nonnegative");
    if (t <= prev) fail("InvalidTime", "sample times must increase strictly");
    prev = t;
    const SymPoint p = detail::phi_apply(a, f, t);
    const ShortVectorSet s = systole(p);
    path.samples.push_back({t, p, detail::stratum_of_set(s, a.dim()), s.radius});
  }
  return path;
}

}  // namespace wrr

#endif
