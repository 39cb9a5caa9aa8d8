#ifndef WRR_GENERICITY_HPP
#define WRR_GENERICITY_HPP

// Perturbing a well-rounded point until exactly 2n shortest vectors remain,
// and scanning the two-parameter family around such a point for unexpected
// returns to the well-rounded locus.
//
// The elimination step works on the images of the shortest vectors. Given a
// hyperplane U spanned by some of them with at least two pairs outside, the
// outside pair of minimal angle theta to U is rotated away from U inside the
// plane it spans with its projection onto U; everything on U stays fixed,
// the rotated pair keeps its length, and every other outside pair lengthens
// strictly. Chaining such maps kills ties until only a basis is left.

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "wrr/common.hpp"
#include "wrr/exact.hpp"
#include "wrr/minima.hpp"
#include "wrr/retract.hpp"
#include "wrr/sympoint.hpp"

namespace wrr {

struct SectorStep {
  Vec hyperplane_normal;
  Vec pivot;   // unit direction of the rotated pair, before the rotation
  double theta = 0;
  double eta = 0;
  std::vector<IVec> eliminated;  // canonical representatives, strictly lengthened
};

struct PerturbationPlan {
  std::vector<IVec> basis;  // surviving pairs, an independent set of size n
  Mat map_f;                // composed linear map, det > 0
  std::vector<SectorStep> steps;
};

struct GenericizeResult {
  SymPoint point;
  PerturbationPlan plan;
};

namespace detail {

struct PairState {
  IVec v;
  Vec pos;
  bool alive = true;
  double floor_len = 0;  // once eliminated, lengths may never drop below this
};

inline bool next_combination(std::vector<int>& c, int m) {
  const int k = static_cast<int>(c.size());
  int i = k - 1;
  while (i >= 0 && c[static_cast<std::size_t>(i)] == m - k + i) --i;
  if (i < 0) return false;
  ++c[static_cast<std::size_t>(i)];
  for (int j = i + 1; j < k; ++j)
    c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
  return true;
}

// One full build attempt; step openings are scaled by `scale` so the caller
// can shrink everything when the composed map overshoots the budget.
inline bool build_plan(const SymPoint& a, const std::vector<IVec>& reps, double orig,
                       double budget, double scale, PerturbationPlan& plan) {
  const int n = a.dim();
  plan.basis.clear();
  plan.steps.clear();
  plan.map_f = Mat::Identity(n, n);

  std::vector<PairState> pairs;
  pairs.reserve(reps.size());
  for (const IVec& v : reps) pairs.push_back({v, a.rep() * v.cast<double>(), true, 0.0});
  int alive = static_cast<int>(pairs.size());

  int step_index = 0;
  while (alive > n) {
    ++step_index;
    if (step_index > static_cast<int>(pairs.size())) return false;
    const double step_cap = scale * budget * std::pow(2.0, -step_index);

    // Hyperplane search: (n-1)-subsets of the alive pairs, exact rank tests
    // on the integer preimages so the search never depends on the current
    // floating point positions.
    std::vector<int> alive_idx;
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if (pairs[i].alive) alive_idx.push_back(static_cast<int>(i));
    const int m = static_cast<int>(alive_idx.size());

    bool found = false;
    std::vector<int> members, outside;
    Vec u;
    int pivot = -1;
    double sint = 0;

    std::vector<int> comb(n - 1);
    for (int i = 0; i < n - 1; ++i) comb[static_cast<std::size_t>(i)] = i;
    do {
      std::vector<IVec> subset;
      for (int ci : comb) subset.push_back(pairs[static_cast<std::size_t>(alive_idx[static_cast<std::size_t>(ci)])].v);
      if (exact_rank(columns_matrix(subset, n)) != n - 1) continue;
      members.clear();
      outside.clear();
      for (int j : alive_idx) {
        if (rank_increases(subset, pairs[static_cast<std::size_t>(j)].v))
          outside.push_back(j);
        else
          members.push_back(j);
      }
      if (static_cast<int>(outside.size()) < 2) continue;

      // Orthonormal frame of the image of U and its unit normal.
      Mat mem(n, static_cast<Eigen::Index>(members.size()));
      for (std::size_t c = 0; c < members.size(); ++c)
        mem.col(static_cast<Eigen::Index>(c)) = pairs[static_cast<std::size_t>(members[c])].pos;
      Eigen::ColPivHouseholderQR<Mat> qr(mem);
      if (qr.rank() != n - 1) continue;
      Mat q = qr.householderQ();
      Vec normal = q.col(n - 1);

      // Pivot: outside pair of minimal angle to U; near-ties resolved by
      // index so that isometric copies of the same configuration pick the
      // same pivot.
      double best = 2.0;
      int best_idx = -1;
      for (int j : outside) {
        const Vec& p = pairs[static_cast<std::size_t>(j)].pos;
        const double st = std::min(1.0, std::abs(normal.dot(p)) / p.norm());
        const double ang = std::asin(st);
        if (ang < best - 1e-9) {
          best = ang;
          best_idx = j;
        }
      }
      if (best < 1e-7 || best > M_PI / 2 - 1e-7) continue;
      pivot = best_idx;
      if (normal.dot(pairs[static_cast<std::size_t>(pivot)].pos) < 0) normal = -normal;
      u = normal;
      sint = std::min(1.0, normal.dot(pairs[static_cast<std::size_t>(pivot)].pos) /
                               pairs[static_cast<std::size_t>(pivot)].pos.norm());
      found = true;
      break;
    } while (next_combination(comb, m));

    if (!found)
      fail("HyperplaneSearchFailed",
           "no hyperplane with at least two shortest pairs outside");

    const Vec piv_pos = pairs[static_cast<std::size_t>(pivot)].pos;
    const Vec vhat = piv_pos / piv_pos.norm();
    const double theta = std::asin(sint);
    Vec u0 = vhat - sint * u;
    u0 /= u0.norm();

    // Open the sector: eta = theta + e. The map is the identity on U and
    // in the (u0, u) plane sends (alpha, beta) to (alpha + c beta, s beta).
    // Shrink e until earlier eliminations keep their length floors.
    double e = std::min(0.1 * theta, 0.9 * step_cap * sint);
    Mat f_step;
    double eta = 0;
    bool ok = false;
    std::vector<int> newly;
    for (int halvings = 0; halvings < 60 && !ok; ++halvings) {
      if (e < 1e-15) break;
      eta = theta + e;
      const double c = (std::cos(eta) - std::cos(theta)) / sint;
      const double sc = std::sin(eta) / sint;
      f_step = Mat::Identity(n, n) + c * (u0 * u.transpose()) +
               (sc - 1.0) * (u * u.transpose());
      ok = true;
      newly.clear();
      for (std::size_t i = 0; i < pairs.size() && ok; ++i) {
        const double nl = (f_step * pairs[i].pos).norm();
        if (!pairs[i].alive) {
          if (nl < pairs[i].floor_len) ok = false;
        } else if (static_cast<int>(i) == pivot ||
                   std::find(members.begin(), members.end(), static_cast<int>(i)) !=
                       members.end()) {
          if (std::abs(nl - orig) > 1e-10 * orig) ok = false;
        } else {
          if (nl < orig * (1.0 + 1e-13)) ok = false;
          newly.push_back(static_cast<int>(i));
        }
      }
      if (!ok) e *= 0.5;
    }
    if (!ok) return false;

    SectorStep step{u, vhat, theta, eta, {}};
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const Vec np = f_step * pairs[i].pos;
      if (pairs[i].alive &&
          std::find(newly.begin(), newly.end(), static_cast<int>(i)) != newly.end()) {
        pairs[i].alive = false;
        pairs[i].floor_len = orig + 0.75 * (np.norm() - orig);
        step.eliminated.push_back(pairs[i].v);
      }
      pairs[i].pos = np;
    }
    plan.map_f = f_step * plan.map_f;
    plan.steps.push_back(std::move(step));
    alive -= static_cast<int>(newly.size());
  }

  for (const PairState& p : pairs)
    if (p.alive) plan.basis.push_back(p.v);
  if (exact_rank(columns_matrix(plan.basis, n)) != n)
    fail("InternalError", "surviving pairs fail to span");
  return (plan.map_f - Mat::Identity(n, n)).norm() <= budget;
}

}  // namespace detail

// Builds the elimination plan for a well-rounded point. With budget zero the
// opening sizes default to a quarter of the gap to the next length class.
inline PerturbationPlan sector_perturbation(const SymPoint& a, double budget = 0.0) {
  const int n = a.dim();
  const ShortVectorSet s = systole(a);
  std::vector<IVec> reps;
  for (const IVec& v : s.vectors)
    if (is_canonical(v)) reps.push_back(v);
  // The shortest vectors form one tie class, so their float lengths carry no
  // usable order; fix a pure integer order to keep the plan independent of
  // the chosen representative.
  std::sort(reps.begin(), reps.end(),
            [](const IVec& x, const IVec& y) { return lex_less(y, x); });
  if (exact_rank(columns_matrix(reps, n)) != n)
    fail("NotWellRounded", "shortest vectors do not span");

  PerturbationPlan plan;
  plan.map_f = Mat::Identity(n, n);
  if (static_cast<int>(reps.size()) == n) {
    plan.basis = reps;
    return plan;
  }

  if (budget == 0.0) budget = (second_shortest_ratio(a) - 1.0) / 4.0;
  if (!(budget > 0)) fail("InvalidDelta", "perturbation budget must be positive");

  double scale = 1.0;
  for (int attempt = 0; attempt < 12; ++attempt, scale *= 0.8)
    if (detail::build_plan(a, reps, s.radius, budget, scale, plan)) return plan;
  fail("HyperplaneSearchFailed", "could not open sectors within the budget");
}

inline SymPoint apply_plan(const SymPoint& a, const PerturbationPlan& plan) {
  if (plan.steps.empty()) return a;
  return normalize(plan.map_f * a.rep());
}

// Perturbs a well-rounded point within delta until exactly 2n shortest
// vectors survive; points already generic come back unchanged.
inline GenericizeResult genericize(const SymPoint& a, double delta) {
  const int n = a.dim();
  if (!(delta > 0) || delta > 0.1) fail("InvalidDelta", "delta must lie in (0, 0.1]");
  const double gap = second_shortest_ratio(a) - 1.0;
  const double budget = std::min(delta, gap / 4.0);
  PerturbationPlan plan = sector_perturbation(a, budget);
  SymPoint point = apply_plan(a, plan);
  const ShortVectorSet after = systole(point);
  if (static_cast<int>(after.vectors.size()) != 2 * n)
    fail("DeltaTooSmall",
         "systole ties survive inside the tie tolerance at delta = " + std::to_string(delta));
  std::set<std::vector<std::int64_t>> expect;
  for (const IVec& v : plan.basis) {
    expect.insert({v.data(), v.data() + n});
    const IVec nv = -v;
    expect.insert({nv.data(), nv.data() + n});
  }
  for (const IVec& v : after.vectors)
    if (expect.count({v.data(), v.data() + n}) == 0)
      fail("InternalError", "perturbed systole set is not the planned basis");
  return {point, plan};
}

// Exponential of a traceless diagonal matrix from n-1 free coordinates.
inline Mat diag_embed(const Vec& x) {
  const int n = static_cast<int>(x.size()) + 1;
  Mat d = Mat::Zero(n, n);
  double sum = 0;
  for (int i = 0; i + 1 < n; ++i) {
    d(i, i) = std::exp(x[i]);
    sum += x[i];
  }
  d(n - 1, n - 1) = std::exp(-sum);
  return d;
}

// Two-parameter family through a: scales the columns of B by the traceless
// diagonal exponential with coordinates x.
inline SymPoint g2(const SymPoint& a, const IMat& b, const Vec& x) {
  const int n = a.dim();
  if (b.rows() != n || b.cols() != n) fail("DimensionMismatch", "B must be n by n");
  if (x.size() != n - 1) fail("DimensionMismatch", "x must have n-1 coordinates");
  if (exact_det(b) == 0) fail("SingularB", "B must be invertible");
  if (x.isZero(0.0)) return a;
  const Mat bd = b.cast<double>();
  const Mat m = bd * diag_embed(x) * bd.inverse();
  return normalize(a.rep() * m);
}

// Quasi-uniform directions on the unit sphere of R^d, deterministic.
inline std::vector<Vec> sphere_directions(int d, int count) {
  std::vector<Vec> out;
  if (d < 1) fail("DimensionMismatch", "need at least one coordinate");
  if (d == 1) {
    Vec p(1), m(1);
    p << 1.0;
    m << -1.0;
    out = {p, m};
    return out;
  }
  if (d == 2) {
    out.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
      Vec v(2);
      const double ang = 2.0 * M_PI * k / count;
      v << std::cos(ang), std::sin(ang);
      out.push_back(v);
    }
    return out;
  }
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
  std::normal_distribution<double> gauss(0.0, 1.0);
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    Vec v(d);
    do {
      for (int i = 0; i < d; ++i) v[i] = gauss(rng);
    } while (v.norm() < 1e-6);
    out.push_back(v / v.norm());
  }
  return out;
}

namespace detail {

inline void check_generic_base(const SymPoint& a, const IMat& b) {
  const int n = a.dim();
  if (b.rows() != n || b.cols() != n) fail("DimensionMismatch", "B must be n by n");
  if (exact_det(b) == 0) fail("SingularB", "B must be invertible");
  const ShortVectorSet s = systole(a);
  if (static_cast<int>(s.vectors.size()) != 2 * n)
    fail("NotGeneric", "base point must have exactly 2n shortest vectors");
  std::set<std::vector<std::int64_t>> sys;
  for (const IVec& v : s.vectors) sys.insert({v.data(), v.data() + n});
  for (int j = 0; j < n; ++j) {
    const IVec col = b.col(j);
    if (sys.count({col.data(), col.data() + n}) == 0)
      fail("NotGeneric", "column " + std::to_string(j) + " of B is not a shortest vector");
  }
}

}  // namespace detail

// Largest epsilon of the form 0.5 / 2^k whose sampled sphere stays clear of
// the well-rounded locus and whose boundary systoles certifiably decay when
// pushed radially outward.
inline double find_epsilon(const SymPoint& a, const IMat& b, int directions = 0) {
  const int n = a.dim();
  detail::check_generic_base(a, b);
  if (directions <= 0) directions = 64 * (n - 1);
  const auto dirs = sphere_directions(n - 1, directions);

  for (double eps = 0.5; eps >= 1e-6; eps *= 0.5) {
    bool ok = true;
    for (const Vec& dir : dirs) {
      for (double r : {eps, eps / 2.0}) {
        if (stratum(g2(a, b, r * dir)).well_rounded) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
      // Decay certification: every shortest vector of the boundary point
      // keeps shrinking strictly along the outgoing ray.
      const Vec x = eps * dir;
      const ShortVectorSet s = systole(g2(a, b, x));
      const SymPoint p2 = g2(a, b, 2.0 * x);
      const SymPoint p4 = g2(a, b, 4.0 * x);
      for (const IVec& v : s.vectors) {
        if (!is_canonical(v)) continue;
        const double l1 = length(g2(a, b, x), v);
        const double l2 = length(p2, v);
        const double l4 = length(p4, v);
        if (!(l1 > l2 && l2 > l4)) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    if (ok) return eps;
  }
  fail("EpsilonUnderflow", "no admissible epsilon above 1e-6");
}

struct RaySample {
  double radius = 0;
  bool well_rounded = false;
  double syst1 = 0;
};

struct RayData {
  Vec direction;
  std::vector<RaySample> samples;
};

struct ScanIntersection {
  int direction = 0;
  double radius = 0;
};

struct CycleScanReport {
  SymPoint base_point;
  IMat b_matrix;
  double epsilon = 0;
  std::vector<RayData> rays;
  std::vector<ScanIntersection> intersections;
};

// Radial scan of the glued family: g2 inside the epsilon ball, the expansion
// flow applied to the boundary point beyond it. Records stratum data per
// sample and every well-rounded hit; the center belongs to ray zero only, so
// a clean scan shows exactly one intersection, at radius zero.
inline CycleScanReport g3_scan(const SymPoint& a, const IMat& b,
                               std::vector<double> radii = {}, int directions = 0) {
  const int n = a.dim();
  CycleScanReport report{a, b, 0.0, {}, {}};
  report.epsilon = find_epsilon(a, b, directions);
  const double eps = report.epsilon;
  if (directions <= 0) directions = 64 * (n - 1);
  const auto dirs = sphere_directions(n - 1, directions);

  if (radii.empty()) {
    for (int i = 0; i <= 16; ++i) radii.push_back(eps / 8.0 * std::pow(8.0, i / 16.0));
    for (int j = 1; j <= 16; ++j) radii.push_back(eps + 0.5 * j);
  }
  for (double r : radii)
    if (!(r > 0)) fail("InvalidRadius", "scan radii must be positive");

  for (std::size_t d = 0; d < dirs.size(); ++d) {
    RayData ray{dirs[d], {}};
    if (d == 0) {
      const ShortVectorSet s0 = systole(a);
      const StratumReport st0 = detail::stratum_of_set(s0, n);
      ray.samples.push_back({0.0, st0.well_rounded, s0.radius});
      if (st0.well_rounded) report.intersections.push_back({0, 0.0});
    }
    const SymPoint seed = g2(a, b, eps * dirs[d]);
    const MinimaFlag seed_flag = lambda_flag(seed);
    for (double r : radii) {
      const SymPoint p = r <= eps ? g2(a, b, r * dirs[d])
                                  : detail::phi_apply(seed, seed_flag, r - eps);
      const ShortVectorSet s = systole(p);
      const StratumReport st = detail::stratum_of_set(s, n);
      ray.samples.push_back({r, st.well_rounded, s.radius});
      if (st.well_rounded)
        report.intersections.push_back({static_cast<int>(d), r});
    }
    report.rays.push_back(std::move(ray));
  }
  return report;
}

inline bool single_center_intersection(const CycleScanReport& r) {
  return r.intersections.size() == 1 && r.intersections[0].radius == 0.0;
}

}  // namespace wrr

#endif
