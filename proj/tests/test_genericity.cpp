#include <catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <set>
#include <vector>

#include "wrr/genericity.hpp"
#include "wrr/lattices.hpp"
#include "wrr/minima.hpp"
#include "wrr/random.hpp"
#include "wrr/retract.hpp"
#include "wrr/sympoint.hpp"

using namespace wrr;

namespace {

std::string error_name(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.name();
  }
  return "";
}

std::set<std::vector<std::int64_t>> as_set(const std::vector<IVec>& vs) {
  std::set<std::vector<std::int64_t>> out;
  for (const IVec& v : vs) out.insert({v.data(), v.data() + v.size()});
  return out;
}

}  // namespace

TEST_CASE("sector perturbation is the identity on points with 2n shortest vectors") {
  const SymPoint a = normalize(Mat::Identity(2, 2));
  const PerturbationPlan plan = sector_perturbation(a);
  REQUIRE(plan.steps.empty());
  REQUIRE(plan.basis.size() == 2);
  REQUIRE(plan.map_f.isIdentity(0.0));
  REQUIRE(gram_distance(apply_plan(a, plan), a) == 0.0);
}

TEST_CASE("sector perturbation eliminates the extra hexagonal pair in one step") {
  const SymPoint a = hexagonal();
  const ShortVectorSet s = systole(a);
  REQUIRE(s.vectors.size() == 6);
  const PerturbationPlan plan = sector_perturbation(a);
  REQUIRE(plan.steps.size() == 1);
  REQUIRE(plan.basis.size() == 2);
  REQUIRE(plan.steps[0].eliminated.size() == 1);
  REQUIRE(plan.map_f.determinant() > 0);
  REQUIRE((plan.map_f - Mat::Identity(2, 2)).norm() <= 0.5 / 4.0);

  // Soundness oracle recomputed from the map itself: surviving pairs keep
  // their length, eliminated pairs are strictly longer.
  const auto survivors = as_set(plan.basis);
  for (const IVec& v : s.vectors) {
    if (!is_canonical(v)) continue;
    const double before = (a.rep() * v.cast<double>()).norm();
    const double after = (plan.map_f * a.rep() * v.cast<double>()).norm();
    if (survivors.count({v.data(), v.data() + 2}) != 0)
      REQUIRE(std::abs(after - before) <= 1e-10 * before);
    else
      REQUIRE(after > before * (1.0 + 1e-12));
  }
  REQUIRE(plan.steps[0].eta > plan.steps[0].theta);
  REQUIRE(plan.steps[0].theta > 0);
}

TEST_CASE("sector perturbation does not depend on the chosen representative") {
  const SymPoint a = hexagonal();
  std::mt19937_64 rng(411);
  const Mat r = random_rotation(2, rng);
  const SymPoint b = normalize(r * a.rep());
  REQUIRE(gram_distance(a, b) <= 1e-12);

  const PerturbationPlan pa = sector_perturbation(a);
  const PerturbationPlan pb = sector_perturbation(b);
  REQUIRE(pa.steps.size() == pb.steps.size());
  REQUIRE(as_set(pa.basis) == as_set(pb.basis));
  REQUIRE(as_set(pa.steps[0].eliminated) == as_set(pb.steps[0].eliminated));
  REQUIRE(gram_distance(apply_plan(a, pa), apply_plan(b, pb)) <= 1e-8);
}

TEST_CASE("genericize leaves exactly 2n shortest vectors") {
  SECTION("hexagonal") {
    const GenericizeResult g = genericize(hexagonal(), 0.05);
    const ShortVectorSet s = systole(g.point);
    REQUIRE(s.vectors.size() == 4);
    REQUIRE((g.plan.map_f - Mat::Identity(2, 2)).norm() <= 0.05);
    REQUIRE(g.plan.steps.size() == 1);
    // Cross-check the surviving minimum against the direct search oracle.
    const auto oracle = brute_force_minima(g.point, 4);
    REQUIRE(s.radius == Catch::Approx(oracle.values[0]).epsilon(1e-9));
    REQUIRE(as_set(s.vectors) == as_set([&] {
              std::vector<IVec> both;
              for (const IVec& v : g.plan.basis) {
                both.push_back(v);
                both.push_back(-v);
              }
              return both;
            }()));
  }
  SECTION("face centered cubic") {
    const SymPoint a = face_centered_cubic();
    REQUIRE(systole(a).vectors.size() == 12);
    const GenericizeResult g = genericize(a, 0.05);
    const ShortVectorSet s = systole(g.point);
    REQUIRE(s.vectors.size() == 6);
    REQUIRE(stratum(g.point).well_rounded);
    const auto oracle = brute_force_minima(g.point, 4);
    REQUIRE(s.radius == Catch::Approx(oracle.values[0]).epsilon(1e-9));
  }
  SECTION("already generic points come back unchanged") {
    const SymPoint a = normalize(Mat::Identity(3, 3));
    const GenericizeResult g = genericize(a, 0.05);
    REQUIRE(gram_distance(g.point, a) == 0.0);
    REQUIRE(g.plan.steps.empty());
  }
}

TEST_CASE("genericize proximity shrinks with delta") {
  const SymPoint a = hexagonal();
  const double d1 = gram_distance(genericize(a, 0.1).point, a);
  const double d2 = gram_distance(genericize(a, 0.05).point, a);
  const double d3 = gram_distance(genericize(a, 0.01).point, a);
  REQUIRE(d1 > 0);
  REQUIRE(d2 > 0);
  REQUIRE(d3 > 0);
  REQUIRE(d1 + 1e-15 >= d2);
  REQUIRE(d2 + 1e-15 >= d3);
}

TEST_CASE("genericize input validation") {
  Mat skew = Mat::Zero(2, 2);
  skew(0, 0) = 0.5;
  skew(1, 1) = 2.0;
  const SymPoint thin = normalize(skew);
  REQUIRE(error_name([&] { (void)genericize(thin, 0.05); }) == "NotWellRounded");
  REQUIRE(error_name([&] { (void)sector_perturbation(thin); }) == "NotWellRounded");
  REQUIRE(error_name([&] { (void)genericize(hexagonal(), 0.0); }) == "InvalidDelta");
  REQUIRE(error_name([&] { (void)genericize(hexagonal(), 0.2); }) == "InvalidDelta");
  // A budget below the tie tolerance cannot separate the tied pair.
  REQUIRE(error_name([&] { (void)genericize(hexagonal(), 1e-9); }) == "DeltaTooSmall");
}

TEST_CASE("traceless diagonal embedding") {
  Vec zero(2);
  zero << 0.0, 0.0;
  REQUIRE(diag_embed(zero).isIdentity(0.0));

  Vec one(1);
  one << 0.7;
  const Mat d2 = diag_embed(one);
  REQUIRE(d2(0, 0) == std::exp(0.7));
  REQUIRE(d2(1, 1) == std::exp(-0.7));
  REQUIRE(d2(0, 1) == 0.0);

  Vec two(2);
  two << 1.0, -1.0;
  const Mat d3 = diag_embed(two);
  REQUIRE(d3(0, 0) == std::exp(1.0));
  REQUIRE(d3(1, 1) == std::exp(-1.0));
  REQUIRE(d3(2, 2) == 1.0);
  REQUIRE(d3.determinant() == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("two-parameter family basics") {
  const SymPoint a = normalize(Mat::Identity(2, 2));
  const IMat b = IMat::Identity(2, 2);

  SECTION("zero displacement is the base point, exactly") {
    Vec x(1);
    x << 0.0;
    REQUIRE(gram_distance(g2(a, b, x), a) == 0.0);
  }
  SECTION("diagonal closed form") {
    Vec x(1);
    x << 0.3;
    const SymPoint p = g2(a, b, x);
    REQUIRE(p.gram()(0, 0) == Catch::Approx(std::exp(0.6)).epsilon(1e-12));
    REQUIRE(p.gram()(1, 1) == Catch::Approx(std::exp(-0.6)).epsilon(1e-12));
    REQUIRE(std::abs(p.gram()(0, 1)) <= 1e-14);
    REQUIRE(p.rep().determinant() == Catch::Approx(1.0).epsilon(1e-10));
  }
  SECTION("displacements add along the family") {
    const SymPoint h = hexagonal();
    IMat bh(2, 2);
    bh << 1, 0, 0, 1;
    Vec x(1), y(1);
    x << 0.2;
    y << -0.45;
    const SymPoint lhs = g2(g2(h, bh, x), bh, y);
    const SymPoint rhs = g2(h, bh, Vec(x + y));
    REQUIRE(gram_distance(lhs, rhs) <= 1e-10);
  }
  SECTION("errors") {
    IMat sing(2, 2);
    sing << 1, 1, 1, 1;
    Vec x(1);
    x << 0.1;
    REQUIRE(error_name([&] { (void)g2(a, sing, x); }) == "SingularB");
    Vec bad(2);
    bad << 0.1, 0.2;
    REQUIRE(error_name([&] { (void)g2(a, b, bad); }) == "DimensionMismatch");
  }
}

TEST_CASE("epsilon certification") {
  const GenericizeResult g = genericize(hexagonal(), 0.05);
  const IMat b = columns_matrix(g.plan.basis, 2);
  const double eps = find_epsilon(g.point, b);
  REQUIRE(eps <= 0.5);
  REQUIRE(eps >= 1e-4);
  for (double sign : {1.0, -1.0}) {
    Vec dir(1);
    dir << sign;
    REQUIRE_FALSE(stratum(g2(g.point, b, eps * dir)).well_rounded);
    REQUIRE_FALSE(stratum(g2(g.point, b, 0.5 * eps * dir)).well_rounded);
  }

  // The base point must be generic and B must consist of its systoles.
  IMat id2(2, 2);
  id2 << 1, 0, 0, 1;
  REQUIRE(error_name([&] { (void)find_epsilon(hexagonal(), id2); }) == "NotGeneric");
  IMat sing(2, 2);
  sing << 1, 1, 1, 1;
  REQUIRE(error_name([&] { (void)find_epsilon(g.point, sing); }) == "SingularB");
}

TEST_CASE("radial scan meets the well-rounded locus only at the center") {
  SECTION("dimension two") {
    const GenericizeResult g = genericize(hexagonal(), 0.05);
    const IMat b = columns_matrix(g.plan.basis, 2);
    const CycleScanReport scan = g3_scan(g.point, b);
    REQUIRE(scan.rays.size() == 2);
    REQUIRE(scan.rays[0].samples.size() == 34);
    REQUIRE(scan.rays[1].samples.size() == 33);
    REQUIRE(single_center_intersection(scan));
    REQUIRE(scan.intersections[0].direction == 0);

    // Inside the ball the samples are the two-parameter family itself.
    for (const RayData& ray : scan.rays) {
      for (const RaySample& smp : ray.samples) {
        if (smp.radius == 0.0 || smp.radius > scan.epsilon) continue;
        const double direct =
            systole(g2(g.point, b, smp.radius * ray.direction)).radius;
        REQUIRE(smp.syst1 == Catch::Approx(direct).epsilon(1e-13));
      }
    }
    // Beyond the ball the expansion flow keeps shrinking the systole and
    // never returns to the well-rounded locus.
    for (const RayData& ray : scan.rays) {
      double prev = 0;
      bool have_prev = false;
      for (const RaySample& smp : ray.samples) {
        if (smp.radius < scan.epsilon) continue;
        REQUIRE_FALSE(smp.well_rounded);
        if (have_prev) REQUIRE(smp.syst1 < prev);
        prev = smp.syst1;
        have_prev = true;
      }
    }
  }
  SECTION("dimension three") {
    const GenericizeResult g = genericize(face_centered_cubic(), 0.05);
    const IMat b = columns_matrix(g.plan.basis, 3);
    const CycleScanReport scan = g3_scan(g.point, b);
    REQUIRE(scan.rays.size() == 128);
    REQUIRE(single_center_intersection(scan));
    for (const RayData& ray : scan.rays)
      for (const RaySample& smp : ray.samples)
        if (smp.radius > 0) REQUIRE_FALSE(smp.well_rounded);
  }
}
