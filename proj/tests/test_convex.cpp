#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "support/oracles.hpp"
#include "sweepvi/convex.hpp"
#include "sweepvi/errors.hpp"

using namespace sweepvi;

namespace {

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

Eigen::VectorXd vec1(double a) {
  Eigen::VectorXd v(1);
  v << a;
  return v;
}

constexpr double kInfD = std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("box projection clamps componentwise") {
  const ConvexSet b = ConvexSet::box(vec2(0.0, -1.0), vec2(2.0, 1.0));
  CHECK(b.project(vec2(3.0, 0.5)) == vec2(2.0, 0.5));
  CHECK(b.project(vec2(1.0, 0.0)) == vec2(1.0, 0.0));
  CHECK(b.distance(vec2(3.0, 0.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(b.distance(vec2(3.0, 2.0)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("ball projection scales to the boundary") {
  const ConvexSet s = ConvexSet::ball(vec2(1.0, 1.0), 2.0);
  CHECK((s.project(vec2(1.0, 4.0)) - vec2(1.0, 3.0)).norm() <= 1e-15);
  CHECK(s.project(vec2(1.5, 1.0)) == vec2(1.5, 1.0));  // interior point unchanged
  CHECK(s.distance(vec2(1.0, 4.0)) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("translate and reflect wrap projections consistently") {
  const ConvexSet base = ConvexSet::interval(-1.0, 1.0);
  const ConvexSet shifted = ConvexSet::translate(base, vec1(2.0));  // [1, 3]
  CHECK(shifted.project(vec1(0.0)) == vec1(1.0));
  CHECK(shifted.project(vec1(5.0)) == vec1(3.0));

  const ConvexSet refl = ConvexSet::reflect(ConvexSet::interval(1.0, 3.0));  // [-3, -1]
  CHECK(refl.project(vec1(0.0)) == vec1(-1.0));
  CHECK(refl.support(vec1(1.0)) == doctest::Approx(-1.0));

  // Representation invariance: translate(reflect([-1,1])) behaves like the
  // explicit box at every sampled point.
  const ConvexSet wrapped = ConvexSet::translate(ConvexSet::reflect(base), vec1(0.5));
  const ConvexSet plain = ConvexSet::interval(-0.5, 1.5);
  oracles::Rng rng(606);
  for (int i = 0; i < 100; ++i) {
    const Eigen::VectorXd x = vec1(rng.uniform(-4.0, 4.0));
    CHECK((wrapped.project(x) - plain.project(x)).norm() <= 1e-14);
    CHECK(wrapped.support(vec1(1.0)) == doctest::Approx(plain.support(vec1(1.0))));
  }
}

TEST_CASE("support functions of boxes and balls") {
  const ConvexSet b = ConvexSet::box(vec2(-1.0, 0.0), vec2(2.0, 3.0));
  CHECK(b.support(vec2(1.0, 0.0)) == doctest::Approx(2.0));
  CHECK(b.support(vec2(-1.0, 1.0)) == doctest::Approx(4.0));
  CHECK(b.support(vec2(0.0, 0.0)) == 0.0);
  CHECK(b.support_point(vec2(-1.0, 1.0)) == vec2(-1.0, 3.0));

  const ConvexSet s = ConvexSet::ball(vec2(1.0, 0.0), 2.0);
  CHECK(s.support(vec2(1.0, 0.0)) == doctest::Approx(3.0));
  CHECK(s.support(vec2(0.0, -1.0)) == doctest::Approx(2.0));

  // Translate support identity: sigma(D + f, z) = <f, z> + sigma(D, z), exact
  // because the implementation computes exactly this expression.
  const ConvexSet t = ConvexSet::translate(b, vec2(0.25, -0.75));
  const Eigen::VectorXd z = vec2(0.3, -1.7);
  CHECK(t.support(z) == vec2(0.25, -0.75).dot(z) + b.support(z));
}

TEST_CASE("unbounded supports throw, projections still work") {
  const ConvexSet half = ConvexSet::box(vec1(0.0), vec1(kInfD));
  CHECK_FALSE(half.bounded());
  CHECK(half.project(vec1(-2.0)) == vec1(0.0));
  CHECK(half.project(vec1(5.0)) == vec1(5.0));
  CHECK_THROWS_AS(half.support(vec1(1.0)), UnboundedSupportError);
  CHECK(half.support(vec1(-1.0)) == doctest::Approx(0.0));
  // Normal cone at the corner 0: leftward normals yes, rightward no.
  CHECK(half.normal_cone_contains(vec1(0.0), vec1(-1.0), 1e-10));
  CHECK_FALSE(half.normal_cone_contains(vec1(0.0), vec1(1.0), 1e-10));
}

TEST_CASE("normal cone membership at boundary, interior, and off-set points") {
  const ConvexSet b = ConvexSet::box(vec2(0.0, 0.0), vec2(1.0, 1.0));
  CHECK(b.normal_cone_contains(vec2(1.0, 0.5), vec2(3.0, 0.0), 1e-10));
  CHECK(b.normal_cone_contains(vec2(0.5, 0.5), vec2(0.0, 0.0), 1e-10));
  CHECK_FALSE(b.normal_cone_contains(vec2(0.5, 0.5), vec2(1.0, 0.0), 1e-10));
  CHECK_FALSE(b.normal_cone_contains(vec2(2.0, 0.5), vec2(1.0, 0.0), 1e-10));  // x off the set
  CHECK(b.normal_cone_contains(vec2(1.0, 1.0), vec2(1.0, 2.0), 1e-10));  // corner cone
}

TEST_CASE("truncation: projection onto a box-ball intersection") {
  // Intersection of [0,3]^2 with the centered ball of radius 2.
  const ConvexSet lens = truncate(ConvexSet::box(vec2(0.0, 0.0), vec2(3.0, 3.0)), 2.0);
  // Ball face active only: projecting (3,3) lands at radius 2 along the
  // diagonal, i.e. (sqrt2, sqrt2).
  const Eigen::VectorXd p1 = lens.project(vec2(3.0, 3.0));
  CHECK((p1 - vec2(std::sqrt(2.0), std::sqrt(2.0))).norm() <= 1e-10);

  // Box face active only.
  const Eigen::VectorXd p2 = lens.project(vec2(1.0, -2.0));
  CHECK((p2 - vec2(1.0, 0.0)).norm() <= 1e-10);

  // Ball-face point with a closed form: projecting x scales it onto the
  // radius-2 sphere because that landing point stays inside the box.
  const Eigen::VectorXd x = vec2(2.5, 1.7);
  const Eigen::VectorXd closed_form = (2.0 / x.norm()) * x;
  CHECK((lens.project(x) - closed_form).norm() <= 1e-10);
  // The brute-force oracle only resolves curved boundaries coarsely, so it
  // gets a loose tolerance; it guards against gross errors, the closed form
  // above carries the precision claim.
  auto member = [](const Eigen::VectorXd& q) {
    return q(0) >= 0.0 && q(1) >= 0.0 && q(0) <= 3.0 && q(1) <= 3.0 && q.norm() <= 2.0;
  };
  const Eigen::VectorXd ref =
      oracles::grid_project(member, vec2(0.0, 0.0), vec2(2.0, 2.0), x);
  CHECK((lens.project(x) - ref).norm() <= 2e-2);
  CHECK(lens.distance(x) == doctest::Approx((x - ref).norm()).epsilon(2e-2));
}

TEST_CASE("truncation with both constraints active at a corner") {
  // x >= 1 slab meets the ball: projecting (0,3) hits the corner (1, sqrt3).
  const ConvexSet lens = truncate(ConvexSet::box(vec2(1.0, -3.0), vec2(3.0, 3.0)), 2.0);
  const Eigen::VectorXd p = lens.project(vec2(0.0, 3.0));
  CHECK((p - vec2(1.0, std::sqrt(3.0))).norm() <= 1e-9);

  auto member = [](const Eigen::VectorXd& q) {
    return q(0) >= 1.0 && q(1) >= -3.0 && q(0) <= 3.0 && q(1) <= 3.0 && q.norm() <= 2.0;
  };
  const Eigen::VectorXd ref =
      oracles::grid_project(member, vec2(1.0, -2.0), vec2(2.0, 2.0), vec2(0.0, 3.0));
  CHECK((p - ref).norm() <= 1e-4);
}

TEST_CASE("truncation support by ascent reaches known maxima") {
  const ConvexSet lens = truncate(ConvexSet::box(vec2(0.0, 0.0), vec2(3.0, 3.0)), 2.0);
  CHECK(lens.support(vec2(1.0, 0.0)) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(lens.support(vec2(1.0, 1.0)) ==
        doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-8));
  const Eigen::VectorXd sp = lens.support_point(vec2(1.0, 1.0));
  CHECK((sp - vec2(std::sqrt(2.0), std::sqrt(2.0))).norm() <= 1e-6);
}

TEST_CASE("truncation rejects empty intersections and bad radii") {
  const ConvexSet far_box = ConvexSet::box(vec2(5.0, 5.0), vec2(6.0, 6.0));
  CHECK_THROWS_AS(truncate(far_box, 2.0), InvalidArgument);
  CHECK_THROWS_AS(truncate(far_box, -1.0), InvalidArgument);
  // Distance of the box to the origin is sqrt(50) ~ 7.07: radius 8 works.
  const ConvexSet ok = truncate(far_box, 8.0);
  CHECK(ok.bounded());
  CHECK(ok.project(vec2(5.5, 5.5)).isApprox(vec2(5.5, 5.5)));

  // Nested truncation stays consistent: the outer ball is inactive here.
  const ConvexSet nested = truncate(truncate(ConvexSet::ball(vec2(0.0, 0.0), 3.0), 1.0), 2.0);
  CHECK((nested.project(vec2(4.0, 0.0)) - vec2(1.0, 0.0)).norm() <= 1e-9);
}

TEST_CASE("projection properties across the representation zoo") {
  oracles::Rng rng(707);
  std::vector<ConvexSet> zoo;
  zoo.push_back(ConvexSet::box(vec2(-1.0, -2.0), vec2(2.0, 0.5)));
  zoo.push_back(ConvexSet::ball(vec2(0.5, -0.5), 1.5));
  zoo.push_back(ConvexSet::translate(ConvexSet::ball(vec2(0.0, 0.0), 1.0), vec2(1.0, 1.0)));
  zoo.push_back(ConvexSet::reflect(ConvexSet::box(vec2(0.0, 0.0), vec2(2.0, 1.0))));
  zoo.push_back(truncate(ConvexSet::box(vec2(-2.0, -2.0), vec2(2.0, 2.0)), 1.5));
  zoo.push_back(truncate(ConvexSet::translate(ConvexSet::box(vec2(0.0, 0.0), vec2(2.0, 2.0)),
                                              vec2(-1.0, -1.0)),
                         1.25));
  for (const auto& set : zoo) {
    for (int trial = 0; trial < 40; ++trial) {
      const Eigen::VectorXd x = rng.gaussian_vec(2) * 3.0;
      const Eigen::VectorXd y = rng.gaussian_vec(2) * 3.0;
      const Eigen::VectorXd px = set.project(x);
      const Eigen::VectorXd py = set.project(y);
      // Idempotence, distance consistency, nonexpansiveness, and the
      // variational characterization x - P(x) normal at P(x).
      CHECK((set.project(px) - px).norm() <= 1e-9);
      CHECK(set.distance(x) == doctest::Approx((x - px).norm()).epsilon(1e-12));
      CHECK((px - py).norm() <= (x - y).norm() + 1e-9);
      CHECK(set.normal_cone_contains(px, x - px, 1e-8));
    }
  }
}

TEST_CASE("exact box Hausdorff distances") {
  const ConvexSet a = ConvexSet::interval(0.0, 1.0);
  const ConvexSet b = ConvexSet::interval(0.0, 2.0);
  CHECK(hausdorff_box(a, b) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(hausdorff_box(a, a) == 0.0);

  // Separated planar boxes: per coordinate the largest endpoint gap is 3, and
  // the gaps combine in the 2-norm.
  const ConvexSet c = ConvexSet::box(vec2(0.0, 0.0), vec2(1.0, 1.0));
  const ConvexSet d = ConvexSet::box(vec2(3.0, 3.0), vec2(4.0, 4.0));
  CHECK(hausdorff_box(c, d) == doctest::Approx(4.242640687119285).epsilon(1e-12));
  // Against the dense-sampling oracle.
  const double sampled =
      oracles::sampled_box_hausdorff(vec2(0.0, 0.0), vec2(1.0, 1.0), vec2(3.0, 3.0),
                                     vec2(4.0, 4.0));
  CHECK(hausdorff_box(c, d) == doctest::Approx(sampled).epsilon(1e-3));

  // Nested boxes: only the outer box has excess, worst at its corner (-2,-2)
  // which is 2 away from [0,1] in each coordinate.
  const ConvexSet e = ConvexSet::box(vec2(-2.0, -2.0), vec2(2.0, 2.0));
  CHECK(hausdorff_box(c, e) == doctest::Approx(std::sqrt(8.0)).epsilon(1e-12));

  CHECK_THROWS_AS(hausdorff_box(c, ConvexSet::ball(vec2(0.0, 0.0), 1.0)), InvalidArgument);
  CHECK_THROWS_AS(hausdorff_box(c, ConvexSet::box(vec2(0.0, 0.0), vec2(1.0, kInfD))),
                  InvalidArgument);
}

TEST_CASE("exact Hausdorff distances for flattened chains, balls, translates") {
  // Translate/reflect chains over boxes flatten before comparing.
  const ConvexSet a =
      ConvexSet::translate(ConvexSet::reflect(ConvexSet::interval(-1.0, 1.0)), vec1(2.0));
  const ConvexSet b = ConvexSet::interval(1.0, 3.0);
  CHECK(hausdorff_box(a, b) == doctest::Approx(0.0));

  const ConvexSet s1 = ConvexSet::ball(vec2(0.0, 0.0), 1.0);
  const ConvexSet s2 = ConvexSet::ball(vec2(3.0, 4.0), 2.5);
  const auto exact = hausdorff_exact(s1, s2);
  REQUIRE(exact.has_value());
  CHECK(*exact == doctest::Approx(5.0 + 1.5).epsilon(1e-14));

  // Translates of one truncated base: exact by the common-base rule.
  const ConvexSet lens = truncate(ConvexSet::box(vec2(-1.0, -1.0), vec2(1.0, 1.0)), 1.25);
  const ConvexSet t1 = ConvexSet::translate(lens, vec2(0.5, 0.0));
  const ConvexSet t2 = ConvexSet::translate(lens, vec2(-0.25, 1.0));
  const auto exact2 = hausdorff_exact(t1, t2);
  REQUIRE(exact2.has_value());
  CHECK(*exact2 == doctest::Approx(vec2(0.75, -1.0).norm()).epsilon(1e-14));

  // Mixed pair with no exact rule.
  CHECK_FALSE(hausdorff_exact(s1, ConvexSet::box(vec2(0.0, 0.0), vec2(1.0, 1.0))).has_value());
}

TEST_CASE("sampled Hausdorff estimate brackets the exact value") {
  oracles::Rng rng(808);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::VectorXd lo1 = rng.uniform_vec(2, -2.0, 0.0);
    const Eigen::VectorXd hi1 = lo1 + rng.uniform_vec(2, 0.1, 2.0);
    const Eigen::VectorXd lo2 = rng.uniform_vec(2, -2.0, 0.0);
    const Eigen::VectorXd hi2 = lo2 + rng.uniform_vec(2, 0.1, 2.0);
    const ConvexSet a = ConvexSet::box(lo1, hi1);
    const ConvexSet b = ConvexSet::box(lo2, hi2);
    const double exact = hausdorff_box(a, b);
    const double est = hausdorff_estimate(a, b);
    // Box support points sit at corners, so with all orthant directions
    // sampled the estimate is exact; never above the true value.
    CHECK(est <= exact + 1e-9);
    CHECK(est >= exact - 1e-9);
  }
  for (int trial = 0; trial < 25; ++trial) {
    const ConvexSet a = ConvexSet::ball(rng.gaussian_vec(2), rng.uniform(0.5, 2.0));
    const ConvexSet b = ConvexSet::ball(rng.gaussian_vec(2), rng.uniform(0.5, 2.0));
    const double exact = *hausdorff_exact(a, b);
    const double est = hausdorff_estimate(a, b);
    CHECK(est <= exact + 1e-9);
    CHECK(est >= 0.9 * exact - 1e-9);  // a lower estimate, tight up to direction resolution
  }
}

TEST_CASE("support gaps are bounded by the Hausdorff distance (Lipschitz property)") {
  oracles::Rng rng(909);
  std::vector<Eigen::VectorXd> dirs;
  for (int k = 0; k < 64; ++k) {
    Eigen::VectorXd z = rng.gaussian_vec(3);
    dirs.push_back(z / z.norm());
  }
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd lo1 = rng.uniform_vec(3, -3.0, 0.0);
    const Eigen::VectorXd hi1 = lo1 + rng.uniform_vec(3, 0.1, 3.0);
    const Eigen::VectorXd lo2 = rng.uniform_vec(3, -3.0, 0.0);
    const Eigen::VectorXd hi2 = lo2 + rng.uniform_vec(3, 0.1, 3.0);
    const ConvexSet a = ConvexSet::box(lo1, hi1);
    const ConvexSet b = ConvexSet::box(lo2, hi2);
    CHECK(support_gap_bound_check(a, b, hausdorff_box(a, b), dirs));
    // An understated distance must be caught.
    const double dh = hausdorff_box(a, b);
    if (dh > 1e-3) CHECK_FALSE(support_gap_bound_check(a, b, dh / 4.0, dirs));
  }
}

TEST_CASE("truncation inflates Hausdorff distances by at most the factor 8 rule") {
  oracles::Rng rng(1010);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::VectorXd lo = rng.uniform_vec(2, -1.5, 0.0);
    const Eigen::VectorXd hi = lo + rng.uniform_vec(2, 0.5, 2.0);
    const ConvexSet base = ConvexSet::box(lo, hi);
    const ConvexSet a = ConvexSet::translate(base, rng.uniform_vec(2, -1.0, 1.0));
    const ConvexSet b = ConvexSet::translate(base, rng.uniform_vec(2, -1.0, 1.0));
    const double dh = hausdorff_box(a, b);
    // Smallest radius with both truncations nonempty, found empirically.
    const Eigen::VectorXd origin = Eigen::VectorXd::Zero(2);
    int n0 = 1;
    while (std::max(a.distance(origin), b.distance(origin)) > n0) ++n0;
    for (int n = n0; n < n0 + 3; ++n) {
      const double dh_trunc = hausdorff_estimate(truncate(a, n), truncate(b, n));
      CHECK(dh_trunc <= 8.0 * dh + 1e-6);
    }
  }
}

TEST_CASE("structural equality distinguishes representations") {
  const ConvexSet a = ConvexSet::interval(0.0, 1.0);
  const ConvexSet b = ConvexSet::interval(0.0, 1.0);
  const ConvexSet c = ConvexSet::interval(0.0, 2.0);
  CHECK(a.equals(b));
  CHECK_FALSE(a.equals(c));
  CHECK_FALSE(a.equals(ConvexSet::translate(a, vec1(0.0))));  // different trees
  CHECK(ConvexSet::translate(a, vec1(1.0)).equals(ConvexSet::translate(b, vec1(1.0))));
}
