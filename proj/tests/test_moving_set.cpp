#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "support/oracles.hpp"
#include "sweepvi/errors.hpp"
#include "sweepvi/moving_set.hpp"

using namespace sweepvi;

namespace {

Eigen::VectorXd vec1(double a) {
  Eigen::VectorXd v(1);
  v << a;
  return v;
}

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& name, const std::string& content)
      : path(std::filesystem::temp_directory_path() / name) {
    std::ofstream out(path, std::ios::binary);
    out << content;
  }
  ~TempFile() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("ramp and constant paths evaluate and differentiate exactly") {
  const TimePath r = TimePath::ramp(vec2(2.0, -1.0));
  CHECK(r.value(0.0) == vec2(0.0, 0.0));
  CHECK(r.value(1.5) == vec2(3.0, -1.5));
  CHECK(r.derivative(0.7) == vec2(2.0, -1.0));

  const TimePath c = TimePath::constant(vec1(4.0));
  CHECK(c.value(0.0) == vec1(4.0));
  CHECK(c.value(100.0) == vec1(4.0));
  CHECK(c.derivative(3.0) == vec1(0.0));
  CHECK(c.arc_length(0.0, 10.0) == doctest::Approx(0.0));
}

TEST_CASE("arc length: ramps exact, circles via quadrature vs Riemann oracle") {
  const TimePath r = TimePath::ramp(vec1(1.0));
  CHECK(r.arc_length(0.0, 3.0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.arc_length(1.0, 2.5) == doctest::Approx(1.5).epsilon(1e-12));

  // Unit-speed circle: arc over [0, pi] is exactly pi.
  const TimePath circle = TimePath::closed_form(
      2, [](double t) { return vec2(std::cos(t), std::sin(t)); },
      [](double t) { return vec2(-std::sin(t), std::cos(t)); });
  CHECK(circle.arc_length(0.0, M_PI) == doctest::Approx(M_PI).epsilon(1e-10));
  const double riemann = oracles::riemann_arc_length(
      [](double t) { return vec2(-std::sin(t), std::cos(t)); }, 0.0, M_PI);
  CHECK(circle.arc_length(0.0, M_PI) == doctest::Approx(riemann).epsilon(1e-5));

  // A path with varying speed; oracle comparison at the quadrature scale.
  const TimePath par = TimePath::closed_form(
      1, [](double t) { return vec1(t * t); }, [](double t) { return vec1(2.0 * t); });
  CHECK(par.arc_length(0.0, 2.0) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(par.arc_length(0.5, 1.5) ==
        doctest::Approx(oracles::riemann_arc_length(
                            [](double t) { return vec1(2.0 * t); }, 0.5, 1.5))
            .epsilon(1e-6));
}

TEST_CASE("piecewise linear paths: interpolation, clamping, exact arc sums") {
  const TimePath p = TimePath::piecewise_linear(
      {0.0, 1.0, 3.0}, {vec2(0.0, 0.0), vec2(1.0, 0.0), vec2(1.0, 4.0)});
  CHECK(p.value(0.5) == vec2(0.5, 0.0));
  CHECK(p.value(2.0) == vec2(1.0, 2.0));
  CHECK(p.value(-1.0) == vec2(0.0, 0.0));  // clamps before the grid
  CHECK(p.value(9.0) == vec2(1.0, 4.0));   // clamps after the grid
  CHECK(p.derivative(0.5) == vec2(1.0, 0.0));
  CHECK(p.derivative(2.0) == vec2(0.0, 2.0));
  // Segment lengths 1 and 4; partial segments resolve exactly too.
  CHECK(p.arc_length(0.0, 3.0) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(p.arc_length(0.5, 2.0) == doctest::Approx(0.5 + 2.0).epsilon(1e-12));
  CHECK(p.knots().size() == 3);
  CHECK(p.is_piecewise());

  CHECK_THROWS_AS(TimePath::piecewise_linear({0.0, 0.0}, {vec1(0.0), vec1(1.0)}),
                  InvalidArgument);
  CHECK_THROWS_AS(TimePath::piecewise_linear({0.0, 1.0}, {vec1(0.0)}), InvalidArgument);
  CHECK_THROWS_AS(TimePath::piecewise_linear({0.0, 1.0}, {vec1(0.0), vec2(1.0, 2.0)}),
                  DimensionError);
}

TEST_CASE("CSV paths load and report malformed input with line numbers") {
  const TempFile good("sweepvi_path_good.csv", "0,0,1\n1,2,1\n2,2,5\n");
  const TimePath p = TimePath::load_csv(good.path);
  CHECK(p.dim() == 2);
  CHECK(p.value(0.5) == vec2(1.0, 1.0));
  CHECK(p.value(1.5) == vec2(2.0, 3.0));

  const TempFile bad_number("sweepvi_path_badnum.csv", "0,0\n1,zap\n");
  CHECK_THROWS_AS(TimePath::load_csv(bad_number.path), ParseError);
  try {
    TimePath::load_csv(bad_number.path);
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }

  const TempFile bad_width("sweepvi_path_badwidth.csv", "0,0\n1,1,1\n");
  CHECK_THROWS_AS(TimePath::load_csv(bad_width.path), ParseError);
  const TempFile bad_order("sweepvi_path_badorder.csv", "1,0\n0,1\n");
  CHECK_THROWS_AS(TimePath::load_csv(bad_order.path), ParseError);
  CHECK_THROWS_AS(TimePath::load_csv("/nonexistent/nope.csv"), ParseError);
}

TEST_CASE("translated family: drifting interval and reflected base") {
  // D(t) = [-1, 1] + t: at t = 2 the set is [1, 3].
  const MovingSet family =
      MovingSet::translated(ConvexSet::interval(-1.0, 1.0), TimePath::ramp(vec1(1.0)), 4.0);
  CHECK(family.horizon() == 4.0);
  CHECK(family.dim() == 1);
  const ConvexSet at2 = family.set_at(2.0);
  CHECK(at2.project(vec1(0.0)) == vec1(1.0));
  CHECK(at2.project(vec1(5.0)) == vec1(3.0));
  CHECK(at2.support(vec1(1.0)) == doctest::Approx(3.0));
  CHECK_THROWS_AS(family.set_at(-0.1), InvalidArgument);
  CHECK_THROWS_AS(family.set_at(4.1), InvalidArgument);

  // Moved distance equals |shift change| for a straight drift.
  CHECK(family.modulus(0.0, 3.0) == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(family.modulus(1.0, 1.0) == 0.0);
  CHECK_THROWS_AS(family.modulus(2.0, 1.0), InvalidArgument);

  // A reflected-box base moves rigidly under translation as well.
  const ConvexSet refl = ConvexSet::reflect(ConvexSet::interval(0.0, 2.0));  // [-2, 0]
  const MovingSet fam2 = MovingSet::translated(refl, TimePath::ramp(vec1(2.0)), 1.0);
  const ConvexSet at_half = fam2.set_at(0.5);  // [-1, 1]
  CHECK(at_half.project(vec1(3.0)) == vec1(1.0));
  CHECK(at_half.project(vec1(-3.0)) == vec1(-1.0));
}

TEST_CASE("sampled family: left-constant selection and interpolated modulus") {
  std::vector<double> times{0.0, 1.0, 2.0};
  std::vector<ConvexSet> sets{ConvexSet::interval(0.0, 1.0), ConvexSet::interval(0.5, 1.5),
                              ConvexSet::interval(2.0, 3.0)};
  std::vector<double> modulus{0.0, 0.5, 2.0};
  const MovingSet fam = MovingSet::sampled(times, sets, modulus);
  CHECK(fam.horizon() == 2.0);
  CHECK_FALSE(fam.is_translated());
  // Constant to the left of each node: strictly between samples the set of
  // the next node applies, at a node exactly that node's set.
  CHECK(fam.set_at(0.0).equals(sets[0]));
  CHECK(fam.set_at(0.4).equals(sets[1]));
  CHECK(fam.set_at(1.0).equals(sets[1]));
  CHECK(fam.set_at(1.7).equals(sets[2]));
  CHECK(fam.set_at(2.0).equals(sets[2]));
  CHECK(fam.modulus(0.0, 2.0) == doctest::Approx(2.0));
  CHECK(fam.modulus(0.5, 1.0) == doctest::Approx(0.25));  // linear interpolation
  CHECK(fam.modulus(1.0, 1.5) == doctest::Approx(0.75));

  CHECK_THROWS_AS(MovingSet::sampled({0.5, 1.0}, {sets[0], sets[1]}, {0.0, 1.0}),
                  InvalidArgument);  // grid must start at 0
  CHECK_THROWS_AS(MovingSet::sampled({0.0, 1.0}, {sets[0], sets[1]}, {0.0, -0.5}),
                  InvalidArgument);  // modulus must be nondecreasing
  CHECK_THROWS_AS(MovingSet::sampled({0.0, 1.0}, {sets[0], sets[1]}, {0.5, 1.0}),
                  InvalidArgument);  // modulus must start at 0
  CHECK_THROWS_AS(MovingSet::sampled({0.0, 0.0}, {sets[0], sets[1]}, {0.0, 1.0}),
                  InvalidArgument);  // strictly increasing times
}

TEST_CASE("moved-distance validation accepts honest families") {
  // Drifting box: Hausdorff between grid sets equals the shift distance,
  // which the arc-length modulus reproduces.
  const MovingSet fam = MovingSet::translated(
      ConvexSet::box(vec2(-1.0, -1.0), vec2(1.0, 1.0)),
      TimePath::closed_form(2, [](double t) { return vec2(std::cos(t), std::sin(t)); },
                            [](double t) { return vec2(-std::sin(t), std::cos(t)); }),
      1.0);
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(i / 20.0);
  const ValidationReport rep = validate_moving_set(fam, grid);
  CHECK(rep.passed());
  CHECK(rep.find("sets.nonempty") != nullptr);
  CHECK(rep.find("sets.hausdorff_bounded_by_modulus") != nullptr);
}

TEST_CASE("moved-distance validation lists violating pairs") {
  // The declared modulus pretends nothing moves, but the sampled sets jump.
  const MovingSet fam = MovingSet::sampled(
      {0.0, 1.0, 2.0},
      {ConvexSet::interval(0.0, 1.0), ConvexSet::interval(5.0, 6.0),
       ConvexSet::interval(5.0, 6.0)},
      {0.0, 0.0, 0.0});
  std::vector<double> grid{0.0, 1.0, 2.0};
  const ValidationReport rep = validate_moving_set(fam, grid);
  CHECK_FALSE(rep.passed());
  const auto* worst = rep.find("sets.hausdorff_bounded_by_modulus");
  REQUIRE(worst != nullptr);
  CHECK_FALSE(worst->passed);
  // Worst excess is hausdorff - modulus - tol = 5 - 0 - 1e-8.
  CHECK(worst->value == doctest::Approx(5.0 - 1e-8).epsilon(1e-12));
  // The offending pair appears as its own entry.
  bool found_pair = false;
  for (const auto& c : rep.checks)
    if (c.name.rfind("sets.violation", 0) == 0 && !c.passed) found_pair = true;
  CHECK(found_pair);
}

TEST_CASE("modulus dominates set distance along translated families (property)") {
  oracles::Rng rng(1111);
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::VectorXd lo = rng.uniform_vec(2, -2.0, 0.0);
    const Eigen::VectorXd hi = lo + rng.uniform_vec(2, 0.2, 2.0);
    const Eigen::VectorXd a = rng.gaussian_vec(2);
    const Eigen::VectorXd b = rng.gaussian_vec(2);
    // Quadratic drift f(t) = a t + b t^2 over [0, 1].
    const TimePath path = TimePath::closed_form(
        2, [a, b](double t) { return Eigen::VectorXd(a * t + b * (t * t)); },
        [a, b](double t) { return Eigen::VectorXd(a + 2.0 * t * b); });
    const MovingSet fam = MovingSet::translated(ConvexSet::box(lo, hi), path, 1.0);
    for (int k = 0; k < 8; ++k) {
      const double s = rng.uniform(0.0, 1.0);
      const double t = rng.uniform(0.0, 1.0);
      const double s0 = std::min(s, t), t0 = std::max(s, t);
      const double dh = hausdorff_box(fam.set_at(s0), fam.set_at(t0));
      CHECK(dh <= fam.modulus(s0, t0) + 1e-9);
      // Hausdorff distance between translates is exactly the shift distance.
      CHECK(dh == doctest::Approx((path.value(t0) - path.value(s0)).norm()).epsilon(1e-12));
    }
    // Modulus is additive across intermediate times.
    const double m_all = fam.modulus(0.0, 1.0);
    const double mid = rng.uniform(0.1, 0.9);
    CHECK(fam.modulus(0.0, mid) + fam.modulus(mid, 1.0) ==
          doctest::Approx(m_all).epsilon(1e-9));
  }
}
