#include "sweepvi/convex.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "sweepvi/errors.hpp"

namespace sweepvi {

namespace {

constexpr double kDykstraTol = 1e-12;
constexpr int kDykstraMaxSweeps = 10000;
constexpr double kAscentTol = 1e-10;
constexpr int kAscentMaxIter = 2000;
constexpr double kInf = std::numeric_limits<double>::infinity();

bool finite_all(const Eigen::VectorXd& v) { return v.allFinite(); }

}  // namespace

ConvexSet::ConvexSet(Node node) : node_(std::make_shared<const Node>(std::move(node))) {}

ConvexSet ConvexSet::box(Eigen::VectorXd lower, Eigen::VectorXd upper) {
  if (lower.size() != upper.size())
    throw DimensionError("box: lower/upper bound sizes differ");
  if (lower.size() == 0) throw InvalidArgument("box: dimension must be >= 1");
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (std::isnan(lower(i)) || std::isnan(upper(i)))
      throw InvalidArgument("box: NaN bound at coordinate " + std::to_string(i));
    if (lower(i) == kInf || upper(i) == -kInf || lower(i) > upper(i))
      throw InvalidArgument("box: empty interval at coordinate " + std::to_string(i));
  }
  return ConvexSet(Box{std::move(lower), std::move(upper)});
}

ConvexSet ConvexSet::interval(double lower, double upper) {
  Eigen::VectorXd l(1), u(1);
  l << lower;
  u << upper;
  return box(std::move(l), std::move(u));
}

ConvexSet ConvexSet::ball(Eigen::VectorXd center, double radius) {
  if (center.size() == 0) throw InvalidArgument("ball: dimension must be >= 1");
  if (!finite_all(center)) throw InvalidArgument("ball: center must be finite");
  if (!(radius >= 0.0)) throw InvalidArgument("ball: radius must be >= 0");
  return ConvexSet(Ball{std::move(center), radius});
}

ConvexSet ConvexSet::translate(ConvexSet base, Eigen::VectorXd shift) {
  if (shift.size() != base.dim())
    throw DimensionError("translate: shift size does not match set dimension");
  if (!finite_all(shift)) throw InvalidArgument("translate: shift must be finite");
  return ConvexSet(Translate{std::make_shared<const ConvexSet>(std::move(base)), std::move(shift)});
}

ConvexSet ConvexSet::reflect(ConvexSet base) {
  return ConvexSet(Reflect{std::make_shared<const ConvexSet>(std::move(base))});
}

Eigen::Index ConvexSet::dim() const {
  return std::visit(
      [](const auto& n) -> Eigen::Index {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Box>) return n.lower.size();
        else if constexpr (std::is_same_v<T, Ball>) return n.center.size();
        else if constexpr (std::is_same_v<T, Translate>) return n.base->dim();
        else if constexpr (std::is_same_v<T, Reflect>) return n.base->dim();
        else return n.base->dim();
      },
      *node_);
}

namespace {

Eigen::VectorXd project_ball(const Eigen::VectorXd& center, double radius,
                             const Eigen::VectorXd& x) {
  const Eigen::VectorXd d = x - center;
  const double n = d.norm();
  if (n <= radius) return x;
  return center + (radius / n) * d;
}

// Dykstra's alternating projection scheme for base `S` intersected with the
// centered ball of radius R.  Converges to the exact Euclidean projection for
// intersections of convex sets; stops when successive iterates move by at most
// kDykstraTol, throws after kDykstraMaxSweeps sweeps.
Eigen::VectorXd project_intersection(const ConvexSet& base, double radius,
                                     const Eigen::VectorXd& x) {
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(x.size());
  Eigen::VectorXd y = x, p = zero, q = zero;
  double gap = kInf;
  for (int sweep = 0; sweep < kDykstraMaxSweeps; ++sweep) {
    const Eigen::VectorXd a = base.project(y + p);
    p = y + p - a;
    const Eigen::VectorXd y_next = project_ball(zero, radius, a + q);
    q = a + q - y_next;
    gap = (y_next - y).norm();
    y = y_next;
    if (gap <= kDykstraTol) return y;
  }
  throw ConvergenceError("Dykstra projection did not converge within " +
                             std::to_string(kDykstraMaxSweeps) + " sweeps",
                         gap, kDykstraMaxSweeps);
}

// Exact projection onto {y in box : ||y|| <= R}.  The optimality system gives
// y(mu) = clamp(x / (1 + mu)) for the ball multiplier mu >= 0, and
// ||y(mu)|| is nonincreasing in mu, so the active multiplier is a bisection
// on a monotone scalar equation; the result is accurate to machine precision
// and immune to the slow alternating-projection regimes of thin
// intersections.
Eigen::VectorXd project_box_ball(const ConvexSet::Box& box, double radius,
                                 const Eigen::VectorXd& x) {
  auto clamp = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return v.cwiseMax(box.lower).cwiseMin(box.upper);
  };
  const Eigen::VectorXd direct = clamp(x);
  if (direct.norm() <= radius) return direct;
  double lo = 0.0, hi = 1.0;
  // clamp(x / (1 + mu)) tends to the box point nearest the origin, whose norm
  // is <= R because the intersection is nonempty, so hi below is reachable.
  while (clamp(x / (1.0 + hi)).norm() > radius && hi < 1e300) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * (1.0 + hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (clamp(x / (1.0 + mid)).norm() > radius) lo = mid;
    else hi = mid;
  }
  return clamp(x / (1.0 + hi));  // feasible side of the bracket
}

// Exact support point over {y in box : ||y|| <= R}: maximizers of <z,.> have
// the form clamp(t z) with t >= 0 (separable optimality conditions), and
// ||clamp(t z)|| is nondecreasing in t, so the critical t is again a
// bisection.  Coordinates with z_i = 0 take the feasible value of smallest
// magnitude, which frees the ball budget for the coordinates that matter.
Eigen::VectorXd support_point_box_ball(const ConvexSet::Box& box, double radius,
                                       const Eigen::VectorXd& z) {
  auto clamp = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return v.cwiseMax(box.lower).cwiseMin(box.upper);
  };
  if (z.norm() == 0.0)
    return project_box_ball(box, radius, Eigen::VectorXd::Zero(z.size()));
  double t = 1.0;
  Eigen::VectorXd y = clamp(t * z);
  while (y.norm() <= radius) {
    const Eigen::VectorXd grown = clamp(2.0 * t * z);
    if ((grown - y).norm() == 0.0) return y;  // box face optimal, ball slack
    t *= 2.0;
    y = grown;
    if (t >= 1e300) return y;
  }
  double lo = 0.0, hi = t;  // ||clamp(lo z)|| <= R < ||clamp(hi z)||
  for (int it = 0; it < 200 && hi - lo > 1e-16 * (1.0 + hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (clamp(mid * z).norm() > radius) hi = mid;
    else lo = mid;
  }
  return clamp(lo * z);  // feasible side of the bracket
}

// Projected gradient ascent for the linear functional <z,.> over the
// truncated set.  Each step is monotone in the objective for any step size,
// so a diameter-scale step identifies the supporting face quickly.
Eigen::VectorXd ascent_support_point(const ConvexSet& self, double radius,
                                     const Eigen::VectorXd& z) {
  const double zn = z.norm();
  if (zn == 0.0) return self.project(Eigen::VectorXd::Zero(z.size()));
  const double step = 2.0 * radius / zn;
  Eigen::VectorXd y = self.project((radius / zn) * z);
  for (int it = 0; it < kAscentMaxIter; ++it) {
    const Eigen::VectorXd y_next = self.project(y + step * z);
    const double move = (y_next - y).norm();
    y = y_next;
    if (move <= kAscentTol * (1.0 + radius)) break;
  }
  return y;
}

}  // namespace

Eigen::VectorXd ConvexSet::project(const Eigen::VectorXd& x) const {
  if (x.size() != dim())
    throw DimensionError("project: point size does not match set dimension");
  return std::visit(
      [&](const auto& n) -> Eigen::VectorXd {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Box>) {
          return x.cwiseMax(n.lower).cwiseMin(n.upper);
        } else if constexpr (std::is_same_v<T, Ball>) {
          return project_ball(n.center, n.radius, x);
        } else if constexpr (std::is_same_v<T, Translate>) {
          return n.base->project(x - n.shift) + n.shift;
        } else if constexpr (std::is_same_v<T, Reflect>) {
          return -n.base->project(-x);
        } else {
          if (const auto core = as_box(*n.base))
            return project_box_ball(*core, n.radius, x);
          return project_intersection(*n.base, n.radius, x);
        }
      },
      *node_);
}

double ConvexSet::distance(const Eigen::VectorXd& x) const {
  return (x - project(x)).norm();
}

double ConvexSet::support(const Eigen::VectorXd& z) const {
  if (z.size() != dim())
    throw DimensionError("support: direction size does not match set dimension");
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Box>) {
          double s = 0.0;
          for (Eigen::Index i = 0; i < z.size(); ++i) {
            if (z(i) > 0.0) {
              if (n.upper(i) == kInf)
                throw UnboundedSupportError("support unbounded: coordinate " + std::to_string(i));
              s += z(i) * n.upper(i);
            } else if (z(i) < 0.0) {
              if (n.lower(i) == -kInf)
                throw UnboundedSupportError("support unbounded: coordinate " + std::to_string(i));
              s += z(i) * n.lower(i);
            }
          }
          return s;
        } else if constexpr (std::is_same_v<T, Ball>) {
          return n.center.dot(z) + n.radius * z.norm();
        } else if constexpr (std::is_same_v<T, Translate>) {
          return n.shift.dot(z) + n.base->support(z);
        } else if constexpr (std::is_same_v<T, Reflect>) {
          return n.base->support(-z);
        } else {
          if (const auto core = as_box(*n.base))
            return z.dot(support_point_box_ball(*core, n.radius, z));
          return z.dot(ascent_support_point(*this, n.radius, z));
        }
      },
      *node_);
}

Eigen::VectorXd ConvexSet::support_point(const Eigen::VectorXd& z) const {
  if (z.size() != dim())
    throw DimensionError("support_point: direction size does not match set dimension");
  return std::visit(
      [&](const auto& n) -> Eigen::VectorXd {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Box>) {
          Eigen::VectorXd y(z.size());
          for (Eigen::Index i = 0; i < z.size(); ++i) {
            if (z(i) > 0.0) y(i) = n.upper(i);
            else if (z(i) < 0.0) y(i) = n.lower(i);
            else y(i) = std::min(std::max(0.0, n.lower(i)), n.upper(i));
            if (!std::isfinite(y(i)))
              throw UnboundedSupportError("support point unbounded: coordinate " +
                                          std::to_string(i));
          }
          return y;
        } else if constexpr (std::is_same_v<T, Ball>) {
          const double zn = z.norm();
          if (zn == 0.0) return n.center;
          return n.center + (n.radius / zn) * z;
        } else if constexpr (std::is_same_v<T, Translate>) {
          return n.base->support_point(z) + n.shift;
        } else if constexpr (std::is_same_v<T, Reflect>) {
          return -n.base->support_point(-z);
        } else {
          if (const auto core = as_box(*n.base))
            return support_point_box_ball(*core, n.radius, z);
          return ascent_support_point(*this, n.radius, z);
        }
      },
      *node_);
}

bool ConvexSet::normal_cone_contains(const Eigen::VectorXd& x, const Eigen::VectorXd& xi,
                                     double tol) const {
  if (distance(x) > tol) return false;
  double sigma = 0.0;
  try {
    sigma = support(xi);
  } catch (const UnboundedSupportError&) {
    return false;  // sup_{y in C} <xi, y - x> = +inf, so xi is not normal
  }
  return sigma - xi.dot(x) <= tol * (1.0 + xi.norm());
}

bool ConvexSet::bounded() const {
  return std::visit(
      [](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Box>)
          return n.lower.allFinite() && n.upper.allFinite();
        else if constexpr (std::is_same_v<T, Ball>) return true;
        else if constexpr (std::is_same_v<T, Translate>) return n.base->bounded();
        else if constexpr (std::is_same_v<T, Reflect>) return n.base->bounded();
        else return true;  // intersected with a ball
      },
      *node_);
}

bool ConvexSet::equals(const ConvexSet& other) const {
  if (node_ == other.node_) return true;
  if (node_->index() != other.node_->index()) return false;
  return std::visit(
      [&](const auto& a) -> bool {
        using T = std::decay_t<decltype(a)>;
        const auto& b = std::get<T>(*other.node_);
        if constexpr (std::is_same_v<T, Box>) {
          return a.lower == b.lower && a.upper == b.upper;
        } else if constexpr (std::is_same_v<T, Ball>) {
          return a.center == b.center && a.radius == b.radius;
        } else if constexpr (std::is_same_v<T, Translate>) {
          return a.shift == b.shift && a.base->equals(*b.base);
        } else if constexpr (std::is_same_v<T, Reflect>) {
          return a.base->equals(*b.base);
        } else {
          return a.radius == b.radius && a.base->equals(*b.base);
        }
      },
      *node_);
}

ConvexSet truncate(const ConvexSet& set, double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("truncate: radius must be > 0");
  const double d = set.distance(Eigen::VectorXd::Zero(set.dim()));
  if (d > radius)
    throw InvalidArgument("truncate: empty intersection (distance of set to origin is " +
                          std::to_string(d) + " > radius " + std::to_string(radius) + ")");
  return ConvexSet(ConvexSet::BallIntersection{std::make_shared<const ConvexSet>(set), radius});
}

namespace {

struct Decomposition {
  const ConvexSet* core;  // Box/Ball/BallIntersection-rooted set
  Eigen::VectorXd shift;
  int sign;  // set == sign * core + shift
};

Decomposition decompose(const ConvexSet& s) {
  Decomposition d{&s, Eigen::VectorXd::Zero(s.dim()), 1};
  const ConvexSet* cur = &s;
  while (true) {
    if (const auto* t = std::get_if<ConvexSet::Translate>(&cur->node())) {
      d.shift += (d.sign == 1 ? t->shift : Eigen::VectorXd(-t->shift));
      cur = t->base.get();
    } else if (const auto* r = std::get_if<ConvexSet::Reflect>(&cur->node())) {
      d.sign = -d.sign;
      cur = r->base.get();
    } else {
      d.core = cur;
      return d;
    }
  }
}

}  // namespace

std::optional<ConvexSet::Box> as_box(const ConvexSet& set) {
  const Decomposition d = decompose(set);
  const auto* box = std::get_if<ConvexSet::Box>(&d.core->node());
  if (!box) return std::nullopt;
  Eigen::VectorXd lower, upper;
  if (d.sign == 1) {
    lower = box->lower + d.shift;
    upper = box->upper + d.shift;
  } else {
    lower = -box->upper + d.shift;
    upper = -box->lower + d.shift;
  }
  return ConvexSet::Box{std::move(lower), std::move(upper)};
}

std::optional<ConvexSet::Ball> as_ball(const ConvexSet& set) {
  const Decomposition d = decompose(set);
  const auto* ball = std::get_if<ConvexSet::Ball>(&d.core->node());
  if (!ball) return std::nullopt;
  Eigen::VectorXd center = (d.sign == 1 ? Eigen::VectorXd(ball->center)
                                        : Eigen::VectorXd(-ball->center)) +
                           d.shift;
  return ConvexSet::Ball{std::move(center), ball->radius};
}

namespace {

double interval_gap(double v, double lo, double hi) {
  return std::max({lo - v, v - hi, 0.0});
}

// One-sided excess sup_{x in b1} dist(x, b2); the maximization separates per
// coordinate, and on each coordinate the farthest point of [l1,u1] from
// [l2,u2] sits at an endpoint.
double box_excess(const ConvexSet::Box& b1, const ConvexSet::Box& b2) {
  double sq = 0.0;
  for (Eigen::Index i = 0; i < b1.lower.size(); ++i) {
    const double g = std::max(interval_gap(b1.lower(i), b2.lower(i), b2.upper(i)),
                              interval_gap(b1.upper(i), b2.lower(i), b2.upper(i)));
    sq += g * g;
  }
  return std::sqrt(sq);
}

}  // namespace

double hausdorff_box(const ConvexSet& a, const ConvexSet& b) {
  const auto ba = as_box(a), bb = as_box(b);
  if (!ba || !bb)
    throw InvalidArgument("hausdorff_box: both arguments must flatten to boxes");
  if (ba->lower.size() != bb->lower.size())
    throw DimensionError("hausdorff_box: dimensions differ");
  if (!ba->lower.allFinite() || !ba->upper.allFinite() || !bb->lower.allFinite() ||
      !bb->upper.allFinite())
    throw InvalidArgument("hausdorff_box: boxes must be bounded");
  return std::max(box_excess(*ba, *bb), box_excess(*bb, *ba));
}

std::optional<double> hausdorff_exact(const ConvexSet& a, const ConvexSet& b) {
  if (a.dim() != b.dim())
    throw DimensionError("hausdorff_exact: dimensions differ");
  {
    const auto ba = as_box(a), bb = as_box(b);
    if (ba && bb && ba->lower.allFinite() && ba->upper.allFinite() && bb->lower.allFinite() &&
        bb->upper.allFinite())
      return std::max(box_excess(*ba, *bb), box_excess(*bb, *ba));
  }
  {
    const auto ba = as_ball(a), bb = as_ball(b);
    if (ba && bb)
      return (ba->center - bb->center).norm() + std::abs(ba->radius - bb->radius);
  }
  {
    // Translates of one bounded base: d_H(D + p, D + q) = |p - q|.
    const Decomposition da = decompose(a), db = decompose(b);
    if (da.sign == db.sign && da.core->equals(*db.core) && da.core->bounded())
      return (da.shift - db.shift).norm();
  }
  return std::nullopt;
}

namespace {

// Deterministic unit directions: fixed-seed Mersenne Twister fed through a
// Box-Muller transform, so results are identical across platforms (std
// distributions are not portable across standard library implementations).
std::vector<Eigen::VectorXd> unit_directions(Eigen::Index dim, int count, unsigned seed) {
  std::mt19937 gen(seed);
  auto uniform01 = [&]() {
    return (static_cast<double>(gen()) + 0.5) / 4294967296.0;  // in (0,1)
  };
  std::vector<Eigen::VectorXd> dirs;
  dirs.reserve(count);
  while (static_cast<int>(dirs.size()) < count) {
    Eigen::VectorXd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double u1 = uniform01(), u2 = uniform01();
      v(i) = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
    const double n = v.norm();
    if (n > 1e-12) dirs.push_back(v / n);
  }
  return dirs;
}

}  // namespace

double hausdorff_estimate(const ConvexSet& a, const ConvexSet& b, int directions) {
  if (a.dim() != b.dim())
    throw DimensionError("hausdorff_estimate: dimensions differ");
  if (directions < 1) throw InvalidArgument("hausdorff_estimate: need at least one direction");
  const auto dirs = unit_directions(a.dim(), directions, 20240817u);
  double est = 0.0;
  for (const auto& z : dirs) {
    est = std::max(est, b.distance(a.support_point(z)));
    est = std::max(est, a.distance(b.support_point(z)));
  }
  return est;
}

bool support_gap_bound_check(const ConvexSet& a, const ConvexSet& b, double hausdorff,
                             std::span<const Eigen::VectorXd> directions, double slack) {
  for (const auto& z : directions) {
    const double gap = std::abs(a.support(z) - b.support(z));
    if (gap > z.norm() * hausdorff + slack) return false;
  }
  return true;
}

}  // namespace sweepvi
