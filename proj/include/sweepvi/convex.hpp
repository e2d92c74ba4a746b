#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace sweepvi {

/// Closed convex set in R^d, represented structurally as a small expression
/// tree over five node kinds:
///
///   - Box: axis-aligned box with per-coordinate bounds (+-infinity allowed);
///   - Ball: Euclidean ball;
///   - Translate: base + shift;
///   - Reflect: -base (pointwise negation);
///   - BallIntersection: base intersected with a centered ball (built via
///     truncate(); the intersection is checked nonempty at construction).
///
/// All sets are nonempty.  Projection, distance, support function/point and
/// the normal-cone membership test are available on every node kind; the
/// BallIntersection projection runs Dykstra's alternating scheme and its
/// support function a projected ascent, both with fixed internal tolerances.
class ConvexSet {
public:
  struct Box {
    Eigen::VectorXd lower, upper;
  };
  struct Ball {
    Eigen::VectorXd center;
    double radius;
  };
  struct Translate {
    std::shared_ptr<const ConvexSet> base;
    Eigen::VectorXd shift;
  };
  struct Reflect {
    std::shared_ptr<const ConvexSet> base;
  };
  struct BallIntersection {
    std::shared_ptr<const ConvexSet> base;
    double radius;  // centered at the origin
  };
  using Node = std::variant<Box, Ball, Translate, Reflect, BallIntersection>;

  static ConvexSet box(Eigen::VectorXd lower, Eigen::VectorXd upper);
  static ConvexSet interval(double lower, double upper);  // 1-d convenience
  static ConvexSet ball(Eigen::VectorXd center, double radius);
  static ConvexSet translate(ConvexSet base, Eigen::VectorXd shift);
  static ConvexSet reflect(ConvexSet base);

  Eigen::Index dim() const;
  const Node& node() const { return *node_; }

  /// Euclidean projection onto the set.
  Eigen::VectorXd project(const Eigen::VectorXd& x) const;

  /// Euclidean distance to the set.
  double distance(const Eigen::VectorXd& x) const;

  /// Support function sigma(z) = sup_{y in set} <z, y>.
  /// Throws UnboundedSupportError when the supremum is +infinity.
  double support(const Eigen::VectorXd& z) const;

  /// A maximizer of <z, .> over the set (any maximizer for ties; for
  /// BallIntersection an iteratively computed near-maximizer).
  Eigen::VectorXd support_point(const Eigen::VectorXd& z) const;

  /// Whether xi lies in the normal cone to the set at x, up to tol:
  /// requires distance(x) <= tol and sigma(xi) - <xi, x> <= tol * (1 + |xi|).
  /// An unbounded support value means xi cannot be normal: returns false.
  bool normal_cone_contains(const Eigen::VectorXd& x, const Eigen::VectorXd& xi,
                            double tol) const;

  /// True when the set is bounded in every direction.
  bool bounded() const;

  /// Structural equality (same tree, identical numeric fields).
  bool equals(const ConvexSet& other) const;

  friend ConvexSet truncate(const ConvexSet& set, double radius);

private:
  explicit ConvexSet(Node node);
  std::shared_ptr<const Node> node_;
};

/// Intersection of `set` with the centered ball of radius `radius`.
/// Requires radius > 0 and distance(set, 0) <= radius so the result is
/// nonempty; rejected otherwise.
ConvexSet truncate(const ConvexSet& set, double radius);

/// Flattens Translate/Reflect chains over a Box into a plain Box, if possible.
std::optional<ConvexSet::Box> as_box(const ConvexSet& set);

/// Flattens Translate/Reflect chains over a Ball into a plain Ball, if possible.
std::optional<ConvexSet::Ball> as_ball(const ConvexSet& set);

/// Exact Euclidean Hausdorff distance between two boxes (after flattening
/// Translate/Reflect chains).  Both boxes must be bounded.  Per coordinate the
/// largest endpoint-to-interval gap is taken; gaps aggregate in the 2-norm,
/// and the distance is the larger of the two one-sided excesses.
double hausdorff_box(const ConvexSet& a, const ConvexSet& b);

/// Exact Hausdorff distance for the pairs that admit one: box/box, ball/ball,
/// and translates of a structurally identical bounded base.  Empty otherwise.
std::optional<double> hausdorff_exact(const ConvexSet& a, const ConvexSet& b);

/// Two-sided sampled lower estimate of the Hausdorff distance: support points
/// of each set along deterministic pseudo-random directions, projected onto
/// the other set.  Never exceeds the true distance (up to the iterative
/// tolerance of the support-point computation).
double hausdorff_estimate(const ConvexSet& a, const ConvexSet& b, int directions = 64);

/// Checks |sigma_a(z) - sigma_b(z)| <= |z| * hausdorff + slack over the given
/// directions; this inequality characterizes the Hausdorff distance.
bool support_gap_bound_check(const ConvexSet& a, const ConvexSet& b, double hausdorff,
                             std::span<const Eigen::VectorXd> directions,
                             double slack = 1e-9);

}  // namespace sweepvi
