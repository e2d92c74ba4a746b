#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "sweepvi/convex.hpp"
#include "sweepvi/report.hpp"

namespace sweepvi {

/// Vector-valued path of time, t -> f(t) in R^d, either in closed form
/// (value and derivative callbacks) or piecewise linear on a strictly
/// increasing time grid.  Piecewise paths clamp to their end values outside
/// the grid.  arc_length integrates |f'| adaptively in closed form and sums
/// segment lengths exactly in the piecewise case.
class TimePath {
public:
  using Fn = std::function<Eigen::VectorXd(double)>;

  static TimePath closed_form(Eigen::Index dim, Fn value, Fn derivative);
  static TimePath piecewise_linear(std::vector<double> times,
                                   std::vector<Eigen::VectorXd> values);
  static TimePath constant(Eigen::VectorXd value);
  static TimePath ramp(Eigen::VectorXd rate);  // t -> t * rate

  /// CSV with one row per sample: column 0 the time, columns 1..d the value.
  static TimePath load_csv(const std::filesystem::path& file);

  Eigen::Index dim() const { return dim_; }
  Eigen::VectorXd value(double t) const;
  Eigen::VectorXd derivative(double t) const;

  /// Length of the path over [s, t] (s <= t), i.e. the total variation
  /// integral of |f'|; absolute quadrature tolerance abs_tol.
  double arc_length(double s, double t, double abs_tol = 1e-10) const;

  bool is_piecewise() const;
  /// Grid of a piecewise path (empty span for closed-form paths).
  std::span<const double> knots() const;

private:
  struct ClosedForm {
    Fn value, derivative;
  };
  struct Piecewise {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> values;
  };
  TimePath(Eigen::Index dim, std::variant<ClosedForm, Piecewise> rep);
  Eigen::Index dim_;
  std::variant<ClosedForm, Piecewise> rep_;
};

/// Set-valued map of time C(t) on [0, horizon].  Two families:
///
///   - translated: C(t) = base + path(t), with the moved-distance modulus
///     given by the arc length of the path;
///   - sampled: finitely many (time, set) nodes, constant to the left of each
///     node between samples (times within a relative 1e-9 of a node count as
///     that node), with user-supplied nondecreasing modulus samples (linearly
///     interpolated).
class MovingSet {
public:
  static MovingSet translated(ConvexSet base, TimePath path, double horizon);
  static MovingSet sampled(std::vector<double> times, std::vector<ConvexSet> sets,
                          std::vector<double> modulus_samples);

  double horizon() const { return horizon_; }
  Eigen::Index dim() const;

  /// The set at time t; throws InvalidArgument outside [0, horizon].
  ConvexSet set_at(double t) const;

  /// Moved distance v(t) - v(s) over s <= t, nondecreasing in t, zero at s=t.
  double modulus(double s, double t) const;

  bool is_translated() const;
  const ConvexSet& base() const;    // translated families only
  const TimePath& path() const;     // translated families only
  std::span<const double> sample_times() const;  // sampled families only

private:
  struct Translated {
    ConvexSet base;
    TimePath path;
  };
  struct Sampled {
    std::vector<double> times;
    std::vector<ConvexSet> sets;
    std::vector<double> modulus;
  };
  MovingSet(double horizon, std::variant<Translated, Sampled> rep);
  double horizon_;
  std::variant<Translated, Sampled> rep_;
};

/// Checks the moved-distance assumption on a time grid: every set is nonempty
/// and for each adjacent grid pair (s, t) the Hausdorff distance between C(s)
/// and C(t) is at most modulus(s, t) + tol.  Exact Hausdorff values are used
/// where available, otherwise the sampled estimate (flagged in the report).
/// Violating pairs are listed individually.
ValidationReport validate_moving_set(const MovingSet& family, std::span<const double> grid,
                                     double tol = 1e-8);

}  // namespace sweepvi
