#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>

#include "sweepvi/report.hpp"

namespace sweepvi {

/// Dense symmetric operator on R^d.
///
/// The constructor enforces symmetry of the supplied entries up to a relative
/// tolerance of 1e-12 and then stores the exactly symmetrized matrix
/// (M + M^T)/2.  Spectral quantities and the Cholesky factorization are
/// computed lazily on first use and cached; the cache is shared between copies
/// and is safe to fill from concurrent readers.
class SymmetricOperator {
public:
  explicit SymmetricOperator(Eigen::MatrixXd entries);

  static SymmetricOperator identity(Eigen::Index dim);
  static SymmetricOperator zero(Eigen::Index dim);
  static SymmetricOperator diagonal(const Eigen::VectorXd& diag);

  /// Reads the plain-text format: first line the dimension d, then d lines of
  /// d whitespace-separated entries.
  static SymmetricOperator load(const std::filesystem::path& file);
  static SymmetricOperator read(std::istream& in, const std::string& origin = "<stream>");

  Eigen::Index dim() const { return mat_.rows(); }
  const Eigen::MatrixXd& matrix() const { return mat_; }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;

  /// Smallest eigenvalue; equals the best constant beta with <Mx,x> >= beta|x|^2.
  double coercivity_constant() const;

  /// Largest absolute eigenvalue (= spectral norm for symmetric matrices).
  double operator_norm() const;

  /// Solves M x = rhs for a positive definite M via Cholesky, then polishes the
  /// solution by iterative refinement with extended-precision residuals.
  /// Throws FactorizationError when the factorization fails.
  Eigen::VectorXd solve_spd(const Eigen::VectorXd& rhs) const;

  /// Single Cholesky solve without the refinement passes; inner-loop fast path
  /// for iterations whose result feeds a projection anyway.
  Eigen::VectorXd solve_spd_raw(const Eigen::VectorXd& rhs) const;

private:
  struct Cache;
  Eigen::MatrixXd mat_;
  std::shared_ptr<Cache> cache_;

  const Eigen::VectorXd& eigenvalues() const;
  const Eigen::LLT<Eigen::MatrixXd>& llt() const;
};

/// Checks the standing assumptions on the operator pair (A, B): both symmetric,
/// A coercive (smallest eigenvalue > tol) and B positive semidefinite
/// (smallest eigenvalue >= -tol).  Throws DimensionError when dims differ.
ValidationReport validate_operators(const SymmetricOperator& A, const SymmetricOperator& B,
                                    double tol = 1e-10);

}  // namespace sweepvi
