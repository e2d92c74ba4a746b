#include "sweepvi/operators.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "sweepvi/errors.hpp"

namespace sweepvi {

struct SymmetricOperator::Cache {
  std::once_flag eig_once;
  std::once_flag llt_once;
  Eigen::VectorXd eigenvalues;  // ascending
  std::optional<Eigen::LLT<Eigen::MatrixXd>> llt;
  bool llt_ok = false;
};

SymmetricOperator::SymmetricOperator(Eigen::MatrixXd entries)
    : mat_(std::move(entries)), cache_(std::make_shared<Cache>()) {
  if (mat_.rows() == 0 || mat_.cols() == 0)
    throw InvalidArgument("operator must have dimension >= 1");
  if (mat_.rows() != mat_.cols())
    throw DimensionError("operator matrix must be square, got " +
                         std::to_string(mat_.rows()) + "x" + std::to_string(mat_.cols()));
  for (Eigen::Index i = 0; i < mat_.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < mat_.cols(); ++j) {
      const double a = mat_(i, j), b = mat_(j, i);
      if (std::abs(a - b) > 1e-12 * (1.0 + std::abs(a)))
        throw InvalidArgument("operator entries are not symmetric at (" + std::to_string(i) +
                              "," + std::to_string(j) + "): " + std::to_string(a) + " vs " +
                              std::to_string(b));
    }
  }
  mat_ = ((mat_ + mat_.transpose()) / 2.0).eval();
}

SymmetricOperator SymmetricOperator::identity(Eigen::Index dim) {
  return SymmetricOperator(Eigen::MatrixXd::Identity(dim, dim));
}

SymmetricOperator SymmetricOperator::zero(Eigen::Index dim) {
  return SymmetricOperator(Eigen::MatrixXd::Zero(dim, dim));
}

SymmetricOperator SymmetricOperator::diagonal(const Eigen::VectorXd& diag) {
  return SymmetricOperator(Eigen::MatrixXd(diag.asDiagonal()));
}

SymmetricOperator SymmetricOperator::read(std::istream& in, const std::string& origin) {
  std::string line;
  int lineno = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r\n") != std::string::npos) return true;
    }
    return false;
  };

  if (!next_line())
    throw ParseError(origin + ": empty matrix file", lineno);
  Eigen::Index dim = 0;
  {
    std::istringstream ss(line);
    long d = 0;
    if (!(ss >> d) || d < 1)
      throw ParseError(origin + ": first line must be a positive dimension", lineno);
    std::string rest;
    if (ss >> rest)
      throw ParseError(origin + ": unexpected trailing content after dimension", lineno);
    dim = static_cast<Eigen::Index>(d);
  }

  Eigen::MatrixXd m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (!next_line())
      throw ParseError(origin + ": expected " + std::to_string(dim) + " matrix rows, got " +
                           std::to_string(i),
                       lineno);
    std::istringstream ss(line);
    for (Eigen::Index j = 0; j < dim; ++j) {
      double v = 0;
      if (!(ss >> v))
        throw ParseError(origin + ": row " + std::to_string(i) + " has fewer than " +
                             std::to_string(dim) + " entries",
                         lineno);
      m(i, j) = v;
    }
    std::string rest;
    if (ss >> rest)
      throw ParseError(origin + ": row " + std::to_string(i) + " has more than " +
                           std::to_string(dim) + " entries",
                       lineno);
  }
  return SymmetricOperator(std::move(m));
}

SymmetricOperator SymmetricOperator::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in)
    throw ParseError("cannot open matrix file: " + file.string(), 0);
  return read(in, file.string());
}

Eigen::VectorXd SymmetricOperator::apply(const Eigen::VectorXd& x) const {
  if (x.size() != dim())
    throw DimensionError("apply: vector of size " + std::to_string(x.size()) +
                         " against operator of dimension " + std::to_string(dim()));
  return mat_ * x;
}

const Eigen::VectorXd& SymmetricOperator::eigenvalues() const {
  std::call_once(cache_->eig_once, [&] {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mat_, Eigen::EigenvaluesOnly);
    cache_->eigenvalues = es.eigenvalues();
  });
  return cache_->eigenvalues;
}

double SymmetricOperator::coercivity_constant() const { return eigenvalues()(0); }

double SymmetricOperator::operator_norm() const {
  const auto& ev = eigenvalues();
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

const Eigen::LLT<Eigen::MatrixXd>& SymmetricOperator::llt() const {
  std::call_once(cache_->llt_once, [&] {
    cache_->llt.emplace(mat_);
    cache_->llt_ok = (cache_->llt->info() == Eigen::Success);
  });
  if (!cache_->llt_ok)
    throw FactorizationError("Cholesky factorization failed: operator is not positive definite");
  return *cache_->llt;
}

namespace {

// Residual rhs - M*x accumulated in extended precision so that iterative
// refinement can reach solutions accurate to the working precision even for
// ill-conditioned systems.
Eigen::VectorXd extended_residual(const Eigen::MatrixXd& m, const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& rhs) {
  const Eigen::Index n = m.rows();
  Eigen::VectorXd r(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    long double acc = static_cast<long double>(rhs(i));
    for (Eigen::Index j = 0; j < n; ++j)
      acc -= static_cast<long double>(m(i, j)) * static_cast<long double>(x(j));
    r(i) = static_cast<double>(acc);
  }
  return r;
}

}  // namespace

Eigen::VectorXd SymmetricOperator::solve_spd_raw(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != dim())
    throw DimensionError("solve_spd_raw: rhs of size " + std::to_string(rhs.size()) +
                         " against operator of dimension " + std::to_string(dim()));
  return llt().solve(rhs);
}

Eigen::VectorXd SymmetricOperator::solve_spd(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != dim())
    throw DimensionError("solve_spd: rhs of size " + std::to_string(rhs.size()) +
                         " against operator of dimension " + std::to_string(dim()));
  const auto& fact = llt();
  Eigen::VectorXd x = fact.solve(rhs);
  double prev_norm = std::numeric_limits<double>::infinity();
  for (int sweep = 0; sweep < 6; ++sweep) {
    Eigen::VectorXd r = extended_residual(mat_, x, rhs);
    const double rn = r.norm();
    if (rn <= 1e-15 * (1.0 + rhs.norm()) || rn >= 0.5 * prev_norm) break;
    prev_norm = rn;
    x += fact.solve(r);
  }
  return x;
}

ValidationReport validate_operators(const SymmetricOperator& A, const SymmetricOperator& B,
                                    double tol) {
  if (A.dim() != B.dim())
    throw DimensionError("validate_operators: operators have dimensions " +
                         std::to_string(A.dim()) + " and " + std::to_string(B.dim()));
  ValidationReport report;
  const double asym_a = (A.matrix() - A.matrix().transpose()).cwiseAbs().maxCoeff();
  const double asym_b = (B.matrix() - B.matrix().transpose()).cwiseAbs().maxCoeff();
  report.add("A.symmetric", asym_a <= tol, asym_a, "max |A_ij - A_ji|");
  report.add("B.symmetric", asym_b <= tol, asym_b, "max |B_ij - B_ji|");
  const double beta = A.coercivity_constant();
  report.add("A.coercive", beta > tol, beta, "smallest eigenvalue of A");
  const double bmin = B.coercivity_constant();
  report.add("B.positive_semidefinite", bmin >= -tol, bmin, "smallest eigenvalue of B");
  return report;
}

std::string ValidationReport::to_string() const {
  std::string out;
  for (const auto& c : checks) {
    out += c.passed ? "[PASS] " : "[FAIL] ";
    out += c.name + "  value=";
    std::ostringstream ss;
    ss.precision(12);
    ss << c.value;
    out += ss.str();
    if (!c.detail.empty()) out += "  (" + c.detail + ")";
    out += "\n";
  }
  return out;
}

}  // namespace sweepvi
