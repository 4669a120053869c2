#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "siglap/error.hpp"

namespace siglap {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Inertia (n+, n-, n0) of a symmetric matrix. Equality compares the counts
/// only; the tolerance and near-singular flag are diagnostics.
struct Signature {
  std::size_t n_plus = 0;
  std::size_t n_minus = 0;
  std::size_t n_zero = 0;
  double tolerance_used = 0.0;
  // Some eigenvalue counted as nonzero lies within 10x of the tolerance.
  bool near_singular = false;
  // |lambda| <= 10 * tol, and lambda < -10 * tol.
  std::size_t n_near_zero = 0;
  std::size_t n_clear_minus = 0;

  std::size_t dimension() const noexcept { return n_plus + n_minus + n_zero; }

  friend bool operator==(const Signature& a, const Signature& b) {
    return a.n_plus == b.n_plus && a.n_minus == b.n_minus && a.n_zero == b.n_zero;
  }

  std::string to_string() const {
    return "(" + std::to_string(n_plus) + "," + std::to_string(n_minus) + "," +
           std::to_string(n_zero) + ")";
  }
};

inline constexpr double symmetry_tolerance = 1e-12;

/// dim * eps * max|lambda|, or eps when every eigenvalue vanishes.
inline double default_zero_tolerance(Eigen::Index dim, double max_abs_eigenvalue) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (max_abs_eigenvalue == 0.0) return eps;
  return static_cast<double>(dim) * eps * max_abs_eigenvalue;
}

namespace detail {

// Symmetrized copy; throws NotSymmetric when the asymmetry exceeds the
// relative tolerance.
inline MatrixXd checked_symmetric(const MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::NotSymmetric, "matrix is not square");
  }
  if (m.size() == 0) return m;
  const double scale = m.cwiseAbs().maxCoeff();
  const double skew = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (skew > symmetry_tolerance * scale) {
    throw Error(ErrorKind::NotSymmetric,
                "asymmetry " + std::to_string(skew) + " exceeds relative tolerance");
  }
  return 0.5 * (m + m.transpose());
}

inline VectorXd symmetric_eigenvalues(const MatrixXd& sym) {
  if (sym.size() == 0) return VectorXd(0);
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

inline double resolve_tolerance(const VectorXd& eigenvalues, std::optional<double> tol) {
  if (tol) return *tol;
  const double max_abs = eigenvalues.size() ? eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  return default_zero_tolerance(eigenvalues.size(), max_abs);
}

}  // namespace detail

/// Counts eigenvalues by sign; |lambda| <= tol counts as zero.
inline Signature signature_of_eigenvalues(const VectorXd& eigenvalues, double tol) {
  Signature s;
  s.tolerance_used = tol;
  for (double lambda : eigenvalues) {
    const double a = std::abs(lambda);
    if (a <= 10.0 * tol) ++s.n_near_zero;
    else if (lambda < 0.0) ++s.n_clear_minus;
    if (a <= tol) {
      ++s.n_zero;
    } else {
      if (a <= 10.0 * tol) s.near_singular = true;
      (lambda > 0.0 ? s.n_plus : s.n_minus) += 1;
    }
  }
  return s;
}

/// Signature of a symmetric matrix. Without `tol` the zero threshold is
/// dim * eps * max|lambda|.
inline Signature signature(const MatrixXd& m, std::optional<double> tol = std::nullopt) {
  const VectorXd lambda = detail::symmetric_eigenvalues(detail::checked_symmetric(m));
  return signature_of_eigenvalues(lambda, detail::resolve_tolerance(lambda, tol));
}

/// Signature of the non-symmetric product A*B with A symmetric positive
/// definite and B symmetric (the essential edge Laplacian L_e(F) * RWR').
/// A*B is similar to A^{1/2} B A^{1/2}, which is congruent to B.
inline Signature signature_of_similar_nonsymmetric(const MatrixXd& pd_factor,
                                                   const MatrixXd& symmetric_factor,
                                                   std::optional<double> tol = std::nullopt) {
  const MatrixXd a = detail::checked_symmetric(pd_factor);
  const MatrixXd b = detail::checked_symmetric(symmetric_factor);
  if (a.rows() != b.rows()) {
    throw Error(ErrorKind::InvalidArgument, "factor dimensions differ");
  }
  if (a.size() == 0) return signature_of_eigenvalues(VectorXd(0), tol.value_or(0.0));

  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(a);
  const VectorXd& mu = solver.eigenvalues();
  const double pd_tol = default_zero_tolerance(mu.size(), mu.cwiseAbs().maxCoeff());
  if (mu.minCoeff() <= pd_tol) {
    throw Error(ErrorKind::FactorNotPD, "left factor is not positive definite");
  }
  const MatrixXd root =
      solver.eigenvectors() * mu.cwiseSqrt().asDiagonal() * solver.eigenvectors().transpose();
  const MatrixXd congruent = root * b * root;
  return signature(0.5 * (congruent + congruent.transpose()), tol);
}

/// Moore-Penrose pseudo-inverse of a symmetric matrix from its
/// eigendecomposition; eigenvalues with |lambda| <= tol are dropped.
inline MatrixXd pseudo_inverse_eig(const MatrixXd& m, std::optional<double> tol = std::nullopt) {
  const MatrixXd sym = detail::checked_symmetric(m);
  if (sym.size() == 0) return sym;
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(sym);
  const VectorXd& lambda = solver.eigenvalues();
  const double cut = detail::resolve_tolerance(lambda, tol);
  VectorXd inv = VectorXd::Zero(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (std::abs(lambda[i]) > cut) inv[i] = 1.0 / lambda[i];
  }
  return solver.eigenvectors() * inv.asDiagonal() * solver.eigenvectors().transpose();
}

}  // namespace siglap
