#pragma once

#include <cmath>
#include <optional>

#include <Eigen/Dense>

#include "siglap/error.hpp"
#include "siglap/graph.hpp"
#include "siglap/spectra.hpp"

namespace siglap {

/// Weighted Laplacian L = E W E' assembled entry by entry (node order).
inline MatrixXd laplacian(const SignedGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  MatrixXd l = MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    const auto i = static_cast<Eigen::Index>(e.tail);
    const auto j = static_cast<Eigen::Index>(e.head);
    l(i, i) += e.weight;
    l(j, j) += e.weight;
    l(i, j) -= e.weight;
    l(j, i) -= e.weight;
  }
  return l;
}

/// Every Laplacian-family matrix for one forest decomposition. Edge-indexed
/// matrices follow the decomposition's forest-then-cycle order.
struct LaplacianBundle {
  MatrixXd laplacian;              // E W E'
  MatrixXd weight_diag;            // W
  MatrixXd cut_gram;               // R W R'
  MatrixXd essential;              // L_e(F) R W R'
  MatrixXd forest_edge_laplacian;  // L_e(F) = E_F' E_F
};

inline LaplacianBundle build_bundle(const SignedGraph& g, const ForestDecomposition& d) {
  const auto order = d.edge_order();
  VectorXd w(static_cast<Eigen::Index>(order.size()));
  for (std::size_t i = 0; i < order.size(); ++i) {
    w[static_cast<Eigen::Index>(i)] = g.edge(order[i]).weight;
  }
  LaplacianBundle b;
  b.weight_diag = w.asDiagonal();
  b.laplacian = d.incidence_full * w.asDiagonal() * d.incidence_full.transpose();
  b.cut_gram = d.cut_basis * w.asDiagonal() * d.cut_basis.transpose();
  b.forest_edge_laplacian = d.incidence_forest.transpose() * d.incidence_forest;
  b.essential = b.forest_edge_laplacian * b.cut_gram;
  return b;
}

struct EdgeLaplacian {
  MatrixXd matrix;
  bool symmetric = true;
};

/// W^{1/2} E'E W^{1/2} when every weight is positive. With a negative weight
/// the square root is not real, so the product W E'E is returned instead,
/// flagged non-symmetric; it shares the nonzero spectrum of L.
inline EdgeLaplacian weighted_edge_laplacian(const SignedGraph& g) {
  const MatrixXd e = incidence_matrix(g);
  const MatrixXd gram = e.transpose() * e;
  VectorXd w(static_cast<Eigen::Index>(g.edge_count()));
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    w[static_cast<Eigen::Index>(k)] = g.edge(k).weight;
  }
  if (g.all_positive()) {
    const VectorXd root = w.cwiseSqrt();
    return {root.asDiagonal() * gram * root.asDiagonal(), true};
  }
  return {w.asDiagonal() * gram, false};
}

/// Left inverse E_F^L = (E_F' E_F)^{-1} E_F' of a full-column-rank forest
/// incidence matrix.
inline MatrixXd forest_left_inverse(const ForestDecomposition& d) {
  const MatrixXd gram = d.incidence_forest.transpose() * d.incidence_forest;
  return Eigen::LLT<MatrixXd>(gram).solve(d.incidence_forest.transpose());
}

namespace detail {

inline void require_connected_nonsingular(const LaplacianBundle& b, const ForestDecomposition& d,
                                          std::optional<double> tol) {
  if (d.component_count != 1) {
    throw Error(ErrorKind::Disconnected, "cut-basis pseudo-inverse needs a connected graph");
  }
  const Signature s = signature(b.cut_gram, tol);
  if (s.n_zero != 0) {
    throw Error(ErrorKind::SingularCutGram,
                "R W R' is singular (sigma=" + s.to_string() +
                    "); L has more than one zero eigenvalue");
  }
}

}  // namespace detail

/// L^+ = (E_T^L)' (R W R')^{-1} E_T^L for a connected graph whose Laplacian
/// has a single zero eigenvalue. Throws SingularCutGram otherwise; callers
/// then fall back to pseudo_inverse_eig.
inline MatrixXd laplacian_pseudo_inverse(const LaplacianBundle& b, const ForestDecomposition& d,
                                         std::optional<double> tol = std::nullopt) {
  detail::require_connected_nonsingular(b, d, tol);
  const MatrixXd left = forest_left_inverse(d);
  const MatrixXd solved = b.cut_gram.partialPivLu().solve(left);
  const MatrixXd p = left.transpose() * solved;
  return 0.5 * (p + p.transpose());
}

/// Same pseudo-inverse through the essential edge Laplacian:
/// (E_T^L)' L_ess(T)^{-1} E_T'.
inline MatrixXd laplacian_pseudo_inverse_via_essential(const LaplacianBundle& b,
                                                       const ForestDecomposition& d,
                                                       std::optional<double> tol = std::nullopt) {
  detail::require_connected_nonsingular(b, d, tol);
  const MatrixXd left = forest_left_inverse(d);
  return left.transpose() * b.essential.partialPivLu().solve(d.incidence_forest.transpose());
}

}  // namespace siglap
