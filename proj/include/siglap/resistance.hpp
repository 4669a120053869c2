#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "siglap/error.hpp"
#include "siglap/graph.hpp"
#include "siglap/laplacians.hpp"
#include "siglap/spectra.hpp"

namespace siglap {

/// Largest tolerated gap between the two resistance routes before a
/// ResistanceMismatch is raised (relative to max(1, |R|)).
inline constexpr double resistance_route_tolerance = 1e-7;

/// Effective resistance with both computation routes exposed.
struct ResistanceEstimate {
  double value = 0.0;
  double via_pseudo_inverse = 0.0;
  // Absent when R W R' is singular.
  std::optional<double> via_cut_basis;
  // Computed over a graph with negative weights, outside the theorems'
  // positive-G+ setting.
  bool signed_graph = false;
};

namespace detail {

inline double quadratic_pair(const MatrixXd& pinv, std::size_t u, std::size_t v) {
  const auto i = static_cast<Eigen::Index>(u);
  const auto j = static_cast<Eigen::Index>(v);
  return pinv(i, i) - 2.0 * pinv(i, j) + pinv(j, j);
}

inline void check_pair(const SignedGraph& g, std::size_t u, std::size_t v) {
  if (u >= g.node_count() || v >= g.node_count()) {
    throw Error(ErrorKind::NodeOutOfRange, "resistance query node out of range");
  }
  if (u == v) throw Error(ErrorKind::InvalidArgument, "resistance query needs u != v");
}

inline void check_connected_pairs(const SignedGraph& g, std::span<const NodePair> pairs) {
  const auto comps = connected_components(g);
  for (const auto& p : pairs) {
    check_pair(g, p.u, p.v);
    if (comps.label[p.u] != comps.label[p.v]) {
      throw Error(ErrorKind::Disconnected, "nodes " + std::to_string(p.u) + " and " +
                                               std::to_string(p.v) +
                                               " are in different components");
    }
  }
  if (comps.count != 1) {
    throw Error(ErrorKind::Disconnected, "effective resistance requires a connected graph");
  }
}

}  // namespace detail

/// Resistances for several pairs, cross-checking the eigendecomposition
/// pseudo-inverse against the cut-basis formula whenever the latter applies.
inline std::vector<ResistanceEstimate> effective_resistances(
    const SignedGraph& g, std::span<const NodePair> pairs,
    std::optional<double> tol = std::nullopt) {
  detail::check_connected_pairs(g, pairs);

  const MatrixXd by_eig = pseudo_inverse_eig(laplacian(g), tol);
  std::optional<MatrixXd> by_cut;
  {
    const auto d = decompose(g);
    const auto b = build_bundle(g, d);
    try {
      by_cut = laplacian_pseudo_inverse(b, d, tol);
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::SingularCutGram) throw;
    }
  }

  std::vector<ResistanceEstimate> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    ResistanceEstimate r;
    r.signed_graph = !g.all_positive();
    r.via_pseudo_inverse = detail::quadratic_pair(by_eig, p.u, p.v);
    r.value = r.via_pseudo_inverse;
    if (by_cut) {
      r.via_cut_basis = detail::quadratic_pair(*by_cut, p.u, p.v);
      const double gap = std::abs(*r.via_cut_basis - r.via_pseudo_inverse);
      if (gap > resistance_route_tolerance * std::max(1.0, std::abs(*r.via_cut_basis))) {
        throw Error(ErrorKind::ResistanceMismatch,
                    "routes disagree for (" + std::to_string(p.u) + "," + std::to_string(p.v) +
                        "): gap " + std::to_string(gap));
      }
      r.value = *r.via_cut_basis;
    }
    out.push_back(r);
  }
  return out;
}

inline ResistanceEstimate effective_resistance_detail(const SignedGraph& g, std::size_t u,
                                                      std::size_t v,
                                                      std::optional<double> tol = std::nullopt) {
  const NodePair p{u, v};
  return effective_resistances(g, std::span<const NodePair>(&p, 1), tol).front();
}

/// (e_u - e_v)' L^+ (e_u - e_v).
inline double effective_resistance(const SignedGraph& g, std::size_t u, std::size_t v) {
  return effective_resistance_detail(g, u, v).value;
}

/// M = E_-' (E_T^L)' (R W_+ R')^{-1} E_T^L E_- over the positive graph, for a
/// set of node pairs (the negative edges). diag(M) holds R_k(G+).
struct NegativeEdgeQuadraticForm {
  MatrixXd matrix;
  VectorXd diagonal;
};

inline NegativeEdgeQuadraticForm resistance_matrix_for_negatives(
    const SignedGraph& g_plus, std::span<const NodePair> negative_edges) {
  if (!g_plus.all_positive()) {
    throw Error(ErrorKind::HypothesisViolated, "G+ must have all-positive weights");
  }
  detail::check_connected_pairs(g_plus, negative_edges);

  const auto d = decompose(g_plus);
  const auto b = build_bundle(g_plus, d);
  const MatrixXd left = forest_left_inverse(d);

  MatrixXd e_minus = MatrixXd::Zero(static_cast<Eigen::Index>(g_plus.node_count()),
                                    static_cast<Eigen::Index>(negative_edges.size()));
  for (std::size_t k = 0; k < negative_edges.size(); ++k) {
    const auto& p = negative_edges[k];
    detail::incidence_column(e_minus, static_cast<Eigen::Index>(k),
                             Edge{std::min(p.u, p.v), std::max(p.u, p.v), -1.0});
  }
  const MatrixXd projected = left * e_minus;  // E_T^L E_-
  // R W_+ R' is positive definite for a connected positive graph.
  const MatrixXd solved = Eigen::LLT<MatrixXd>(b.cut_gram).solve(projected);
  NegativeEdgeQuadraticForm q;
  q.matrix = projected.transpose() * solved;
  q.matrix = 0.5 * (q.matrix + q.matrix.transpose());
  q.diagonal = q.matrix.diagonal();
  return q;
}

/// R_tot = trace(M).
inline double total_resistance(const MatrixXd& m) { return m.size() ? m.trace() : 0.0; }

/// Equivalent resistance of r_plus and r_minus in parallel. Returns +infinity
/// (an open circuit) when r_minus = -r_plus to within 1e-9 relative.
inline double parallel_combination(double r_plus, double r_minus) {
  if (!(r_plus > 0.0)) throw Error(ErrorKind::InvalidArgument, "r_plus must be positive");
  if (r_minus == 0.0) throw Error(ErrorKind::InvalidArgument, "r_minus must be nonzero");
  const double sum = r_plus + r_minus;
  if (std::abs(sum) <= 1e-9 * r_plus) return std::numeric_limits<double>::infinity();
  return r_plus * r_minus / sum;
}

/// Per-negative-edge resistance over G+, ordered like the negative edges.
struct ResistanceReport {
  struct Pair {
    std::size_t edge;  // index in the original graph
    std::size_t u;
    std::size_t v;
    double resistance;
  };
  std::vector<Pair> pairs;
  VectorXd diag_R;
  MatrixXd quadratic_form;
  double r_tot = 0.0;
};

inline ResistanceReport resistance_report(const SignedGraph& g) {
  const auto split = split_by_sign(g);
  std::vector<NodePair> ends;
  for (auto k : split.negative_edges) ends.push_back({g.edge(k).tail, g.edge(k).head});

  ResistanceReport r;
  if (ends.empty()) {
    if (!is_connected(split.positive)) {
      throw Error(ErrorKind::Disconnected, "G+ is disconnected");
    }
    r.diag_R = VectorXd(0);
    r.quadratic_form = MatrixXd(0, 0);
    return r;
  }
  const auto q = resistance_matrix_for_negatives(split.positive, ends);
  for (std::size_t i = 0; i < ends.size(); ++i) {
    r.pairs.push_back({split.negative_edges[i], ends[i].u, ends[i].v,
                       q.diagonal[static_cast<Eigen::Index>(i)]});
  }
  r.diag_R = q.diagonal;
  r.quadratic_form = q.matrix;
  r.r_tot = total_resistance(q.matrix);
  return r;
}

}  // namespace siglap
