#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "siglap/error.hpp"
#include "siglap/graph.hpp"
#include "siglap/laplacians.hpp"
#include "siglap/resistance.hpp"
#include "siglap/spectra.hpp"

namespace siglap {

/// |w| * R - 1 within this (relative) band counts as exactly on the threshold.
inline constexpr double boundary_tolerance = 1e-9;
inline constexpr double resistance_sum_slack = 1e-9;

enum class Classification {
  StrictInterior,  // PSD, zero eigenvalues only from connectivity
  Boundary,        // PSD with extra zero eigenvalues
  Indefinite,
};

inline const char* to_string(Classification c) {
  switch (c) {
    case Classification::StrictInterior: return "PSD (strict interior)";
    case Classification::Boundary: return "PSD (boundary)";
    case Classification::Indefinite: return "indefinite";
  }
  return "?";
}

struct EdgeThreshold {
  std::size_t edge;  // index in the input graph
  std::size_t u;
  std::size_t v;
  double magnitude;   // |w_k|
  double resistance;  // R_k(G+)
  double threshold;   // 1 / R_k(G+)
  double margin;      // threshold - magnitude; negative means over the limit
  double ratio;       // |w_k| * R_k(G+)
};

struct ResistanceSumCheck {
  bool satisfied = true;
  double inverse_weight_sum = 0.0;  // sum_k |w_k|^-1
  double r_tot = 0.0;
};

struct DefinitenessVerdict {
  Classification classification = Classification::StrictInterior;
  std::vector<EdgeThreshold> per_edge;
  bool disjointness_hypothesis_holds = true;
  // false when the verdict comes from the spectrum alone
  bool theorem_applied = true;
  bool resistance_sum_satisfied = true;
  ResistanceSumCheck resistance_sum;
  Signature laplacian_signature;
  std::size_t component_count = 1;
  // Resistance verdict and sigma(L) tell the same story (see signature_supports).
  bool spectral_agreement = true;
};

/// Classification implied by sigma(L) alone.
inline Classification classify_signature(const Signature& s, std::size_t components) {
  if (s.n_minus > 0) return Classification::Indefinite;
  if (s.n_zero > components) return Classification::Boundary;
  return Classification::StrictInterior;
}

/// Whether sigma(L) is consistent with a verdict. A boundary verdict also
/// accepts an extra eigenvalue that missed the zero tolerance by less than
/// 10x, provided no eigenvalue is clearly negative.
inline bool signature_supports(const Signature& s, std::size_t components, Classification c) {
  if (c == Classification::Boundary && s.n_clear_minus == 0 && s.n_near_zero > components) {
    return true;
  }
  return classify_signature(s, components) == c;
}

namespace detail {

inline Classification classify_ratio(double ratio) {
  if (std::abs(ratio - 1.0) <= boundary_tolerance) return Classification::Boundary;
  return ratio < 1.0 ? Classification::StrictInterior : Classification::Indefinite;
}

inline Classification combine(Classification a, Classification b) {
  return static_cast<int>(a) > static_cast<int>(b) ? a : b;
}

inline EdgeThreshold make_threshold(const SignedGraph& g, std::size_t k, double resistance) {
  const auto& e = g.edge(k);
  EdgeThreshold t{};
  t.edge = k;
  t.u = e.tail;
  t.v = e.head;
  t.magnitude = std::abs(e.weight);
  t.resistance = resistance;
  t.threshold = 1.0 / resistance;
  t.margin = t.threshold - t.magnitude;
  t.ratio = t.magnitude * resistance;
  return t;
}

inline ResistanceSumCheck resistance_sum_from(const SignedGraph& g,
                                        const std::vector<std::size_t>& negatives, double r_tot) {
  ResistanceSumCheck c;
  for (auto k : negatives) c.inverse_weight_sum += 1.0 / std::abs(g.edge(k).weight);
  c.r_tot = r_tot;
  c.satisfied = c.inverse_weight_sum >= r_tot - resistance_sum_slack;
  return c;
}

inline void finish(DefinitenessVerdict& v, const SignedGraph& g, std::optional<double> tol) {
  v.component_count = connected_components(g).count;
  v.laplacian_signature = signature(laplacian(g), tol);
  v.spectral_agreement =
      signature_supports(v.laplacian_signature, v.component_count, v.classification);
  v.resistance_sum_satisfied = v.resistance_sum.satisfied;
}

}  // namespace detail

/// PSD test for a graph with exactly one negative edge (u, v): L >= 0 iff
/// |w| <= 1 / R_uv(G+). sigma(L) is computed alongside as a cross-check.
inline DefinitenessVerdict single_edge_verdict(const SignedGraph& g,
                                               std::optional<double> tol = std::nullopt) {
  const auto split = split_by_sign(g);
  if (split.negative_edges.size() != 1) {
    throw Error(ErrorKind::HypothesisViolated,
                "single-edge threshold needs exactly one negative edge, found " +
                    std::to_string(split.negative_edges.size()));
  }
  if (!is_connected(split.positive)) {
    throw Error(ErrorKind::HypothesisViolated,
                "single-edge threshold needs G+ connected");
  }
  const auto k = split.negative_edges.front();
  const auto& e = g.edge(k);
  const double r = effective_resistance_detail(split.positive, e.tail, e.head).value;

  DefinitenessVerdict v;
  v.per_edge.push_back(detail::make_threshold(g, k, r));
  v.classification = detail::classify_ratio(v.per_edge.front().ratio);
  v.resistance_sum = detail::resistance_sum_from(g, split.negative_edges, r);
  detail::finish(v, g, tol);
  return v;
}

/// PSD test for one or more negative edges. Under pairwise-disjoint path-edge
/// sets the per-edge thresholds decide; otherwise the theorem does not apply
/// and the verdict is read off sigma(L).
inline DefinitenessVerdict multi_edge_verdict(const SignedGraph& g,
                                              std::optional<double> tol = std::nullopt) {
  const auto split = split_by_sign(g);
  if (split.negative_edges.empty()) {
    throw Error(ErrorKind::HypothesisViolated, "no negative edges");
  }
  if (!is_connected(split.positive)) {
    throw Error(ErrorKind::Disconnected, "G+ is disconnected");
  }
  std::vector<NodePair> ends;
  for (auto k : split.negative_edges) ends.push_back({g.edge(k).tail, g.edge(k).head});

  const auto paths = path_edge_sets(split.positive, ends);
  bool disjoint = true;
  {
    std::vector<int> owner(split.positive.edge_count(), -1);
    for (std::size_t i = 0; i < paths.size() && disjoint; ++i) {
      for (auto edge : paths[i]) {
        if (owner[edge] != -1) {
          disjoint = false;
          break;
        }
        owner[edge] = static_cast<int>(i);
      }
    }
  }

  const auto q = resistance_matrix_for_negatives(split.positive, ends);
  DefinitenessVerdict v;
  v.disjointness_hypothesis_holds = disjoint;
  v.theorem_applied = disjoint;
  Classification c = Classification::StrictInterior;
  for (std::size_t i = 0; i < ends.size(); ++i) {
    v.per_edge.push_back(detail::make_threshold(g, split.negative_edges[i],
                                                q.diagonal[static_cast<Eigen::Index>(i)]));
    c = detail::combine(c, detail::classify_ratio(v.per_edge.back().ratio));
  }
  v.resistance_sum = detail::resistance_sum_from(g, split.negative_edges, total_resistance(q.matrix));
  if (disjoint) {
    v.classification = c;
    detail::finish(v, g, tol);
  } else {
    detail::finish(v, g, tol);
    v.classification = classify_signature(v.laplacian_signature, v.component_count);
    v.spectral_agreement = true;
  }
  return v;
}

/// Necessary condition: L >= 0 implies sum_k |w_k|^-1 >= R_tot.
inline ResistanceSumCheck resistance_sum_check(const SignedGraph& g) {
  const auto split = split_by_sign(g);
  if (!is_connected(split.positive)) {
    throw Error(ErrorKind::Disconnected, "G+ is disconnected");
  }
  if (split.negative_edges.empty()) return {};
  std::vector<NodePair> ends;
  for (auto k : split.negative_edges) ends.push_back({g.edge(k).tail, g.edge(k).head});
  const auto q = resistance_matrix_for_negatives(split.positive, ends);
  return detail::resistance_sum_from(g, split.negative_edges, total_resistance(q.matrix));
}

}  // namespace siglap
