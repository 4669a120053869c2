#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "siglap/definiteness.hpp"
#include "siglap/error.hpp"
#include "siglap/graph.hpp"
#include "siglap/laplacians.hpp"
#include "siglap/resistance.hpp"

namespace siglap {

struct SimulationOptions {
  double t_final = 20.0;
  double step = 1e-3;
  std::size_t stride = 10;  // record every stride-th step (and the last)
};

inline constexpr double default_cluster_tolerance = 1e-5;
inline constexpr double unbounded_growth_factor = 1e6;

/// Nodes grouped into clusters; ids ascend with each cluster's lowest node.
struct ClusterPartition {
  std::vector<std::size_t> cluster_of;
  std::vector<double> values;  // per-cluster consensus value at the final sample

  std::size_t size() const noexcept { return values.size(); }
};

struct Trajectory {
  std::vector<double> times;
  MatrixXd states;  // one row per recorded time
  double step_size = 0.0;
  std::size_t stride = 1;
  std::optional<ClusterPartition> final_clusters;

  VectorXd initial_state() const { return states.row(0).transpose(); }
  VectorXd final_state() const { return states.row(states.rows() - 1).transpose(); }
};

/// Classical fourth-order Runge-Kutta step of x' = f(x), in place.
template <typename Vector, typename Rhs>
void rk4_step(Vector& x, double h, const Rhs& f) {
  const Vector k1 = f(x);
  const Vector k2 = f(Vector(x + 0.5 * h * k1));
  const Vector k3 = f(Vector(x + 0.5 * h * k2));
  const Vector k4 = f(Vector(x + h * k3));
  x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Seeded U[0,1) initial state; the 53-bit conversion keeps it identical
/// across standard libraries.
inline VectorXd random_initial_state(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  VectorXd x(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    x[i] = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  }
  return x;
}

/// Relative drift of 1'x over a trajectory, |1'x(t) - 1'x(0)| / ||x(0)||_1.
inline double mean_drift(const Trajectory& traj) {
  const double start = traj.states.row(0).sum();
  const double scale = std::max(traj.states.row(0).cwiseAbs().sum(), 1e-300);
  double worst = 0.0;
  for (Eigen::Index r = 0; r < traj.states.rows(); ++r) {
    worst = std::max(worst, std::abs(traj.states.row(r).sum() - start));
  }
  return worst / scale;
}

inline ClusterPartition detect_clusters(const Trajectory& traj,
                                        double tol = default_cluster_tolerance);

/// Integrates x' = -L x with fixed-step RK4. Divergence (indefinite L) is
/// recorded as-is; `final_clusters` stays empty when the run is unbounded.
inline Trajectory simulate(const SignedGraph& g, const VectorXd& x0,
                           const SimulationOptions& opt = {}) {
  if (!(opt.t_final > 0.0) || !(opt.step > 0.0) || opt.stride == 0) {
    throw Error(ErrorKind::InvalidArgument, "t_final, step and stride must be positive");
  }
  if (x0.size() != static_cast<Eigen::Index>(g.node_count())) {
    throw Error(ErrorKind::InvalidArgument, "x0 has " + std::to_string(x0.size()) +
                                                " entries for " +
                                                std::to_string(g.node_count()) + " nodes");
  }
  const MatrixXd l = laplacian(g);
  const auto rhs = [&l](const VectorXd& x) -> VectorXd { return -(l * x); };

  const auto steps =
      static_cast<std::size_t>(std::ceil(opt.t_final / opt.step * (1.0 - 1e-12)));
  const std::size_t samples = steps / opt.stride + 1 + (steps % opt.stride != 0 ? 1 : 0);

  Trajectory traj;
  traj.step_size = opt.step;
  traj.stride = opt.stride;
  traj.times.reserve(samples);
  traj.states.resize(static_cast<Eigen::Index>(samples), x0.size());

  VectorXd x = x0;
  Eigen::Index row = 0;
  traj.times.push_back(0.0);
  traj.states.row(row++) = x.transpose();
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t_prev = static_cast<double>(k - 1) * opt.step;
    const double h = (k == steps) ? opt.t_final - t_prev : opt.step;
    rk4_step(x, h, rhs);
    if (k % opt.stride == 0 || k == steps) {
      traj.times.push_back(k == steps ? opt.t_final : static_cast<double>(k) * opt.step);
      traj.states.row(row++) = x.transpose();
    }
  }
  try {
    traj.final_clusters = detect_clusters(traj);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Unbounded) throw;
  }
  return traj;
}

/// Groups nodes whose states stay within `tol` of each other over the final
/// 10% of the run. Throws Unbounded when the state norm in that window
/// exceeds 1e6 * ||x0||.
inline ClusterPartition detect_clusters(const Trajectory& traj, double tol) {
  if (traj.times.empty()) throw Error(ErrorKind::InvalidArgument, "empty trajectory");
  const double t_end = traj.times.back();
  const double window_start = t_end - 0.1 * (t_end - traj.times.front());
  Eigen::Index first = static_cast<Eigen::Index>(traj.times.size()) - 1;
  while (first > 0 && traj.times[static_cast<std::size_t>(first - 1)] >= window_start) --first;

  const double x0_norm = traj.states.row(0).norm();
  const auto n = static_cast<std::size_t>(traj.states.cols());
  for (Eigen::Index r = first; r < traj.states.rows(); ++r) {
    const double norm = traj.states.row(r).norm();
    if (!std::isfinite(norm) || norm > unbounded_growth_factor * x0_norm) {
      throw Error(ErrorKind::Unbounded, "state norm " + std::to_string(norm) + " at t=" +
                                            std::to_string(traj.times[static_cast<std::size_t>(r)]) +
                                            " exceeds 1e6 * ||x0||");
    }
  }

  detail::DisjointSets sets(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      bool close = true;
      for (Eigen::Index r = first; r < traj.states.rows() && close; ++r) {
        close = std::abs(traj.states(r, static_cast<Eigen::Index>(i)) -
                         traj.states(r, static_cast<Eigen::Index>(j))) <= tol;
      }
      if (close) sets.unite(i, j);
    }
  }

  ClusterPartition p;
  p.cluster_of.assign(n, 0);
  std::vector<std::size_t> id_of_root(n, n);
  std::vector<std::size_t> members;
  const VectorXd last = traj.final_state();
  for (std::size_t i = 0; i < n; ++i) {
    const auto root = sets.find(i);
    if (id_of_root[root] == n) {
      id_of_root[root] = p.values.size();
      p.values.push_back(0.0);
      members.push_back(0);
    }
    const auto id = id_of_root[root];
    p.cluster_of[i] = id;
    p.values[id] += last[static_cast<Eigen::Index>(i)];
    ++members[id];
  }
  for (std::size_t c = 0; c < p.values.size(); ++c) {
    p.values[c] /= static_cast<double>(members[c]);
  }
  return p;
}

/// Cluster structure predicted for a connected single-cycle graph whose one
/// negative edge sits exactly on its resistance threshold.
struct ClusterPrediction {
  std::size_t q = 0;
  VectorXd null_vector;                  // L v = 0, 1'v = 0
  std::vector<std::size_t> component_map;  // node -> cluster id
  std::vector<std::size_t> cycle_edges;  // original edge indices
  std::vector<std::size_t> cycle_nodes;
  std::size_t negative_edge = 0;
  double resistance = 0.0;               // R_uv(G+)
  VectorXd tree_to_cycle;                // T for the tree G+, forest edge order
  VectorXd tree_weights;                 // W+ diagonal, forest edge order
  double rank_one_eigenvalue = 0.0;      // of W+^{-1/2} T T' W+^{-1/2}
  double null_residual = 0.0;            // ||E'x - W^{-1}[T; -1]||
  std::size_t distinct_cycle_values = 0;
};

inline ClusterPrediction predict_clusters(const SignedGraph& g) {
  const auto split = split_by_sign(g);
  std::vector<std::string> failed;
  if (!is_connected(g)) failed.push_back("G connected");
  if (g.edge_count() != g.node_count()) failed.push_back("exactly one cycle (|E| = |V|)");
  if (split.negative_edges.size() != 1) failed.push_back("exactly one negative edge");
  const bool plus_connected = is_connected(split.positive);
  if (!plus_connected) failed.push_back("G+ connected");

  double r = 0.0;
  if (failed.empty()) {
    const auto& e = g.edge(split.negative_edges.front());
    r = effective_resistance(split.positive, e.tail, e.head);
    const double ratio = std::abs(e.weight) * r;
    if (std::abs(ratio - 1.0) > boundary_tolerance) {
      failed.push_back("|w-| = 1/R_uv(G+) (have |w-|*R = " + std::to_string(ratio) + ")");
    }
  }
  if (!failed.empty()) {
    std::string msg = "cluster prediction preconditions failed:";
    for (const auto& f : failed) msg += " [" + f + "]";
    throw Error(ErrorKind::HypothesisViolated, msg);
  }

  ClusterPrediction p;
  p.negative_edge = split.negative_edges.front();
  p.resistance = r;

  // Decompose around the tree G+ so the negative edge is the lone cycle edge.
  const auto d = decompose(g, split.positive_to_original);
  const auto nf = static_cast<Eigen::Index>(d.forest_edges.size());
  p.tree_to_cycle = d.tree_to_cycle.col(0);
  p.tree_weights.resize(nf);
  for (Eigen::Index i = 0; i < nf; ++i) {
    p.tree_weights[i] = g.edge(d.forest_edges[static_cast<std::size_t>(i)]).weight;
  }

  {
    const VectorXd y = p.tree_to_cycle.cwiseQuotient(p.tree_weights.cwiseSqrt());
    const MatrixXd rank_one = y * y.transpose();
    Eigen::SelfAdjointEigenSolver<MatrixXd> solver(rank_one, Eigen::EigenvaluesOnly);
    p.rank_one_eigenvalue = solver.eigenvalues().maxCoeff();
  }

  VectorXd rhs(nf + 1);
  rhs.head(nf) = p.tree_to_cycle.cwiseQuotient(p.tree_weights);
  rhs[nf] = -1.0 / g.edge(p.negative_edge).weight;
  const MatrixXd et = d.incidence_full.transpose();
  VectorXd x = et.completeOrthogonalDecomposition().solve(rhs);
  p.null_residual = (et * x - rhs).norm();
  if (p.null_residual >= 1e-8) {
    throw Error(ErrorKind::HypothesisViolated,
                "null-vector system is inconsistent (residual " +
                    std::to_string(p.null_residual) + ")");
  }
  x.array() -= x.mean();
  p.null_vector = x;

  for (Eigen::Index i = 0; i < nf; ++i) {
    if (std::abs(p.tree_to_cycle[i]) > 0.5) {
      p.cycle_edges.push_back(d.forest_edges[static_cast<std::size_t>(i)]);
    }
  }
  p.cycle_edges.push_back(p.negative_edge);
  std::sort(p.cycle_edges.begin(), p.cycle_edges.end());
  for (auto k : p.cycle_edges) {
    p.cycle_nodes.push_back(g.edge(k).tail);
    p.cycle_nodes.push_back(g.edge(k).head);
  }
  std::sort(p.cycle_nodes.begin(), p.cycle_nodes.end());
  p.cycle_nodes.erase(std::unique(p.cycle_nodes.begin(), p.cycle_nodes.end()),
                      p.cycle_nodes.end());

  std::vector<bool> removed(g.edge_count(), false);
  for (auto k : p.cycle_edges) removed[k] = true;
  const auto comps = connected_components(g, removed);
  p.q = comps.count;
  p.component_map = comps.label;

  std::vector<double> cycle_values;
  for (auto v : p.cycle_nodes) cycle_values.push_back(x[static_cast<Eigen::Index>(v)]);
  std::sort(cycle_values.begin(), cycle_values.end());
  for (std::size_t i = 0; i < cycle_values.size(); ++i) {
    if (i == 0 || cycle_values[i] - cycle_values[i - 1] > 1e-8) ++p.distinct_cycle_values;
  }
  return p;
}

}  // namespace siglap
