#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "siglap/consensus.hpp"
#include "siglap/definiteness.hpp"
#include "siglap/error.hpp"
#include "siglap/graph.hpp"
#include "siglap/io.hpp"
#include "siglap/laplacians.hpp"
#include "siglap/resistance.hpp"
#include "siglap/spectra.hpp"

namespace siglap::cli {

enum class Command { Signature, Resistance, Threshold, CheckPsd, Simulate, PredictClusters };

inline std::optional<Command> parse_command(const std::string& name) {
  if (name == "signature") return Command::Signature;
  if (name == "resistance") return Command::Resistance;
  if (name == "threshold") return Command::Threshold;
  if (name == "check-psd") return Command::CheckPsd;
  if (name == "simulate") return Command::Simulate;
  if (name == "predict-clusters") return Command::PredictClusters;
  return std::nullopt;
}

inline const char* command_name(Command c) {
  switch (c) {
    case Command::Signature: return "signature";
    case Command::Resistance: return "resistance";
    case Command::Threshold: return "threshold";
    case Command::CheckPsd: return "check-psd";
    case Command::Simulate: return "simulate";
    case Command::PredictClusters: return "predict-clusters";
  }
  return "?";
}

struct RunConfig {
  Command command = Command::Signature;
  std::string input_path;
  std::optional<double> tol;  // spectral zero tolerance
  double cluster_tol = default_cluster_tolerance;
  double t_final = 20.0;
  double step = 1e-3;
  std::size_t stride = 10;
  std::uint64_t seed = 0;
  std::optional<std::string> x0_path;
  std::optional<std::string> output_path;
  std::optional<std::string> clusters_path;
  std::vector<NodePair> pairs;
};

enum ExitCode : int { Ok = 0, Failure = 1, HypothesisNotMet = 2 };

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::HypothesisViolated:
    case ErrorKind::Disconnected:
    case ErrorKind::NodesDisconnected:
    case ErrorKind::SingularCutGram:
      return HypothesisNotMet;
    default:
      return Failure;
  }
}

namespace detail {

using io::fmt;

inline void header(std::ostream& out, const RunConfig& cfg) {
  out << "# siglap " << command_name(cfg.command) << '\n';
  out << "# input: " << cfg.input_path << '\n';
  out << "# seed: " << cfg.seed << '\n';
  out << "# tol: " << (cfg.tol ? fmt(*cfg.tol) : std::string("default")) << '\n';
}

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

inline std::string pair_text(std::size_t u, std::size_t v) {
  return "(" + std::to_string(u) + "," + std::to_string(v) + ")";
}

inline void report_signature(std::ostream& out, const SignedGraph& g, const RunConfig& cfg) {
  const auto d = decompose(g);
  const auto b = build_bundle(g, d);
  const auto s_l = signature(b.laplacian, cfg.tol);
  const auto s_ess = signature_of_similar_nonsymmetric(b.forest_edge_laplacian, b.cut_gram, cfg.tol);
  const auto s_cut = signature(b.cut_gram, cfg.tol);
  out << "nodes: " << g.node_count() << '\n';
  out << "edges: " << g.edge_count() << '\n';
  out << "components: " << d.component_count << '\n';
  out << "sigma(L)=" << s_l.to_string() << " tol=" << fmt(s_l.tolerance_used)
      << " near_singular=" << yes_no(s_l.near_singular) << '\n';
  out << "sigma(L_ess)=" << s_ess.to_string() << '\n';
  out << "sigma(RWR')=" << s_cut.to_string() << '\n';
}

inline void report_resistance(std::ostream& out, const SignedGraph& g, const RunConfig& cfg) {
  if (!cfg.pairs.empty()) {
    const auto rs = effective_resistances(g, cfg.pairs, cfg.tol);
    if (!g.all_positive()) {
      out << "note: graph has negative weights; outside the positive-G+ setting\n";
    }
    for (std::size_t i = 0; i < rs.size(); ++i) {
      out << "R" << pair_text(cfg.pairs[i].u, cfg.pairs[i].v) << " = " << fmt(rs[i].value)
          << '\n';
    }
    return;
  }
  const auto r = resistance_report(g);
  out << "negative edges: " << r.pairs.size() << '\n';
  for (const auto& p : r.pairs) {
    out << "edge " << p.edge << " " << pair_text(p.u, p.v) << ": R(G+) = " << fmt(p.resistance)
        << '\n';
  }
  double off = 0.0;
  for (Eigen::Index i = 0; i < r.quadratic_form.rows(); ++i) {
    for (Eigen::Index j = 0; j < r.quadratic_form.cols(); ++j) {
      if (i != j) off = std::max(off, std::abs(r.quadratic_form(i, j)));
    }
  }
  out << "R_tot = " << fmt(r.r_tot) << '\n';
  out << "max |off-diagonal M| = " << fmt(off) << '\n';
}

inline void report_threshold(std::ostream& out, const SignedGraph& g, const RunConfig& cfg) {
  const auto v = multi_edge_verdict(g, cfg.tol);
  for (const auto& e : v.per_edge) {
    out << "edge " << pair_text(e.u, e.v) << ": max |w-| = " << fmt(e.threshold) << '\n';
    out << "  |w-| = " << fmt(e.magnitude) << ", R(G+) = " << fmt(e.resistance)
        << ", margin = " << fmt(e.margin) << '\n';
  }
  if (!v.disjointness_hypothesis_holds) {
    out << "note: path-edge sets overlap; per-edge thresholds are not decisive\n";
  }
}

inline void report_check_psd(std::ostream& out, const SignedGraph& g, const RunConfig& cfg) {
  const auto split = split_by_sign(g);
  if (!split.negative_edges.empty() && is_connected(split.positive)) {
    const auto v = multi_edge_verdict(g, cfg.tol);
    out << to_string(v.classification) << ", sigma=" << v.laplacian_signature.to_string() << '\n';
    out << "theorem applied: " << yes_no(v.theorem_applied) << '\n';
    out << "disjoint path-edge sets: " << yes_no(v.disjointness_hypothesis_holds) << '\n';
    out << "resistance sum check: " << yes_no(v.resistance_sum_satisfied)
        << " (sum 1/|w| = " << fmt(v.resistance_sum.inverse_weight_sum)
        << ", R_tot = " << fmt(v.resistance_sum.r_tot) << ")\n";
    out << "spectral agreement: " << yes_no(v.spectral_agreement) << '\n';
    return;
  }
  const auto s = signature(laplacian(g), cfg.tol);
  const auto c = connected_components(g).count;
  out << to_string(classify_signature(s, c)) << ", sigma=" << s.to_string() << '\n';
  out << "theorem applied: no ("
      << (split.negative_edges.empty() ? "no negative edges" : "G+ disconnected")
      << "; direct spectral verdict)\n";
}

inline VectorXd initial_state(const SignedGraph& g, const RunConfig& cfg) {
  if (cfg.x0_path) {
    VectorXd x0 = io::read_vector_file(*cfg.x0_path);
    if (x0.size() != static_cast<Eigen::Index>(g.node_count())) {
      throw Error(ErrorKind::ParseError, "x0 file has " + std::to_string(x0.size()) +
                                             " values for " + std::to_string(g.node_count()) +
                                             " nodes");
    }
    return x0;
  }
  return random_initial_state(g.node_count(), cfg.seed);
}

inline void sim_header(std::ostream& out, const RunConfig& cfg) {
  out << "# seed: " << cfg.seed << ", x0: " << (cfg.x0_path ? *cfg.x0_path : "random U[0,1)")
      << ", t_final: " << fmt(cfg.t_final) << ", step: " << fmt(cfg.step)
      << ", stride: " << cfg.stride << ", cluster_tol: " << fmt(cfg.cluster_tol) << '\n';
}

inline void run_simulate(std::ostream& out, const SignedGraph& g, const RunConfig& cfg) {
  const auto traj = simulate(g, initial_state(g, cfg), {cfg.t_final, cfg.step, cfg.stride});
  sim_header(out, cfg);
  io::write_trajectory_csv(out, traj);
  if (!cfg.clusters_path) return;
  std::ofstream cl(*cfg.clusters_path);
  if (!cl) throw Error(ErrorKind::IoError, "cannot write " + *cfg.clusters_path);
  sim_header(cl, cfg);
  try {
    const auto p = detect_clusters(traj, cfg.cluster_tol);
    cl << "# clusters: " << p.size() << '\n';
    io::write_cluster_report(cl, p);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Unbounded) throw;
    cl << "# unbounded: " << e.what() << '\n';
  }
}

inline void report_predict(std::ostream& out, const SignedGraph& g) {
  const auto p = predict_clusters(g);
  out << "q = " << p.q << '\n';
  out << "R_uv(G+) = " << fmt(p.resistance) << '\n';
  std::vector<double> values(p.null_vector.data(), p.null_vector.data() + p.null_vector.size());
  io::write_cluster_report(out, p.component_map, values);
}

}  // namespace detail

/// Executes one command. Reports go to `--out` (or `out`); diagnostics to
/// `err`. Returns 0, 1 (I/O, parse or other failure) or 2 (a theorem
/// precondition does not hold).
inline int run(const RunConfig& cfg, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  try {
    const SignedGraph g = io::read_graph_file(cfg.input_path);
    std::ostringstream report;
    if (cfg.command != Command::Simulate) detail::header(report, cfg);
    switch (cfg.command) {
      case Command::Signature: detail::report_signature(report, g, cfg); break;
      case Command::Resistance: detail::report_resistance(report, g, cfg); break;
      case Command::Threshold: detail::report_threshold(report, g, cfg); break;
      case Command::CheckPsd: detail::report_check_psd(report, g, cfg); break;
      case Command::Simulate: detail::run_simulate(report, g, cfg); break;
      case Command::PredictClusters: detail::report_predict(report, g); break;
    }
    if (cfg.output_path) {
      std::ofstream file(*cfg.output_path, std::ios::binary);
      if (!file) throw Error(ErrorKind::IoError, "cannot write " + *cfg.output_path);
      file << report.str();
    } else {
      out << report.str();
    }
    return Ok;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return Failure;
  }
}

}  // namespace siglap::cli
