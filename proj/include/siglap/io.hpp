#pragma once

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "siglap/consensus.hpp"
#include "siglap/error.hpp"
#include "siglap/graph.hpp"

namespace siglap::io {

/// Fixed 12-significant-digit rendering used by every report.
inline std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// 17 significant digits; round-trips every double.
inline std::string fmt_exact(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

inline bool blank(const std::string& s) {
  return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

[[noreturn]] inline void parse_error(std::size_t line, const std::string& what) {
  throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + what);
}

}  // namespace detail

/// Reads the edge-list format:
///
///     # comment
///     nodes N
///     u v w
///     ...
///
/// Edge order in the file defines edge indices.
inline SignedGraph read_graph(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  std::size_t nodes = 0;
  bool have_header = false;
  std::vector<EdgeSpec> edges;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = detail::strip_comment(raw);
    if (detail::blank(line)) continue;
    std::istringstream fields(line);
    if (!have_header) {
      std::string keyword;
      long long n = 0;
      if (!(fields >> keyword >> n) || keyword != "nodes" || n < 1) {
        detail::parse_error(line_no, "expected 'nodes N' with N >= 1");
      }
      std::string extra;
      if (fields >> extra) detail::parse_error(line_no, "trailing text after node count");
      nodes = static_cast<std::size_t>(n);
      have_header = true;
      continue;
    }
    long long u = 0;
    long long v = 0;
    double w = 0.0;
    if (!(fields >> u >> v >> w)) detail::parse_error(line_no, "expected 'u v w'");
    std::string extra;
    if (fields >> extra) detail::parse_error(line_no, "trailing text after edge");
    if (u < 0 || v < 0) detail::parse_error(line_no, "negative node index");
    edges.push_back({static_cast<std::size_t>(u), static_cast<std::size_t>(v), w});
  }
  if (!have_header) detail::parse_error(line_no, "missing 'nodes N' line");
  return build_graph(nodes, edges);
}

inline SignedGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  return read_graph(in);
}

/// Canonical writer; weights use 17 significant digits so read_graph
/// recovers them bit for bit.
inline void write_graph(std::ostream& out, const SignedGraph& g) {
  out << "nodes " << g.node_count() << '\n';
  for (const auto& e : g.edges()) {
    out << e.tail << ' ' << e.head << ' ' << fmt_exact(e.weight) << '\n';
  }
}

/// Whitespace-separated reals, '#' comments allowed.
inline VectorXd read_vector(std::istream& in) {
  std::vector<double> values;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::istringstream fields(detail::strip_comment(raw));
    std::string token;
    while (fields >> token) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(token, &used));
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        detail::parse_error(line_no, "bad number '" + token + "'");
      }
    }
  }
  return Eigen::Map<VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

inline VectorXd read_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  return read_vector(in);
}

/// CSV with header `t,x0,x1,...`, one row per recorded time.
inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << 't';
  for (Eigen::Index i = 0; i < traj.states.cols(); ++i) out << ",x" << i;
  out << '\n';
  for (std::size_t r = 0; r < traj.times.size(); ++r) {
    out << fmt(traj.times[r]);
    for (Eigen::Index i = 0; i < traj.states.cols(); ++i) {
      out << ',' << fmt(traj.states(static_cast<Eigen::Index>(r), i));
    }
    out << '\n';
  }
}

/// `node,cluster,value` lines under a header row.
inline void write_cluster_report(std::ostream& out, const std::vector<std::size_t>& cluster_of,
                                 const std::vector<double>& node_values) {
  out << "node,cluster,value\n";
  for (std::size_t i = 0; i < cluster_of.size(); ++i) {
    out << i << ',' << cluster_of[i] << ',' << fmt(node_values[i]) << '\n';
  }
}

inline void write_cluster_report(std::ostream& out, const ClusterPartition& p) {
  std::vector<double> values(p.cluster_of.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = p.values[p.cluster_of[i]];
  write_cluster_report(out, p.cluster_of, values);
}

}  // namespace siglap::io
