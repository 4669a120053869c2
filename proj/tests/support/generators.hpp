#pragma once

// Seeded random graph families shared by the unit and acceptance suites.

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "siglap/graph.hpp"

namespace siglap::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // U[0,1)
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  // weight in (0, hi]
  double positive_weight(double hi = 2.0) { return hi * (1.0 - unit()); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + index(hi - lo + 1); }
  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

inline std::vector<EdgeSpec> random_tree_edges(Rng& rng, std::size_t n, std::size_t offset = 0,
                                               double max_weight = 2.0) {
  std::vector<std::size_t> label(n);
  for (std::size_t i = 0; i < n; ++i) label[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(label[i - 1], label[rng.index(i)]);
  std::vector<EdgeSpec> edges;
  for (std::size_t i = 1; i < n; ++i) {
    edges.push_back({offset + label[i], offset + label[rng.index(i)], rng.positive_weight(max_weight)});
  }
  return edges;
}

inline SignedGraph random_tree(Rng& rng, std::size_t n) {
  return build_graph(n, random_tree_edges(rng, n));
}

/// Connected, all-positive: a random tree plus extra edges (parallel edges
/// allowed) with weights in (0, 2].
inline SignedGraph random_connected_positive(Rng& rng, std::size_t n, double extra_density = 0.3) {
  auto edges = random_tree_edges(rng, n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (rng.chance(extra_density)) edges.push_back({u, v, rng.positive_weight()});
    }
  }
  return build_graph(n, edges);
}

/// Signed graph on `n` nodes split into `components` groups; weights drawn
/// from [-2, 2] \ {0}.
inline SignedGraph random_signed(Rng& rng, std::size_t n, std::size_t components,
                                 double extra_density = 0.35) {
  std::vector<EdgeSpec> edges;
  std::vector<std::size_t> sizes(components, 1);
  for (std::size_t i = components; i < n; ++i) ++sizes[rng.index(components)];
  std::size_t offset = 0;
  for (auto size : sizes) {
    for (auto e : random_tree_edges(rng, size, offset)) edges.push_back(e);
    for (std::size_t u = offset; u < offset + size; ++u) {
      for (std::size_t v = u + 1; v < offset + size; ++v) {
        if (rng.chance(extra_density)) edges.push_back({u, v, rng.positive_weight()});
      }
    }
    offset += size;
  }
  for (auto& e : edges) {
    double w = 0.0;
    while (w == 0.0) w = rng.uniform(-2.0, 2.0);
    e.weight = w;
  }
  return build_graph(n, edges);
}

/// Positive cactus of triangles: triangle i > 0 shares one node with an
/// earlier triangle. Triangle t has nodes triangles[t].
struct TriangleCactus {
  std::size_t node_count = 0;
  std::vector<EdgeSpec> edges;
  std::vector<std::array<std::size_t, 3>> triangles;
};

inline TriangleCactus random_triangle_cactus(Rng& rng, std::size_t count) {
  TriangleCactus c;
  c.node_count = 3;
  c.triangles.push_back({0, 1, 2});
  for (std::size_t t = 1; t < count; ++t) {
    const auto& host = c.triangles[rng.index(t)];
    const std::size_t shared = host[rng.index(3)];
    const std::size_t a = c.node_count++;
    const std::size_t b = c.node_count++;
    c.triangles.push_back({shared, a, b});
  }
  for (const auto& tri : c.triangles) {
    c.edges.push_back({tri[0], tri[1], rng.positive_weight()});
    c.edges.push_back({tri[1], tri[2], rng.positive_weight()});
    c.edges.push_back({tri[0], tri[2], rng.positive_weight()});
  }
  return c;
}

/// The 9-node single-cycle example: path u=0-1-2-3-4=v, pendant leaves
/// 5..8 on nodes 0, 1, 3, 4, unit weights, closed by edge (0, 4) of weight w.
inline std::vector<EdgeSpec> cycle_example_tree() {
  return {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0},
          {0, 5, 1.0}, {1, 6, 1.0}, {3, 7, 1.0}, {4, 8, 1.0}};
}

inline SignedGraph cycle_example(double w_uv) {
  auto edges = cycle_example_tree();
  edges.push_back({0, 4, w_uv});
  return build_graph(9, edges);
}

inline SignedGraph two_triangles_with_chords(double w_first, double w_second) {
  return build_graph(5, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0},
                         {2, 4, 1.0}, {0, 1, w_first}, {3, 4, w_second}});
}

}  // namespace siglap::testing
