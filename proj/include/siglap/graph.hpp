#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "siglap/error.hpp"

namespace siglap {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Undirected edge with orientation normalized to tail < head.
struct Edge {
  std::size_t tail;
  std::size_t head;
  double weight;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Edge as supplied by a caller, before validation and normalization.
struct EdgeSpec {
  std::size_t u;
  std::size_t v;
  double weight;
};

struct NodePair {
  std::size_t u;
  std::size_t v;
};

class SignedGraph;
SignedGraph build_graph(std::size_t node_count, std::span<const EdgeSpec> edges);

/// Immutable weighted graph whose edges carry nonzero real weights of either
/// sign. Parallel edges are kept distinct; edge indices follow input order.
class SignedGraph {
 public:
  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t k) const { return edges_.at(k); }

  std::size_t negative_edge_count() const {
    return static_cast<std::size_t>(
        std::count_if(edges_.begin(), edges_.end(), [](const Edge& e) { return e.weight < 0.0; }));
  }
  bool all_positive() const { return negative_edge_count() == 0; }

  friend bool operator==(const SignedGraph&, const SignedGraph&) = default;

 private:
  friend SignedGraph build_graph(std::size_t, std::span<const EdgeSpec>);
  SignedGraph(std::size_t n, std::vector<Edge> edges) : node_count_(n), edges_(std::move(edges)) {}

  std::size_t node_count_ = 0;
  std::vector<Edge> edges_;
};

inline SignedGraph build_graph(std::size_t node_count, std::span<const EdgeSpec> edges) {
  if (node_count == 0) {
    throw Error(ErrorKind::InvalidArgument, "node_count must be at least 1");
  }
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto& e = edges[k];
    const std::string where = "edge " + std::to_string(k);
    if (e.u >= node_count || e.v >= node_count) {
      throw Error(ErrorKind::NodeOutOfRange, where + " references a node outside [0, " +
                                                 std::to_string(node_count) + ")");
    }
    if (e.u == e.v) throw Error(ErrorKind::SelfLoop, where + " is a self-loop");
    if (e.weight == 0.0) throw Error(ErrorKind::ZeroWeight, where + " has zero weight");
    out.push_back({std::min(e.u, e.v), std::max(e.u, e.v), e.weight});
  }
  return SignedGraph(node_count, std::move(out));
}

inline SignedGraph build_graph(std::size_t node_count, std::initializer_list<EdgeSpec> edges) {
  return build_graph(node_count, std::span<const EdgeSpec>(edges.begin(), edges.size()));
}

inline SignedGraph build_graph(std::size_t node_count, const std::vector<EdgeSpec>& edges) {
  return build_graph(node_count, std::span<const EdgeSpec>(edges));
}

namespace detail {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // false when a and b were already joined
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> rank_;
};

// Incident edge indices per node, ascending by edge index.
inline std::vector<std::vector<std::size_t>> incident_edges(const SignedGraph& g) {
  std::vector<std::vector<std::size_t>> adj(g.node_count());
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    adj[g.edge(k).tail].push_back(k);
    adj[g.edge(k).head].push_back(k);
  }
  return adj;
}

inline std::size_t other_end(const Edge& e, std::size_t node) {
  return e.tail == node ? e.head : e.tail;
}

inline void incidence_column(MatrixXd& m, Eigen::Index col, const Edge& e) {
  m(static_cast<Eigen::Index>(e.tail), col) = -1.0;
  m(static_cast<Eigen::Index>(e.head), col) = 1.0;
}

}  // namespace detail

/// |V|x|E| incidence matrix in edge-index order: column k is -1 at the tail
/// and +1 at the head of edge k.
inline MatrixXd incidence_matrix(const SignedGraph& g) {
  MatrixXd e = MatrixXd::Zero(static_cast<Eigen::Index>(g.node_count()),
                              static_cast<Eigen::Index>(g.edge_count()));
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    detail::incidence_column(e, static_cast<Eigen::Index>(k), g.edge(k));
  }
  return e;
}

/// Component labels numbered by smallest member node.
struct ComponentLabels {
  std::vector<std::size_t> label;
  std::size_t count = 0;
};

inline ComponentLabels connected_components(const SignedGraph& g,
                                            const std::vector<bool>& edge_removed = {}) {
  detail::DisjointSets sets(g.node_count());
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    if (!edge_removed.empty() && edge_removed[k]) continue;
    sets.unite(g.edge(k).tail, g.edge(k).head);
  }
  ComponentLabels out;
  out.label.assign(g.node_count(), 0);
  std::vector<std::size_t> root_label(g.node_count(), g.node_count());
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    const auto r = sets.find(v);
    if (root_label[r] == g.node_count()) root_label[r] = out.count++;
    out.label[v] = root_label[r];
  }
  return out;
}

inline bool is_connected(const SignedGraph& g) { return connected_components(g).count == 1; }

/// Number of connected components once the listed edges are deleted.
/// Isolated nodes count as components.
inline std::size_t components_after_edge_removal(const SignedGraph& g,
                                                 std::span<const std::size_t> removed) {
  std::vector<bool> mask(g.edge_count(), false);
  for (auto k : removed) {
    if (k >= g.edge_count()) {
      throw Error(ErrorKind::InvalidArgument, "removed edge index " + std::to_string(k) +
                                                  " is out of range");
    }
    mask[k] = true;
  }
  return connected_components(g, mask).count;
}

/// G split by sign: the positive subgraph on the same node set, plus the
/// original indices of the negative edges.
struct SignSplit {
  SignedGraph positive;
  std::vector<std::size_t> positive_to_original;
  std::vector<std::size_t> negative_edges;
};

inline SignSplit split_by_sign(const SignedGraph& g) {
  std::vector<EdgeSpec> pos;
  std::vector<std::size_t> pos_index;
  std::vector<std::size_t> neg_index;
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    const auto& e = g.edge(k);
    if (e.weight > 0.0) {
      pos.push_back({e.tail, e.head, e.weight});
      pos_index.push_back(k);
    } else {
      neg_index.push_back(k);
    }
  }
  return {build_graph(g.node_count(), pos), std::move(pos_index), std::move(neg_index)};
}

/// A spanning forest F of G together with the cycle subgraph C = G \ F and
/// the matrices relating them. Matrix columns (and `edge_order`) list forest
/// edges first, then cycle edges; both sublists ascend by edge index.
struct ForestDecomposition {
  std::vector<std::size_t> forest_edges;
  std::vector<std::size_t> cycle_edges;
  std::size_t component_count = 0;
  MatrixXd incidence_full;    // [E_F  E_C]
  MatrixXd incidence_forest;  // E_F
  MatrixXd incidence_cycle;   // E_C
  MatrixXd tree_to_cycle;     // T = (E_F' E_F)^-1 E_F' E_C
  MatrixXd cut_basis;         // R = [I  T]

  std::vector<std::size_t> edge_order() const {
    std::vector<std::size_t> order = forest_edges;
    order.insert(order.end(), cycle_edges.begin(), cycle_edges.end());
    return order;
  }
};

namespace detail {

inline ForestDecomposition assemble_decomposition(const SignedGraph& g,
                                                  std::vector<std::size_t> forest,
                                                  std::size_t components) {
  std::vector<bool> in_forest(g.edge_count(), false);
  for (auto k : forest) in_forest[k] = true;

  ForestDecomposition d;
  std::sort(forest.begin(), forest.end());
  d.forest_edges = std::move(forest);
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    if (!in_forest[k]) d.cycle_edges.push_back(k);
  }
  d.component_count = components;

  const auto n = static_cast<Eigen::Index>(g.node_count());
  const auto nf = static_cast<Eigen::Index>(d.forest_edges.size());
  const auto nc = static_cast<Eigen::Index>(d.cycle_edges.size());

  d.incidence_full = MatrixXd::Zero(n, nf + nc);
  Eigen::Index col = 0;
  for (auto k : d.forest_edges) incidence_column(d.incidence_full, col++, g.edge(k));
  for (auto k : d.cycle_edges) incidence_column(d.incidence_full, col++, g.edge(k));
  d.incidence_forest = d.incidence_full.leftCols(nf);
  d.incidence_cycle = d.incidence_full.rightCols(nc);

  if (nf > 0) {
    const MatrixXd forest_gram = d.incidence_forest.transpose() * d.incidence_forest;
    Eigen::LLT<MatrixXd> llt(forest_gram);
    d.tree_to_cycle = llt.solve(d.incidence_forest.transpose() * d.incidence_cycle);
  } else {
    d.tree_to_cycle = MatrixXd::Zero(0, nc);
  }
  d.cut_basis.resize(nf, nf + nc);
  d.cut_basis << MatrixXd::Identity(nf, nf), d.tree_to_cycle;
  return d;
}

}  // namespace detail

/// Spanning forest by depth-first search: roots taken in ascending node order
/// (node 0 first), and at each node the lowest-index edge leading to an
/// unvisited node is followed.
inline ForestDecomposition decompose(const SignedGraph& g) {
  const auto adj = detail::incident_edges(g);
  std::vector<bool> visited(g.node_count(), false);
  std::vector<std::size_t> forest;
  std::size_t components = 0;

  struct Frame {
    std::size_t node;
    std::size_t next;
  };
  std::vector<Frame> stack;
  for (std::size_t root = 0; root < g.node_count(); ++root) {
    if (visited[root]) continue;
    ++components;
    visited[root] = true;
    stack.push_back({root, 0});
    while (!stack.empty()) {
      auto& top = stack.back();
      const auto& incident = adj[top.node];
      bool advanced = false;
      while (top.next < incident.size()) {
        const auto k = incident[top.next++];
        const auto w = detail::other_end(g.edge(k), top.node);
        if (!visited[w]) {
          visited[w] = true;
          forest.push_back(k);
          stack.push_back({w, 0});
          advanced = true;
          break;
        }
      }
      if (!advanced) stack.pop_back();
    }
  }
  return detail::assemble_decomposition(g, std::move(forest), components);
}

/// Decomposition around a caller-chosen spanning forest. Throws
/// InvalidArgument unless `forest_edges` is acyclic and spans every component.
inline ForestDecomposition decompose(const SignedGraph& g,
                                     std::span<const std::size_t> forest_edges) {
  detail::DisjointSets sets(g.node_count());
  std::vector<bool> seen(g.edge_count(), false);
  for (auto k : forest_edges) {
    if (k >= g.edge_count() || seen[k]) {
      throw Error(ErrorKind::InvalidArgument, "forest edge " + std::to_string(k) +
                                                  " is out of range or repeated");
    }
    seen[k] = true;
    if (!sets.unite(g.edge(k).tail, g.edge(k).head)) {
      throw Error(ErrorKind::InvalidArgument,
                  "forest edge " + std::to_string(k) + " closes a cycle");
    }
  }
  const auto components = connected_components(g).count;
  if (forest_edges.size() != g.node_count() - components) {
    throw Error(ErrorKind::InvalidArgument, "forest does not span every component");
  }
  return detail::assemble_decomposition(
      g, std::vector<std::size_t>(forest_edges.begin(), forest_edges.end()), components);
}

/// Biconnected components (blocks) as sorted edge-index lists. Bridges form
/// single-edge blocks; isolated nodes belong to no block.
inline std::vector<std::vector<std::size_t>> biconnected_components(const SignedGraph& g) {
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  const auto adj = detail::incident_edges(g);
  std::vector<std::size_t> disc(g.node_count(), unset);
  std::vector<std::size_t> low(g.node_count(), 0);
  std::vector<std::size_t> edge_stack;
  std::vector<std::vector<std::size_t>> blocks;
  std::size_t timer = 0;

  struct Frame {
    std::size_t node;
    std::size_t parent_edge;
    std::size_t next;
  };
  std::vector<Frame> frames;
  for (std::size_t root = 0; root < g.node_count(); ++root) {
    if (disc[root] != unset) continue;
    disc[root] = low[root] = timer++;
    frames.push_back({root, unset, 0});
    while (!frames.empty()) {
      auto& f = frames.back();
      if (f.next < adj[f.node].size()) {
        const auto k = adj[f.node][f.next++];
        if (k == f.parent_edge) continue;
        const auto w = detail::other_end(g.edge(k), f.node);
        if (disc[w] == unset) {
          edge_stack.push_back(k);
          disc[w] = low[w] = timer++;
          frames.push_back({w, k, 0});
        } else if (disc[w] < disc[f.node]) {
          edge_stack.push_back(k);
          low[f.node] = std::min(low[f.node], disc[w]);
        }
        continue;
      }
      const Frame done = f;
      frames.pop_back();
      if (frames.empty()) break;
      const auto parent = frames.back().node;
      low[parent] = std::min(low[parent], low[done.node]);
      if (low[done.node] >= disc[parent]) {
        std::vector<std::size_t> block;
        while (true) {
          const auto k = edge_stack.back();
          edge_stack.pop_back();
          block.push_back(k);
          if (k == done.parent_edge) break;
        }
        std::sort(block.begin(), block.end());
        blocks.push_back(std::move(block));
      }
    }
  }
  return blocks;
}

/// For each query pair (u, v), the set P of edges of `g_plus` lying on at
/// least one simple u-v path. These are exactly the edges of the blocks on
/// the block-cut tree path between u and v.
inline std::vector<std::vector<std::size_t>> path_edge_sets(const SignedGraph& g_plus,
                                                            std::span<const NodePair> queries) {
  if (!g_plus.all_positive()) {
    throw Error(ErrorKind::HypothesisViolated, "path_edge_sets requires all-positive weights");
  }
  const auto blocks = biconnected_components(g_plus);
  const std::size_t n = g_plus.node_count();
  const std::size_t total = n + blocks.size();

  // Bipartite node/block incidence; it is a forest.
  std::vector<std::vector<std::size_t>> tree(total);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    std::vector<std::size_t> members;
    for (auto k : blocks[b]) {
      members.push_back(g_plus.edge(k).tail);
      members.push_back(g_plus.edge(k).head);
    }
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    for (auto v : members) {
      tree[v].push_back(n + b);
      tree[n + b].push_back(v);
    }
  }

  std::vector<std::vector<std::size_t>> result;
  result.reserve(queries.size());
  for (const auto& q : queries) {
    if (q.u >= n || q.v >= n) {
      throw Error(ErrorKind::NodeOutOfRange, "path query node out of range");
    }
    std::vector<std::size_t> parent(total, total);
    std::queue<std::size_t> frontier;
    parent[q.u] = q.u;
    frontier.push(q.u);
    while (!frontier.empty() && parent[q.v] == total) {
      const auto x = frontier.front();
      frontier.pop();
      for (auto y : tree[x]) {
        if (parent[y] == total) {
          parent[y] = x;
          frontier.push(y);
        }
      }
    }
    if (parent[q.v] == total) {
      throw Error(ErrorKind::NodesDisconnected, "nodes " + std::to_string(q.u) + " and " +
                                                    std::to_string(q.v) +
                                                    " lie in different components");
    }
    std::vector<std::size_t> edges;
    for (auto x = q.v; x != q.u; x = parent[x]) {
      if (x >= n) {
        const auto& block = blocks[x - n];
        edges.insert(edges.end(), block.begin(), block.end());
      }
    }
    std::sort(edges.begin(), edges.end());
    result.push_back(std::move(edges));
  }
  return result;
}

}  // namespace siglap
