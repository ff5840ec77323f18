#pragma once

#include <spemb/voxel.hpp>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace spemb {

using NodeId = std::uint32_t;

struct Edge {
  NodeId p = 0;
  NodeId q = 0;
  double w = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Per-node data: a position (voxel coordinate or sample point) and the
/// voxel value that rasterization sums.
struct Node {
  std::vector<double> position;
  double value = 1.0;

  friend bool operator==(const Node&, const Node&) = default;
};

/// Undirected graph with positive weights. Edges are stored once with
/// p < q, sorted by (p, q); the constructor enforces this.
class Graph {
 public:
  Graph() = default;
  Graph(std::vector<Node> nodes, std::vector<Edge> edges);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
};

/// Symmetric matrix in compressed sparse row form. Every row stores its
/// diagonal entry, and column indices within a row are ascending.
class SparseSymMatrix {
 public:
  SparseSymMatrix() = default;
  SparseSymMatrix(std::size_t order, std::vector<std::size_t> row_ptr, std::vector<NodeId> cols,
                  std::vector<double> values);

  std::size_t order() const { return order_; }
  std::size_t nonzeros() const { return values_.size(); }
  std::span<const std::size_t> row_ptr() const { return row_ptr_; }
  std::span<const NodeId> cols() const { return cols_; }
  std::span<const double> values() const { return values_; }

  /// Entry (p, q), zero when not stored.
  double at(std::size_t p, std::size_t q) const;
  /// y = A x, accumulated row by row in column order.
  void multiply(std::span<const double> x, std::span<double> y) const;
  /// Largest diagonal entry (the maximum weighted degree for a Laplacian).
  double max_diagonal() const;
  /// Row-major dense copy; intended for small orders.
  std::vector<double> to_dense() const;

 private:
  std::size_t order_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<NodeId> cols_;
  std::vector<double> values_;
};

namespace graph {

enum class Connectivity { Face = 6, Edge = 18, Corner = 26 };

/// Parses 6, 18 or 26.
Connectivity connectivity_from_int(int value);

/// Neighbor offsets of `c` that are lexicographically positive, so each
/// unordered pair is visited once.
std::vector<VoxelCoord> forward_offsets(Connectivity c);

/// One node per occupied voxel in (x,y,z) order, unit-weight edges between
/// voxels that differ by a neighborhood offset.
Graph build_adjacency_graph(const VoxelGrid& grid, Connectivity connectivity);

/// Connects each point to its k nearest neighbors (Euclidean, ties broken by
/// smaller index) and symmetrizes by union with unit weights.
Graph build_knn_graph(const std::vector<std::vector<double>>& points, std::size_t k);

/// L(p,q) = -w(p,q) on edges, L(p,p) = weighted degree.
SparseSymMatrix laplacian(const Graph& graph);

struct Components {
  std::vector<std::uint32_t> labels;
  std::uint32_t count = 0;
};

/// Breadth-first labelling starting from the lowest-index unvisited node.
Components connected_components(const Graph& graph);

struct BridgeResult {
  Graph graph;
  std::size_t bridges_added = 0;
};

/// Joins components by repeatedly adding a unit edge between the globally
/// closest pair of nodes (by position) lying in different components. Ties go
/// to the lexicographically smallest (p, q).
BridgeResult bridge_components(const Graph& graph);

/// `p q w` per line.
void write_edge_list(const Graph& graph, std::ostream& out);

}  // namespace graph
}  // namespace spemb
