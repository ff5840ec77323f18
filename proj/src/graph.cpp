#include <spemb/error.hpp>
#include <spemb/graph.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <ostream>
#include <tuple>
#include <unordered_map>

namespace spemb {

Graph::Graph(std::vector<Node> nodes, std::vector<Edge> edges) : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  const std::size_t n = nodes_.size();
  for (Edge& e : edges_) {
    if (e.p >= n || e.q >= n) throw Error("edge endpoint out of range");
    if (e.p == e.q) throw Error("self-loop on node " + std::to_string(e.p));
    if (!(e.w > 0.0) || !std::isfinite(e.w)) throw Error("edge weights must be positive and finite");
    if (e.p > e.q) std::swap(e.p, e.q);
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.p, a.q) < std::tie(b.p, b.q);
  });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i].p == edges_[i - 1].p && edges_[i].q == edges_[i - 1].q) {
      throw Error("duplicate edge (" + std::to_string(edges_[i].p) + "," + std::to_string(edges_[i].q) + ")");
    }
  }
}

SparseSymMatrix::SparseSymMatrix(std::size_t order, std::vector<std::size_t> row_ptr, std::vector<NodeId> cols,
                                 std::vector<double> values)
    : order_(order), row_ptr_(std::move(row_ptr)), cols_(std::move(cols)), values_(std::move(values)) {
  if (row_ptr_.size() != order_ + 1 || row_ptr_.back() != cols_.size() || cols_.size() != values_.size()) {
    throw Error("inconsistent CSR arrays");
  }
}

double SparseSymMatrix::at(std::size_t p, std::size_t q) const {
  const auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[p]);
  const auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[p + 1]);
  const auto it = std::lower_bound(first, last, q);
  if (it == last || *it != q) return 0.0;
  return values_[static_cast<std::size_t>(it - cols_.begin())];
}

void SparseSymMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t r = 0; r < order_; ++r) {
    double acc = 0.0;
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) acc += values_[k] * x[cols_[k]];
    y[r] = acc;
  }
}

double SparseSymMatrix::max_diagonal() const {
  double best = 0.0;
  for (std::size_t r = 0; r < order_; ++r) best = std::max(best, at(r, r));
  return best;
}

std::vector<double> SparseSymMatrix::to_dense() const {
  std::vector<double> dense(order_ * order_, 0.0);
  for (std::size_t r = 0; r < order_; ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) dense[r * order_ + cols_[k]] = values_[k];
  }
  return dense;
}

namespace graph {

Connectivity connectivity_from_int(int value) {
  switch (value) {
    case 6: return Connectivity::Face;
    case 18: return Connectivity::Edge;
    case 26: return Connectivity::Corner;
    default: throw Error("connectivity must be 6, 18 or 26");
  }
}

std::vector<VoxelCoord> forward_offsets(Connectivity c) {
  // Manhattan length of an offset in {-1,0,1}^3 is 1 (face), 2 (edge) or 3 (corner).
  const int max_len = c == Connectivity::Face ? 1 : c == Connectivity::Edge ? 2 : 3;
  std::vector<VoxelCoord> out;
  for (int dx = -1; dx <= 1; ++dx) {
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dz = -1; dz <= 1; ++dz) {
        const VoxelCoord d{dx, dy, dz};
        const int len = std::abs(dx) + std::abs(dy) + std::abs(dz);
        if (len == 0 || len > max_len) continue;
        if (d > VoxelCoord{0, 0, 0}) out.push_back(d);
      }
    }
  }
  return out;
}

Graph build_adjacency_graph(const VoxelGrid& grid, Connectivity connectivity) {
  if (grid.voxels.empty()) throw Error("cannot build a graph from an empty voxel grid");

  std::vector<Node> nodes;
  nodes.reserve(grid.voxels.size());
  std::unordered_map<long long, NodeId> index;
  index.reserve(grid.voxels.size());
  const long long r = grid.resolution + 2;
  const auto key = [r](const VoxelCoord& c) { return ((c[0] + 1LL) * r + (c[1] + 1LL)) * r + (c[2] + 1LL); };
  for (const auto& [c, v] : grid.voxels) {
    index.emplace(key(c), static_cast<NodeId>(nodes.size()));
    nodes.push_back({{double(c[0]), double(c[1]), double(c[2])}, v});
  }

  const std::vector<VoxelCoord> offsets = forward_offsets(connectivity);
  std::vector<Edge> edges;
  NodeId p = 0;
  for (const auto& [c, v] : grid.voxels) {
    for (const VoxelCoord& d : offsets) {
      const VoxelCoord n{c[0] + d[0], c[1] + d[1], c[2] + d[2]};
      if (!grid.contains(n)) continue;
      if (auto it = index.find(key(n)); it != index.end()) edges.push_back({p, it->second, 1.0});
    }
    ++p;
  }
  return Graph(std::move(nodes), std::move(edges));
}

Graph build_knn_graph(const std::vector<std::vector<double>>& points, std::size_t k) {
  const std::size_t n = points.size();
  if (n == 0) throw Error("k-NN graph needs at least one point");
  if (k == 0 || k >= n) throw Error("k must satisfy 1 <= k < point count");
  const std::size_t dims = points.front().size();
  for (const auto& p : points) {
    if (p.size() != dims) throw Error("points must share one dimension");
  }

  std::vector<Edge> edges;
  std::vector<std::pair<double, NodeId>> dist(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t m = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      double d2 = 0.0;
      for (std::size_t a = 0; a < dims; ++a) {
        const double t = points[i][a] - points[j][a];
        d2 += t * t;
      }
      dist[m++] = {d2, static_cast<NodeId>(j)};
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    for (std::size_t t = 0; t < k; ++t) {
      const NodeId a = static_cast<NodeId>(i), b = dist[t].second;
      edges.push_back({std::min(a, b), std::max(a, b), 1.0});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.p, a.q) < std::tie(b.p, b.q);
  });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const Edge& a, const Edge& b) { return a.p == b.p && a.q == b.q; }),
              edges.end());

  std::vector<Node> nodes;
  nodes.reserve(n);
  for (const auto& p : points) nodes.push_back({p, 1.0});
  return Graph(std::move(nodes), std::move(edges));
}

SparseSymMatrix laplacian(const Graph& graph) {
  const std::size_t n = graph.node_count();
  std::vector<std::vector<std::pair<NodeId, double>>> rows(n);
  for (const Edge& e : graph.edges()) {
    rows[e.p].push_back({e.q, -e.w});
    rows[e.q].push_back({e.p, -e.w});
  }
  std::vector<std::size_t> row_ptr(n + 1, 0);
  std::vector<NodeId> cols;
  std::vector<double> values;
  cols.reserve(n + 2 * graph.edge_count());
  values.reserve(cols.capacity());
  for (std::size_t r = 0; r < n; ++r) {
    auto& row = rows[r];
    double degree = 0.0;
    for (const auto& [c, v] : row) degree -= v;
    row.push_back({static_cast<NodeId>(r), degree});
    std::sort(row.begin(), row.end());
    for (const auto& [c, v] : row) {
      cols.push_back(c);
      values.push_back(v);
    }
    row_ptr[r + 1] = cols.size();
  }
  return SparseSymMatrix(n, std::move(row_ptr), std::move(cols), std::move(values));
}

Components connected_components(const Graph& graph) {
  const std::size_t n = graph.node_count();
  std::vector<std::vector<NodeId>> adj(n);
  for (const Edge& e : graph.edges()) {
    adj[e.p].push_back(e.q);
    adj[e.q].push_back(e.p);
  }
  constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
  Components out;
  out.labels.assign(n, kUnset);
  std::deque<NodeId> queue;
  for (std::size_t start = 0; start < n; ++start) {
    if (out.labels[start] != kUnset) continue;
    out.labels[start] = out.count;
    queue.push_back(static_cast<NodeId>(start));
    while (!queue.empty()) {
      const NodeId u = queue.front();
      queue.pop_front();
      for (NodeId v : adj[u]) {
        if (out.labels[v] == kUnset) {
          out.labels[v] = out.count;
          queue.push_back(v);
        }
      }
    }
    ++out.count;
  }
  return out;
}

BridgeResult bridge_components(const Graph& graph) {
  const Components comps = connected_components(graph);
  if (comps.count <= 1) return {graph, 0};

  // Candidate bridges are ordered by (squared distance, p, q). That order is
  // strict, so the cheapest-first merge sequence has a unique result, which
  // Prim's algorithm over components reproduces in O(n^2) time and O(n) space.
  using Key = std::tuple<double, NodeId, NodeId>;
  const std::size_t n = graph.node_count();
  const auto& nodes = graph.nodes();
  const auto dist2 = [&](std::size_t a, std::size_t b) {
    double s = 0.0;
    const auto& pa = nodes[a].position;
    const auto& pb = nodes[b].position;
    for (std::size_t i = 0; i < pa.size(); ++i) {
      const double t = pa[i] - pb[i];
      s += t * t;
    }
    return s;
  };

  std::vector<std::vector<NodeId>> members(comps.count);
  for (std::size_t v = 0; v < n; ++v) members[comps.labels[v]].push_back(static_cast<NodeId>(v));

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<Key> best(n, Key{kInf, 0, 0});
  std::vector<char> in_tree(comps.count, 0);
  std::vector<Edge> edges = graph.edges();

  const auto absorb = [&](std::uint32_t comp) {
    in_tree[comp] = 1;
    for (NodeId u : members[comp]) {
      for (std::size_t v = 0; v < n; ++v) {
        if (in_tree[comps.labels[v]]) continue;
        const Key k{dist2(u, v), std::min<NodeId>(u, static_cast<NodeId>(v)),
                    std::max<NodeId>(u, static_cast<NodeId>(v))};
        if (k < best[v]) best[v] = k;
      }
    }
  };

  absorb(0);
  std::size_t added = 0;
  for (std::uint32_t step = 1; step < comps.count; ++step) {
    std::size_t pick = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (in_tree[comps.labels[v]]) continue;
      if (pick == n || best[v] < best[pick]) pick = v;
    }
    const auto& [d2, p, q] = best[pick];
    edges.push_back({p, q, 1.0});
    ++added;
    absorb(comps.labels[pick]);
  }
  return {Graph(graph.nodes(), std::move(edges)), added};
}

void write_edge_list(const Graph& graph, std::ostream& out) {
  for (const Edge& e : graph.edges()) out << e.p << ' ' << e.q << ' ' << e.w << '\n';
}

}  // namespace graph
}  // namespace spemb
