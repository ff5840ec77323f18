#include <spemb/error.hpp>
#include <spemb/eval.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

#include "parallel.hpp"

namespace spemb::eval {

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 multiply(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

// The 24 proper rotations of the cube: signed permutation matrices with
// determinant +1, in a fixed order.
std::vector<Mat3> cube_rotations() {
  std::vector<Mat3> out;
  std::array<int, 3> perm{0, 1, 2};
  do {
    for (int signs = 0; signs < 8; ++signs) {
      Mat3 m{};
      for (int r = 0; r < 3; ++r) m[r][perm[r]] = (signs >> r) & 1 ? -1.0 : 1.0;
      const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
      if (det > 0.0) out.push_back(m);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Mat3 axis_angle(const Vec3& axis, double angle) {
  const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
  const double x = axis[0], y = axis[1], z = axis[2];
  return Mat3{{{t * x * x + c, t * x * y - s * z, t * x * z + s * y},
               {t * x * y + s * z, t * y * y + c, t * y * z - s * x},
               {t * x * z - s * y, t * y * z + s * x, t * z * z + c}}};
}

Mat3 random_pose(const ShapeParams& params, std::mt19937_64& rng) {
  static const std::vector<Mat3> cubes = cube_rotations();
  const Mat3& cube = cubes[static_cast<std::size_t>(rng() % cubes.size())];
  const double z = 2.0 * unit(rng) - 1.0;
  const double phi = 2.0 * std::numbers::pi * unit(rng);
  const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
  const double angle = unit(rng) * params.max_tilt_deg * std::numbers::pi / 180.0;
  return multiply(axis_angle({rho * std::cos(phi), rho * std::sin(phi), z}, angle), cube);
}

void validate(ShapeKind kind, const ShapeParams& p) {
  const double half = p.resolution / 2.0;
  if (p.resolution < 1) throw Error("resolution must be >= 1");
  switch (kind) {
    case ShapeKind::Box:
      for (double h : p.half_extents) {
        if (!(h > 0.0) || h > half) throw Error("box half extents must lie in (0, R/2]");
      }
      break;
    case ShapeKind::Sphere:
      if (!(p.radius > 0.0) || p.radius >= half) throw Error("sphere radius must lie in (0, R/2)");
      break;
    case ShapeKind::Torus:
      if (!(p.minor_radius > 0.0) || p.minor_radius >= p.major_radius || p.major_radius + p.minor_radius >= half) {
        throw Error("torus radii must satisfy 0 < minor < major and major + minor < R/2");
      }
      break;
    case ShapeKind::Line:
      if (p.length < 1 || p.length > p.resolution) throw Error("line length must lie in [1, R]");
      break;
  }
}

double distance(ShapeKind kind, const ShapeParams& p, const Vec3& q) {
  switch (kind) {
    case ShapeKind::Box: {
      double outside = 0.0, inside = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < 3; ++a) {
        const double d = std::abs(q[a]) - p.half_extents[a];
        outside += std::max(d, 0.0) * std::max(d, 0.0);
        inside = std::max(inside, d);
      }
      return std::sqrt(outside) + std::min(inside, 0.0);
    }
    case ShapeKind::Sphere:
      return std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2]) - p.radius;
    case ShapeKind::Torus: {
      const double ring = std::sqrt(q[0] * q[0] + q[1] * q[1]) - p.major_radius;
      return std::sqrt(ring * ring + q[2] * q[2]) - p.minor_radius;
    }
    case ShapeKind::Line:
      break;
  }
  return 0.0;
}

}  // namespace

ShapeKind shape_kind_from_string(std::string_view name) {
  if (name == "box") return ShapeKind::Box;
  if (name == "sphere") return ShapeKind::Sphere;
  if (name == "torus") return ShapeKind::Torus;
  if (name == "line") return ShapeKind::Line;
  throw Error("unknown shape kind '" + std::string(name) + "'");
}

std::string_view to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::Box: return "box";
    case ShapeKind::Sphere: return "sphere";
    case ShapeKind::Torus: return "torus";
    case ShapeKind::Line: return "line";
  }
  return "?";
}

VoxelGrid generate_shape(ShapeKind kind, const ShapeParams& params, std::uint64_t seed) {
  validate(kind, params);
  std::mt19937_64 rng(seed);
  const Mat3 pose = params.rotate ? random_pose(params, rng) : Mat3{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

  VoxelGrid grid;
  grid.resolution = params.resolution;
  const int r = params.resolution;

  if (kind == ShapeKind::Line) {
    // Axis of the line after the cube part of the pose; tilt is ignored.
    int axis = 0;
    for (int a = 1; a < 3; ++a) {
      if (std::abs(pose[a][0]) > std::abs(pose[axis][0])) axis = a;
    }
    const int start = (r - params.length) / 2;
    for (int i = 0; i < params.length; ++i) {
      VoxelCoord c{r / 2, r / 2, r / 2};
      c[axis] = start + i;
      grid.voxels[c] = 1.0;
    }
    return grid;
  }

  const double center = r / 2.0;
  const double shell = std::sqrt(3.0) / 2.0;
  for (int x = 0; x < r; ++x) {
    for (int y = 0; y < r; ++y) {
      for (int z = 0; z < r; ++z) {
        const Vec3 p{x + 0.5 - center, y + 0.5 - center, z + 0.5 - center};
        // Body coordinates: apply the inverse (transpose) pose.
        Vec3 q{};
        for (int i = 0; i < 3; ++i) q[i] = pose[0][i] * p[0] + pose[1][i] * p[1] + pose[2][i] * p[2];
        if (std::abs(distance(kind, params, q)) <= shell) grid.voxels[{x, y, z}] = 1.0;
      }
    }
  }
  if (grid.voxels.empty()) throw Error("shape produced no voxels");
  return grid;
}

const std::string& one_nn_classify(const LabeledImageSet& train, const EmbeddedImage& query) {
  if (train.items.empty()) throw Error("training set is empty");
  const LabeledImage* best = nullptr;
  double best_d = 0.0;
  for (const LabeledImage& item : train.items) {
    if (item.image.dim != query.dim) throw Error("image dimensions differ");
    double d = 0.0;
    for (std::size_t i = 0; i < query.intensities.size(); ++i) {
      const double t = item.image.intensities[i] - query.intensities[i];
      d += t * t;
    }
    if (best == nullptr || d < best_d) {
      best = &item;
      best_d = d;
    }
  }
  return best->label;
}

std::vector<std::string> leave_one_out_predictions(const LabeledImageSet& set) {
  const std::size_t n = set.items.size();
  if (n < 2) throw Error("leave-one-out needs at least 2 items");
  const int dim = set.items.front().image.dim;
  for (const auto& item : set.items) {
    if (item.image.dim != dim) throw Error("image dimensions differ");
  }

  std::vector<std::string> predicted(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = n;
    double best_d = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      double d = 0.0;
      const auto& a = set.items[i].image.intensities;
      const auto& b = set.items[j].image.intensities;
      for (std::size_t k = 0; k < a.size(); ++k) d += (a[k] - b[k]) * (a[k] - b[k]);
      if (best == n || d < best_d) {
        best = j;
        best_d = d;
      }
    }
    predicted[i] = set.items[best].label;
  }
  return predicted;
}

double leave_one_out_accuracy(const LabeledImageSet& set) {
  const std::vector<std::string> predicted = leave_one_out_predictions(set);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) hits += predicted[i] == set.items[i].label;
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

ShapeParams suite_params(ShapeKind kind, int resolution) {
  ShapeParams p;
  p.resolution = resolution;
  p.rotate = true;
  const double s = resolution / 32.0;
  switch (kind) {
    case ShapeKind::Box: p.half_extents = {11.0 * s, 7.0 * s, 4.0 * s}; break;
    case ShapeKind::Sphere: p.radius = 11.0 * s; break;
    case ShapeKind::Torus:
      p.major_radius = 9.0 * s;
      p.minor_radius = 3.5 * s;
      break;
    case ShapeKind::Line: p.length = std::max(1, resolution / 2); break;
  }
  return p;
}

SuiteResult run_synthetic_suite(const SuiteConfig& suite, const PipelineConfig& pipeline) {
  if (suite.instances_per_kind < 1 || suite.kinds.empty()) throw Error("empty synthetic suite");
  struct Job {
    ShapeKind kind;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t k = 0; k < suite.kinds.size(); ++k) {
    for (int i = 0; i < suite.instances_per_kind; ++i) {
      jobs.push_back({suite.kinds[k], suite.seed * 1000003ULL + k * 1000ULL + static_cast<std::uint64_t>(i)});
    }
  }

  PipelineConfig config = pipeline;
  config.resolution = suite.resolution;
  config.dim = suite.dim;

  SuiteResult result;
  result.set.items.resize(jobs.size());
  detail::parallel_for(jobs.size(), suite.jobs, [&](std::size_t i) {
    const Job& job = jobs[i];
    VoxelGrid grid = generate_shape(job.kind, suite_params(job.kind, suite.resolution), job.seed);
    if (config.fill) grid = voxel::fill_interior(grid);
    LabeledImage& item = result.set.items[i];
    item.label = std::string(to_string(job.kind));
    item.image = pipeline::embed_grid(grid, config).image;
    item.source = item.label + "#" + std::to_string(job.seed);
  });

  const std::vector<std::string> predicted = leave_one_out_predictions(result.set);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const bool ok = predicted[i] == result.set.items[i].label;
    hits += ok;
    result.rows.push_back({result.set.items[i].label, jobs[i].seed, predicted[i], ok});
  }
  result.accuracy = static_cast<double>(hits) / static_cast<double>(jobs.size());
  return result;
}

Graph random_connected_graph(std::uint64_t seed, std::size_t min_nodes, std::size_t max_nodes) {
  if (min_nodes < 3 || max_nodes < min_nodes) throw Error("random graph needs 3 <= min_nodes <= max_nodes");
  std::mt19937_64 rng(seed);
  const std::size_t n = min_nodes + static_cast<std::size_t>(rng() % (max_nodes - min_nodes + 1));

  if (rng() % 2 == 0) {
    // Voxel blob grown by random face steps, so it is connected at any
    // connectivity.
    const int r = 2 * static_cast<int>(std::ceil(std::cbrt(static_cast<double>(n)))) + 2;
    VoxelGrid grid;
    grid.resolution = r;
    std::vector<VoxelCoord> cells{{r / 2, r / 2, r / 2}};
    grid.voxels[cells.front()] = 1.0;
    constexpr int kSteps[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    while (grid.voxels.size() < n) {
      const VoxelCoord& from = cells[static_cast<std::size_t>(rng() % cells.size())];
      const auto& s = kSteps[rng() % 6];
      const VoxelCoord c{from[0] + s[0], from[1] + s[1], from[2] + s[2]};
      if (grid.contains(c) && grid.voxels.emplace(c, 1.0).second) cells.push_back(c);
    }
    constexpr graph::Connectivity kConn[3] = {graph::Connectivity::Face, graph::Connectivity::Edge,
                                              graph::Connectivity::Corner};
    return graph::build_adjacency_graph(grid, kConn[rng() % 3]);
  }

  std::vector<std::vector<double>> points(n, std::vector<double>(3));
  for (auto& p : points) {
    for (double& x : p) x = unit(rng);
  }
  const std::size_t k = 2 + static_cast<std::size_t>(rng() % 4);
  return graph::bridge_components(graph::build_knn_graph(points, std::min(k, n - 1))).graph;
}

OracleComparison compare_with_oracle(const Graph& graph, const SolveSettings& settings) {
  const SparseSymMatrix lap = graph::laplacian(graph);
  const eigen::Solution sparse = eigen::smallest_nontrivial_pairs(lap, 2, settings);
  const eigen::DenseSpectrum dense = eigen::dense_eigen_oracle(lap);
  const std::size_t n = lap.order();

  OracleComparison cmp;
  std::vector<double> image(n);
  for (std::size_t i = 0; i < sparse.pairs.size(); ++i) {
    const EigenPair& pair = sparse.pairs[i];
    const std::size_t slot = i + 1;
    cmp.max_value_error = std::max(cmp.max_value_error, std::abs(pair.value - dense.values[slot]));

    double gap = std::abs(dense.values[slot] - dense.values[slot - 1]);
    if (slot + 1 < n) gap = std::min(gap, std::abs(dense.values[slot + 1] - dense.values[slot]));
    if (gap > 1e-6) {
      double dot = 0.0;
      for (std::size_t r = 0; r < n; ++r) dot += pair.vector[r] * dense.vectors[slot][r];
      cmp.min_alignment = std::min(cmp.min_alignment, std::abs(dot));
    }

    lap.multiply(pair.vector, image);
    double res = 0.0;
    for (std::size_t r = 0; r < n; ++r) res += (image[r] - pair.value * pair.vector[r]) * (image[r] - pair.value * pair.vector[r]);
    cmp.max_residual = std::max(cmp.max_residual, std::sqrt(res));
  }
  return cmp;
}

void write_results_csv(const SuiteResult& result, std::ostream& out) {
  out << "kind,seed,predicted,correct\n";
  for (const SuiteRow& row : result.rows) {
    out << row.kind << ',' << row.seed << ',' << row.predicted << ',' << (row.correct ? "true" : "false") << '\n';
  }
}

}  // namespace spemb::eval
