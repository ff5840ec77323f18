#pragma once

#include <spemb/layout.hpp>
#include <spemb/pipeline.hpp>
#include <spemb/voxel.hpp>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace spemb {

enum class ShapeKind { Box, Sphere, Torus, Line };

/// Shape parameters in voxel units. Shapes are centered in the grid.
struct ShapeParams {
  int resolution = 32;
  std::array<double, 3> half_extents{8.0, 6.0, 4.0};  ///< box, each in (0, R/2]
  double radius = 8.0;                               ///< sphere, in (0, R/2)
  double major_radius = 8.0;                         ///< torus
  double minor_radius = 3.0;                         ///< torus, 0 < minor < major, major + minor < R/2
  int length = 8;                                    ///< line, in [1, R]
  bool rotate = false;
  double max_tilt_deg = 8.0;  ///< small-angle perturbation on top of a cube rotation
};

struct LabeledImage {
  std::string label;
  EmbeddedImage image;
  std::string source;
};

struct LabeledImageSet {
  std::vector<LabeledImage> items;
};

namespace eval {

ShapeKind shape_kind_from_string(std::string_view name);
std::string_view to_string(ShapeKind kind);

/// Voxel shell of an analytic surface: voxel centers p with |f(p)| no larger
/// than half the voxel diagonal, f being the shape's distance function. With
/// `rotate`, the shape is turned by a seeded cube rotation plus a small tilt.
/// Lines are built directly as `length` consecutive voxels.
VoxelGrid generate_shape(ShapeKind kind, const ShapeParams& params, std::uint64_t seed);

/// Label of the nearest training image (Euclidean on raw intensities). The
/// first of several equally near images wins.
const std::string& one_nn_classify(const LabeledImageSet& train, const EmbeddedImage& query);

/// Prediction for each item from its nearest neighbour among the others.
std::vector<std::string> leave_one_out_predictions(const LabeledImageSet& set);
double leave_one_out_accuracy(const LabeledImageSet& set);

struct SuiteConfig {
  std::vector<ShapeKind> kinds{ShapeKind::Box, ShapeKind::Sphere, ShapeKind::Torus};
  int instances_per_kind = 30;
  int resolution = 32;
  int dim = 32;
  std::uint64_t seed = 7;
  int jobs = 1;
};

struct SuiteRow {
  std::string kind;
  std::uint64_t seed = 0;
  std::string predicted;
  bool correct = false;
};

struct SuiteResult {
  LabeledImageSet set;
  std::vector<SuiteRow> rows;
  double accuracy = 0.0;
};

/// Parameters used for each kind in the synthetic suite at resolution R.
ShapeParams suite_params(ShapeKind kind, int resolution);

/// Generates rotated instances of each kind, embeds them and scores
/// leave-one-out 1-NN accuracy. Output does not depend on `jobs`.
SuiteResult run_synthetic_suite(const SuiteConfig& suite, const PipelineConfig& pipeline);

/// Random connected graph for solver checks: either the adjacency graph of a
/// random voxel blob or a bridged k-NN graph of random 3D points.
Graph random_connected_graph(std::uint64_t seed, std::size_t min_nodes, std::size_t max_nodes);

struct OracleComparison {
  double max_value_error = 0.0;  ///< over lambda_2, lambda_3
  double min_alignment = 1.0;    ///< |<u, u_oracle>| over pairs with a gap
  double max_residual = 0.0;
};

/// Sparse solver against the dense oracle on `graph` (at most 2000 nodes).
OracleComparison compare_with_oracle(const Graph& graph, const SolveSettings& settings);

/// `kind,seed,predicted,correct` table.
void write_results_csv(const SuiteResult& result, std::ostream& out);

}  // namespace eval
}  // namespace spemb
