#pragma once

#include <spemb/eigen.hpp>
#include <spemb/graph.hpp>
#include <spemb/image_io.hpp>
#include <spemb/layout.hpp>
#include <spemb/mesh.hpp>
#include <spemb/voxel.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace spemb {

struct PipelineConfig {
  int resolution = 32;
  graph::Connectivity connectivity = graph::Connectivity::Face;
  int dim = 144;
  bool fill = false;
  SolveSettings solve;
  ImageWriteSettings write;
};

struct StageTime {
  std::string stage;
  double ms = 0.0;
};

struct EmbedReport {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::size_t bridges_added = 0;
  std::optional<double> lambda2;  ///< absent for single-node graphs
  std::optional<double> lambda3;  ///< absent for graphs with fewer than 3 nodes
  int solver_iterations = 0;
  std::size_t collision_count = 0;
  double mass = 0.0;
  std::vector<StageTime> timings;
};

struct Embedding {
  EmbeddedImage image;
  EmbedReport report;
};

namespace pipeline {

/// grid -> adjacency graph -> bridged graph -> Laplacian -> (u2, u3) ->
/// layout -> dim×dim image.
Embedding embed_grid(const VoxelGrid& grid, const PipelineConfig& config);

/// normalize -> voxelize (optionally fill) -> embed_grid.
Embedding embed_mesh(const Mesh& mesh, const PipelineConfig& config);

/// JSON document with the report fields in fixed order; timings last under
/// "timing_ms".
std::string report_json(const EmbedReport& report, const PipelineConfig& config, bool include_timing = true);

}  // namespace pipeline
}  // namespace spemb
