#include <doctest.h>

#include <spemb/eigen.hpp>
#include <spemb/pipeline.hpp>

#include <json.hpp>

#include <random>

#include "support/fixtures.hpp"

using namespace spemb;
using doctest::Approx;

namespace {

PipelineConfig config_with_dim(int dim) {
  PipelineConfig c;
  c.dim = dim;
  return c;
}

}  // namespace

TEST_CASE("three-voxel line") {
  const VoxelGrid line = fixtures::grid_of(3, {{0, 0, 0}, {0, 0, 1}, {0, 0, 2}});
  const Embedding e = pipeline::embed_grid(line, config_with_dim(3));

  // Hand rasterization of the dense-oracle eigenvectors of the 3-node path.
  const auto oracle = eigen::dense_eigen_oracle(graph::laplacian(graph::build_adjacency_graph(line, graph::Connectivity::Face)));
  std::vector<double> u2 = oracle.vectors[1], u3 = oracle.vectors[2];
  eigen::fix_sign(u2);
  eigen::fix_sign(u3);
  EmbeddedImage expected(3);
  for (int i = 0; i < 3; ++i) {
    const auto bin = [](double v, const std::vector<double>& u) {
      const double lo = *std::min_element(u.begin(), u.end()), hi = *std::max_element(u.begin(), u.end());
      return std::min(2, static_cast<int>(std::floor((v - lo) / (hi - lo) * 3)));
    };
    expected.at(bin(u3[i], u3), bin(u2[i], u2)) += 1.0;
  }
  CHECK(e.image == expected);
  CHECK(e.image.nonzero_count() == 3);
  CHECK(e.image.mass() == 3.0);
  CHECK(e.report.node_count == 3);
  CHECK(e.report.edge_count == 2);
  CHECK(*e.report.lambda2 == Approx(1.0));
  CHECK(*e.report.lambda3 == Approx(3.0));
  CHECK(e.report.collision_count == 0);
}

TEST_CASE("single voxel goes to the center pixel") {
  const Embedding e = pipeline::embed_grid(fixtures::grid_of(4, {{2, 1, 3}}), config_with_dim(5));
  CHECK(e.image.at(2, 2) == 1.0);
  CHECK(e.image.mass() == 1.0);
  CHECK_FALSE(e.report.lambda2.has_value());
  CHECK_FALSE(e.report.lambda3.has_value());
}

TEST_CASE("two voxels") {
  const Embedding e = pipeline::embed_grid(fixtures::grid_of(2, {{0, 0, 0}, {0, 1, 0}}), config_with_dim(4));
  CHECK(e.image.mass() == 2.0);
  CHECK(e.image.nonzero_count() == 2);
  CHECK(*e.report.lambda2 == Approx(2.0));
  CHECK_FALSE(e.report.lambda3.has_value());
}

TEST_CASE("full 2x2x2 block") {
  const VoxelGrid block = fixtures::full_block(2, 2, 2);
  const Embedding e = pipeline::embed_grid(block, config_with_dim(2));
  CHECK(e.image.mass() == 8.0);
  // The cube graph has lambda = 2 with multiplicity three.
  const auto oracle = eigen::dense_eigen_oracle(graph::laplacian(graph::build_adjacency_graph(block, graph::Connectivity::Face)));
  CHECK(oracle.values[1] == Approx(2.0));
  CHECK(oracle.values[3] == Approx(2.0));
  CHECK(*e.report.lambda2 == Approx(oracle.values[1]));
  CHECK(*e.report.lambda3 == Approx(oracle.values[2]));

  // Composition check: the image is the rasterized solver layout.
  const auto sol = eigen::smallest_nontrivial_pairs(graph::laplacian(graph::build_adjacency_graph(block, graph::Connectivity::Face)), 2);
  const auto layout = layout::spectral_layout(sol.pairs[0].vector, sol.pairs[1].vector);
  CHECK(layout::rasterize(layout, std::vector<double>(8, 1.0), 2) == e.image);
}

TEST_CASE("unit-cube mesh at R=2 equals the 8-voxel grid") {
  PipelineConfig c = config_with_dim(2);
  c.resolution = 2;
  const Embedding from_mesh = pipeline::embed_mesh(fixtures::unit_cube_mesh(), c);
  const Embedding from_grid = pipeline::embed_grid(fixtures::full_block(2, 2, 2), c);
  CHECK(from_mesh.image == from_grid.image);
  CHECK(from_mesh.report.node_count == 8);
  CHECK(from_mesh.report.timings.front().stage == "voxelize");
  CHECK(pipeline::report_json(from_mesh.report, c, false) == pipeline::report_json(from_grid.report, c, false));
}

TEST_CASE("mesh without faces is rejected") {
  Mesh m = fixtures::unit_cube_mesh();
  m.faces.clear();
  CHECK_THROWS_AS(pipeline::embed_mesh(m, PipelineConfig{}), Error);
}

TEST_CASE("embedding is deterministic") {
  PipelineConfig c = config_with_dim(48);
  c.resolution = 16;
  const Mesh sphere = fixtures::uv_sphere(10, 16);
  const Embedding a = pipeline::embed_mesh(sphere, c);
  const Embedding b = pipeline::embed_mesh(sphere, c);
  CHECK(a.image == b.image);
  CHECK(pipeline::report_json(a.report, c, false) == pipeline::report_json(b.report, c, false));
  CHECK(a.image.mass() == Approx(static_cast<double>(a.report.node_count)).epsilon(1e-12));
}

TEST_CASE("separated blobs are bridged and keep their mass") {
  std::vector<VoxelCoord> cells;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) cells.push_back({x, y, 0});
  for (int z = 5; z < 8; ++z) cells.push_back({7, 7, z});
  const Embedding e = pipeline::embed_grid(fixtures::grid_of(8, cells), config_with_dim(16));
  CHECK(e.report.bridges_added == 1);
  CHECK(e.image.mass() == Approx(12.0));
  CHECK(*e.report.lambda2 > 0.0);
}

TEST_CASE("connected grids need no bridges and mass follows voxel values") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> w(0.5, 4.0);
  VoxelGrid g = fixtures::full_block(4, 3, 2);
  double total = 0.0;
  for (auto& [c, v] : g.voxels) total += (v = w(rng));
  const Embedding e = pipeline::embed_grid(g, config_with_dim(7));
  CHECK(e.report.bridges_added == 0);
  CHECK(e.image.mass() == Approx(total).epsilon(1e-9));
  CHECK(e.report.mass == Approx(total).epsilon(1e-12));
}

TEST_CASE("report JSON layout") {
  const Embedding e = pipeline::embed_grid(fixtures::full_block(3, 1, 1), config_with_dim(3));
  const PipelineConfig c = config_with_dim(3);
  const auto j = nlohmann::ordered_json::parse(pipeline::report_json(e.report, c));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"node_count", "edge_count", "bridges_added", "lambda2", "lambda3",
                                         "solver_iterations", "collision_count", "mass", "config", "timing_ms"});
  CHECK(j["node_count"] == 3);
  CHECK(j["edge_count"] == 2);
  CHECK(j["config"]["dim"] == 3);
  CHECK(j["config"]["scale"] == "linear");
  CHECK(j["timing_ms"].contains("eigensolve"));
  CHECK_FALSE(nlohmann::ordered_json::parse(pipeline::report_json(e.report, c, false)).contains("timing_ms"));

  const Embedding single = pipeline::embed_grid(fixtures::grid_of(1, {{0, 0, 0}}), c);
  const auto js = nlohmann::ordered_json::parse(pipeline::report_json(single.report, c));
  CHECK(js["lambda2"].is_null());
  CHECK(js["lambda3"].is_null());
}
