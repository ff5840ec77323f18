#include <spemb/pipeline.hpp>

#include <json.hpp>

#include <chrono>

namespace spemb::pipeline {

namespace {

class StageClock {
 public:
  explicit StageClock(std::vector<StageTime>& sink) : sink_(sink), start_(Clock::now()) {}

  void lap(const char* stage) {
    const auto now = Clock::now();
    sink_.push_back({stage, std::chrono::duration<double, std::milli>(now - start_).count()});
    start_ = now;
  }

 private:
  using Clock = std::chrono::steady_clock;
  std::vector<StageTime>& sink_;
  Clock::time_point start_;
};

}  // namespace

Embedding embed_grid(const VoxelGrid& grid, const PipelineConfig& config) {
  if (config.dim < 1) throw Error("image dimension must be >= 1");
  Embedding out;
  EmbedReport& report = out.report;
  StageClock clock(report.timings);

  const Graph adjacency = graph::build_adjacency_graph(grid, config.connectivity);
  clock.lap("graph");
  report.node_count = adjacency.node_count();
  report.edge_count = adjacency.edge_count();

  std::vector<double> values;
  values.reserve(adjacency.node_count());
  for (const Node& node : adjacency.nodes()) values.push_back(node.value);
  for (double v : values) report.mass += v;

  if (adjacency.node_count() == 1) {
    out.image = EmbeddedImage(config.dim);
    const int center = (config.dim - 1) / 2;
    out.image.at(center, center) = values.front();
    return out;
  }

  const graph::BridgeResult bridged = graph::bridge_components(adjacency);
  report.bridges_added = bridged.bridges_added;
  clock.lap("bridge");

  const SparseSymMatrix lap = graph::laplacian(bridged.graph);
  clock.lap("laplacian");

  const std::size_t count = lap.order() >= 3 ? 2 : 1;
  const eigen::Solution solution = eigen::smallest_nontrivial_pairs(lap, count, config.solve);
  report.solver_iterations = solution.iterations;
  report.lambda2 = solution.pairs[0].value;
  std::vector<double> u3(lap.order(), 0.0);
  if (count == 2) {
    report.lambda3 = solution.pairs[1].value;
    u3 = solution.pairs[1].vector;
  }
  clock.lap("eigensolve");

  const SpectralCoords coords = layout::spectral_layout(solution.pairs[0].vector, u3);
  report.collision_count = layout::collision_count(coords, config.dim);
  clock.lap("layout");

  out.image = layout::rasterize(coords, values, config.dim);
  clock.lap("rasterize");
  return out;
}

Embedding embed_mesh(const Mesh& mesh, const PipelineConfig& config) {
  std::vector<StageTime> front;
  StageClock clock(front);
  VoxelGrid grid = voxel::voxelize_surface(voxel::normalize_mesh(mesh), config.resolution);
  if (config.fill) grid = voxel::fill_interior(grid);
  clock.lap("voxelize");

  Embedding out = embed_grid(grid, config);
  out.report.timings.insert(out.report.timings.begin(), front.begin(), front.end());
  return out;
}

std::string report_json(const EmbedReport& report, const PipelineConfig& config, bool include_timing) {
  nlohmann::ordered_json j;
  j["node_count"] = report.node_count;
  j["edge_count"] = report.edge_count;
  j["bridges_added"] = report.bridges_added;
  j["lambda2"] = report.lambda2 ? nlohmann::ordered_json(*report.lambda2) : nullptr;
  j["lambda3"] = report.lambda3 ? nlohmann::ordered_json(*report.lambda3) : nullptr;
  j["solver_iterations"] = report.solver_iterations;
  j["collision_count"] = report.collision_count;
  j["mass"] = report.mass;

  nlohmann::ordered_json cfg;
  cfg["resolution"] = config.resolution;
  cfg["connectivity"] = static_cast<int>(config.connectivity);
  cfg["dim"] = config.dim;
  cfg["fill"] = config.fill;
  cfg["tol"] = config.solve.tol;
  cfg["max_iter"] = config.solve.max_iter;
  cfg["seed"] = config.solve.seed;
  cfg["scale"] = std::string(image_io::to_string(config.write.scaling));
  cfg["max_gray"] = config.write.max_gray;
  j["config"] = cfg;

  if (include_timing) {
    nlohmann::ordered_json t = nlohmann::ordered_json::object();
    for (const StageTime& s : report.timings) t[s.stage] = s.ms;
    j["timing_ms"] = t;
  }
  return j.dump(2) + "\n";
}

}  // namespace spemb::pipeline
