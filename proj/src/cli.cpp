#include <spemb/cli.hpp>
#include <spemb/eval.hpp>
#include <spemb/pipeline.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "parallel.hpp"

namespace spemb::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  int resolution = 32;
  int connectivity = 6;
  int dim = 144;
  bool fill = false;
  double tol = 1e-8;
  int max_iter = 5000;
  std::uint64_t seed = 42;
  std::string scale = "linear";
  int jobs = 1;
  std::string out = ".";
};

void add_pipeline_flags(CLI::App& sub, Options& o) {
  sub.add_option("--resolution", o.resolution, "voxel grid resolution R (R^3 grid)")
      ->check(CLI::Range(1, 1024))
      ->capture_default_str();
  sub.add_option("--connectivity", o.connectivity, "voxel neighbourhood: 6, 18 or 26")
      ->check(CLI::IsMember({6, 18, 26}))
      ->capture_default_str();
  sub.add_option("--dim", o.dim, "output image dimension")->check(CLI::Range(1, 65536))->capture_default_str();
  sub.add_flag("--fill", o.fill, "fill the voxel shell's interior");
  sub.add_option("--tol", o.tol, "eigensolver residual tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  sub.add_option("--max-iter", o.max_iter, "eigensolver iteration cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub.add_option("--seed", o.seed, "eigensolver start-vector seed")->capture_default_str();
  sub.add_option("--scale", o.scale, "PGM intensity scaling: linear or log1p")
      ->check(CLI::IsMember({"linear", "log1p"}))
      ->capture_default_str();
  sub.add_option("--jobs", o.jobs, "worker threads")->check(CLI::Range(1, 256))->capture_default_str();
  sub.add_option("--out", o.out, "output directory")->capture_default_str();
}

PipelineConfig to_config(const Options& o) {
  PipelineConfig c;
  c.resolution = o.resolution;
  c.connectivity = graph::connectivity_from_int(o.connectivity);
  c.dim = o.dim;
  c.fill = o.fill;
  c.solve = {o.tol, o.max_iter, o.seed};
  c.write.scaling = image_io::scaling_from_string(o.scale);
  return c;
}

std::string lower_extension(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

bool is_input_file(const fs::path& p) {
  const std::string ext = lower_extension(p);
  return ext == ".off" || ext == ".vox";
}

// Embeds one file and writes <stem>.pgm, <stem>.csv and <stem>.report.json
// into `out_dir`. Returns a one-line summary.
std::string embed_file(const fs::path& input, const fs::path& out_dir, const PipelineConfig& config) {
  if (!fs::is_regular_file(input)) throw Error("cannot read '" + input.string() + "'");
  Embedding result;
  std::size_t dropped_faces = 0;
  if (lower_extension(input) == ".off") {
    const mesh_io::OffParseResult parsed = mesh_io::load_off(input.string());
    dropped_faces = parsed.degenerate_faces;
    result = pipeline::embed_mesh(parsed.mesh, config);
  } else {
    VoxelGrid grid = voxel::load_voxel_text(input.string());
    if (config.fill) grid = voxel::fill_interior(grid);
    result = pipeline::embed_grid(grid, config);
  }

  fs::create_directories(out_dir);
  const std::string stem = input.stem().string();
  const auto open = [&](const std::string& name, std::ios::openmode mode) {
    std::ofstream f(out_dir / name, mode);
    if (!f) throw Error("cannot write '" + (out_dir / name).string() + "'");
    return f;
  };
  {
    auto f = open(stem + ".pgm", std::ios::binary);
    image_io::write_pgm(result.image, config.write, f);
  }
  {
    auto f = open(stem + ".csv", std::ios::out);
    image_io::write_csv(result.image, f);
  }
  {
    auto f = open(stem + ".report.json", std::ios::out);
    f << pipeline::report_json(result.report, config);
  }

  std::ostringstream msg;
  msg << input.string() << ": " << result.report.node_count << " nodes, " << result.report.edge_count
      << " edges, " << result.report.bridges_added << " bridges, " << result.report.collision_count
      << " colliding nodes";
  if (dropped_faces > 0) msg << " (warning: " << dropped_faces << " degenerate faces dropped)";
  return msg.str();
}

int cmd_embed(const std::string& input, const Options& o, std::ostream& out, std::ostream& err) {
  try {
    out << embed_file(input, o.out, to_config(o)) << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << input << ": " << e.what() << '\n';
    return 1;
  }
}

int cmd_batch(const std::string& dir, const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<fs::path> inputs;
  try {
    if (!fs::is_directory(dir)) throw Error("'" + dir + "' is not a readable directory");
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
      if (entry.is_regular_file() && is_input_file(entry.path())) inputs.push_back(entry.path());
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  std::sort(inputs.begin(), inputs.end());

  const PipelineConfig config = to_config(o);
  std::vector<std::string> messages(inputs.size());
  std::vector<char> failed(inputs.size(), 0);
  detail::parallel_for(inputs.size(), o.jobs, [&](std::size_t i) {
    const fs::path rel = fs::relative(inputs[i], dir);
    try {
      messages[i] = embed_file(inputs[i], fs::path(o.out) / rel.parent_path(), config);
    } catch (const std::exception& e) {
      failed[i] = 1;
      messages[i] = inputs[i].string() + ": " + e.what();
    }
  });

  std::size_t failures = 0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (failed[i]) {
      ++failures;
      err << "error: " << messages[i] << '\n';
    } else {
      out << messages[i] << '\n';
    }
  }
  out << "batch: " << inputs.size() << " inputs, " << inputs.size() - failures << " embedded, " << failures
      << " failed\n";
  return failures == 0 ? 0 : 1;
}

int cmd_eval(const Options& o, int instances, double min_accuracy, bool out_given, std::ostream& out,
             std::ostream& err) {
  try {
    eval::SuiteConfig suite;
    suite.instances_per_kind = instances;
    suite.resolution = o.resolution;
    suite.dim = o.dim;
    suite.jobs = o.jobs;
    const eval::SuiteResult result = eval::run_synthetic_suite(suite, to_config(o));
    if (out_given) {
      fs::create_directories(o.out);
      std::ofstream f(fs::path(o.out) / "eval_results.csv");
      if (!f) throw Error("cannot write results table in '" + o.out + "'");
      eval::write_results_csv(result, f);
    }
    out << "leave-one-out 1-NN accuracy: " << result.accuracy << " (" << result.rows.size() << " shapes)\n";
    return result.accuracy >= min_accuracy ? 0 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int cmd_selftest(const Options& o, int graphs, std::ostream& out, std::ostream& err) {
  const SolveSettings settings{o.tol, o.max_iter, o.seed};
  int failures = 0;
  for (int i = 0; i < graphs; ++i) {
    try {
      const Graph g = eval::random_connected_graph(1000 + static_cast<std::uint64_t>(i), 5, 200);
      const eval::OracleComparison cmp = eval::compare_with_oracle(g, settings);
      const bool ok = cmp.max_value_error <= 1e-6 && cmp.min_alignment >= 1.0 - 1e-6;
      failures += !ok;
      out << (ok ? "ok   " : "FAIL ") << "graph " << i << " n=" << g.node_count() << " |dlambda|=" << cmp.max_value_error
          << " align=" << cmp.min_alignment << '\n';
    } catch (const std::exception& e) {
      ++failures;
      err << "error: graph " << i << ": " << e.what() << '\n';
    }
  }
  out << "selftest: " << graphs - failures << "/" << graphs << " passed\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Embed 3D objects into 2D images via spectral layout of voxel adjacency graphs", "spemb"};
  app.require_subcommand(1);

  Options opts;
  std::string input;
  int instances = 30;
  double min_accuracy = 0.0;
  int graphs = 20;

  auto* embed = app.add_subcommand("embed", "embed one .off mesh or .vox voxel file");
  embed->add_option("input", input, "input file")->required();
  add_pipeline_flags(*embed, opts);

  auto* batch = app.add_subcommand("batch", "embed every .off/.vox file under a directory");
  batch->add_option("input", input, "input directory")->required();
  add_pipeline_flags(*batch, opts);

  auto* evaluate = app.add_subcommand("eval", "synthetic-shape leave-one-out 1-NN accuracy");
  add_pipeline_flags(*evaluate, opts);
  evaluate->add_option("--instances", instances, "instances per shape kind")->check(CLI::Range(1, 10000));
  evaluate->add_option("--min-accuracy", min_accuracy, "exit 1 below this accuracy")->check(CLI::Range(0.0, 1.0));

  auto* selftest = app.add_subcommand("selftest", "sparse eigensolver vs dense oracle on random graphs");
  add_pipeline_flags(*selftest, opts);
  selftest->add_option("--graphs", graphs, "number of random graphs")->check(CLI::Range(1, 10000));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "usage error: " << e.what() << '\n' << "run 'spemb --help' for usage\n";
    return 2;
  }

  if (*embed) return cmd_embed(input, opts, out, err);
  if (*batch) return cmd_batch(input, opts, out, err);
  if (*evaluate) {
    // The eval suite works on 32x32 images unless --dim is given.
    if (evaluate->count("--dim") == 0) opts.dim = 32;
    return cmd_eval(opts, instances, min_accuracy, evaluate->count("--out") > 0, out, err);
  }
  return cmd_selftest(opts, graphs, out, err);
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace spemb::cli
