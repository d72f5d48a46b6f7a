// fgwkit: distances, couplings, barycenters, geodesics and experiment
// runners for structured objects. Exit codes: 0 success, 2 parse/usage
// error, 3 solver error.
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fgw/barycenter.hpp"
#include "fgw/geodesic.hpp"
#include "fgw/io.hpp"
#include "fgw/linear_ot.hpp"
#include "fgw/solver.hpp"
#include "fgw/toolkit.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fgw;

namespace {

constexpr const char* kVersion = "fgwkit/1";

std::uint64_t mix_pair_seed(std::uint64_t seed, std::uint64_t i, std::uint64_t j) {
  std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * (i + 1)) ^ (0xbf58476d1ce4e5b9ULL * (j + 1));
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d4d049bb133111ULL;
  return x ^ (x >> 31);
}

int default_jobs() {
  if (const char* env = std::getenv("FGWKIT_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

StructuredObject load_object(const std::string& path) {
  StructuredObject obj = read_object_file(path);
  for (const auto& v : validate(obj)) {
    std::cerr << "warning: " << path << ": " << v.describe() << "\n";
  }
  return obj;
}

std::vector<std::string> read_file_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file list " + path);
  std::vector<std::string> files;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) files.push_back(line);
  }
  if (files.empty()) throw ParseError("file list " + path + " is empty");
  return files;
}

struct DistanceFlags {
  double alpha = 0.5;
  int p = 1;
  int q = 2;
  int restarts = 5;
  std::uint64_t seed = 0;
  std::string mode = "fgw";

  SolverParams params() const {
    SolverParams out;
    out.alpha = alpha;
    out.p = p;
    out.q = q;
    out.restarts = restarts;
    out.seed = seed;
    return out;
  }
};

void add_distance_flags(CLI::App* cmd, DistanceFlags& flags, bool with_mode = true) {
  cmd->add_option("--alpha", flags.alpha, "feature/structure trade-off in [0,1]");
  cmd->add_option("--p", flags.p, "outer exponent");
  cmd->add_option("--q", flags.q, "ground cost exponent");
  cmd->add_option("--restarts", flags.restarts, "random restarts");
  cmd->add_option("--seed", flags.seed, "random seed");
  if (with_mode) {
    cmd->add_option("--mode", flags.mode, "w | gw | fgw")
        ->check(CLI::IsMember({"w", "gw", "fgw"}));
  }
}

struct DistanceOutput {
  double distance = 0.0;
  double objective = 0.0;
  int iters = 0;
  std::optional<Matrix> coupling;
};

DistanceOutput run_distance(const StructuredObject& a, const StructuredObject& b,
                            const DistanceFlags& flags, bool want_coupling) {
  DistanceOutput out;
  if (flags.mode == "w") {
    Matrix m = feature_cost_matrix(a, b, flags.p);
    OtSolution sol = solve_linear_ot(m, a.weights(), b.weights());
    out.distance = std::pow(std::max(sol.cost, 0.0), 1.0 / flags.p);
    out.objective = sol.cost;
    out.iters = sol.iterations;
    if (want_coupling) out.coupling = sol.coupling.matrix();
    return out;
  }
  SolverParams params = flags.params();
  if (flags.mode == "gw") params.alpha = 1.0;
  FgwSolution sol = solve_fgw(a, b, params);
  out.distance = sol.value;
  out.objective = sol.objective;
  out.iters = static_cast<int>(sol.trace.size());
  if (want_coupling) out.coupling = sol.coupling.matrix();
  return out;
}

// Pairwise distance matrix, parallel over the upper triangle. Every pair
// gets its own derived seed so the result does not depend on --jobs.
Matrix distance_matrix(const std::vector<StructuredObject>& objects, const DistanceFlags& flags,
                       int jobs) {
  const Index n = static_cast<Index>(objects.size());
  Matrix out = Matrix::Zero(n, n);
  std::vector<std::pair<Index, Index>> pairs;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= pairs.size()) return;
      const auto [i, j] = pairs[t];
      DistanceFlags pair_flags = flags;
      pair_flags.seed = mix_pair_seed(flags.seed, i, j);
      try {
        out(i, j) = out(j, i) = run_distance(objects[i], objects[j], pair_flags, false).distance;
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };

  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

void write_manifest(const fs::path& dir, const std::string& experiment, const json& params,
                    std::uint64_t seed) {
  json manifest;
  manifest["experiment"] = experiment;
  manifest["params"] = params;
  manifest["seed"] = seed;
  manifest["versions"] = {{"fgwkit", kVersion}};
  std::ofstream(dir / "manifest.json") << manifest.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// experiments

void experiment_trees(const fs::path& dir, std::uint64_t seed) {
  auto [t1, t2] = make_toy_trees();
  write_object_file(dir / "tree1.json", t1);
  write_object_file(dir / "tree2.json", t2);

  DistanceFlags flags;
  flags.p = 1;
  flags.q = 1;
  flags.seed = seed;

  json results;
  flags.mode = "w";
  results["wasserstein"] = run_distance(t1, t2, flags, false).distance;
  flags.mode = "gw";
  auto gw = run_distance(t1, t2, flags, true);
  results["gromov_wasserstein"] = gw.distance;
  flags.mode = "fgw";
  flags.alpha = 0.5;
  auto fgw = run_distance(t1, t2, flags, true);
  results["fgw_alpha_0.5"] = fgw.distance;

  write_matrix_csv(dir / "coupling_gw.csv", *gw.coupling);
  write_matrix_csv(dir / "coupling_fgw.csv", *fgw.coupling);
  std::ofstream(dir / "distances.json") << results.dump(2) << "\n";
  write_manifest(dir, "trees", {{"alpha", 0.5}, {"p", 1}, {"q", 1}}, seed);
}

void experiment_digits(const fs::path& dir, std::uint64_t seed) {
  const int size = 12, shift = 3;
  auto [img1, img2] = make_shifted_image_pair(size, shift);
  write_object_file(dir / "glyph.json", img1);
  write_object_file(dir / "glyph_shifted.json", img2);

  DistanceFlags flags;
  flags.seed = seed;
  flags.p = 1;
  flags.q = 1;

  json results;
  flags.mode = "w";
  results["wasserstein"] = run_distance(img1, img2, flags, false).distance;
  flags.mode = "gw";
  flags.restarts = 0;
  auto gw = run_distance(img1, img2, flags, true);
  results["gromov_wasserstein"] = gw.distance;
  flags.mode = "fgw";
  flags.alpha = 0.1;
  flags.q = 2;
  flags.restarts = 2;
  auto fgw = run_distance(img1, img2, flags, true);
  results["fgw_alpha_0.1"] = fgw.distance;

  write_matrix_csv(dir / "coupling_fgw.csv", *fgw.coupling);
  std::ofstream(dir / "distances.json") << results.dump(2) << "\n";
  write_manifest(dir, "digits", {{"size", size}, {"shift", shift}, {"alpha", 0.1}}, seed);
}

void experiment_series_mds(const fs::path& dir, std::uint64_t seed, int jobs) {
  auto series = make_two_hump_series(25, 0.3, seed);
  std::vector<int> labels;
  for (std::size_t i = 0; i < series.size(); ++i) labels.push_back(static_cast<int>(i % 2));

  json silhouettes;
  for (double alpha : {0.0, 0.5, 1.0}) {
    DistanceFlags flags;
    flags.alpha = alpha;
    flags.p = 1;
    flags.q = 1;
    flags.restarts = 2;
    flags.seed = seed;
    flags.mode = alpha == 0.0 ? "w" : (alpha == 1.0 ? "gw" : "fgw");
    Matrix d = distance_matrix(series, flags, jobs);
    const std::string tag = "alpha_" + std::to_string(alpha).substr(0, 3);
    write_matrix_csv(dir / ("distances_" + tag + ".csv"), d);
    Matrix embedding = mds_embed(d, 2);
    write_matrix_csv(dir / ("embedding_" + tag + ".csv"), embedding);
    silhouettes[tag] = silhouette_score(embedding, labels);
  }
  {
    json lab = json::array();
    for (int l : labels) lab.push_back(l);
    std::ofstream(dir / "labels.json") << lab.dump() << "\n";
  }
  std::ofstream(dir / "silhouettes.json") << silhouettes.dump(2) << "\n";
  write_manifest(dir, "series-mds", {{"count", 25}, {"class_gap", 0.3}, {"alphas", {0.0, 0.5, 1.0}}},
                 seed);
}

void experiment_barygraph(const fs::path& dir, std::uint64_t seed) {
  for (const char* cls_name : {"circle", "eight"}) {
    const LoopClass cls = std::string(cls_name) == "circle" ? LoopClass::Circle : LoopClass::Eight;
    auto graphs = make_noisy_loop_graphs(cls, 10, seed);
    std::vector<StructuredObject> inputs;
    for (const auto& g : graphs) inputs.push_back(shortest_path_structure(g));

    SolverParams params;
    params.alpha = 0.95;
    params.p = 1;
    params.q = 2;
    params.restarts = 3;
    params.seed = seed;
    BarycenterProblem problem{inputs,
                              Vector::Constant(10, 0.1),
                              15,
                              Histogram::uniform(15),
                              params,
                              std::nullopt,
                              std::nullopt};
    problem.max_outer_iters = 30;
    BarycenterSolution sol = solve_barycenter(problem);
    AdjacencyRecovery rec = recover_adjacency(sol.barycenter.structure());

    const std::string prefix = cls_name;
    write_object_file(dir / (prefix + "_barycenter.json"), sol.barycenter);
    write_matrix_csv(dir / (prefix + "_adjacency.csv"), rec.adjacency.cast<double>());
    for (std::size_t k = 0; k < inputs.size(); ++k) {
      write_object_file(dir / (prefix + "_sample" + std::to_string(k) + ".json"), inputs[k]);
    }
    json info;
    info["threshold"] = rec.threshold;
    info["residual"] = rec.residual;
    info["objective_trace"] = sol.objective_trace;
    std::ofstream(dir / (prefix + "_recovery.json")) << info.dump(2) << "\n";
  }
  write_manifest(dir, "barygraph", {{"samples", 10}, {"nodes", 15}, {"alpha", 0.95}}, seed);
}

void experiment_sbm(const fs::path& dir, std::uint64_t seed) {
  json results;

  // four blocks, one feature mode each
  {
    auto g = make_sbm({6, 6, 6, 6}, 0.85, 0.05, {{-1.5}, {-0.5}, {0.5}, {1.5}}, seed);
    StructuredObject sbm = shortest_path_structure(g);
    write_object_file(dir / "sbm_unimodal.json", sbm);

    SolverParams params;
    params.alpha = 0.5;
    params.p = 1;
    params.q = 2;
    params.restarts = 5;
    params.seed = seed;
    BarycenterProblem problem{{sbm},  Vector::Constant(1, 1.0), 4, Histogram::uniform(4),
                              params, std::nullopt,             std::nullopt};
    problem.max_outer_iters = 30;
    BarycenterSolution sol = solve_barycenter(problem);
    auto assignment = cluster_assignments(sol.couplings[0]);
    std::vector<int> labels(assignment.begin(), assignment.end());
    std::vector<int> truth(24);
    for (int i = 0; i < 24; ++i) truth[i] = i / 6;
    results["unimodal_ari"] = adjusted_rand_index(truth, labels);
    write_object_file(dir / "sbm_unimodal_approx.json", sol.barycenter);
    json lab = json::array();
    for (int l : labels) lab.push_back(l);
    results["unimodal_assignment"] = lab;
  }

  // four blocks, two feature modes per block, approximated with 8 nodes
  {
    auto g = make_sbm({6, 6, 6, 6}, 0.85, 0.05,
                      {{-1.5, -1.0}, {-0.5, 0.0}, {0.5, 1.0}, {1.5, 2.0}}, seed + 1);
    StructuredObject sbm = shortest_path_structure(g);
    write_object_file(dir / "sbm_bimodal.json", sbm);

    SolverParams params;
    params.alpha = 0.5;
    params.p = 1;
    params.q = 2;
    params.restarts = 5;
    params.seed = seed;
    BarycenterProblem problem{{sbm},  Vector::Constant(1, 1.0), 8, Histogram::uniform(8),
                              params, std::nullopt,             std::nullopt};
    problem.max_outer_iters = 30;
    BarycenterSolution sol = solve_barycenter(problem);
    write_object_file(dir / "sbm_bimodal_approx.json", sol.barycenter);
    auto assignment = cluster_assignments(sol.couplings[0]);
    json lab = json::array();
    for (Index a : assignment) lab.push_back(a);
    results["bimodal_assignment"] = lab;
  }

  std::ofstream(dir / "results.json") << results.dump(2) << "\n";
  write_manifest(dir, "sbm", {{"blocks", {6, 6, 6, 6}}, {"p_in", 0.85}, {"p_out", 0.05}}, seed);
}

void experiment_concentration(const fs::path& dir, std::uint64_t seed) {
  ConcentrationTarget target;
  const std::vector<int> sizes = {8, 16, 32, 64, 128};
  ConcentrationResult res = concentration_experiment(target, sizes, 20, seed);

  std::ofstream csv(dir / "means.csv");
  csv << "n,mean_fgw\n";
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%d,%.17g\n", sizes[i], res.mean_distance[i]);
    csv << buf;
  }
  json fit;
  fit["slope"] = res.slope;
  fit["slope_stderr"] = res.slope_stderr;
  std::ofstream(dir / "fit.json") << fit.dump(2) << "\n";
  write_manifest(dir, "concentration",
                 {{"sizes", sizes}, {"trials", 20}, {"reference_size", target.reference_size}},
                 seed);
}

void write_fixture(const std::string& name, const fs::path& dir, std::uint64_t seed) {
  if (name == "trees") {
    auto [t1, t2] = make_toy_trees();
    write_object_file(dir / "tree1.json", t1);
    write_object_file(dir / "tree2.json", t2);
  } else if (name == "isometric") {
    auto [x, y] = make_isometric_graphs();
    write_object_file(dir / "isometric1.json", x);
    write_object_file(dir / "isometric2.json", y);
  } else if (name == "digits") {
    auto [a, b] = make_shifted_image_pair(12, 3);
    write_object_file(dir / "glyph.json", a);
    write_object_file(dir / "glyph_shifted.json", b);
  } else if (name == "series") {
    auto series = make_two_hump_series(25, 0.3, seed);
    for (std::size_t i = 0; i < series.size(); ++i) {
      write_object_file(dir / ("series" + std::to_string(i) + ".json"), series[i]);
    }
  } else if (name == "loops") {
    for (auto cls : {LoopClass::Circle, LoopClass::Eight}) {
      auto graphs = make_noisy_loop_graphs(cls, 10, seed);
      const std::string prefix = cls == LoopClass::Circle ? "circle" : "eight";
      for (std::size_t i = 0; i < graphs.size(); ++i) {
        write_object_file(dir / (prefix + std::to_string(i) + ".json"),
                          shortest_path_structure(graphs[i]));
      }
    }
  } else {
    throw ParseError("unknown fixture " + name +
                     " (expected trees|isometric|digits|series|loops)");
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Fused Gromov-Wasserstein toolkit"};
  app.require_subcommand(1);

  // distance ---------------------------------------------------------------
  auto* cmd_distance = app.add_subcommand("distance", "distance between two object files");
  std::vector<std::string> distance_files;
  DistanceFlags distance_flags;
  std::string emit_coupling;
  cmd_distance->add_option("files", distance_files, "two object files")
      ->expected(2)
      ->required();
  add_distance_flags(cmd_distance, distance_flags);
  cmd_distance->add_option("--emit-coupling", emit_coupling, "write the coupling as CSV");

  // matrix -----------------------------------------------------------------
  auto* cmd_matrix = app.add_subcommand("matrix", "pairwise distance matrix for a file list");
  std::string matrix_list;
  DistanceFlags matrix_flags;
  int jobs = default_jobs();
  std::string matrix_out;
  cmd_matrix->add_option("list", matrix_list, "text file with one object path per line")
      ->required();
  add_distance_flags(cmd_matrix, matrix_flags);
  cmd_matrix->add_option("--jobs", jobs, "parallel pair workers");
  cmd_matrix->add_option("--out", matrix_out, "output CSV (stdout when omitted)");

  // barycenter ---------------------------------------------------------------
  auto* cmd_bary = app.add_subcommand("barycenter", "FGW barycenter of a file list");
  std::string bary_list, bary_out = "barycenter.json", fixed_structure_path;
  std::vector<double> lambdas_flag;
  Index bary_size = 0;
  DistanceFlags bary_flags;
  bary_flags.q = 2;
  bool recover_graph = false;
  cmd_bary->add_option("list", bary_list, "text file with one object path per line")->required();
  cmd_bary->add_option("--lambdas", lambdas_flag, "weights, one per input (default uniform)")
      ->delimiter(',');
  cmd_bary->add_option("--size", bary_size, "barycenter node count")->required();
  add_distance_flags(cmd_bary, bary_flags, /*with_mode=*/false);
  cmd_bary->add_option("--fixed-structure", fixed_structure_path,
                       "object file whose structure is held fixed");
  cmd_bary->add_option("--out", bary_out, "output object file");
  cmd_bary->add_flag("--recover-graph", recover_graph,
                     "also write a thresholded adjacency matrix CSV");

  // interpolate ---------------------------------------------------------------
  auto* cmd_interp = app.add_subcommand("interpolate", "geodesic points between two objects");
  std::vector<std::string> interp_files;
  DistanceFlags interp_flags;
  std::vector<double> times;
  std::string out_dir = ".";
  cmd_interp->add_option("files", interp_files, "two object files")->expected(2)->required();
  add_distance_flags(cmd_interp, interp_flags, /*with_mode=*/false);
  cmd_interp->add_option("--times", times, "interpolation times in [0,1]")
      ->delimiter(',')
      ->required();
  cmd_interp->add_option("--out-dir", out_dir, "directory for the emitted objects");

  // experiment ---------------------------------------------------------------
  auto* cmd_exp = app.add_subcommand("experiment", "run a named experiment");
  std::string experiment_name;
  std::uint64_t experiment_seed = 0;
  std::string experiment_dir = ".";
  int experiment_jobs = default_jobs();
  cmd_exp->add_option("name", experiment_name,
                      "trees | digits | series-mds | barygraph | sbm | concentration")
      ->required();
  cmd_exp->add_option("--seed", experiment_seed, "random seed");
  cmd_exp->add_option("--out-dir", experiment_dir, "output directory");
  cmd_exp->add_option("--jobs", experiment_jobs, "parallel pair workers");

  // fixtures -----------------------------------------------------------------
  auto* cmd_fix = app.add_subcommand("fixtures", "write fixture object files");
  std::string fixture_name;
  std::string fixture_dir = ".";
  std::uint64_t fixture_seed = 0;
  cmd_fix->add_option("name", fixture_name, "trees | isometric | digits | series | loops")
      ->required();
  cmd_fix->add_option("--out-dir", fixture_dir, "output directory");
  cmd_fix->add_option("--seed", fixture_seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (*cmd_distance) {
      StructuredObject a = load_object(distance_files[0]);
      StructuredObject b = load_object(distance_files[1]);
      DistanceOutput out = run_distance(a, b, distance_flags, !emit_coupling.empty());
      if (!emit_coupling.empty()) write_matrix_csv(emit_coupling, *out.coupling);
      json result;
      result["distance"] = out.distance;
      result["objective"] = out.objective;
      result["iters"] = out.iters;
      std::cout << result.dump() << "\n";
    } else if (*cmd_matrix) {
      std::vector<StructuredObject> objects;
      for (const auto& f : read_file_list(matrix_list)) objects.push_back(load_object(f));
      Matrix d = distance_matrix(objects, matrix_flags, jobs);
      if (matrix_out.empty()) {
        std::cout << matrix_to_csv(d);
      } else {
        write_matrix_csv(matrix_out, d);
      }
    } else if (*cmd_bary) {
      std::vector<StructuredObject> inputs;
      for (const auto& f : read_file_list(bary_list)) inputs.push_back(load_object(f));
      Vector lambdas;
      if (lambdas_flag.empty()) {
        lambdas = Vector::Constant(inputs.size(), 1.0 / inputs.size());
      } else {
        if (lambdas_flag.size() != inputs.size()) {
          throw ParseError("need one lambda per input file");
        }
        lambdas = Eigen::Map<Vector>(lambdas_flag.data(), lambdas_flag.size());
      }
      std::optional<Matrix> fixed_structure;
      if (!fixed_structure_path.empty()) {
        fixed_structure = load_object(fixed_structure_path).structure();
      }
      BarycenterProblem problem{std::move(inputs),
                                std::move(lambdas),
                                bary_size,
                                Histogram::uniform(bary_size),
                                bary_flags.params(),
                                std::move(fixed_structure),
                                std::nullopt};
      BarycenterSolution sol = solve_barycenter(problem);
      write_object_file(bary_out, sol.barycenter);
      json result;
      result["objective"] = sol.objective_trace.back();
      result["outer_iterations"] = sol.objective_trace.size();
      if (recover_graph) {
        AdjacencyRecovery rec = recover_adjacency(sol.barycenter.structure());
        const fs::path adjacency_path = fs::path(bary_out).replace_extension(".adjacency.csv");
        write_matrix_csv(adjacency_path, rec.adjacency.cast<double>());
        result["adjacency"] = adjacency_path.string();
        result["threshold"] = rec.threshold;
        result["residual"] = rec.residual;
      }
      std::cout << result.dump() << "\n";
    } else if (*cmd_interp) {
      StructuredObject a = load_object(interp_files[0]);
      StructuredObject b = load_object(interp_files[1]);
      fs::create_directories(out_dir);
      Geodesic geo(a, b, interp_flags.params());
      json result;
      result["support_size"] = geo.support_size();
      result["endpoint_objective"] = geo.endpoint_objective();
      json emitted = json::array();
      for (double t : times) {
        GeodesicPoint point = geo.at(t);
        char name[64];
        std::snprintf(name, sizeof name, "interp_t%.6g.json", t);
        write_object_file(fs::path(out_dir) / name, point.object);
        emitted.push_back(name);
      }
      result["files"] = emitted;
      std::cout << result.dump() << "\n";
    } else if (*cmd_exp) {
      fs::create_directories(experiment_dir);
      if (experiment_name == "trees") {
        experiment_trees(experiment_dir, experiment_seed);
      } else if (experiment_name == "digits") {
        experiment_digits(experiment_dir, experiment_seed);
      } else if (experiment_name == "series-mds") {
        experiment_series_mds(experiment_dir, experiment_seed, experiment_jobs);
      } else if (experiment_name == "barygraph") {
        experiment_barygraph(experiment_dir, experiment_seed);
      } else if (experiment_name == "sbm") {
        experiment_sbm(experiment_dir, experiment_seed);
      } else if (experiment_name == "concentration") {
        experiment_concentration(experiment_dir, experiment_seed);
      } else {
        std::cerr << "error: unknown experiment " << experiment_name << "\n";
        return 2;
      }
    } else if (*cmd_fix) {
      fs::create_directories(fixture_dir);
      write_fixture(fixture_name, fixture_dir, fixture_seed);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidObject& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
