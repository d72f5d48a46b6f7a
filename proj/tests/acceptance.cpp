// Acceptance suite. Each criterion runs as its own function and prints one
// PASS/FAIL line; run with a criterion number to execute just that one.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fgw/barycenter.hpp"
#include "fgw/geodesic.hpp"
#include "fgw/linear_ot.hpp"
#include "fgw/solver.hpp"
#include "fgw/toolkit.hpp"
#include "oracles.hpp"

using namespace fgw;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& msg) {
    if (!cond && ok) {
      ok = false;
      detail = msg;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

SolverParams make_params(double alpha, int p, int q, int restarts, std::uint64_t seed = 0) {
  SolverParams params;
  params.alpha = alpha;
  params.p = p;
  params.q = q;
  params.restarts = restarts;
  params.seed = seed;
  return params;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// --- criterion 1: toy trees sign pattern -----------------------------------
Check criterion_trees() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  auto [t1, t2] = make_toy_trees();

  const double w = wasserstein_distance(t1, t2, 1);
  c.require(w <= 1e-9, "W = " + fmt(w) + " > 1e-9");

  FgwSolution gw = solve_fgw(t1, t2, make_params(1.0, 1, 1, 5));
  c.require(gw.value <= 1e-7, "GW = " + fmt(gw.value) + " > 1e-7");

  FgwSolution fgw = solve_fgw(t1, t2, make_params(0.5, 1, 1, 5));
  c.require(fgw.value > 1e-3, "FGW = " + fmt(fgw.value) + " <= 1e-3");

  const double elapsed = seconds_since(start);
  c.require(elapsed < 5.0, "runtime " + fmt(elapsed) + "s >= 5s");
  return c;
}

// --- criterion 2: shifted synthetic glyph -----------------------------------
Check criterion_shifted_image() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  auto [img1, img2] = make_shifted_image_pair(12, 3);

  const double w = wasserstein_distance(img1, img2, 1);
  c.require(w <= 1e-9, "W = " + fmt(w) + " > 1e-9");

  FgwSolution gw = solve_fgw(img1, img2, make_params(1.0, 1, 1, 0));
  c.require(gw.value <= 1e-6, "GW = " + fmt(gw.value) + " > 1e-6");

  FgwSolution fgw = solve_fgw(img1, img2, make_params(0.1, 1, 2, 2));
  c.require(fgw.value > 1e-4, "FGW = " + fmt(fgw.value) + " <= 1e-4");

  const double elapsed = seconds_since(start);
  c.require(elapsed < 30.0, "runtime " + fmt(elapsed) + "s >= 30s");
  return c;
}

// --- criterion 3: isometric graphs -------------------------------------------
Check criterion_isometric() {
  Check c;
  auto [x, y] = make_isometric_graphs();
  FgwSolution gw = solve_fgw(x, y, make_params(1.0, 1, 1, 64));
  c.require(gw.value <= 1e-8, "GW = " + fmt(gw.value) + " > 1e-8");
  return c;
}

// --- criterion 4: comparison bounds ------------------------------------------
Check criterion_bounds() {
  Check c;
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> size(2, 8);
  for (int trial = 0; trial < 200 && c.ok; ++trial) {
    auto x = oracle::random_object(size(rng), 2, 10000 + trial);
    auto y = oracle::random_object(size(rng), 2, 20000 + trial);
    const double alpha = (trial % 9 + 1) / 10.0;
    const int p = 1 + trial % 2;
    const int q = 1 + (trial / 2) % 2;
    FgwSolution sol = solve_fgw(x, y, make_params(alpha, p, q, 5, trial));

    // FGW objective vs the exact Wasserstein lower bound
    Matrix mpq = feature_cost_matrix(x, y, p * q);
    const double w_cost = solve_linear_ot(mpq, x.weights(), y.weights()).cost;
    const double w = std::pow(std::max(w_cost, 0.0), 1.0 / (p * q));
    c.require(sol.objective >= std::pow(1.0 - alpha, p) * std::pow(w, p * q) - 1e-8,
              "objective undercuts the (1-alpha)^p W^pq bound at trial " + std::to_string(trial));
    if (p == 1) {
      c.require(sol.objective >= (1.0 - alpha) * std::pow(w, q) - 1e-8,
                "objective undercuts (1-alpha) W^q at trial " + std::to_string(trial));
    }

    // term-wise bounds at the returned coupling (p = 1 decomposition scale)
    if (p == 1) {
      const Matrix& pi = sol.coupling.matrix();
      const double h_term = (feature_cost_matrix(x, y, q).array() * pi.array()).sum();
      const double j_term = (oracle::loss_apply_brute(x.structure(), y.structure(), pi, q).array() *
                             pi.array())
                                .sum();
      c.require(sol.objective >= alpha * j_term - 1e-12,
                "objective < alpha J at trial " + std::to_string(trial));
      c.require(sol.objective >= (1.0 - alpha) * h_term - 1e-12,
                "objective < (1-alpha) H at trial " + std::to_string(trial));
    }
  }
  return c;
}

// --- criterion 5: interpolation endpoints ------------------------------------
Check criterion_interpolation() {
  Check c;
  std::mt19937_64 rng(51);
  std::uniform_int_distribution<int> size(2, 7);
  for (int trial = 0; trial < 50 && c.ok; ++trial) {
    auto x = oracle::random_object(size(rng), 2, 30000 + trial);
    auto y = oracle::random_object(size(rng), 2, 40000 + trial);
    const int p = 1 + trial % 2;
    const int q = 1 + (trial / 2) % 2;

    FgwSolution at0 = solve_fgw(x, y, make_params(0.0, p, q, 3, trial));
    Matrix mpq = feature_cost_matrix(x, y, p * q);
    const double w_cost = solve_linear_ot(mpq, x.weights(), y.weights()).cost;
    const double w = std::pow(std::max(w_cost, 0.0), 1.0 / (p * q));
    c.require(std::abs(at0.value - std::pow(w, q)) <= 1e-9 * std::max(1.0, std::pow(w, q)),
              "FGW(0) != W^q at trial " + std::to_string(trial));

    // the alpha = 1 path and gw_distance must agree when run with the same
    // solver configuration (restarts 5, seed 0 are the library defaults)
    FgwSolution at1 = solve_fgw(x, y, make_params(1.0, p, q, 5, 0));
    const double gw_objective = std::pow(gw_distance(x, y, p, q), p);
    c.require(std::abs(at1.objective - gw_objective) <= 1e-9 * std::max(1.0, gw_objective),
              "FGW(1) != GW objective at trial " + std::to_string(trial));
  }

  // near-endpoint approach on fixtures with nonzero distances; structure
  // scaled so the W and GW magnitudes are comparable and the 1e-3 relative
  // band is meaningful on both sides
  for (int trial = 0; trial < 5 && c.ok; ++trial) {
    auto x0 = oracle::random_object(5, 2, 50000 + trial);
    auto y0 = oracle::random_object(6, 2, 60000 + trial);
    StructuredObject x(x0.structure() * 4.0, x0.features(), x0.weights());
    StructuredObject y(y0.structure() * 4.0, y0.features(), y0.weights());
    const int p = 1, q = 2;
    FgwSolution at0 = solve_fgw(x, y, make_params(0.0, p, q, 20, trial));
    FgwSolution near0 = solve_fgw(x, y, make_params(1e-4, p, q, 20, trial));
    c.require(std::abs(near0.value - at0.value) <= 1e-3 * std::max(at0.value, 1e-12),
              "FGW(1e-4) is not within 1e-3 of FGW(0) at trial " + std::to_string(trial));

    FgwSolution at1 = solve_fgw(x, y, make_params(1.0, p, q, 20, trial));
    FgwSolution near1 = solve_fgw(x, y, make_params(1.0 - 1e-4, p, q, 20, trial));
    c.require(std::abs(near1.value - at1.value) <= 1e-3 * std::max(at1.value, 1e-12),
              "FGW(1-1e-4) is not within 1e-3 of FGW(1) at trial " + std::to_string(trial));
  }
  return c;
}

// --- criterion 6: concavity in alpha ------------------------------------------
Check criterion_concavity() {
  Check c;
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<int> size(3, 6);
  for (int pair = 0; pair < 20 && c.ok; ++pair) {
    auto x = oracle::random_object(size(rng), 2, 70000 + pair);
    auto y = oracle::random_object(size(rng), 2, 80000 + pair);
    std::vector<double> values;
    for (int g = 0; g <= 10; ++g) {
      values.push_back(solve_fgw(x, y, make_params(g / 10.0, 1, 2, 20, pair)).objective);
    }
    for (int g = 1; g < 10; ++g) {
      const double midpoint_gap = values[g] - 0.5 * (values[g - 1] + values[g + 1]);
      c.require(midpoint_gap >= -1e-6,
                "concavity violated by " + fmt(-midpoint_gap) + " at pair " +
                    std::to_string(pair) + ", alpha = " + fmt(g / 10.0));
    }
  }
  return c;
}

// --- criterion 7: triangle inequality statistics ------------------------------
Check criterion_triangle() {
  Check c;
  std::mt19937_64 rng(71);
  std::uniform_int_distribution<int> size(2, 5);
  for (int q : {1, 2}) {
    const double factor = q == 1 ? 1.0 : 2.0;  // 2^(q-1)
    int good = 0;
    const int total = 1000;
    for (int triple = 0; triple < total; ++triple) {
      auto x = oracle::random_object(size(rng), 1, 100000 + triple + q * 7000);
      auto y = oracle::random_object(size(rng), 1, 200000 + triple + q * 7000);
      auto z = oracle::random_object(size(rng), 1, 300000 + triple + q * 7000);
      SolverParams params = make_params(0.5, 1, q, 20, triple);
      const double dxy = solve_fgw(x, y, params).value;
      const double dyz = solve_fgw(y, z, params).value;
      const double dxz = solve_fgw(x, z, params).value;
      if (dxz <= factor * (dxy + dyz) + 1e-6) ++good;
    }
    c.require(good >= 990,
              "q=" + std::to_string(q) + ": only " + std::to_string(good) + "/1000 triples hold");
  }
  return c;
}

// --- criterion 8: parameterization equivalence --------------------------------
Check criterion_reparameterization() {
  Check c;
  for (double alpha_tilde : {0.5, 1.0, 4.0}) {
    for (int trial = 0; trial < 5 && c.ok; ++trial) {
      auto x = oracle::random_object(4, 2, 400000 + trial);
      auto y = oracle::random_object(5, 2, 500000 + trial);
      const double alpha = reparameterize_alpha(alpha_tilde);
      const int p = 1, q = 2;
      FgwSolution sol = solve_fgw(x, y, make_params(alpha, p, q, 5, trial));
      Matrix mq = feature_cost_matrix(x, y, q);
      const double additive = oracle::fgw_objective_additive_brute(
          mq, x.structure(), y.structure(), sol.coupling.matrix(), alpha_tilde, p, q);
      const double convex = oracle::fgw_objective_brute(mq, x.structure(), y.structure(),
                                                        sol.coupling.matrix(), alpha, p, q);
      const double expected = convex / std::pow(1.0 - alpha, p);
      c.require(std::abs(additive - expected) <= 1e-9 * std::max(1.0, std::abs(expected)),
                "additive/convex objectives disagree at alpha~ = " + fmt(alpha_tilde));
    }
  }
  return c;
}

// --- criterion 9: constant-speed geodesics ------------------------------------
Check criterion_geodesic() {
  Check c;
  std::mt19937_64 rng(91);
  std::uniform_int_distribution<int> size(3, 6);
  const double grid[5] = {0.0, 0.25, 0.5, 0.75, 1.0};
  for (int pair = 0; pair < 20 && c.ok; ++pair) {
    auto x = oracle::random_object(size(rng), 2, 600000 + pair, true);
    auto y = oracle::random_object(size(rng), 2, 700000 + pair, true);
    SolverParams params = make_params(0.5, 1, (pair % 2) ? 1 : 2, 20, pair);
    Geodesic geo(x, y, params);
    const double total = geo.endpoint_objective();

    GeodesicPoint points[5] = {geo.at(0.0), geo.at(0.25), geo.at(0.5), geo.at(0.75), geo.at(1.0)};
    for (int a = 0; a < 5 && c.ok; ++a) {
      for (int b = a + 1; b < 5; ++b) {
        const double seg =
            solve_fgw(points[a].object, points[b].object, params).objective;
        c.require(seg <= (grid[b] - grid[a]) * total + 1e-6,
                  "pair " + std::to_string(pair) + ": FGW(mu_" + fmt(grid[a]) + ", mu_" +
                      fmt(grid[b]) + ") = " + fmt(seg) + " exceeds |t-s| d = " +
                      fmt((grid[b] - grid[a]) * total));
      }
    }

    const double to_src = solve_fgw(points[0].object, x, params).value;
    const double to_dst = solve_fgw(points[4].object, y, params).value;
    c.require(to_src < 1e-7, "pair " + std::to_string(pair) + ": endpoint-to-src " + fmt(to_src));
    c.require(to_dst < 1e-7, "pair " + std::to_string(pair) + ": endpoint-to-dst " + fmt(to_dst));
  }
  return c;
}

// --- criterion 10: barycenters -------------------------------------------------
Check criterion_barycenter() {
  Check c;
  const auto start = std::chrono::steady_clock::now();

  // K = 1 round trip
  {
    auto x = oracle::random_object(6, 2, 801, true);
    Vector lambdas(1);
    lambdas << 1.0;
    BarycenterProblem problem{{x},          lambdas,      x.size(), x.weights(),
                              make_params(0.5, 1, 2, 3, 1), std::nullopt, std::nullopt};
    BarycenterSolution sol = solve_barycenter(problem);
    c.require(sol.objective_trace.back() < 1e-6,
              "K=1 round trip objective " + fmt(sol.objective_trace.back()));
    for (std::size_t i = 1; i < sol.objective_trace.size(); ++i) {
      c.require(sol.objective_trace[i] <= sol.objective_trace[i - 1] +
                                              1e-10 * std::max(1.0, sol.objective_trace[i - 1]),
                "K=1 trace increased");
    }
  }

  // SBM clustering via coupling argmax, 5 seeds
  for (std::uint64_t seed = 1; seed <= 5 && c.ok; ++seed) {
    auto g = make_sbm({6, 6, 6, 6}, 0.85, 0.05, {{-1.5}, {-0.5}, {0.5}, {1.5}}, seed);
    StructuredObject sbm = shortest_path_structure(g);
    std::vector<int> truth(24);
    for (int i = 0; i < 24; ++i) truth[i] = i / 6;

    Vector lambdas(1);
    lambdas << 1.0;
    BarycenterProblem problem{{sbm},        lambdas,      4, Histogram::uniform(4),
                              make_params(0.5, 1, 2, 5, seed), std::nullopt, std::nullopt};
    problem.max_outer_iters = 30;
    BarycenterSolution sol = solve_barycenter(problem);
    for (std::size_t i = 1; i < sol.objective_trace.size(); ++i) {
      c.require(sol.objective_trace[i] <= sol.objective_trace[i - 1] +
                                              1e-10 * std::max(1.0, sol.objective_trace[i - 1]),
                "SBM trace increased at seed " + std::to_string(seed));
    }
    auto assignment = cluster_assignments(sol.couplings[0]);
    std::vector<int> labels(assignment.begin(), assignment.end());
    const double ari = adjusted_rand_index(truth, labels);
    c.require(ari >= 0.8, "SBM seed " + std::to_string(seed) + ": ARI = " + fmt(ari));
  }

  // circle-class barycenter recovers a cycle
  if (c.ok) {
    auto graphs = make_noisy_loop_graphs(LoopClass::Circle, 10, 7);
    std::vector<StructuredObject> inputs;
    for (const auto& g : graphs) inputs.push_back(shortest_path_structure(g));
    Vector lambdas = Vector::Constant(10, 0.1);
    BarycenterProblem problem{std::move(inputs), lambdas,      15, Histogram::uniform(15),
                              make_params(0.95, 1, 2, 3, 3),   std::nullopt, std::nullopt};
    problem.max_outer_iters = 30;
    BarycenterSolution sol = solve_barycenter(problem);
    for (std::size_t i = 1; i < sol.objective_trace.size(); ++i) {
      c.require(sol.objective_trace[i] <= sol.objective_trace[i - 1] +
                                              1e-10 * std::max(1.0, sol.objective_trace[i - 1]),
                "circle trace increased");
    }
    AdjacencyRecovery rec = recover_adjacency(sol.barycenter.structure());
    int degree_two = 0;
    for (Index i = 0; i < 15; ++i) degree_two += rec.adjacency.row(i).sum() == 2 ? 1 : 0;
    c.require(degree_two >= 13,
              "only " + std::to_string(degree_two) + "/15 nodes have degree 2");
  }

  const double elapsed = seconds_since(start);
  c.require(elapsed < 180.0, "runtime " + fmt(elapsed) + "s >= 180s");
  return c;
}

// --- criterion 11: concentration rate ------------------------------------------
Check criterion_concentration() {
  Check c;
  ConcentrationTarget target;  // reference size 512
  ConcentrationResult res = concentration_experiment(target, {8, 16, 32, 64, 128}, 20, 2024);
  c.require(res.slope < 0.0, "slope " + fmt(res.slope) + " is not negative");
  const double magnitude = -res.slope;
  c.require(magnitude >= 1.0 / 8.0 && magnitude <= 1.0,
            "|slope| = " + fmt(magnitude) + " outside [1/8, 1]");
  return c;
}

// --- criterion 12: loss-tensor fast path ----------------------------------------
Check criterion_loss_tensor() {
  Check c;
  std::mt19937_64 rng(121);
  std::uniform_int_distribution<int> rows(2, 12), cols(2, 15);
  for (int trial = 0; trial < 100 && c.ok; ++trial) {
    const int n = rows(rng), m = cols(rng);
    auto px = oracle::random_object_parts(n, 1, 900000 + trial);
    auto py = oracle::random_object_parts(m, 1, 910000 + trial);
    Matrix pi = px.weights * py.weights.transpose();

    Matrix fast = LossTensorHandle(px.structure, py.structure, 2, LossTensorMode::SquaredFast)
                      .apply(pi);
    Matrix naive = oracle::loss_apply_brute(px.structure, py.structure, pi, 2);
    const double scale = std::max(1.0, naive.cwiseAbs().maxCoeff());
    c.require((fast - naive).cwiseAbs().maxCoeff() <= 1e-9 * scale,
              "fast path diverges from the oracle at trial " + std::to_string(trial));
  }
  return c;
}

// --- criterion 13: exact-OT duality ----------------------------------------------
Check criterion_exact_ot() {
  Check c;
  std::mt19937_64 rng(131);
  std::uniform_int_distribution<int> size(1, 10);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 500 && c.ok; ++trial) {
    const int n = size(rng), m = size(rng);
    Matrix cost(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) cost(i, j) = unif(rng);
    Vector aw(n), bw(m);
    for (int i = 0; i < n; ++i) aw[i] = 0.05 + unif(rng);
    for (int j = 0; j < m; ++j) bw[j] = 0.05 + unif(rng);
    Histogram a{aw}, b{bw};

    OtSolution sol = solve_linear_ot(cost, a, b);
    const double dual = sol.dual_cost(a, b);
    c.require(std::abs(sol.cost - dual) <= 1e-9 * std::max(1.0, std::abs(sol.cost)),
              "primal/dual gap " + fmt(std::abs(sol.cost - dual)) + " at trial " +
                  std::to_string(trial));
    const int nnz = (sol.coupling.matrix().array() > 0.0).count();
    c.require(nnz <= n + m - 1, "vertex has " + std::to_string(nnz) + " nonzeros at trial " +
                                    std::to_string(trial));
  }
  return c;
}

struct Criterion {
  int number;
  const char* name;
  std::function<Check()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "toy trees: W=0, GW=0, FGW>0", criterion_trees},
      {2, "shifted glyph: W=0, GW=0, FGW>0", criterion_shifted_image},
      {3, "isometric graphs: GW=0", criterion_isometric},
      {4, "comparison bounds", criterion_bounds},
      {5, "interpolation endpoints", criterion_interpolation},
      {6, "concavity in alpha", criterion_concavity},
      {7, "triangle inequality statistics", criterion_triangle},
      {8, "parameterization equivalence", criterion_reparameterization},
      {9, "constant-speed geodesics", criterion_geodesic},
      {10, "barycenters", criterion_barycenter},
      {11, "concentration rate", criterion_concentration},
      {12, "loss-tensor fast path", criterion_loss_tensor},
      {13, "exact OT duality", criterion_exact_ot},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);

  int failures = 0;
  for (const auto& criterion : criteria()) {
    if (only != 0 && criterion.number != only) continue;
    Check result;
    try {
      result = criterion.run();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s criterion %2d: %s%s%s\n", result.ok ? "PASS" : "FAIL", criterion.number,
                criterion.name, result.ok ? "" : " -- ", result.detail.c_str());
    std::fflush(stdout);
    failures += result.ok ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
