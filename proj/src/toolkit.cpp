#include "fgw/toolkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <sstream>

#include "fgw/solver.hpp"

namespace fgw {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d4d049bb133111ULL;
  return x ^ (x >> 31);
}

std::vector<std::vector<std::pair<Index, double>>> adjacency(const GraphSpec& g) {
  std::vector<std::vector<std::pair<Index, double>>> adj(g.n);
  for (const auto& [i, j, w] : g.edges) {
    if (i < 0 || j < 0 || i >= g.n || j >= g.n) {
      throw InvalidObject("edge references a node outside [0, n)");
    }
    if (!(w > 0.0)) throw InvalidObject("edge weights must be positive");
    adj[i].emplace_back(j, w);
    adj[j].emplace_back(i, w);
  }
  return adj;
}

bool is_connected(Index n, const std::vector<std::tuple<Index, Index, double>>& edges) {
  if (n == 0) return false;
  std::vector<std::vector<Index>> adj(n);
  for (const auto& [i, j, w] : edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  std::vector<char> seen(n, 0);
  std::queue<Index> q;
  q.push(0);
  seen[0] = 1;
  Index count = 1;
  while (!q.empty()) {
    Index u = q.front();
    q.pop();
    for (Index v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        q.push(v);
      }
    }
  }
  return count == n;
}

GraphSpec unit_graph(Index n, std::vector<std::tuple<Index, Index, double>> edges,
                     Matrix features) {
  return GraphSpec{n, std::move(edges), std::move(features), Histogram::uniform(n)};
}

StructuredObject grid_glyph(int size, const std::vector<std::pair<int, int>>& pixels) {
  const Index n = static_cast<Index>(size) * size;
  Matrix structure(n, n);
  for (int r1 = 0; r1 < size; ++r1) {
    for (int c1 = 0; c1 < size; ++c1) {
      for (int r2 = 0; r2 < size; ++r2) {
        for (int c2 = 0; c2 < size; ++c2) {
          structure(r1 * size + c1, r2 * size + c2) =
              static_cast<double>(std::abs(r1 - r2) + std::abs(c1 - c2));
        }
      }
    }
  }
  Matrix features = Matrix::Zero(n, 1);
  for (const auto& [r, c] : pixels) features(static_cast<Index>(r) * size + c, 0) = 1.0;
  return StructuredObject(std::move(structure), std::move(features), Histogram::uniform(n));
}

}  // namespace

StructuredObject shortest_path_structure(const GraphSpec& g) {
  if (g.n < 1) throw InvalidObject("graph must have at least one node");
  if (g.features.rows() != g.n) throw DimensionMismatch("feature rows != node count");
  auto adj = adjacency(g);

  bool unit = true;
  for (const auto& [i, j, w] : g.edges) unit = unit && (w == 1.0);

  Matrix dist = Matrix::Constant(g.n, g.n, std::numeric_limits<double>::infinity());
  for (Index s = 0; s < g.n; ++s) {
    auto row = dist.row(s);
    row[s] = 0.0;
    if (unit) {
      std::queue<Index> q;
      q.push(s);
      while (!q.empty()) {
        Index u = q.front();
        q.pop();
        for (auto [v, w] : adj[u]) {
          if (std::isinf(row[v])) {
            row[v] = row[u] + 1.0;
            q.push(v);
          }
        }
      }
    } else {
      using Item = std::pair<double, Index>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
      heap.emplace(0.0, s);
      while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > row[u]) continue;
        for (auto [v, w] : adj[u]) {
          if (d + w < row[v]) {
            row[v] = d + w;
            heap.emplace(row[v], v);
          }
        }
      }
    }
  }

  if (!dist.allFinite()) {
    // report the components for the error message
    std::vector<int> comp(g.n, -1);
    int ncomp = 0;
    for (Index s = 0; s < g.n; ++s) {
      if (comp[s] >= 0) continue;
      std::queue<Index> q;
      q.push(s);
      comp[s] = ncomp;
      while (!q.empty()) {
        Index u = q.front();
        q.pop();
        for (auto [v, w] : adj[u]) {
          if (comp[v] < 0) {
            comp[v] = ncomp;
            q.push(v);
          }
        }
      }
      ++ncomp;
    }
    std::ostringstream os;
    os << "graph has " << ncomp << " components: [";
    for (Index i = 0; i < g.n; ++i) os << (i ? " " : "") << comp[i];
    os << "]";
    throw DisconnectedGraph(os.str());
  }

  return StructuredObject(std::move(dist), g.features, g.weights);
}

std::pair<StructuredObject, StructuredObject> make_toy_trees() {
  // Complete binary tree of depth 3: root 0, internals 1..6, leaves 7..14
  // (7,8 under 3; 9,10 under 4; 11,12 under 5; 13,14 under 6).
  std::vector<std::tuple<Index, Index, double>> edges = {
      {0, 1, 1}, {0, 2, 1}, {1, 3, 1}, {1, 4, 1},  {2, 5, 1},  {2, 6, 1},  {3, 7, 1},
      {3, 8, 1}, {4, 9, 1}, {4, 10, 1}, {5, 11, 1}, {5, 12, 1}, {6, 13, 1}, {6, 14, 1}};

  // Internal nodes carry feature 0; leaves are blue (-1) or red (+1).
  // Tree 1 sibling pairs: (B,B),(R,R),(B,B),(R,R); tree 2: (B,R) four times.
  Matrix f1 = Matrix::Zero(15, 1);
  Matrix f2 = Matrix::Zero(15, 1);
  const double leaf1[8] = {-1, -1, +1, +1, -1, -1, +1, +1};
  const double leaf2[8] = {-1, +1, -1, +1, -1, +1, -1, +1};
  for (int k = 0; k < 8; ++k) {
    f1(7 + k, 0) = leaf1[k];
    f2(7 + k, 0) = leaf2[k];
  }
  return {shortest_path_structure(unit_graph(15, edges, std::move(f1))),
          shortest_path_structure(unit_graph(15, edges, std::move(f2)))};
}

std::pair<StructuredObject, StructuredObject> make_isometric_graphs() {
  Matrix f = Matrix::Zero(4, 1);
  std::vector<std::tuple<Index, Index, double>> left = {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {1, 2, 1}};
  std::vector<std::tuple<Index, Index, double>> right = {
      {0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {2, 3, 1}};
  return {shortest_path_structure(unit_graph(4, left, f)),
          shortest_path_structure(unit_graph(4, right, f))};
}

std::pair<StructuredObject, StructuredObject> make_equivalent_objects() {
  auto [x, y] = make_isometric_graphs();
  // Features: one point at the centroid of an equilateral triangle formed by
  // the other three, so that node 0 is equidistant from 1, 2, 3 and those
  // three are mutually equidistant. The structure isometry (1 -> 2 -> 3 -> 1)
  // then extends to an isometry of d_X (+) d, yet no feature-identical
  // coupling is a structure isometry.
  Matrix f(4, 2);
  f.row(0) << 0.0, 0.0;
  f.row(1) << 1.0, 0.0;
  f.row(2) << -0.5, std::sqrt(3.0) / 2.0;
  f.row(3) << -0.5, -std::sqrt(3.0) / 2.0;
  return {StructuredObject(x.structure(), f, x.weights()),
          StructuredObject(y.structure(), f, y.weights())};
}

StructuredObject fuse_features_into_structure(const StructuredObject& obj) {
  const Index n = obj.size();
  Matrix c = obj.structure();
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double d = (obj.features().row(i) - obj.features().row(j)).norm();
      c(i, j) += d;
      c(j, i) = c(i, j);
    }
  }
  return StructuredObject(std::move(c), obj.features(), obj.weights());
}

std::pair<StructuredObject, StructuredObject> make_shifted_image_pair(int size, int shift) {
  if (size < 4) throw InvalidObject("glyph grid must be at least 4x4");
  if (shift < 0 || shift > size - 4) throw InvalidObject("shift moves the glyph off the grid");
  // A small "7"-like glyph anchored at the top-left corner.
  std::vector<std::pair<int, int>> glyph = {{1, 1}, {1, 2}, {1, 3}, {2, 3},
                                            {3, 3}, {3, 2}, {2, 1}, {3, 1}};
  std::vector<std::pair<int, int>> shifted;
  shifted.reserve(glyph.size());
  for (auto [r, c] : glyph) shifted.emplace_back(r, c + shift);
  return {grid_glyph(size, glyph), grid_glyph(size, shifted)};
}

std::vector<GraphSpec> make_noisy_loop_graphs(LoopClass cls, int count, std::uint64_t seed) {
  std::vector<GraphSpec> out;
  out.reserve(count);
  for (int s = 0; s < count; ++s) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(s)));
    std::uniform_int_distribution<int> size_dist(10, 25);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, 0.1);
    const Index n = size_dist(rng);

    std::vector<std::tuple<Index, Index, double>> edges;
    Matrix features(n, 1);

    auto add_cycle_with_chords = [&](const std::vector<Index>& cyc) {
      const Index len = static_cast<Index>(cyc.size());
      for (Index t = 0; t < len; ++t) edges.emplace_back(cyc[t], cyc[(t + 1) % len], 1.0);
      for (Index t = 0; t < len; ++t) {
        if (unif(rng) < 0.1) edges.emplace_back(cyc[t], cyc[(t + 3) % len], 1.0);
      }
    };

    if (cls == LoopClass::Circle) {
      std::vector<Index> cyc(n);
      std::iota(cyc.begin(), cyc.end(), Index{0});
      add_cycle_with_chords(cyc);
      for (Index i = 0; i < n; ++i) {
        features(i, 0) = std::sin(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n)) +
                         noise(rng);
      }
    } else {
      // Two loops sharing node 0; features ramp through negative values on
      // one loop and positive on the other, with the jump at the junction.
      const Index na = n / 2 + 1;         // loop A cycle length
      const Index nb = n - na + 1;        // loop B cycle length
      std::vector<Index> loop_a{0}, loop_b{0};
      for (Index i = 1; i < na; ++i) loop_a.push_back(i);
      for (Index i = na; i < n; ++i) loop_b.push_back(i);
      add_cycle_with_chords(loop_a);
      add_cycle_with_chords(loop_b);
      features(0, 0) = noise(rng);
      for (Index t = 1; t < na; ++t) {
        const double frac = static_cast<double>(t - 1) / std::max<double>(1, na - 2);
        features(loop_a[t], 0) = -1.0 + 0.8 * frac + noise(rng);
      }
      for (Index t = 1; t < nb; ++t) {
        const double frac = static_cast<double>(t - 1) / std::max<double>(1, nb - 2);
        features(loop_b[t], 0) = 1.0 - 0.8 * frac + noise(rng);
      }
    }

    out.push_back(unit_graph(n, std::move(edges), std::move(features)));
  }
  return out;
}

GraphSpec make_sbm(const std::vector<Index>& blocks, double p_in, double p_out,
                   const std::vector<std::vector<double>>& feature_means, std::uint64_t seed) {
  if (blocks.size() != feature_means.size()) {
    throw DimensionMismatch("one feature mean list per block is required");
  }
  Index n = 0;
  for (Index b : blocks) n += b;
  std::vector<int> block_of(n);
  std::vector<Index> offset(blocks.size());
  {
    Index pos = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      offset[b] = pos;
      for (Index k = 0; k < blocks[b]; ++k) block_of[pos++] = static_cast<int>(b);
    }
  }

  constexpr int kMaxResamples = 64;
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(attempt)));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, 0.1);

    std::vector<std::tuple<Index, Index, double>> edges;
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        const double p = block_of[i] == block_of[j] ? p_in : p_out;
        if (unif(rng) < p) edges.emplace_back(i, j, 1.0);
      }
    }
    if (!is_connected(n, edges)) continue;

    Matrix features(n, 1);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const auto& modes = feature_means[b];
      if (modes.empty()) throw InvalidObject("each block needs at least one feature mode");
      for (Index k = 0; k < blocks[b]; ++k) {
        const std::size_t mode = (modes.size() == 1) ? 0 : (k < blocks[b] / 2 ? 0 : 1);
        features(offset[b] + k, 0) = modes[std::min(mode, modes.size() - 1)] + noise(rng);
      }
    }
    return unit_graph(n, std::move(edges), std::move(features));
  }
  throw DisconnectedGraph("could not sample a connected SBM graph in " +
                          std::to_string(kMaxResamples) + " attempts");
}

std::vector<StructuredObject> make_two_hump_series(int count, double class_gap,
                                                   std::uint64_t seed) {
  constexpr Index kLength = 24;
  constexpr double kWidth = 0.05;
  Vector timestamps(kLength);
  for (Index i = 0; i < kLength; ++i) {
    timestamps[i] = static_cast<double>(i) / static_cast<double>(kLength - 1);
  }
  Matrix structure(kLength, kLength);
  for (Index i = 0; i < kLength; ++i) {
    for (Index j = 0; j < kLength; ++j) structure(i, j) = std::abs(timestamps[i] - timestamps[j]);
  }

  std::vector<StructuredObject> out;
  out.reserve(count);
  for (int s = 0; s < count; ++s) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(s)));
    std::uniform_real_distribution<double> height(0.0, 1.0);
    const int cls = s % 2;
    const double c1 = 0.2 + (cls ? class_gap : 0.0);
    const double c2 = 0.6 + (cls ? class_gap : 0.0);
    const double h1 = height(rng), h2 = height(rng);
    Matrix features(kLength, 1);
    for (Index i = 0; i < kLength; ++i) {
      const double t = timestamps[i];
      features(i, 0) = h1 * std::exp(-0.5 * std::pow((t - c1) / kWidth, 2)) +
                       h2 * std::exp(-0.5 * std::pow((t - c2) / kWidth, 2));
    }
    out.emplace_back(structure, std::move(features), Histogram::uniform(kLength));
  }
  return out;
}

Matrix mds_embed(const Matrix& distances, int dim) {
  const Index n = distances.rows();
  if (distances.cols() != n) throw NonSymmetricInput("distance matrix is not square");
  if ((distances - distances.transpose()).cwiseAbs().maxCoeff() >
      1e-9 * std::max(1.0, distances.cwiseAbs().maxCoeff())) {
    throw NonSymmetricInput("distance matrix is not symmetric");
  }
  if (dim < 1) throw InvalidObject("embedding dimension must be >= 1");

  Matrix sq = distances.array().square().matrix();
  Matrix j = Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / static_cast<double>(n));
  Matrix b = -0.5 * j * sq * j;
  b = 0.5 * (b + b.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> eig(b);
  Matrix coords = Matrix::Zero(n, dim);
  for (int k = 0; k < dim; ++k) {
    const Index idx = n - 1 - k;  // eigenvalues come back ascending
    if (idx < 0) break;
    const double lambda = eig.eigenvalues()[idx];
    if (lambda <= 0.0) continue;
    coords.col(k) = eig.eigenvectors().col(idx) * std::sqrt(lambda);
    for (Index i = 0; i < n; ++i) {
      if (coords(i, k) != 0.0) {
        if (coords(i, k) < 0.0) coords.col(k) = -coords.col(k);
        break;
      }
    }
  }
  return coords;
}

double silhouette_score(const Matrix& points, const std::vector<int>& labels) {
  const Index n = points.rows();
  if (static_cast<Index>(labels.size()) != n) throw DimensionMismatch("one label per point");
  std::map<int, std::vector<Index>> groups;
  for (Index i = 0; i < n; ++i) groups[labels[i]].push_back(i);
  if (groups.size() < 2) throw InvalidObject("silhouette needs at least two clusters");

  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    double a = 0.0;
    double b = std::numeric_limits<double>::infinity();
    for (const auto& [lab, members] : groups) {
      double mean = 0.0;
      int cnt = 0;
      for (Index j : members) {
        if (j == i) continue;
        mean += (points.row(i) - points.row(j)).norm();
        ++cnt;
      }
      if (cnt == 0) continue;
      mean /= cnt;
      if (lab == labels[i]) {
        a = mean;
      } else {
        b = std::min(b, mean);
      }
    }
    const double denom = std::max(a, b);
    total += denom > 0.0 ? (b - a) / denom : 0.0;
  }
  return total / static_cast<double>(n);
}

double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) throw DimensionMismatch("labelings differ in length");
  const auto n = a.size();
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> ca, cb;
  for (std::size_t i = 0; i < n; ++i) {
    joint[{a[i], b[i]}] += 1.0;
    ca[a[i]] += 1.0;
    cb[b[i]] += 1.0;
  }
  auto choose2 = [](double x) { return x * (x - 1.0) / 2.0; };
  double sum_joint = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (const auto& [k, v] : joint) sum_joint += choose2(v);
  for (const auto& [k, v] : ca) sum_a += choose2(v);
  for (const auto& [k, v] : cb) sum_b += choose2(v);
  const double total = choose2(static_cast<double>(n));
  const double expected = sum_a * sum_b / total;
  const double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return 1.0;
  return (sum_joint - expected) / (max_index - expected);
}

namespace {

StructuredObject sample_target(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix pos(n, 2);
  for (Index i = 0; i < n; ++i) {
    pos(i, 0) = unif(rng);
    pos(i, 1) = unif(rng);
  }
  Matrix structure(n, n);
  for (Index i = 0; i < n; ++i) {
    structure(i, i) = 0.0;
    for (Index j = i + 1; j < n; ++j) {
      structure(i, j) = (pos.row(i) - pos.row(j)).norm();
      structure(j, i) = structure(i, j);
    }
  }
  Matrix features(n, 1);
  for (Index i = 0; i < n; ++i) {
    features(i, 0) = std::sin(2.0 * kPi * pos(i, 0)) * std::cos(2.0 * kPi * pos(i, 1));
  }
  return StructuredObject(std::move(structure), std::move(features), Histogram::uniform(n));
}

}  // namespace

ConcentrationResult concentration_experiment(const ConcentrationTarget& target,
                                             const std::vector<int>& sizes, int trials,
                                             std::uint64_t seed) {
  if (sizes.empty() || trials < 1) throw InvalidObject("need at least one size and one trial");
  StructuredObject reference = sample_target(target.reference_size, mix_seed(seed, 0xFEEDULL));

  SolverParams params;
  params.alpha = target.alpha;
  params.p = target.p;
  params.q = target.q;
  params.restarts = target.restarts;
  params.max_iters = target.max_iters;
  params.rel_tol = target.rel_tol;

  ConcentrationResult res;
  res.sizes = sizes;
  res.mean_distance.reserve(sizes.size());
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    double mean = 0.0;
    for (int t = 0; t < trials; ++t) {
      StructuredObject empirical =
          sample_target(sizes[si], mix_seed(seed, 1000 + 131 * si + static_cast<std::uint64_t>(t)));
      params.seed = mix_seed(seed, 7000 + 131 * si + static_cast<std::uint64_t>(t));
      mean += solve_fgw(empirical, reference, params).value;
    }
    res.mean_distance.push_back(mean / trials);
  }

  // least-squares slope of log(mean) against log(n)
  const auto k = sizes.size();
  double sx = 0, sy = 0;
  std::vector<double> xs(k), ys(k);
  for (std::size_t i = 0; i < k; ++i) {
    xs[i] = std::log(static_cast<double>(sizes[i]));
    ys[i] = std::log(std::max(res.mean_distance[i], 1e-300));
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / k, my = sy / k;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  res.slope = sxy / sxx;
  double ss_res = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double fit = my + res.slope * (xs[i] - mx);
    ss_res += (ys[i] - fit) * (ys[i] - fit);
  }
  res.slope_stderr = k > 2 ? std::sqrt(ss_res / (k - 2) / sxx) : 0.0;
  return res;
}

}  // namespace fgw
