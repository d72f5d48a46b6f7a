#pragma once

#include <cstdint>
#include <tuple>
#include <utility>
#include <vector>

#include "fgw/types.hpp"

namespace fgw {

/// A weighted graph with node features, the raw form of most fixtures.
struct GraphSpec {
  Index n = 0;
  std::vector<std::tuple<Index, Index, double>> edges;  // (i, j, weight)
  Matrix features;                                      // n x d
  Histogram weights;
};

/// Structured object whose structure matrix is the weighted shortest-path
/// distance of the graph (BFS for unit weights, Dijkstra otherwise).
StructuredObject shortest_path_structure(const GraphSpec& g);

/// The two 15-node binary trees with +-1 leaf features whose leaf color
/// patterns differ while the color multisets and the topologies match:
/// W = 0 and GW = 0 on the pair, FGW at mid alpha stays positive.
std::pair<StructuredObject, StructuredObject> make_toy_trees();

/// The two isometric (but differently wired) 4-node unit-weight graphs;
/// their GW distance is zero.
std::pair<StructuredObject, StructuredObject> make_isometric_graphs();

/// The isometric 4-node pair with distinct per-node features placed so the
/// product metrics d_X (+) d are isomorphic while the objects are not
/// equivalent: GW on the fused structures vanishes, FGW does not.
std::pair<StructuredObject, StructuredObject> make_equivalent_objects();

/// Replaces the structure by C(i,k) + ||a_i - a_k|| (the d_X (+) d product
/// metric on the object's own support); features and weights are kept.
StructuredObject fuse_features_into_structure(const StructuredObject& obj);

/// Binary glyph on a size x size pixel grid and its copy shifted by
/// `shift` pixels: gray-level features, city-block structure over the full
/// grid, uniform weights. W and GW vanish on the pair, FGW does not.
std::pair<StructuredObject, StructuredObject> make_shifted_image_pair(int size, int shift);

enum class LoopClass { Circle, Eight };

/// Noisy loop graphs: node count uniform in [10, 25], sine (circle) or
/// two-ramp (eight, sign jump at the shared node) 1D features with Gaussian
/// noise (sigma 0.1), random third-neighbor chords (prob 0.1).
std::vector<GraphSpec> make_noisy_loop_graphs(LoopClass cls, int count, std::uint64_t seed);

/// Stochastic block model with unit edge weights and per-block 1D feature
/// modes (one or two means per block, Gaussian noise sigma 0.1). Resampled
/// until connected; throws DisconnectedGraph after too many attempts.
GraphSpec make_sbm(const std::vector<Index>& blocks, double p_in, double p_out,
                   const std::vector<std::vector<double>>& feature_means, std::uint64_t seed);

/// Two-hump time series on uniform timestamps in [0, 1] with uniform random
/// hump heights; series i belongs to class i % 2 and class 1 is the class 0
/// layout translated by class_gap. Structure = |t_i - t_j|.
std::vector<StructuredObject> make_two_hump_series(int count, double class_gap,
                                                   std::uint64_t seed);

/// Classical (Torgerson) MDS: double-center -1/2 J (D.^2) J, top `dim`
/// eigenpairs, coordinates scaled by sqrt of the nonnegative eigenvalues.
/// Column signs are fixed so the first nonzero coordinate of each axis is
/// positive.
Matrix mds_embed(const Matrix& distances, int dim);

/// Mean silhouette coefficient of labeled points under Euclidean distance.
double silhouette_score(const Matrix& points, const std::vector<int>& labels);

/// Adjusted Rand index between two labelings of the same items.
double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b);

/// Continuous target sampled by the concentration experiment: uniform
/// positions on [0, 1]^2 with Euclidean structure distances and a smooth 1D
/// feature of the position. The solver knobs keep the per-sample FGW solves
/// cheap; the experiment only needs a stable upper-bound curve.
struct ConcentrationTarget {
  Index reference_size = 512;
  double alpha = 0.5;
  int p = 1;
  int q = 1;
  int restarts = 0;
  int max_iters = 200;
  double rel_tol = 1e-6;
};

struct ConcentrationResult {
  std::vector<int> sizes;
  std::vector<double> mean_distance;
  double slope = 0.0;         // least-squares slope of log(mean) vs log(n)
  double slope_stderr = 0.0;  // standard error of the slope
};

/// Draws `trials` empirical objects of each size from the target, computes
/// their FGW distance to a fixed fine reference discretization, and fits
/// the log-log decay rate of the mean distance.
ConcentrationResult concentration_experiment(const ConcentrationTarget& target,
                                             const std::vector<int>& sizes, int trials,
                                             std::uint64_t seed);

}  // namespace fgw
