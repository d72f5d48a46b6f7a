#pragma once

#include <optional>
#include <vector>

#include "fgw/types.hpp"

namespace fgw {

/// Weighted FGW Frechet-mean problem over K structured objects with a fixed
/// target size and histogram. p is fixed to 1; the closed-form block
/// updates require q = 2.
struct BarycenterProblem {
  std::vector<StructuredObject> inputs;
  Vector lambdas;            // K nonnegative weights summing to 1
  Index target_size = 0;     // N
  Histogram target_weights;  // length N
  SolverParams params;       // p must be 1; q must be 2 unless the fallback is on
  std::optional<Matrix> fixed_structure;
  std::optional<Matrix> fixed_features;
  int max_outer_iters = 50;
  double outer_rel_tol = 1e-7;
  // For q != 2 the block updates have no closed form; this enables a
  // gradient-descent inner loop with step halving instead.
  bool numerical_fallback = false;
};

struct BarycenterSolution {
  StructuredObject barycenter;
  std::vector<Coupling> couplings;          // one per input, N x n_k
  std::vector<double> objective_trace;      // per outer iteration, non-increasing
};

/// Block-coordinate descent: couplings by conditional gradient (warm
/// started, so each block never increases the objective), then updates of
/// the structure (off-diagonal entries; the diagonal stays zero) and of the
/// features. For q = 2 the block updates are the exact stationary points;
/// for other q the opt-in numerical fallback takes monotone gradient steps.
BarycenterSolution solve_barycenter(const BarycenterProblem& problem);

enum class ReferenceMetric { ShortestPath };

struct AdjacencyRecovery {
  Eigen::MatrixXi adjacency;
  double threshold = 0.0;
  double residual = 0.0;  // Frobenius norm of C - SP at the chosen threshold
};

/// Threshold sweep over the sorted off-diagonal values of C: edge (i,j) iff
/// C(i,j) <= threshold, scored by the Frobenius distance between C and the
/// unit-weight shortest-path matrix of the thresholded graph (entries of
/// disconnected candidates are capped at N). Ties go to the smaller
/// threshold.
AdjacencyRecovery recover_adjacency(const Matrix& c,
                                    ReferenceMetric metric = ReferenceMetric::ShortestPath);

/// SBM-style cluster readout: input node i is assigned to the barycenter
/// node carrying the largest share of its mass, argmax_j pi(j, i).
std::vector<Index> cluster_assignments(const Coupling& coupling);

}  // namespace fgw
