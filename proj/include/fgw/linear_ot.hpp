#pragma once

#include "fgw/types.hpp"

namespace fgw {

/// Exact solution of min_{pi in Pi(a,b)} <pi, M>. The coupling is a vertex
/// of the transport polytope (at most n+m-1 nonzeros) and the dual
/// potentials certify optimality: cost == dual_cost up to rounding.
struct OtSolution {
  Coupling coupling;
  double cost = 0.0;
  int iterations = 0;
  Vector potential_source;  // u, one per row
  Vector potential_target;  // v, one per column

  double dual_cost(const Histogram& a, const Histogram& b) const {
    return a.weights().dot(potential_source) + b.weights().dot(potential_target);
  }
};

/// Exact linear OT by transportation simplex on a spanning-tree basis.
/// Instances own scratch memory: one solve at a time per instance,
/// independent instances may run concurrently.
class LinearOtSolver {
 public:
  OtSolution solve(const Matrix& cost, const Histogram& a, const Histogram& b);

 private:
  // scratch, sized per solve
  std::vector<double> flow_;
  std::vector<int> arc_row_, arc_col_;
  std::vector<std::vector<int>> node_arcs_;
  std::vector<int> parent_arc_, bfs_queue_;
  std::vector<signed char> visited_;
  Vector u_, v_;
};

/// One-shot convenience wrapper around LinearOtSolver.
OtSolution solve_linear_ot(const Matrix& cost, const Histogram& a, const Histogram& b);

/// p-Wasserstein distance between the feature marginals of two objects:
/// (min <pi, M>)^(1/p) with M(i,j) = ||a_i - b_j||^p.
double wasserstein_distance(const StructuredObject& src, const StructuredObject& dst, int p);

}  // namespace fgw
