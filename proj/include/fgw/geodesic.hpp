#pragma once

#include <vector>

#include "fgw/solver.hpp"
#include "fgw/types.hpp"

namespace fgw {

/// Structured object on the interpolation path at time t: support = the
/// nonzeros of the optimal coupling, features (1-t) a_i + t b_j, structure
/// (1-t) C1 (+) t C2 restricted to the support, weights = coupling masses.
struct GeodesicPoint {
  double t = 0.0;
  StructuredObject object;
};

/// Constant-speed geodesic between two structured objects. The optimal FGW
/// coupling is computed once at construction; points at any t are then pure
/// functions of it and may be evaluated concurrently.
class Geodesic {
 public:
  Geodesic(StructuredObject src, StructuredObject dst, const SolverParams& params);

  GeodesicPoint at(double t) const;

  const Coupling& coupling() const { return coupling_; }
  /// FGW objective between the endpoints at the computed coupling.
  double endpoint_objective() const { return endpoint_objective_; }
  Index support_size() const { return static_cast<Index>(support_.size()); }

  /// Feasible couplings that certify the geodesic identities; useful as
  /// solver warm starts. point_to_source collapses support pair (i,j) onto
  /// source node i; point_to_point is the identity on the shared support.
  Matrix point_to_source_coupling() const;
  Matrix point_to_target_coupling() const;
  Matrix point_to_point_coupling() const;

 private:
  StructuredObject src_;
  StructuredObject dst_;
  Coupling coupling_;
  double endpoint_objective_ = 0.0;
  std::vector<std::pair<Index, Index>> support_;  // (i, j) with mass > 1e-12
  Vector support_weights_;                        // renormalized masses
};

}  // namespace fgw
