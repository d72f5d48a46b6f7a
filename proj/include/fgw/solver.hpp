#pragma once

#include <span>
#include <vector>

#include "fgw/loss_tensor.hpp"
#include "fgw/types.hpp"

namespace fgw {

/// Result of a conditional-gradient FGW solve. The objective is E_{p,q} at
/// the returned coupling, an upper bound on the true infimum; value is
/// objective^(1/p). The trace holds one objective value per iteration of
/// the best restart and is non-increasing.
struct FgwSolution {
  Coupling coupling;
  double value = 0.0;
  double objective = 0.0;
  std::vector<double> trace;
  int restarts_used = 0;
};

/// Exact evaluation of the FGW objective
///   E_{p,q}(pi) = sum_{i,j,k,l} ((1-alpha) d(a_i,b_j)^q
///                               + alpha |C1(i,k)-C2(j,l)|^q)^p pi_ij pi_kl.
/// For p = 1 this decomposes as (1-alpha)<M,pi> + alpha<L(x)pi, pi>; for
/// p > 1 the explicit quadruple sum is evaluated.
double fgw_objective(const StructuredObject& src, const StructuredObject& dst, const Coupling& pi,
                     const SolverParams& params);

/// Conditional gradient with the exact linear-OT oracle. Restart 0 starts
/// from the product coupling (plus the diagonal coupling when feasible);
/// restarts 1..R start from random transport-polytope vertices; any
/// couplings in `warm_starts` are appended as extra candidates. The best
/// objective over all candidates is returned.
FgwSolution solve_fgw(const StructuredObject& src, const StructuredObject& dst,
                      const SolverParams& params, std::span<const Matrix> warm_starts = {});

/// Gromov-Wasserstein special case: solve_fgw at alpha = 1 (features are
/// ignored entirely); reports objective^(1/p).
double gw_distance(const StructuredObject& src, const StructuredObject& dst, int p, int q);

/// Maps the additive trade-off alpha~ in (0, inf) of the cost
/// d(a,b)^q + alpha~ L^q onto the convex-combination parameter
/// alpha = alpha~ / (1 + alpha~); the two formulations share optimal plans
/// and their objectives differ by the factor (1-alpha)^p.
double reparameterize_alpha(double alpha_tilde);

}  // namespace fgw
