#include "fgw/linear_ot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fgw {

namespace {
constexpr double kMassTol = 1e-9;
}

// Transportation simplex. Basis = spanning tree over the n row nodes and
// m column nodes (column j is node n+j), exactly n+m-1 arcs, kept in fixed
// slots so a pivot replaces the leaving arc in place. Ties in entering and
// leaving arcs are broken by lowest (row, column) lexicographic index, so
// a solve is deterministic. Long degenerate streaks switch to Bland's rule
// which cannot cycle.
OtSolution LinearOtSolver::solve(const Matrix& cost, const Histogram& a, const Histogram& b) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  if (a.size() != n || b.size() != m) {
    throw DimensionMismatch("cost matrix shape does not match histograms");
  }
  if (!cost.allFinite()) throw NonFiniteCost("cost matrix has NaN or infinite entries");

  Vector av = a.weights();
  Vector bv = b.weights();
  const double mass_gap = std::abs(av.sum() - bv.sum());
  if (mass_gap > kMassTol) {
    throw InfeasibleMarginals("histogram masses differ by " + std::to_string(mass_gap));
  }
  bv *= av.sum() / bv.sum();  // repair sub-tolerance file rounding

  const int basis_size = n + m - 1;
  flow_.assign(basis_size, 0.0);
  arc_row_.assign(basis_size, -1);
  arc_col_.assign(basis_size, -1);
  node_arcs_.assign(n + m, {});

  // North-west corner start: advances one index per arc, n+m-1 arcs total.
  {
    Vector ra = av, rb = bv;
    int i = 0, j = 0;
    for (int arc = 0; arc < basis_size; ++arc) {
      const double f = std::min(ra[i], rb[j]);
      flow_[arc] = f;
      arc_row_[arc] = i;
      arc_col_[arc] = j;
      node_arcs_[i].push_back(arc);
      node_arcs_[n + j].push_back(arc);
      ra[i] -= f;
      rb[j] -= f;
      if (i == n - 1 && j == m - 1) break;
      if (j == m - 1 || (ra[i] <= rb[j] && i < n - 1)) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  u_.resize(n);
  v_.resize(m);
  parent_arc_.assign(n + m, -1);
  bfs_queue_.assign(n + m, 0);
  visited_.assign(n + m, 0);

  const double scale = std::max(1.0, cost.cwiseAbs().maxCoeff());
  const double tol = 1e-11 * scale;
  const int max_pivots = 50000 + 200 * (n + m);
  const int degenerate_limit = 4 * (n + m);

  auto compute_duals = [&]() {
    std::fill(visited_.begin(), visited_.end(), 0);
    int head = 0, tail = 0;
    bfs_queue_[tail++] = 0;
    visited_[0] = 1;
    u_[0] = 0.0;
    while (head < tail) {
      const int node = bfs_queue_[head++];
      for (int arc : node_arcs_[node]) {
        const int i = arc_row_[arc];
        const int jn = n + arc_col_[arc];
        const int other = (node == i) ? jn : i;
        if (visited_[other]) continue;
        visited_[other] = 1;
        if (other == jn) {
          v_[arc_col_[arc]] = cost(i, arc_col_[arc]) - u_[i];
        } else {
          u_[i] = cost(i, arc_col_[arc]) - v_[arc_col_[arc]];
        }
        bfs_queue_[tail++] = other;
      }
    }
  };

  int pivots = 0;
  int degenerate_streak = 0;
  bool bland = false;

  while (true) {
    compute_duals();

    int enter_i = -1, enter_j = -1;
    if (!bland) {
      double best = -tol;
      for (int i = 0; i < n; ++i) {
        Index jj;
        const double r = (cost.row(i).transpose() - v_).minCoeff(&jj) - u_[i];
        if (r < best) {
          best = r;
          enter_i = i;
          enter_j = static_cast<int>(jj);
        }
      }
    } else {
      for (int i = 0; i < n && enter_i < 0; ++i) {
        for (int j = 0; j < m; ++j) {
          if (cost(i, j) - u_[i] - v_[j] < -tol) {
            enter_i = i;
            enter_j = j;
            break;
          }
        }
      }
    }
    if (enter_i < 0) break;  // optimal

    if (++pivots > max_pivots) {
      throw Error("simplex_stalled", "transportation simplex exceeded its pivot budget");
    }

    // Unique tree path from the entering row node to the entering column node.
    std::fill(visited_.begin(), visited_.end(), 0);
    std::fill(parent_arc_.begin(), parent_arc_.end(), -1);
    int head = 0, tail = 0;
    bfs_queue_[tail++] = enter_i;
    visited_[enter_i] = 1;
    const int target = n + enter_j;
    while (head < tail && !visited_[target]) {
      const int node = bfs_queue_[head++];
      for (int arc : node_arcs_[node]) {
        const int i = arc_row_[arc];
        const int jn = n + arc_col_[arc];
        const int other = (node == i) ? jn : i;
        if (visited_[other]) continue;
        visited_[other] = 1;
        parent_arc_[other] = arc;
        bfs_queue_[tail++] = other;
      }
    }

    // Walk back from the column node; odd positions along the cycle lose flow.
    double theta = std::numeric_limits<double>::infinity();
    int leave_arc = -1;
    {
      int node = target;
      bool minus = true;
      while (node != enter_i) {
        const int arc = parent_arc_[node];
        if (minus) {
          const double f = flow_[arc];
          if (f < theta - 1e-18 ||
              (std::abs(f - theta) <= 1e-18 &&
               (leave_arc < 0 || arc_row_[arc] < arc_row_[leave_arc] ||
                (arc_row_[arc] == arc_row_[leave_arc] && arc_col_[arc] < arc_col_[leave_arc])))) {
            theta = f;
            leave_arc = arc;
          }
        }
        node = (node == arc_row_[arc]) ? n + arc_col_[arc] : arc_row_[arc];
        minus = !minus;
      }
    }

    {
      int node = target;
      bool minus = true;
      while (node != enter_i) {
        const int arc = parent_arc_[node];
        flow_[arc] += minus ? -theta : theta;
        if (flow_[arc] < 0.0) flow_[arc] = 0.0;
        node = (node == arc_row_[arc]) ? n + arc_col_[arc] : arc_row_[arc];
        minus = !minus;
      }
    }

    // Replace the leaving arc slot with the entering arc.
    {
      auto& ra = node_arcs_[arc_row_[leave_arc]];
      ra.erase(std::find(ra.begin(), ra.end(), leave_arc));
      auto& ca = node_arcs_[n + arc_col_[leave_arc]];
      ca.erase(std::find(ca.begin(), ca.end(), leave_arc));
      arc_row_[leave_arc] = enter_i;
      arc_col_[leave_arc] = enter_j;
      flow_[leave_arc] = theta;
      node_arcs_[enter_i].push_back(leave_arc);
      node_arcs_[n + enter_j].push_back(leave_arc);
    }

    if (theta <= 0.0) {
      if (++degenerate_streak > degenerate_limit) bland = true;
    } else {
      degenerate_streak = 0;
      bland = false;
    }
  }

  Matrix plan = Matrix::Zero(n, m);
  double total = 0.0;
  for (int arc = 0; arc < basis_size; ++arc) {
    plan(arc_row_[arc], arc_col_[arc]) += flow_[arc];
    total += flow_[arc] * cost(arc_row_[arc], arc_col_[arc]);
  }

  OtSolution sol{Coupling(std::move(plan), a, b), total, pivots, u_, v_};
  return sol;
}

OtSolution solve_linear_ot(const Matrix& cost, const Histogram& a, const Histogram& b) {
  LinearOtSolver solver;
  return solver.solve(cost, a, b);
}

double wasserstein_distance(const StructuredObject& src, const StructuredObject& dst, int p) {
  Matrix m = feature_cost_matrix(src, dst, p);
  OtSolution sol = solve_linear_ot(m, src.weights(), dst.weights());
  return std::pow(std::max(sol.cost, 0.0), 1.0 / static_cast<double>(p));
}

}  // namespace fgw
