#include "fgw/barycenter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <set>

#include "fgw/solver.hpp"
#include "fgw/toolkit.hpp"

namespace fgw {

namespace {

// Seeded Erdos-Renyi graph on N nodes (edge prob 3/N), resampled until
// connected; its shortest-path matrix is the structure initializer.
Matrix random_connected_sp_matrix(Index n, std::uint64_t seed) {
  if (n == 1) return Matrix::Zero(1, 1);
  for (std::uint64_t attempt = 0;; ++attempt) {
    std::mt19937_64 rng(seed + attempt * 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double p = std::min(1.0, 3.0 / static_cast<double>(n));
    std::vector<std::tuple<Index, Index, double>> edges;
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        if (unif(rng) < p) edges.emplace_back(i, j, 1.0);
      }
    }
    GraphSpec g{n, std::move(edges), Matrix::Zero(n, 1), Histogram::uniform(n)};
    try {
      return shortest_path_structure(g).structure();
    } catch (const DisconnectedGraph&) {
      continue;
    }
  }
}

inline double q_pow(double x, int q) {
  double r = 1.0;
  for (int k = 0; k < q; ++k) r *= x;
  return r;
}

// Structure-block objective sum_k lambda_k sum |C(i,i') - C_k(j,j')|^q
// pi(i,j) pi(i',j') and its (sub)gradient; used by the q != 2 fallback.
double structure_block_value(const Matrix& c, const BarycenterProblem& problem,
                             const std::vector<Coupling>& couplings) {
  double total = 0.0;
  for (std::size_t k = 0; k < problem.inputs.size(); ++k) {
    const Matrix& ck = problem.inputs[k].structure();
    const Matrix& pi = couplings[k].matrix();
    for (Index i = 0; i < c.rows(); ++i) {
      for (Index i2 = 0; i2 < c.rows(); ++i2) {
        double s = 0.0;
        for (Index j = 0; j < ck.rows(); ++j) {
          if (pi(i, j) == 0.0) continue;
          for (Index j2 = 0; j2 < ck.rows(); ++j2) {
            s += q_pow(std::abs(c(i, i2) - ck(j, j2)), problem.params.q) * pi(i, j) *
                 pi(i2, j2);
          }
        }
        total += problem.lambdas[k] * s;
      }
    }
  }
  return total;
}

Matrix structure_block_gradient(const Matrix& c, const BarycenterProblem& problem,
                                const std::vector<Coupling>& couplings) {
  const int q = problem.params.q;
  Matrix grad = Matrix::Zero(c.rows(), c.cols());
  for (std::size_t k = 0; k < problem.inputs.size(); ++k) {
    const Matrix& ck = problem.inputs[k].structure();
    const Matrix& pi = couplings[k].matrix();
    for (Index i = 0; i < c.rows(); ++i) {
      for (Index i2 = 0; i2 < c.rows(); ++i2) {
        double g = 0.0;
        for (Index j = 0; j < ck.rows(); ++j) {
          if (pi(i, j) == 0.0) continue;
          for (Index j2 = 0; j2 < ck.rows(); ++j2) {
            const double delta = c(i, i2) - ck(j, j2);
            g += q * q_pow(std::abs(delta), q - 1) * (delta >= 0.0 ? 1.0 : -1.0) * pi(i, j) *
                 pi(i2, j2);
          }
        }
        grad(i, i2) += problem.lambdas[k] * g;
      }
    }
  }
  return grad;
}

double feature_block_value(const Matrix& a, const BarycenterProblem& problem,
                           const std::vector<Coupling>& couplings) {
  double total = 0.0;
  for (std::size_t k = 0; k < problem.inputs.size(); ++k) {
    const Matrix& bk = problem.inputs[k].features();
    const Matrix& pi = couplings[k].matrix();
    for (Index i = 0; i < a.rows(); ++i) {
      for (Index j = 0; j < bk.rows(); ++j) {
        if (pi(i, j) == 0.0) continue;
        total += problem.lambdas[k] * q_pow((a.row(i) - bk.row(j)).norm(), problem.params.q) *
                 pi(i, j);
      }
    }
  }
  return total;
}

Matrix feature_block_gradient(const Matrix& a, const BarycenterProblem& problem,
                              const std::vector<Coupling>& couplings) {
  const int q = problem.params.q;
  Matrix grad = Matrix::Zero(a.rows(), a.cols());
  for (std::size_t k = 0; k < problem.inputs.size(); ++k) {
    const Matrix& bk = problem.inputs[k].features();
    const Matrix& pi = couplings[k].matrix();
    for (Index i = 0; i < a.rows(); ++i) {
      for (Index j = 0; j < bk.rows(); ++j) {
        if (pi(i, j) == 0.0) continue;
        const Eigen::RowVectorXd diff = a.row(i) - bk.row(j);
        const double norm = diff.norm();
        if (norm == 0.0) continue;
        grad.row(i) += problem.lambdas[k] * q * std::pow(norm, q - 2.0) * pi(i, j) * diff;
      }
    }
  }
  return grad;
}

// Monotone projected gradient descent with step halving: a step is only
// taken when the projected point improves the block objective.
template <typename Eval, typename Grad, typename Project>
Matrix descend_block(Matrix x, Eval eval, Grad grad, Project project) {
  double fx = eval(x);
  constexpr int kInnerIters = 80;
  for (int iter = 0; iter < kInnerIters; ++iter) {
    Matrix g = grad(x);
    const double gmax = g.cwiseAbs().maxCoeff();
    if (!(gmax > 0.0)) break;
    double step = (1.0 + x.cwiseAbs().maxCoeff()) / gmax;
    bool accepted = false;
    while (step > 1e-14) {
      Matrix candidate = project(x - step * g);
      const double fc = eval(candidate);
      if (fc < fx - 1e-15 * std::max(1.0, std::abs(fx))) {
        x = std::move(candidate);
        fx = fc;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  return x;
}

}  // namespace

BarycenterSolution solve_barycenter(const BarycenterProblem& problem) {
  const auto k_count = problem.inputs.size();
  if (k_count == 0) throw InvalidObject("barycenter needs at least one input");
  if (static_cast<std::size_t>(problem.lambdas.size()) != k_count) {
    throw DimensionMismatch("one lambda per input is required");
  }
  if ((problem.lambdas.array() < 0.0).any() || std::abs(problem.lambdas.sum() - 1.0) > 1e-12) {
    throw InvalidObject("lambdas must be nonnegative and sum to 1");
  }
  problem.params.check();
  if (problem.params.p != 1) throw InvalidObject("barycenter requires p = 1");
  if (problem.params.q != 2 && !problem.numerical_fallback) {
    throw IncompatibleQ(
        "closed-form block updates require q = 2; set numerical_fallback for other q");
  }
  const Index n = problem.target_size;
  if (problem.target_weights.size() != n) {
    throw DimensionMismatch("target histogram length != target size");
  }
  const Index d = problem.inputs.front().feature_dim();
  for (const auto& obj : problem.inputs) {
    if (obj.feature_dim() != d) throw DimensionMismatch("inputs must share a feature dimension");
  }

  const Vector& h = problem.target_weights.weights();

  // Initialize the structure from a random connected graph metric and the
  // features from rows of the concatenated inputs, unless fixed.
  Matrix structure;
  if (problem.fixed_structure) {
    structure = *problem.fixed_structure;
    if (structure.rows() != n || structure.cols() != n) {
      throw DimensionMismatch("fixed structure has the wrong size");
    }
  } else {
    structure = random_connected_sp_matrix(n, problem.params.seed + 0x5eedULL);
  }
  Matrix features;
  if (problem.fixed_features) {
    features = *problem.fixed_features;
    if (features.rows() != n || features.cols() != d) {
      throw DimensionMismatch("fixed features have the wrong shape");
    }
  } else {
    Index total = 0;
    for (const auto& obj : problem.inputs) total += obj.size();
    std::mt19937_64 rng(problem.params.seed + 0xfea7ULL);
    std::uniform_int_distribution<Index> pick(0, total - 1);
    features.resize(n, d);
    for (Index i = 0; i < n; ++i) {
      Index r = pick(rng);
      for (const auto& obj : problem.inputs) {
        if (r < obj.size()) {
          features.row(i) = obj.features().row(r);
          break;
        }
        r -= obj.size();
      }
    }
  }

  SolverParams inner = problem.params;
  BarycenterSolution out{StructuredObject(structure, features, problem.target_weights), {}, {}};
  std::vector<Matrix> prev_couplings;

  double prev_objective = std::numeric_limits<double>::infinity();
  for (int outer = 0; outer < problem.max_outer_iters; ++outer) {
    StructuredObject bary(structure, features, problem.target_weights);

    // Block 1: couplings. Warm starting with the previous coupling keeps
    // this block non-increasing even with a small restart budget.
    std::vector<Coupling> couplings;
    couplings.reserve(k_count);
    double objective = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) {
      inner.seed = problem.params.seed + 977u * (outer + 1) + k;
      std::span<const Matrix> warm;
      if (!prev_couplings.empty()) warm = std::span<const Matrix>(&prev_couplings[k], 1);
      FgwSolution sol = solve_fgw(bary, problem.inputs[k], inner, warm);
      objective += problem.lambdas[k] * sol.objective;
      couplings.push_back(std::move(sol.coupling));
    }

    // Blocks 2 and 3. For q = 2 these are the exact minimizers of the
    // quadratic blocks (and stay exact at the alpha endpoints, where one
    // block simply no longer influences the objective); for other q the
    // numerical fallback takes monotone projected gradient steps.
    if (!problem.fixed_structure) {
      if (problem.params.q == 2) {
        Matrix acc = Matrix::Zero(n, n);
        for (std::size_t k = 0; k < k_count; ++k) {
          const Matrix& pi = couplings[k].matrix();
          acc.noalias() +=
              problem.lambdas[k] * (pi * problem.inputs[k].structure() * pi.transpose());
        }
        structure = acc.array() / (h * h.transpose()).array();
        structure = 0.5 * (structure + structure.transpose()).eval();
        structure.diagonal().setZero();
      } else {
        structure = descend_block(
            structure,
            [&](const Matrix& c) { return structure_block_value(c, problem, couplings); },
            [&](const Matrix& c) { return structure_block_gradient(c, problem, couplings); },
            [](Matrix c) {
              c = (0.5 * (c + c.transpose().eval())).cwiseMax(0.0);
              c.diagonal().setZero();
              return c;
            });
      }
    }
    if (!problem.fixed_features) {
      if (problem.params.q == 2) {
        Matrix acc = Matrix::Zero(n, d);
        for (std::size_t k = 0; k < k_count; ++k) {
          acc.noalias() +=
              problem.lambdas[k] * (couplings[k].matrix() * problem.inputs[k].features());
        }
        features = acc.array().colwise() / h.array();
      } else {
        features = descend_block(
            features,
            [&](const Matrix& a) { return feature_block_value(a, problem, couplings); },
            [&](const Matrix& a) { return feature_block_gradient(a, problem, couplings); },
            [](Matrix a) { return a; });
      }
    }

    // Trace the objective at the end of the full outer iteration.
    StructuredObject updated(structure, features, problem.target_weights);
    double traced = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) {
      traced += problem.lambdas[k] *
                fgw_objective(updated, problem.inputs[k], couplings[k], problem.params);
    }
    out.objective_trace.push_back(traced);
    out.couplings = std::move(couplings);

    prev_couplings.clear();
    for (const auto& c : out.couplings) prev_couplings.push_back(c.matrix());

    if (prev_objective - traced <= problem.outer_rel_tol * std::max(std::abs(traced), 1e-300)) {
      prev_objective = traced;
      break;
    }
    prev_objective = traced;
  }

  out.barycenter = StructuredObject(structure, features, problem.target_weights);
  return out;
}

AdjacencyRecovery recover_adjacency(const Matrix& c, ReferenceMetric metric) {
  (void)metric;  // only shortest_path ships
  const Index n = c.rows();
  if (c.cols() != n) throw NonSymmetricInput("matrix is not square");
  if (n < 2) throw EmptyCandidateSet("no off-diagonal values to threshold");

  std::set<double> unique_values;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) unique_values.insert(c(i, j));
  }

  const double cap = static_cast<double>(n);
  AdjacencyRecovery best;
  best.residual = std::numeric_limits<double>::infinity();
  bool any_edges = false;

  for (double threshold : unique_values) {
    std::vector<std::vector<Index>> adj(n);
    Eigen::MatrixXi adjacency = Eigen::MatrixXi::Zero(n, n);
    Index edge_count = 0;
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        if (c(i, j) <= threshold) {
          adj[i].push_back(j);
          adj[j].push_back(i);
          adjacency(i, j) = adjacency(j, i) = 1;
          ++edge_count;
        }
      }
    }
    if (edge_count == 0) continue;
    any_edges = true;

    // unit-weight all-pairs shortest path, unreachable entries capped at N
    Matrix sp = Matrix::Constant(n, n, cap);
    for (Index s = 0; s < n; ++s) {
      sp(s, s) = 0.0;
      std::queue<Index> q;
      q.push(s);
      std::vector<char> seen(n, 0);
      seen[s] = 1;
      while (!q.empty()) {
        Index u = q.front();
        q.pop();
        for (Index v : adj[u]) {
          if (!seen[v]) {
            seen[v] = 1;
            sp(v, s) = sp(u, s) + 1.0;
            q.push(v);
          }
        }
      }
    }
    sp = sp.cwiseMin(sp.transpose().eval());

    const double residual = (c - sp).norm();
    if (residual < best.residual) {
      best.adjacency = std::move(adjacency);
      best.threshold = threshold;
      best.residual = residual;
    }
  }

  if (!any_edges) throw EmptyCandidateSet("every threshold yields an edgeless graph");
  return best;
}

std::vector<Index> cluster_assignments(const Coupling& coupling) {
  const Matrix& pi = coupling.matrix();
  std::vector<Index> out(pi.cols());
  for (Index i = 0; i < pi.cols(); ++i) {
    Index arg = 0;
    pi.col(i).maxCoeff(&arg);
    out[i] = arg;
  }
  return out;
}

}  // namespace fgw
