#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "fgw/error.hpp"

namespace fgw {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Probability histogram over a finite support. Entries are strictly
/// positive (fully supported) and renormalized to sum to one at
/// construction time.
class Histogram {
 public:
  explicit Histogram(Vector weights);
  static Histogram uniform(Index n);

  const Vector& weights() const { return weights_; }
  Index size() const { return weights_.size(); }
  double operator[](Index i) const { return weights_[i]; }

 private:
  Vector weights_;
};

/// A finite structured object: pairwise structure distances C (n x n),
/// feature vectors (n x d, all objects share the ambient feature space),
/// and a node weight histogram of length n. Immutable after construction.
class StructuredObject {
 public:
  StructuredObject(Matrix structure, Matrix features, Histogram weights);

  const Matrix& structure() const { return structure_; }
  const Matrix& features() const { return features_; }
  const Histogram& weights() const { return weights_; }
  Index size() const { return structure_.rows(); }
  Index feature_dim() const { return features_.cols(); }

  /// New object with rows/columns reordered by `perm` (perm[i] = source index
  /// of new node i). Structure, features and weights move consistently.
  StructuredObject permuted(const std::vector<Index>& perm) const;

 private:
  Matrix structure_;
  Matrix features_;
  Histogram weights_;
};

enum class ViolationCode {
  AsymmetricStructure,
  NonzeroDiagonal,
  NegativeStructureEntry,
  NonFiniteEntry,
  SizeMismatch,
  ZeroWeight,
  WeightSumMismatch,
  TriangleInequality,
};

/// One invariant violation found by validate(). `warning` marks violations
/// that do not prevent construction (currently only TriangleInequality).
struct Violation {
  ViolationCode code;
  Index i = -1;
  Index j = -1;
  bool warning = false;

  std::string describe() const;
};

/// Checks structured-object invariants on raw parts, before construction.
/// Returns an empty list iff all invariants hold. Triangle-inequality
/// failures are reported with warning = true; everything else is fatal.
std::vector<Violation> validate(const Matrix& structure, const Matrix& features,
                                const Vector& weights);

/// Re-checks an already constructed object (can only surface warnings).
std::vector<Violation> validate(const StructuredObject& obj);

/// Transport plan between two histograms: nonnegative n x m matrix whose
/// row sums match `source` and column sums match `target` (tol 1e-9).
class Coupling {
 public:
  Coupling(Matrix matrix, Histogram source, Histogram target);

  const Matrix& matrix() const { return matrix_; }
  const Histogram& source() const { return source_; }
  const Histogram& target() const { return target_; }
  Index rows() const { return matrix_.rows(); }
  Index cols() const { return matrix_.cols(); }

  /// Product coupling source * target^T, feasible for any pair.
  static Coupling product(const Histogram& source, const Histogram& target);
  /// Diagonal coupling; requires identical histograms.
  static Coupling diagonal(const Histogram& h);

 private:
  Matrix matrix_;
  Histogram source_;
  Histogram target_;
};

struct SolverParams {
  double alpha = 0.5;  // feature/structure trade-off in [0, 1]
  int p = 1;           // outer exponent
  int q = 2;           // ground-cost exponent
  int max_iters = 1000;
  double rel_tol = 1e-9;
  int restarts = 5;  // random restarts on top of the deterministic starts
  std::uint64_t seed = 0;

  void check() const;
};

/// Pairwise feature ground costs: entry (i, j) = ||a_i - b_j||_2 ^ q.
Matrix feature_cost_matrix(const StructuredObject& src, const StructuredObject& dst, int q);

}  // namespace fgw
