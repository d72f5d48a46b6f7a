#pragma once

#include <utility>
#include <vector>

#include "fgw/types.hpp"

namespace fgw {

enum class LossTensorMode {
  Naive,        // explicit O(n^2 m^2) contraction, valid for every q
  SquaredFast,  // q = 2 only: |x-y|^2 expansion, O(n^2 m + n m^2)
};

/// Applies the structure-loss tensor L(i,j,k,l) = |C1(i,k) - C2(j,l)|^q to a
/// coupling: (L (x) pi)(i,j) = sum_{k,l} L(i,j,k,l) pi(k,l). Both modes give
/// the same contraction; SquaredFast precomputes the squared-structure
/// factors of the algebraic expansion.
class LossTensorHandle {
 public:
  LossTensorHandle(Matrix c1, Matrix c2, int q, LossTensorMode mode);

  /// Picks SquaredFast for q = 2, Naive otherwise.
  static LossTensorHandle make(Matrix c1, Matrix c2, int q);

  Matrix apply(const Matrix& pi) const;

  /// Same contraction for a coupling given as a sparse list of entries.
  Matrix apply_sparse(const std::vector<std::tuple<Index, Index, double>>& entries) const;

  /// Specialized contraction for the product coupling h g^T. Exact for any
  /// mode; for q = 1 it runs in O(n^2 m log m) via sorted prefix sums.
  Matrix apply_product(const Vector& h, const Vector& g) const;

  LossTensorMode mode() const { return mode_; }
  int q() const { return q_; }
  Index rows() const { return c1_.rows(); }
  Index cols() const { return c2_.rows(); }

 private:
  Matrix c1_, c2_;
  Matrix c1_sq_, c2_sq_;  // elementwise squares, SquaredFast only
  int q_;
  LossTensorMode mode_;
};

/// One-shot tensor application with automatic mode selection.
Matrix apply_loss_tensor(const Matrix& c1, const Matrix& c2, const Coupling& pi, int q);

}  // namespace fgw
