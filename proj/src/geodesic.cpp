#include "fgw/geodesic.hpp"

#include <cmath>

namespace fgw {

namespace {
constexpr double kSupportTol = 1e-12;
}

Geodesic::Geodesic(StructuredObject src, StructuredObject dst, const SolverParams& params)
    : src_(std::move(src)),
      dst_(std::move(dst)),
      coupling_(Coupling::product(src_.weights(), dst_.weights())) {
  FgwSolution sol = solve_fgw(src_, dst_, params);
  endpoint_objective_ = sol.objective;
  coupling_ = std::move(sol.coupling);

  const Matrix& pi = coupling_.matrix();
  double kept = 0.0;
  for (Index i = 0; i < pi.rows(); ++i) {
    for (Index j = 0; j < pi.cols(); ++j) {
      if (pi(i, j) > kSupportTol) {
        support_.emplace_back(i, j);
        kept += pi(i, j);
      }
    }
  }
  support_weights_.resize(static_cast<Index>(support_.size()));
  for (std::size_t s = 0; s < support_.size(); ++s) {
    support_weights_[static_cast<Index>(s)] = pi(support_[s].first, support_[s].second) / kept;
  }
}

GeodesicPoint Geodesic::at(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidObject("t must lie in [0, 1]");
  const Index ns = static_cast<Index>(support_.size());
  const Index d = src_.feature_dim();

  Matrix structure(ns, ns);
  Matrix features(ns, d);
  for (Index s = 0; s < ns; ++s) {
    const auto [i, j] = support_[s];
    features.row(s) = (1.0 - t) * src_.features().row(i) + t * dst_.features().row(j);
    structure(s, s) = 0.0;
    for (Index r = s + 1; r < ns; ++r) {
      const auto [k, l] = support_[r];
      const double v = (1.0 - t) * src_.structure()(i, k) + t * dst_.structure()(j, l);
      structure(s, r) = v;
      structure(r, s) = v;
    }
  }
  return GeodesicPoint{t, StructuredObject(std::move(structure), std::move(features),
                                           Histogram(support_weights_))};
}

Matrix Geodesic::point_to_source_coupling() const {
  Matrix m = Matrix::Zero(static_cast<Index>(support_.size()), src_.size());
  for (std::size_t s = 0; s < support_.size(); ++s) {
    m(static_cast<Index>(s), support_[s].first) = support_weights_[static_cast<Index>(s)];
  }
  // pruning may leave a row short of the source weight; lost mass is < 1e-10
  return m;
}

Matrix Geodesic::point_to_target_coupling() const {
  Matrix m = Matrix::Zero(static_cast<Index>(support_.size()), dst_.size());
  for (std::size_t s = 0; s < support_.size(); ++s) {
    m(static_cast<Index>(s), support_[s].second) = support_weights_[static_cast<Index>(s)];
  }
  return m;
}

Matrix Geodesic::point_to_point_coupling() const {
  Matrix m = Matrix::Zero(static_cast<Index>(support_.size()), static_cast<Index>(support_.size()));
  m.diagonal() = support_weights_;
  return m;
}

}  // namespace fgw
