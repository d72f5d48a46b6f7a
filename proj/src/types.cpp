#include "fgw/types.hpp"

#include <cmath>
#include <sstream>

namespace fgw {

namespace {

constexpr double kWeightSumTol = 1e-12;
constexpr double kSymmetryTol = 1e-12;
constexpr double kTriangleTol = 1e-9;

const char* code_name(ViolationCode code) {
  switch (code) {
    case ViolationCode::AsymmetricStructure: return "asymmetric_structure";
    case ViolationCode::NonzeroDiagonal: return "nonzero_diagonal";
    case ViolationCode::NegativeStructureEntry: return "negative_structure_entry";
    case ViolationCode::NonFiniteEntry: return "non_finite_entry";
    case ViolationCode::SizeMismatch: return "size_mismatch";
    case ViolationCode::ZeroWeight: return "zero_weight";
    case ViolationCode::WeightSumMismatch: return "weight_sum_mismatch";
    case ViolationCode::TriangleInequality: return "triangle_inequality";
  }
  return "unknown";
}

}  // namespace

Histogram::Histogram(Vector weights) : weights_(std::move(weights)) {
  if (weights_.size() == 0) throw InvalidObject("histogram must be non-empty");
  for (Index i = 0; i < weights_.size(); ++i) {
    if (!std::isfinite(weights_[i]) || weights_[i] <= 0.0) {
      throw InvalidObject("histogram entry " + std::to_string(i) +
                          " is not strictly positive (fully supported measures only)");
    }
  }
  // Skip the division when the input is already normalized to rounding
  // noise, so serialized histograms round-trip bit-exactly.
  const double sum = weights_.sum();
  if (std::abs(sum - 1.0) > 1e-15) weights_ /= sum;
}

Histogram Histogram::uniform(Index n) {
  return Histogram(Vector::Constant(n, 1.0 / static_cast<double>(n)));
}

StructuredObject::StructuredObject(Matrix structure, Matrix features, Histogram weights)
    : structure_(std::move(structure)), features_(std::move(features)), weights_(std::move(weights)) {
  auto violations = validate(structure_, features_, weights_.weights());
  for (const auto& v : violations) {
    if (!v.warning) throw InvalidObject(v.describe());
  }
}

StructuredObject StructuredObject::permuted(const std::vector<Index>& perm) const {
  const Index n = size();
  if (static_cast<Index>(perm.size()) != n) throw DimensionMismatch("permutation length != n");
  Matrix c(n, n);
  Matrix f(n, features_.cols());
  Vector w(n);
  for (Index i = 0; i < n; ++i) {
    f.row(i) = features_.row(perm[i]);
    w[i] = weights_.weights()[perm[i]];
    for (Index j = 0; j < n; ++j) c(i, j) = structure_(perm[i], perm[j]);
  }
  return StructuredObject(std::move(c), std::move(f), Histogram(std::move(w)));
}

std::string Violation::describe() const {
  std::ostringstream os;
  os << code_name(code);
  if (i >= 0) {
    os << "(" << i;
    if (j >= 0) os << "," << j;
    os << ")";
  }
  if (warning) os << " [warning]";
  return os.str();
}

std::vector<Violation> validate(const Matrix& structure, const Matrix& features,
                                const Vector& weights) {
  std::vector<Violation> out;
  const Index n = structure.rows();
  if (structure.cols() != n) {
    out.push_back({ViolationCode::SizeMismatch, structure.rows(), structure.cols()});
    return out;
  }
  if (features.rows() != n) out.push_back({ViolationCode::SizeMismatch, features.rows(), n});
  if (weights.size() != n) out.push_back({ViolationCode::SizeMismatch, weights.size(), n});

  if (!structure.allFinite() || !features.allFinite()) {
    out.push_back({ViolationCode::NonFiniteEntry});
    return out;
  }

  const double scale = structure.size() > 0 ? structure.cwiseAbs().maxCoeff() : 0.0;
  for (Index i = 0; i < n; ++i) {
    if (structure(i, i) != 0.0) out.push_back({ViolationCode::NonzeroDiagonal, i, i});
    for (Index j = i + 1; j < n; ++j) {
      if (std::abs(structure(i, j) - structure(j, i)) > kSymmetryTol * std::max(1.0, scale)) {
        out.push_back({ViolationCode::AsymmetricStructure, i, j});
      }
      if (structure(i, j) < 0.0) out.push_back({ViolationCode::NegativeStructureEntry, i, j});
    }
  }
  for (Index i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0)) out.push_back({ViolationCode::ZeroWeight, i});
  }
  if (weights.size() == n && n > 0 && std::abs(weights.sum() - 1.0) > kWeightSumTol) {
    out.push_back({ViolationCode::WeightSumMismatch});
  }

  // Triangle inequality is only a warning: adjacency-derived similarity
  // matrices are allowed, the discrete solver never needs a genuine metric.
  bool fatal = false;
  for (const auto& v : out) fatal = fatal || !v.warning;
  if (!fatal) {
    auto first_triangle_witness = [&]() -> Violation {
      for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
          if (j == i) continue;
          for (Index k = 0; k < n; ++k) {
            if (structure(i, j) > structure(i, k) + structure(k, j) + kTriangleTol) {
              return {ViolationCode::TriangleInequality, i, j, /*warning=*/true};
            }
          }
        }
      }
      return {ViolationCode::TriangleInequality, -1, -1, true};
    };
    Violation w = first_triangle_witness();
    if (w.i >= 0) out.push_back(w);
  }
  return out;
}

std::vector<Violation> validate(const StructuredObject& obj) {
  return validate(obj.structure(), obj.features(), obj.weights().weights());
}

Coupling::Coupling(Matrix matrix, Histogram source, Histogram target)
    : matrix_(std::move(matrix)), source_(std::move(source)), target_(std::move(target)) {
  if (matrix_.rows() != source_.size() || matrix_.cols() != target_.size()) {
    throw DimensionMismatch("coupling shape does not match histograms");
  }
  if ((matrix_.array() < 0.0).any()) throw InvalidObject("coupling has negative entries");
  const double tol = 1e-9;
  Vector row_sums = matrix_.rowwise().sum();
  Vector col_sums = matrix_.colwise().sum();
  if ((row_sums - source_.weights()).cwiseAbs().maxCoeff() > tol) {
    throw MarginalMismatch("coupling row sums do not match the source histogram");
  }
  if ((col_sums - target_.weights()).cwiseAbs().maxCoeff() > tol) {
    throw MarginalMismatch("coupling column sums do not match the target histogram");
  }
}

Coupling Coupling::product(const Histogram& source, const Histogram& target) {
  Matrix m = source.weights() * target.weights().transpose();
  return Coupling(std::move(m), source, target);
}

Coupling Coupling::diagonal(const Histogram& h) {
  Matrix m = Matrix::Zero(h.size(), h.size());
  m.diagonal() = h.weights();
  return Coupling(std::move(m), h, h);
}

void SolverParams::check() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidObject("alpha must lie in [0, 1]");
  if (p < 1 || q < 1) throw InvalidObject("exponents p and q must be >= 1");
  if (!(rel_tol > 0.0)) throw InvalidObject("rel_tol must be positive");
  if (max_iters < 1) throw InvalidObject("max_iters must be >= 1");
  if (restarts < 0) throw InvalidObject("restarts must be >= 0");
}

Matrix feature_cost_matrix(const StructuredObject& src, const StructuredObject& dst, int q) {
  if (src.feature_dim() != dst.feature_dim()) {
    throw DimensionMismatch("feature dimensions differ: " + std::to_string(src.feature_dim()) +
                            " vs " + std::to_string(dst.feature_dim()));
  }
  if (q < 1) throw InvalidObject("q must be >= 1");
  const Index n = src.size();
  const Index m = dst.size();
  Matrix out(n, m);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < m; ++j) {
      out(i, j) = (src.features().row(i) - dst.features().row(j)).norm();
    }
  }
  if (q == 1) return out;
  if (q == 2) return out.array().square().matrix();
  return out.array().pow(static_cast<double>(q)).matrix();
}

}  // namespace fgw
