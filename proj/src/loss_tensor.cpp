#include "fgw/loss_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fgw {

namespace {

void check_square_symmetric(const Matrix& c, const char* name) {
  if (c.rows() != c.cols()) throw DimensionMismatch(std::string(name) + " is not square");
}

}  // namespace

LossTensorHandle::LossTensorHandle(Matrix c1, Matrix c2, int q, LossTensorMode mode)
    : c1_(std::move(c1)), c2_(std::move(c2)), q_(q), mode_(mode) {
  check_square_symmetric(c1_, "C1");
  check_square_symmetric(c2_, "C2");
  if (q_ < 1) throw InvalidObject("q must be >= 1");
  if (mode_ == LossTensorMode::SquaredFast) {
    if (q_ != 2) throw IncompatibleQ("SquaredFast mode requires q = 2");
    c1_sq_ = c1_.array().square().matrix();
    c2_sq_ = c2_.array().square().matrix();
  }
}

LossTensorHandle LossTensorHandle::make(Matrix c1, Matrix c2, int q) {
  const LossTensorMode mode = (q == 2) ? LossTensorMode::SquaredFast : LossTensorMode::Naive;
  return LossTensorHandle(std::move(c1), std::move(c2), q, mode);
}

Matrix LossTensorHandle::apply(const Matrix& pi) const {
  const Index n = c1_.rows();
  const Index m = c2_.rows();
  if (pi.rows() != n || pi.cols() != m) {
    throw DimensionMismatch("coupling shape does not match the structure matrices");
  }

  if (mode_ == LossTensorMode::SquaredFast) {
    Vector row_mass = pi.rowwise().sum();
    Vector col_mass = pi.colwise().sum();
    Matrix out = (c1_sq_ * row_mass).replicate(1, m);
    out.noalias() += Vector::Ones(n) * (c2_sq_ * col_mass).transpose();
    out.noalias() -= 2.0 * (c1_ * pi * c2_.transpose());
    return out;
  }

  Matrix out = Matrix::Zero(n, m);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < m; ++j) {
      double s = 0.0;
      for (Index k = 0; k < n; ++k) {
        const double cik = c1_(i, k);
        if (q_ == 1) {
          s += ((c2_.row(j).array() - cik).abs() * pi.row(k).array()).sum();
        } else {
          s += ((c2_.row(j).array() - cik).abs().pow(q_) * pi.row(k).array()).sum();
        }
      }
      out(i, j) = s;
    }
  }
  return out;
}

Matrix LossTensorHandle::apply_sparse(
    const std::vector<std::tuple<Index, Index, double>>& entries) const {
  const Index n = c1_.rows();
  const Index m = c2_.rows();
  Matrix out = Matrix::Zero(n, m);
  if (mode_ == LossTensorMode::SquaredFast) {
    Vector row_mass = Vector::Zero(n), col_mass = Vector::Zero(m);
    Matrix pi = Matrix::Zero(n, m);
    for (const auto& [k, l, w] : entries) {
      row_mass[k] += w;
      col_mass[l] += w;
      pi(k, l) += w;
    }
    out = (c1_sq_ * row_mass).replicate(1, m);
    out.noalias() += Vector::Ones(n) * (c2_sq_ * col_mass).transpose();
    out.noalias() -= 2.0 * (c1_ * pi * c2_.transpose());
    return out;
  }
  for (const auto& [k, l, w] : entries) {
    if (w == 0.0) continue;
    for (Index i = 0; i < n; ++i) {
      const double cik = c1_(i, k);
      if (q_ == 1) {
        out.row(i) += w * (c2_.row(l).array() - cik).abs().matrix();
      } else {
        out.row(i) += w * (c2_.row(l).array() - cik).abs().pow(q_).matrix();
      }
    }
  }
  return out;
}

Matrix LossTensorHandle::apply_product(const Vector& h, const Vector& g) const {
  const Index n = c1_.rows();
  const Index m = c2_.rows();
  if (h.size() != n || g.size() != m) throw DimensionMismatch("marginal sizes do not match");

  if (mode_ == LossTensorMode::SquaredFast) {
    Matrix out = (c1_sq_ * h).replicate(1, m);
    out.noalias() += Vector::Ones(n) * (c2_sq_ * g).transpose();
    out.noalias() -= 2.0 * (c1_ * h) * (c2_ * g).transpose();
    return out;
  }

  if (q_ == 1) {
    // (L (x) h g^T)(i,j) = sum_k h_k phi_j(C1(i,k)) with
    // phi_j(t) = sum_l g_l |t - C2(j,l)|, evaluated by prefix sums over the
    // sorted row C2(j,:).
    Matrix out(n, m);
    std::vector<Index> order(m);
    std::vector<double> sorted_vals(m), wsum(m + 1), wvsum(m + 1);
    for (Index j = 0; j < m; ++j) {
      std::iota(order.begin(), order.end(), Index{0});
      std::sort(order.begin(), order.end(),
                [&](Index a, Index b) { return c2_(j, a) < c2_(j, b); });
      wsum[0] = 0.0;
      wvsum[0] = 0.0;
      for (Index t = 0; t < m; ++t) {
        sorted_vals[t] = c2_(j, order[t]);
        wsum[t + 1] = wsum[t] + g[order[t]];
        wvsum[t + 1] = wvsum[t] + g[order[t]] * sorted_vals[t];
      }
      const double wtot = wsum[m], vtot = wvsum[m];
      auto phi = [&](double t) {
        const auto it = std::upper_bound(sorted_vals.begin(), sorted_vals.end(), t);
        const Index c = it - sorted_vals.begin();
        return t * wsum[c] - wvsum[c] + (vtot - wvsum[c]) - t * (wtot - wsum[c]);
      };
      for (Index i = 0; i < n; ++i) {
        double s = 0.0;
        for (Index k = 0; k < n; ++k) s += h[k] * phi(c1_(i, k));
        out(i, j) = s;
      }
    }
    return out;
  }

  return apply(h * g.transpose());
}

Matrix apply_loss_tensor(const Matrix& c1, const Matrix& c2, const Coupling& pi, int q) {
  return LossTensorHandle::make(c1, c2, q).apply(pi.matrix());
}

}  // namespace fgw
