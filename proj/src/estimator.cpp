#include "riskclt/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace riskclt {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

}  // namespace

DesignMatrix::DesignMatrix(Matrix x, DesignOptions options) : x_(std::move(x)) {
  if (x_.rows() < 1 || x_.cols() < 1) {
    throw std::invalid_argument("design matrix must be non-empty");
  }
  if (options.method == Factorization::svd) {
    factor_svd(options.compute_vectors);
  } else {
    factor_gram(options.compute_vectors);
  }
  const double smax = s_.size() ? s_(0) : 0.0;
  const double dim = static_cast<double>(std::max(x_.rows(), x_.cols()));
  tol_ = std::sqrt(dim * kEps) * smax;
  rank_ = 0;
  for (Eigen::Index i = 0; i < s_.size(); ++i) {
    if (s_(i) > tol_) ++rank_;
  }
}

void DesignMatrix::factor_svd(bool vectors) {
  const unsigned flags =
      vectors ? (Eigen::ComputeThinU | Eigen::ComputeThinV) : 0u;
  Eigen::BDCSVD<Matrix> svd(x_, flags);
  s_ = svd.singularValues();
  if (vectors) {
    u_ = svd.matrixU();
    v_ = svd.matrixV();
  }
  has_vectors_ = vectors;
}

void DesignMatrix::factor_gram(bool vectors) {
  const Eigen::Index n = x_.rows();
  const Eigen::Index p = x_.cols();
  const bool tall = n >= p;
  const Eigen::Index k = tall ? p : n;

  Matrix gram = Matrix::Zero(k, k);
  if (tall) {
    gram.selfadjointView<Eigen::Lower>().rankUpdate(x_.transpose());
  } else {
    gram.selfadjointView<Eigen::Lower>().rankUpdate(x_);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(
      gram, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("Gram eigendecomposition failed");
  }
  // Eigen returns ascending eigenvalues; reverse to descending order.
  const Vector evals = es.eigenvalues().reverse();
  s_ = evals.cwiseMax(0.0).cwiseSqrt();
  if (vectors) {
    const Matrix w = es.eigenvectors().rowwise().reverse();
    const double smax = s_.size() ? s_(0) : 0.0;
    const double cutoff = std::sqrt(static_cast<double>(std::max(n, p)) * kEps) * smax;
    Vector inv(k);
    for (Eigen::Index i = 0; i < k; ++i) inv(i) = s_(i) > cutoff ? 1.0 / s_(i) : 0.0;
    if (tall) {
      v_ = w;
      u_ = (x_ * w) * inv.asDiagonal();
    } else {
      u_ = w;
      v_ = (x_.transpose() * w) * inv.asDiagonal();
    }
  }
  has_vectors_ = vectors;
}

const Matrix& DesignMatrix::u() const {
  if (!has_vectors_) throw std::logic_error("design factored without vectors");
  return u_;
}

const Matrix& DesignMatrix::v() const {
  if (!has_vectors_) throw std::logic_error("design factored without vectors");
  return v_;
}

bool DesignMatrix::ill_conditioned() const {
  if (rank_ == 0) return true;
  return s_(rank_ - 1) < 1e-6 * s_(0);
}

Vector DesignMatrix::row_coordinates(const Vector& vec) const {
  if (vec.size() != cols()) throw std::invalid_argument("vector length must be p");
  return v().leftCols(rank_).transpose() * vec;
}

Vector DesignMatrix::project_row_space(const Vector& vec) const {
  return v().leftCols(rank_) * row_coordinates(vec);
}

Vector DesignMatrix::project_null_space(const Vector& vec) const {
  return vec - project_row_space(vec);
}

Matrix pseudoinverse(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) throw std::invalid_argument("pseudoinverse needs a square matrix");
  const double norm = a.norm();
  if ((a - a.transpose()).norm() > 1e-10 * std::max(norm, 1.0)) {
    throw std::invalid_argument("pseudoinverse needs a symmetric matrix");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.transpose()));
  const Vector& evals = es.eigenvalues();
  if (tol < 0.0) {
    const double lmax = evals.size() ? evals.cwiseAbs().maxCoeff() : 0.0;
    tol = static_cast<double>(a.rows()) * kEps * lmax;
  }
  Vector inv(evals.size());
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    inv(i) = evals(i) > tol ? 1.0 / evals(i) : 0.0;
  }
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

Vector min_norm_lsq(const DesignMatrix& x, const Vector& y) {
  if (y.size() != x.rows()) throw std::invalid_argument("y length must equal n");
  const Eigen::Index k = x.rank();
  const Vector coeffs =
      (x.u().leftCols(k).transpose() * y).cwiseQuotient(x.singular_values().head(k));
  return x.v().leftCols(k) * coeffs;
}

Vector min_norm_lsq_normal_equations(const DesignMatrix& x, const Vector& y) {
  if (y.size() != x.rows()) throw std::invalid_argument("y length must equal n");
  const Matrix& m = x.x();
  const Matrix gram = m.transpose() * m;
  const double smax = x.singular_values()(0);
  const double tol = x.tol() * smax;
  return pseudoinverse(gram, tol) * (m.transpose() * y);
}

Matrix null_projection(const DesignMatrix& x) {
  const Eigen::Index p = x.cols();
  const auto vk = x.v().leftCols(x.rank());
  return Matrix::Identity(p, p) - vk * vk.transpose();
}

SampleCov sample_cov(const DesignMatrix& x) {
  const Matrix& m = x.x();
  return {m.transpose() * m / static_cast<double>(m.rows())};
}

}  // namespace riskclt
