#pragma once

#include <Eigen/Dense>

namespace riskclt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Factorization {
  /// Bidiagonalizing SVD of X itself (Eigen::BDCSVD).
  svd,
  /// Eigendecomposition of the smaller Gram matrix (X'X or XX'). About an
  /// order of magnitude cheaper; squares the condition number, so it is only
  /// meant for designs bounded away from the interpolation threshold.
  gram,
};

struct DesignOptions {
  Factorization method = Factorization::svd;
  bool compute_vectors = true;
};

/// An n x p design with its thin SVD X = U diag(s) V', k = min(n, p).
///
/// Immutable after construction. Singular values are sorted descending.
/// Singular values are kept when s_i^2 > max(n, p) * eps * s_max^2, which is
/// the standard cutoff applied to the eigenvalues of X'X.
class DesignMatrix {
 public:
  explicit DesignMatrix(Matrix x, DesignOptions options = {});

  Eigen::Index rows() const { return x_.rows(); }
  Eigen::Index cols() const { return x_.cols(); }
  const Matrix& x() const { return x_; }
  const Vector& singular_values() const { return s_; }
  /// Thin U (n x k); requires compute_vectors.
  const Matrix& u() const;
  /// Thin V (p x k); requires compute_vectors.
  const Matrix& v() const;
  bool has_vectors() const { return has_vectors_; }

  Eigen::Index rank() const { return rank_; }
  /// Cutoff on singular values.
  double tol() const { return tol_; }
  /// Smallest kept singular value below 1e-6 of the largest.
  bool ill_conditioned() const;

  /// V_k' v for the kept right singular vectors.
  Vector row_coordinates(const Vector& v) const;
  /// Orthogonal projection of v onto row(X).
  Vector project_row_space(const Vector& v) const;
  /// Orthogonal projection of v onto null(X), i.e. Pi v.
  Vector project_null_space(const Vector& v) const;

 private:
  void factor_svd(bool vectors);
  void factor_gram(bool vectors);

  Matrix x_;
  Matrix u_;
  Matrix v_;
  Vector s_;
  Eigen::Index rank_ = 0;
  double tol_ = 0.0;
  bool has_vectors_ = false;
};

/// Uncentered sample covariance X'X / n.
struct SampleCov {
  Matrix sigma_hat;
};

/// Moore-Penrose inverse of a symmetric PSD matrix; eigenvalues <= tol are
/// treated as zero. A negative tol selects dim * eps * lambda_max.
Matrix pseudoinverse(const Matrix& a, double tol = -1.0);

/// The least-squares solution of minimum Euclidean norm, V diag(1/s) U' y.
Vector min_norm_lsq(const DesignMatrix& x, const Vector& y);

/// The same estimator through the normal equations, (X'X)^+ X' y.
Vector min_norm_lsq_normal_equations(const DesignMatrix& x, const Vector& y);

/// Pi = I_p - Sigma_hat^+ Sigma_hat.
Matrix null_projection(const DesignMatrix& x);

SampleCov sample_cov(const DesignMatrix& x);

}  // namespace riskclt
