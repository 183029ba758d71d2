#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <string_view>

#include "riskclt/rng.hpp"

namespace riskclt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class DistKind { standard_normal, centered_gamma, scaled_student_t };

/// A zero-mean, unit-variance law with an analytically known fourth moment.
///
/// Only the three built-in families are representable; the constructors
/// reject parameters that would leave the fourth moment infinite.
class EntryDistribution {
 public:
  static EntryDistribution normal();
  /// Gamma(shape k, scale 1/sqrt(k)) shifted by its mean sqrt(k).
  static EntryDistribution centered_gamma(double shape);
  /// Student-t(df) divided by sqrt(df / (df - 2)); requires df > 4.
  static EntryDistribution scaled_student_t(double df);
  /// Parses "normal", "gamma" or "student-t" with the given family parameter.
  static EntryDistribution from_name(std::string_view name, double gamma_shape,
                                     double t_df);

  DistKind kind() const { return kind_; }
  /// Shape for gamma, degrees of freedom for t, unused for normal.
  double parameter() const { return param_; }
  double gamma_scale() const;
  double nu4() const;
  std::string name() const;

  double draw(RngStream& stream) const;

 private:
  EntryDistribution(DistKind kind, double param) : kind_(kind), param_(param) {}

  DistKind kind_;
  double param_;
};

/// Analytic E z^4 of the standardized law.
double fourth_moment(const EntryDistribution& dist);

enum class BetaKind { fixed, gaussian };

struct BetaMode {
  BetaKind kind = BetaKind::gaussian;
  double r = 1.0;
  /// Unit direction for the fixed mode; empty means the normalized all-ones
  /// vector of whatever dimension is requested.
  Vector direction;

  static BetaMode fixed(double r, Vector direction = {});
  static BetaMode gaussian(double r);
};

enum class SigmaKind { identity, diagonal, spd };

/// Population covariance of the design rows together with its symmetric root.
class SigmaSpec {
 public:
  static SigmaSpec identity(Eigen::Index p);
  static SigmaSpec diagonal(const Vector& values, double eigen_floor = 0.0);
  static SigmaSpec spd(const Matrix& sigma, double eigen_floor = 0.0);

  SigmaKind kind() const { return kind_; }
  Eigen::Index dim() const { return dim_; }
  double min_eigenvalue() const { return min_eig_; }

  /// Dense Sigma.
  Matrix matrix() const;
  /// Dense symmetric PSD square root.
  Matrix root() const;
  /// Diagonal values (diagonal kind only).
  const Vector& diagonal_values() const { return diag_; }

  /// v' Sigma v.
  double quadratic_form(const Vector& v) const;
  /// Sigma^{1/2} v.
  Vector apply_root(const Vector& v) const;
  double trace() const;

 private:
  SigmaSpec() = default;

  SigmaKind kind_ = SigmaKind::identity;
  Eigen::Index dim_ = 0;
  double min_eig_ = 1.0;
  Vector diag_;
  Matrix sigma_;
  Matrix root_;
};

Matrix sample_entries(Eigen::Index n, Eigen::Index p,
                      const EntryDistribution& dist, RngStream& stream);

/// Z * Sigma^{1/2}: each row z_j becomes Sigma^{1/2} z_j.
Matrix apply_covariance(Matrix z, const SigmaSpec& sigma);

/// r * direction for the fixed mode.
Vector fixed_beta(const BetaMode& mode, Eigen::Index p);

Vector sample_beta(const BetaMode& mode, Eigen::Index p, RngStream& stream);

/// i.i.d. noise with standard deviation sigma; Gaussian unless a law is given.
Vector sample_noise(Eigen::Index n, double sigma, RngStream& stream,
                    const std::optional<EntryDistribution>& law = std::nullopt);

}  // namespace riskclt
