#include "riskclt/randgen.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace riskclt {

EntryDistribution EntryDistribution::normal() {
  return {DistKind::standard_normal, 0.0};
}

EntryDistribution EntryDistribution::centered_gamma(double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw std::invalid_argument("gamma shape must be positive");
  }
  return {DistKind::centered_gamma, shape};
}

EntryDistribution EntryDistribution::scaled_student_t(double df) {
  if (!(df > 4.0) || !std::isfinite(df)) {
    throw std::invalid_argument(
        "student-t needs df > 4 for a finite fourth moment");
  }
  return {DistKind::scaled_student_t, df};
}

EntryDistribution EntryDistribution::from_name(std::string_view name,
                                               double gamma_shape,
                                               double t_df) {
  if (name == "normal") return normal();
  if (name == "gamma") return centered_gamma(gamma_shape);
  if (name == "student-t" || name == "t") return scaled_student_t(t_df);
  throw std::invalid_argument("unknown distribution: " + std::string(name));
}

double EntryDistribution::gamma_scale() const { return 1.0 / std::sqrt(param_); }

double EntryDistribution::nu4() const { return fourth_moment(*this); }

std::string EntryDistribution::name() const {
  switch (kind_) {
    case DistKind::standard_normal: return "normal";
    case DistKind::centered_gamma: return "gamma";
    case DistKind::scaled_student_t: return "student-t";
  }
  return "unknown";
}

double EntryDistribution::draw(RngStream& stream) const {
  switch (kind_) {
    case DistKind::standard_normal: {
      std::normal_distribution<double> d;
      return d(stream);
    }
    case DistKind::centered_gamma: {
      std::gamma_distribution<double> d(param_, gamma_scale());
      return d(stream) - std::sqrt(param_);
    }
    case DistKind::scaled_student_t: {
      std::student_t_distribution<double> d(param_);
      return d(stream) / std::sqrt(param_ / (param_ - 2.0));
    }
  }
  throw std::invalid_argument("unknown distribution");
}

double fourth_moment(const EntryDistribution& dist) {
  switch (dist.kind()) {
    case DistKind::standard_normal: return 3.0;
    case DistKind::centered_gamma: return 3.0 + 6.0 / dist.parameter();
    case DistKind::scaled_student_t: return 3.0 + 6.0 / (dist.parameter() - 4.0);
  }
  throw std::invalid_argument("unknown distribution");
}

BetaMode BetaMode::fixed(double r, Vector direction) {
  if (!(r > 0.0)) throw std::invalid_argument("beta scale r must be positive");
  if (direction.size() > 0 && std::abs(direction.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument("fixed beta direction must be a unit vector");
  }
  return {BetaKind::fixed, r, std::move(direction)};
}

BetaMode BetaMode::gaussian(double r) {
  if (!(r > 0.0)) throw std::invalid_argument("beta scale r must be positive");
  return {BetaKind::gaussian, r, {}};
}

SigmaSpec SigmaSpec::identity(Eigen::Index p) {
  SigmaSpec s;
  s.kind_ = SigmaKind::identity;
  s.dim_ = p;
  return s;
}

SigmaSpec SigmaSpec::diagonal(const Vector& values, double eigen_floor) {
  const double scale = values.size() ? values.cwiseAbs().maxCoeff() : 0.0;
  SigmaSpec s;
  s.kind_ = SigmaKind::diagonal;
  s.dim_ = values.size();
  s.diag_ = values;
  for (auto& v : s.diag_) {
    if (v < -1e-10 * scale) {
      throw std::domain_error("covariance not positive definite");
    }
    if (v < 0.0) v = 0.0;
  }
  s.min_eig_ = s.dim_ ? s.diag_.minCoeff() : 0.0;
  if (eigen_floor > 0.0 && s.min_eig_ < eigen_floor) {
    throw std::domain_error("covariance not positive definite");
  }
  return s;
}

SigmaSpec SigmaSpec::spd(const Matrix& sigma, double eigen_floor) {
  if (sigma.rows() != sigma.cols()) {
    throw std::invalid_argument("covariance must be square");
  }
  const double norm = sigma.norm();
  if ((sigma - sigma.transpose()).norm() > 1e-12 * norm) {
    throw std::invalid_argument("covariance must be symmetric");
  }
  const Matrix sym = 0.5 * (sigma + sigma.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  Vector evals = es.eigenvalues();
  const double spectral = evals.cwiseAbs().maxCoeff();
  for (auto& v : evals) {
    if (v < -1e-10 * spectral) {
      throw std::domain_error("covariance not positive definite");
    }
    if (v < 0.0) v = 0.0;
  }
  SigmaSpec s;
  s.kind_ = SigmaKind::spd;
  s.dim_ = sigma.rows();
  s.min_eig_ = evals.minCoeff();
  if (eigen_floor > 0.0 && s.min_eig_ < eigen_floor) {
    throw std::domain_error("covariance not positive definite");
  }
  s.sigma_ = sym;
  s.root_ = es.eigenvectors() * evals.cwiseSqrt().asDiagonal() *
            es.eigenvectors().transpose();
  return s;
}

Matrix SigmaSpec::matrix() const {
  switch (kind_) {
    case SigmaKind::identity: return Matrix::Identity(dim_, dim_);
    case SigmaKind::diagonal: return diag_.asDiagonal();
    case SigmaKind::spd: return sigma_;
  }
  return {};
}

Matrix SigmaSpec::root() const {
  switch (kind_) {
    case SigmaKind::identity: return Matrix::Identity(dim_, dim_);
    case SigmaKind::diagonal: return diag_.cwiseSqrt().asDiagonal();
    case SigmaKind::spd: return root_;
  }
  return {};
}

double SigmaSpec::quadratic_form(const Vector& v) const {
  switch (kind_) {
    case SigmaKind::identity: return v.squaredNorm();
    case SigmaKind::diagonal: return v.cwiseAbs2().dot(diag_);
    case SigmaKind::spd: return (root_ * v).squaredNorm();
  }
  return 0.0;
}

Vector SigmaSpec::apply_root(const Vector& v) const {
  switch (kind_) {
    case SigmaKind::identity: return v;
    case SigmaKind::diagonal: return diag_.cwiseSqrt().cwiseProduct(v);
    case SigmaKind::spd: return root_ * v;
  }
  return v;
}

double SigmaSpec::trace() const {
  switch (kind_) {
    case SigmaKind::identity: return static_cast<double>(dim_);
    case SigmaKind::diagonal: return diag_.sum();
    case SigmaKind::spd: return sigma_.trace();
  }
  return 0.0;
}

Matrix sample_entries(Eigen::Index n, Eigen::Index p,
                      const EntryDistribution& dist, RngStream& stream) {
  if (n < 1 || p < 1) throw std::invalid_argument("need n >= 1 and p >= 1");
  Matrix z(n, p);
  double* data = z.data();
  const Eigen::Index total = n * p;
  // One distribution object per call keeps the paired-normal cache local.
  switch (dist.kind()) {
    case DistKind::standard_normal: {
      std::normal_distribution<double> d;
      for (Eigen::Index i = 0; i < total; ++i) data[i] = d(stream);
      break;
    }
    case DistKind::centered_gamma: {
      std::gamma_distribution<double> d(dist.parameter(), dist.gamma_scale());
      const double shift = std::sqrt(dist.parameter());
      for (Eigen::Index i = 0; i < total; ++i) data[i] = d(stream) - shift;
      break;
    }
    case DistKind::scaled_student_t: {
      const double df = dist.parameter();
      std::student_t_distribution<double> d(df);
      const double scale = 1.0 / std::sqrt(df / (df - 2.0));
      for (Eigen::Index i = 0; i < total; ++i) data[i] = d(stream) * scale;
      break;
    }
  }
  return z;
}

Matrix apply_covariance(Matrix z, const SigmaSpec& sigma) {
  if (z.cols() != sigma.dim()) {
    throw std::invalid_argument("covariance dimension does not match p");
  }
  switch (sigma.kind()) {
    case SigmaKind::identity: return z;
    case SigmaKind::diagonal:
      return z * sigma.diagonal_values().cwiseSqrt().asDiagonal();
    case SigmaKind::spd: return z * sigma.root();
  }
  return z;
}

Vector fixed_beta(const BetaMode& mode, Eigen::Index p) {
  if (p < 1) throw std::invalid_argument("need p >= 1");
  if (!(mode.r > 0.0)) throw std::invalid_argument("beta scale r must be positive");
  if (mode.direction.size() == 0) {
    return Vector::Constant(p, mode.r / std::sqrt(static_cast<double>(p)));
  }
  if (mode.direction.size() != p) {
    throw std::invalid_argument("fixed beta direction has wrong length");
  }
  if (std::abs(mode.direction.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument("fixed beta direction must be a unit vector");
  }
  return mode.r * mode.direction;
}

Vector sample_beta(const BetaMode& mode, Eigen::Index p, RngStream& stream) {
  if (mode.kind == BetaKind::fixed) return fixed_beta(mode, p);
  if (p < 1) throw std::invalid_argument("need p >= 1");
  if (!(mode.r > 0.0)) throw std::invalid_argument("beta scale r must be positive");
  std::normal_distribution<double> d(0.0, mode.r / std::sqrt(static_cast<double>(p)));
  Vector beta(p);
  for (auto& b : beta) b = d(stream);
  return beta;
}

Vector sample_noise(Eigen::Index n, double sigma, RngStream& stream,
                    const std::optional<EntryDistribution>& law) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("noise sigma must be >= 0");
  if (sigma == 0.0) return Vector::Zero(n);
  const EntryDistribution dist = law.value_or(EntryDistribution::normal());
  return sigma * sample_entries(n, 1, dist, stream).col(0);
}

}  // namespace riskclt
