#include "riskclt/risk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace riskclt {

double variance_term(const DesignMatrix& x, const SigmaSpec& sigma_spec,
                     double sigma) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be >= 0");
  if (sigma_spec.dim() != x.cols()) {
    throw std::invalid_argument("covariance dimension does not match p");
  }
  if (sigma == 0.0) return 0.0;
  const Eigen::Index k = x.rank();
  const Vector& s = x.singular_values();
  // Sigma_hat^+ = n V diag(1/s^2) V', so sigma^2/n Tr(Sigma_hat^+ Sigma)
  // = sigma^2 sum_i v_i' Sigma v_i / s_i^2.
  double total = 0.0;
  if (sigma_spec.kind() == SigmaKind::identity) {
    for (Eigen::Index i = 0; i < k; ++i) total += 1.0 / (s(i) * s(i));
  } else {
    const Matrix& v = x.v();
    for (Eigen::Index i = 0; i < k; ++i) {
      total += sigma_spec.quadratic_form(v.col(i)) / (s(i) * s(i));
    }
  }
  return sigma * sigma * total;
}

double bias_given_beta(const DesignMatrix& x, const SigmaSpec& sigma_spec,
                       const Vector& beta) {
  if (beta.size() != x.cols()) throw std::invalid_argument("beta length must equal p");
  if (sigma_spec.dim() != x.cols()) {
    throw std::invalid_argument("covariance dimension does not match p");
  }
  if (x.rank() == x.cols()) return 0.0;
  return sigma_spec.quadratic_form(x.project_null_space(beta));
}

double bias_random_beta(const DesignMatrix& x, const SigmaSpec& sigma_spec,
                        double r) {
  if (!(r > 0.0)) throw std::invalid_argument("beta scale r must be positive");
  if (sigma_spec.dim() != x.cols()) {
    throw std::invalid_argument("covariance dimension does not match p");
  }
  const Eigen::Index p = x.cols();
  const Eigen::Index k = x.rank();
  if (k == p) return 0.0;
  const double pd = static_cast<double>(p);
  if (sigma_spec.kind() == SigmaKind::identity) {
    return r * r * static_cast<double>(p - k) / pd;
  }
  // Tr(Pi Sigma Pi) = Tr(Sigma) - sum_i v_i' Sigma v_i over the row space.
  const Matrix& v = x.v();
  double kept = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) kept += sigma_spec.quadratic_form(v.col(i));
  const double trace = std::max(sigma_spec.trace() - kept, 0.0);
  return r * r / pd * trace;
}

RiskReport risk_report(const DesignMatrix& x, const SigmaSpec& sigma_spec,
                       double sigma, const BetaMode& beta_mode,
                       const std::optional<Vector>& beta_draw) {
  RiskReport report;
  report.variance = variance_term(x, sigma_spec, sigma);
  report.ill_conditioned = x.ill_conditioned();
  if (beta_mode.kind == BetaKind::fixed) {
    const Vector beta = fixed_beta(beta_mode, x.cols());
    const double bias = bias_given_beta(x, sigma_spec, beta);
    report.bias_given_x = bias;
    report.bias_given_x_beta = bias;
  } else {
    report.bias_given_x = bias_random_beta(x, sigma_spec, beta_mode.r);
    if (beta_draw) {
      report.bias_given_x_beta = bias_given_beta(x, sigma_spec, *beta_draw);
    }
  }
  report.risk_given_x = report.bias_given_x + report.variance;
  if (report.bias_given_x_beta) {
    report.risk_given_x_beta = *report.bias_given_x_beta + report.variance;
  }
  return report;
}

OracleEstimate mc_risk_oracle(const DesignMatrix& x, const SigmaSpec& sigma_spec,
                              double sigma, const Vector& beta,
                              std::size_t n_test, RngStream& stream,
                              std::size_t n_noise,
                              const EntryDistribution& test_law) {
  if (n_test < 1 || n_noise < 1) {
    throw std::invalid_argument("oracle needs n_test >= 1 and n_noise >= 1");
  }
  if (beta.size() != x.cols()) throw std::invalid_argument("beta length must equal p");
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  const auto noise_count = static_cast<Eigen::Index>(n_noise);

  // Estimation errors beta_hat - beta, one column per noise redraw.
  const Vector signal = x.x() * beta;
  Matrix errors(p, noise_count);
  for (Eigen::Index j = 0; j < noise_count; ++j) {
    const Vector y = signal + sample_noise(n, sigma, stream);
    errors.col(j) = min_norm_lsq(x, y) - beta;
  }

  // Squared prediction errors on test points, streamed in blocks.
  std::vector<double> per_point(n_test, 0.0);
  Vector per_noise = Vector::Zero(noise_count);
  constexpr std::size_t kBlock = 2048;
  for (std::size_t start = 0; start < n_test; start += kBlock) {
    const auto rows = static_cast<Eigen::Index>(std::min(kBlock, n_test - start));
    const Matrix test = apply_covariance(sample_entries(rows, p, test_law, stream),
                                         sigma_spec);
    const Matrix sq = (test * errors).cwiseAbs2();
    for (Eigen::Index i = 0; i < rows; ++i) {
      per_point[start + static_cast<std::size_t>(i)] = sq.row(i).mean();
    }
    per_noise += sq.colwise().sum().transpose();
  }
  per_noise /= static_cast<double>(n_test);

  OracleEstimate est;
  est.n_test = n_test;
  est.n_noise = n_noise;
  double sum = 0.0;
  for (double v : per_point) sum += v;
  est.value = sum / static_cast<double>(n_test);

  // Two-way standard error: test-point spread plus noise-redraw spread.
  double var_points = 0.0;
  for (double v : per_point) var_points += (v - est.value) * (v - est.value);
  var_points = n_test > 1 ? var_points / static_cast<double>(n_test - 1) : 0.0;
  const double noise_mean = per_noise.mean();
  const double var_noise =
      n_noise > 1 ? (per_noise.array() - noise_mean).square().sum() /
                        static_cast<double>(n_noise - 1)
                  : 0.0;
  est.std_error = std::sqrt(var_points / static_cast<double>(n_test) +
                            var_noise / static_cast<double>(n_noise));
  return est;
}

}  // namespace riskclt
