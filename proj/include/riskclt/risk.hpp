#pragma once

#include <cstddef>
#include <optional>

#include "riskclt/estimator.hpp"
#include "riskclt/randgen.hpp"

namespace riskclt {

/// Bias/variance decomposition of the out-of-sample risk of the min-norm
/// estimator. The "given X" risk averages the bias over beta when beta is
/// random; the "given X, beta" risk conditions on one beta draw.
struct RiskReport {
  double bias_given_x = 0.0;
  std::optional<double> bias_given_x_beta;
  double variance = 0.0;
  double risk_given_x = 0.0;
  std::optional<double> risk_given_x_beta;
  bool ill_conditioned = false;
};

/// sigma^2 / n * Tr(Sigma_hat^+ Sigma), evaluated spectrally.
double variance_term(const DesignMatrix& x, const SigmaSpec& sigma_spec,
                     double sigma);

/// beta' Pi Sigma Pi beta, computed as |Sigma^{1/2} Pi beta|^2.
double bias_given_beta(const DesignMatrix& x, const SigmaSpec& sigma_spec,
                       const Vector& beta);

/// (r^2 / p) Tr(Pi Sigma Pi): the bias averaged over beta ~ N(0, r^2/p I).
double bias_random_beta(const DesignMatrix& x, const SigmaSpec& sigma_spec,
                        double r);

RiskReport risk_report(const DesignMatrix& x, const SigmaSpec& sigma_spec,
                       double sigma, const BetaMode& beta_mode,
                       const std::optional<Vector>& beta_draw = std::nullopt);

struct OracleEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_test = 0;
  std::size_t n_noise = 0;
};

/// Brute-force estimate of R_{X,beta}: refit beta_hat on n_noise fresh noise
/// draws of y = X beta + eps and average (x0'(beta_hat - beta))^2 over n_test
/// fresh test points x0 = Sigma^{1/2} z.
OracleEstimate mc_risk_oracle(const DesignMatrix& x, const SigmaSpec& sigma_spec,
                              double sigma, const Vector& beta,
                              std::size_t n_test, RngStream& stream,
                              std::size_t n_noise = 200,
                              const EntryDistribution& test_law =
                                  EntryDistribution::normal());

}  // namespace riskclt
