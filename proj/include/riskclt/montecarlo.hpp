#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "riskclt/asymptotics.hpp"
#include "riskclt/estimator.hpp"
#include "riskclt/randgen.hpp"

namespace riskclt {

/// One simulated world: y = X beta + eps with X = Z Sigma^{1/2}.
struct ModelConfig {
  Eigen::Index n = 0;
  Eigen::Index p = 0;
  double sigma = 1.0;
  EntryDistribution dist = EntryDistribution::normal();
  /// Unset means the identity.
  std::optional<SigmaSpec> covariance;
  BetaMode beta = BetaMode::gaussian(1.0);

  double aspect_ratio() const {
    return static_cast<double>(p) / static_cast<double>(n);
  }
  SigmaSpec sigma_spec() const;
};

struct ExperimentConfig {
  ModelConfig model;
  Theorem theorem = Theorem::t1;
  /// Limiting ratio c for the parameter formulas; defaults to c_n = p / n.
  std::optional<double> limit_ratio;
  std::size_t reps = 1000;
  std::uint64_t master_seed = 1;
  double alpha = 0.05;
  ParamVariant variant = ParamVariant::practical;
  std::size_t bins = 40;
  double hist_lo = -4.0;
  double hist_hi = 4.0;
  unsigned workers = 1;
  /// For t5 only: standardize R_X instead of R_{X,beta}.
  bool literal_risk_given_x = false;
  Factorization factorization = Factorization::gram;
};

struct HistogramBin {
  double left = 0.0;
  double right = 0.0;
  std::size_t count = 0;
};

/// Equal-width bins over [lo, hi] plus two overflow sentinels.
struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<HistogramBin> bins;
  std::size_t underflow = 0;
  std::size_t overflow = 0;

  std::size_t total() const;
  /// All bins including the sentinels (-inf, lo) and (hi, inf), in order.
  std::vector<HistogramBin> rows() const;
};

Histogram histogram(std::span<const double> samples, std::size_t bins, double lo,
                    double hi);

/// Kolmogorov-Smirnov distance between the empirical CDF of sorted samples
/// and the standard normal CDF.
double ks_statistic(std::span<const double> sorted_samples);

/// Fraction of risks inside their closed intervals.
double cover_rate(std::span<const double> risks, std::span<const Interval> intervals);

/// Welford mean/variance accumulator fed in index order.
class RunningStats {
 public:
  void add(double x);
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  /// Unbiased sample variance (0 for fewer than two values).
  double variance() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct ExperimentResult {
  CltParams params;
  Interval interval;
  /// Standardized statistic per repetition.
  std::vector<double> stats;
  /// Raw closed-form risk per repetition.
  std::vector<double> risks;
  Histogram hist;
  double ks_distance = 0.0;
  double cover_rate = 0.0;
  std::size_t covered = 0;
  double mean = 0.0;
  double variance = 0.0;
};

/// Risk of the theorem-appropriate type for one repetition.
double repetition_risk(const ExperimentConfig& cfg, std::size_t rep);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Validates the theorem against the model and returns its parameters.
CltParams experiment_params(const ExperimentConfig& cfg);

}  // namespace riskclt
