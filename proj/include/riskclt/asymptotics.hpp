#pragma once

#include <string>
#include <string_view>

namespace riskclt {

/// |c_n - 1| below this is treated as the interpolation threshold.
inline constexpr double kThresholdGuard = 0.02;

/// Standard Marchenko-Pastur law with ratio c = p / n.
struct MpLaw {
  double c;
  double a;
  double b;
  double point_mass_at_zero;

  explicit MpLaw(double ratio);

  /// Mass carried by the continuous part, min(1, 1/c).
  double continuous_mass() const;
};

/// Density of the continuous part of the MP law; zero outside [a, b].
double mp_density(double x, double c);

/// Standard normal CDF.
double normal_cdf(double x);
/// Standard normal density.
double normal_pdf(double x);
/// Inverse standard normal CDF: rational approximation refined by one
/// Halley step, accurate to well below 1e-9 on (0, 1).
double normal_quantile(double prob);

/// First-order risk limit at finite aspect ratio c_n = p / n:
/// c_n sigma^2 / (1 - c_n) below the threshold,
/// (1 - 1/c_n) r^2 + sigma^2 / (c_n - 1) above it.
double limit_risk(double c_n, double sigma, double r,
                  double guard = kThresholdGuard);

/// The five limit theorems for the min-norm risk.
///  t1: R_X, p < n.                       t2: R_{X,beta}, p < n.
///  t3: R_X, p > n, fixed beta.           t4: R_X, p > n, Gaussian beta.
///  t5: R_{X,beta}, p > n, Gaussian beta.
enum class Theorem { t1, t2, t3, t4, t5 };

enum class Rate { p, sqrt_p };

/// Which (mean, variance) pair to standardize or build an interval with.
/// The practical pair differs from the limiting one only for t3 and t5.
enum class ParamVariant { limiting, practical };

std::string to_string(Theorem t);
Theorem theorem_from_string(std::string_view name);
bool is_underparametrized(Theorem t);
Rate rate_of(Theorem t);

struct CltParams {
  Theorem theorem = Theorem::t1;
  Rate rate = Rate::p;
  double c = 0.0;
  double c_n = 0.0;
  double p = 0.0;
  double center = 0.0;
  double mu = 0.0;
  double sigma2 = 0.0;
  double mu_practical = 0.0;
  double sigma2_practical = 0.0;

  /// p or sqrt(p).
  double rate_scale() const;
  double mean(ParamVariant v) const;
  double variance(ParamVariant v) const;
};

/// Limiting and practical parameters of the chosen theorem. c is the limiting
/// aspect ratio used in the parameter formulas; c_n = p / n sets the centering.
CltParams clt_params(Theorem theorem, double c, double c_n, double p,
                     double sigma, double r, double nu4);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  double alpha = 0.05;

  bool contains(double value) const { return lower <= value && value <= upper; }
};

/// center + (mean -/+ z_{alpha/2} sd) / rate_scale. The default variant uses
/// the practical pair, which is what the t3/t5 intervals are built from.
Interval confidence_interval(const CltParams& params, double alpha,
                             ParamVariant variant = ParamVariant::practical);

/// rate_scale (risk - center) / sd - mean / sd.
double standardize(double risk, const CltParams& params,
                   ParamVariant variant = ParamVariant::practical);

}  // namespace riskclt
