#include "riskclt/asymptotics.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "riskclt/errors.hpp"

namespace riskclt {

MpLaw::MpLaw(double ratio) : c(ratio) {
  if (!(ratio > 0.0) || !std::isfinite(ratio)) {
    throw std::invalid_argument("MP ratio c must be positive");
  }
  const double root = std::sqrt(ratio);
  a = (1.0 - root) * (1.0 - root);
  b = (1.0 + root) * (1.0 + root);
  point_mass_at_zero = ratio > 1.0 ? 1.0 - 1.0 / ratio : 0.0;
}

double MpLaw::continuous_mass() const { return c > 1.0 ? 1.0 / c : 1.0; }

double mp_density(double x, double c) {
  const MpLaw law(c);
  if (x < law.a || x > law.b || x <= 0.0) return 0.0;
  const double prod = (law.b - x) * (x - law.a);
  if (prod <= 0.0) return 0.0;
  return std::sqrt(prod) / (2.0 * std::numbers::pi * c * x);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_quantile(double prob) {
  if (!(prob > 0.0 && prob < 1.0)) {
    if (prob == 0.0) return -HUGE_VAL;
    if (prob == 1.0) return HUGE_VAL;
    throw std::invalid_argument("probability must lie in [0, 1]");
  }
  // Acklam's rational approximation (relative error ~1e-9).
  static constexpr std::array<double, 6> a = {
      -3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array<double, 5> b = {
      -5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr std::array<double, 6> c = {
      -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr std::array<double, 4> d = {
      7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00};
  constexpr double low = 0.02425;

  double x;
  if (prob < low) {
    const double q = std::sqrt(-2.0 * std::log(prob));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (prob <= 1.0 - low) {
    const double q = prob - 0.5;
    const double t = q * q;
    x = (((((a[0] * t + a[1]) * t + a[2]) * t + a[3]) * t + a[4]) * t + a[5]) * q /
        (((((b[0] * t + b[1]) * t + b[2]) * t + b[3]) * t + b[4]) * t + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-prob));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Halley refinement against the erfc-based CDF. The upper tail is refined
  // through the complementary probability to avoid cancellation.
  const double err = prob > 0.5 ? -(0.5 * std::erfc(x / std::numbers::sqrt2) - (1.0 - prob))
                                : normal_cdf(x) - prob;
  const double u = err * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

double limit_risk(double c_n, double sigma, double r, double guard) {
  if (!(c_n > 0.0) || !std::isfinite(c_n)) {
    throw std::invalid_argument("aspect ratio c_n must be positive");
  }
  if (std::abs(c_n - 1.0) < guard) {
    throw RegimeError("interpolation threshold: theory invalid");
  }
  if (c_n < 1.0) return c_n * sigma * sigma / (1.0 - c_n);
  return (1.0 - 1.0 / c_n) * r * r + sigma * sigma / (c_n - 1.0);
}

std::string to_string(Theorem t) {
  switch (t) {
    case Theorem::t1: return "t1";
    case Theorem::t2: return "t2";
    case Theorem::t3: return "t3";
    case Theorem::t4: return "t4";
    case Theorem::t5: return "t5";
  }
  return "unknown";
}

Theorem theorem_from_string(std::string_view name) {
  if (name == "t1") return Theorem::t1;
  if (name == "t2") return Theorem::t2;
  if (name == "t3") return Theorem::t3;
  if (name == "t4") return Theorem::t4;
  if (name == "t5") return Theorem::t5;
  throw std::invalid_argument("unknown theorem: " + std::string(name));
}

bool is_underparametrized(Theorem t) {
  return t == Theorem::t1 || t == Theorem::t2;
}

Rate rate_of(Theorem t) {
  return (t == Theorem::t3 || t == Theorem::t5) ? Rate::sqrt_p : Rate::p;
}

double CltParams::rate_scale() const {
  return rate == Rate::p ? p : std::sqrt(p);
}

double CltParams::mean(ParamVariant v) const {
  return v == ParamVariant::practical ? mu_practical : mu;
}

double CltParams::variance(ParamVariant v) const {
  return v == ParamVariant::practical ? sigma2_practical : sigma2;
}

namespace {

struct MeanVar {
  double mean;
  double var;
};

// p-rate fluctuation of sigma^2/n Tr(Sigma_hat^{-1}) for c < 1.
MeanVar under_variance_clt(double c, double sigma, double nu4) {
  const double s2 = sigma * sigma;
  const double s4 = s2 * s2;
  const double k = nu4 - 3.0;
  return {c * c * s2 / ((c - 1.0) * (c - 1.0)) + s2 * c * c * k / (1.0 - c),
          2.0 * c * c * c * s4 / std::pow(c - 1.0, 4) +
              c * c * c * s4 * k / ((1.0 - c) * (1.0 - c))};
}

// p-rate fluctuation of sigma^2/n Tr(Sigma_hat^+) for c > 1, obtained from
// the c < 1 case by exchanging the roles of n and p.
MeanVar over_variance_clt(double c, double sigma, double nu4) {
  const double s2 = sigma * sigma;
  const double s4 = s2 * s2;
  const double k = nu4 - 3.0;
  return {c * s2 / ((1.0 - c) * (1.0 - c)) + s2 * k / (c - 1.0),
          2.0 * c * c * c * s4 / std::pow(1.0 - c, 4) +
              c * s4 * k / ((c - 1.0) * (c - 1.0))};
}

}  // namespace

CltParams clt_params(Theorem theorem, double c, double c_n, double p,
                     double sigma, double r, double nu4) {
  if (!(p >= 1.0)) throw std::invalid_argument("p must be >= 1");
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("c must be positive");
  if (!(nu4 >= 1.0) || !std::isfinite(nu4)) {
    throw std::invalid_argument("nu4 must be finite and >= 1");
  }
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be >= 0");
  const bool under = is_underparametrized(theorem);
  if (under != (c < 1.0) || under != (c_n < 1.0) || c == 1.0) {
    throw RegimeError("theorem " + to_string(theorem) +
                      (under ? " requires c < 1" : " requires c > 1"));
  }
  if ((under || theorem == Theorem::t4) && !(sigma > 0.0)) {
    throw std::invalid_argument("theorem " + to_string(theorem) + " requires sigma > 0");
  }
  if (!under && !(r > 0.0)) {
    throw std::invalid_argument("theorem " + to_string(theorem) + " requires r > 0");
  }

  CltParams out;
  out.theorem = theorem;
  out.rate = rate_of(theorem);
  out.c = c;
  out.c_n = c_n;
  out.p = p;
  out.center = limit_risk(c_n, sigma, r);

  const double r4 = r * r * r * r;
  switch (theorem) {
    case Theorem::t1:
    case Theorem::t2: {
      // t2 shares every parameter with t1.
      const MeanVar v = under_variance_clt(c, sigma, nu4);
      out.mu = out.mu_practical = v.mean;
      out.sigma2 = out.sigma2_practical = v.var;
      break;
    }
    case Theorem::t4: {
      const MeanVar v = over_variance_clt(c, sigma, nu4);
      out.mu = out.mu_practical = v.mean;
      out.sigma2 = out.sigma2_practical = v.var;
      break;
    }
    case Theorem::t3:
    case Theorem::t5: {
      const MeanVar v = over_variance_clt(c, sigma, nu4);
      out.mu = 0.0;
      out.sigma2 = theorem == Theorem::t3 ? 2.0 * (c - 1.0) / (c * c) * r4
                                          : 2.0 * (1.0 - 1.0 / c) * r4;
      out.mu_practical = v.mean / std::sqrt(p);
      out.sigma2_practical = out.sigma2 + v.var / p;
      break;
    }
  }
  if (!(out.sigma2 > 0.0) || !(out.sigma2_practical > 0.0)) {
    throw std::domain_error("limiting variance is not positive");
  }
  return out;
}

Interval confidence_interval(const CltParams& params, double alpha,
                             ParamVariant variant) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  const double z = normal_quantile(1.0 - alpha / 2.0);
  const double scale = params.rate_scale();
  const double mean = params.mean(variant);
  const double sd = std::sqrt(params.variance(variant));
  return {params.center + (mean - z * sd) / scale,
          params.center + (mean + z * sd) / scale, alpha};
}

double standardize(double risk, const CltParams& params, ParamVariant variant) {
  const double sd = std::sqrt(params.variance(variant));
  return params.rate_scale() / sd * (risk - params.center) - params.mean(variant) / sd;
}

}  // namespace riskclt
